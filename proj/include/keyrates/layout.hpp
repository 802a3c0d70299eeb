#pragma once

#include <string>
#include <vector>

#include "keyrates/common.hpp"

namespace kr {

// Ordered list of tensor-factor slots: a local dimension and a party label
// per slot. Flat indices are row-major: the first slot varies slowest.
// Labels may repeat (a party can own several slots, e.g. after merging).
struct Layout {
  std::vector<int> dims;
  std::vector<std::string> labels;

  int slots() const { return static_cast<int>(dims.size()); }
  long dim() const;
  void validate() const;

  // Sub-layout of the given slots, in the order given.
  Layout sub(const std::vector<int>& keep) const;
  // Concatenation: this layout's slots followed by tail's.
  Layout then(const Layout& tail) const;
  // n copies of this layout, copy-major; labels become "c<k>:<label>".
  Layout repeated(int n) const;
  // All slot indices carrying the given label, ascending.
  std::vector<int> slots_of(const std::string& label) const;

  bool operator==(const Layout&) const = default;

  static Layout single(int d, const std::string& label = "A");
  // n slots of dimension d labeled "<prefix>1".."<prefix>n".
  static Layout uniform(int n, int d, const std::string& prefix = "P");
};

}  // namespace kr
