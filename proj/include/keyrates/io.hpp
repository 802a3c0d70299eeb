#pragma once

#include <string>
#include <vector>

#include "keyrates/channels.hpp"
#include "keyrates/network.hpp"
#include "keyrates/tensor.hpp"

namespace kr {

// Operator JSON: {"dims":[...], "labels":[...], "data":[[re,im],...]} with
// data in row-major order, one [re,im] pair per entry. Density operators are
// validated on load (Hermitian, PSD, unit trace).
DensityOperator load_density(const std::string& path);
HermitianOperator load_hermitian(const std::string& path);
void save_operator(const std::string& path, const Mat& m, const Layout& layout);
std::string operator_to_json(const Mat& m, const Layout& layout);

// Channel JSON: {"kind":"kraus", "in_dims":[...], "out_dims":[...],
// "ops":[matrix,...]} with each matrix row-major [re,im] pairs.
KrausChannel load_channel(const std::string& path);
void save_channel(const std::string& path, const KrausChannel& ch);

// Graph JSON: {"nodes":["v1",...], "edges":[{"u":"v1","v":"v2","weight":2.0},...]}.
WeightedGraph load_graph(const std::string& path);
// Rate-matrix JSON: {"labels":[...], "rates":[[...]]}, null entries = -inf.
RateMatrix load_rates(const std::string& path);

// Deterministic number formatting for CSV/JSON output: shortest representation
// that round-trips a double, '.' decimal separator, "inf"/"-inf" for
// infinities; locale-independent.
std::string format_number(double x);

// CSV emitter: header row then data rows, byte-deterministic.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& cells);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

 private:
  std::string text_;
  size_t columns_ = 0;
};

}  // namespace kr
