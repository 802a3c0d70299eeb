#include "keyrates/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace kr {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open file: " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw invalid_input("malformed JSON in " + path);
  return j;
}

std::vector<int> read_dims(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw invalid_input(path + ": missing or empty \"" + key + "\" array");
  std::vector<int> dims;
  for (const auto& e : j[key]) {
    if (!e.is_number_integer() || e.get<long>() < 1)
      throw invalid_input(path + ": \"" + key + "\" entries must be positive integers");
    dims.push_back(e.get<int>());
  }
  return dims;
}

std::vector<std::string> read_labels(const json& j, size_t n, const std::string& path) {
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array())
      throw invalid_input(path + ": \"labels\" must be an array");
    for (const auto& e : j["labels"]) {
      if (!e.is_string()) throw invalid_input(path + ": labels must be strings");
      labels.push_back(e.get<std::string>());
    }
  } else {
    for (size_t k = 1; k <= n; ++k) labels.push_back("P" + std::to_string(k));
  }
  if (labels.size() != n)
    throw invalid_input(path + ": labels length does not match dims");
  return labels;
}

// Row-major [re,im] pair list of an expected total size.
Mat read_matrix(const json& data, long rows, long cols, const std::string& path) {
  if (!data.is_array() || static_cast<long>(data.size()) != rows * cols)
    throw invalid_input(path + ": data length does not match dimensions");
  Mat m(rows, cols);
  long idx = 0;
  for (const auto& e : data) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw invalid_input(path + ": matrix entries must be [re, im] pairs");
    m(idx / cols, idx % cols) = cx(e[0].get<double>(), e[1].get<double>());
    ++idx;
  }
  return m;
}

std::pair<Mat, Layout> load_operator_file(const std::string& path) {
  json j = parse_file(path);
  Layout lay;
  lay.dims = read_dims(j, "dims", path);
  lay.labels = read_labels(j, lay.dims.size(), path);
  long d = lay.dim();
  if (!j.contains("data")) throw invalid_input(path + ": missing \"data\"");
  // Square matrix required: total entries d*d, row-major.
  Mat m = read_matrix(j["data"], d, d, path);
  return {std::move(m), std::move(lay)};
}

json matrix_to_json(const Mat& m) {
  json data = json::array();
  for (long i = 0; i < m.rows(); ++i)
    for (long j2 = 0; j2 < m.cols(); ++j2)
      data.push_back({m(i, j2).real(), m(i, j2).imag()});
  return data;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write file: " + path);
  out << text;
  if (!out) throw invalid_input("write failed: " + path);
}

}  // namespace

DensityOperator load_density(const std::string& path) {
  auto [m, lay] = load_operator_file(path);
  DensityOperator rho{std::move(m), std::move(lay)};
  rho.validate();
  return rho;
}

HermitianOperator load_hermitian(const std::string& path) {
  auto [m, lay] = load_operator_file(path);
  HermitianOperator h{std::move(m), std::move(lay)};
  h.validate();
  return h;
}

std::string operator_to_json(const Mat& m, const Layout& layout) {
  require(m.rows() == layout.dim() && m.cols() == layout.dim(),
          "operator shape does not match layout");
  nlohmann::ordered_json j;
  j["dims"] = layout.dims;
  j["labels"] = layout.labels;
  j["data"] = matrix_to_json(m);
  return j.dump();
}

void save_operator(const std::string& path, const Mat& m, const Layout& layout) {
  write_text(path, operator_to_json(m, layout) + "\n");
}

KrausChannel load_channel(const std::string& path) {
  json j = parse_file(path);
  if (!j.contains("kind") || j["kind"] != "kraus")
    throw invalid_input(path + ": channel \"kind\" must be \"kraus\"");
  KrausChannel ch;
  ch.in_layout.dims = read_dims(j, "in_dims", path);
  ch.out_layout.dims = read_dims(j, "out_dims", path);
  for (size_t k = 1; k <= ch.in_layout.dims.size(); ++k)
    ch.in_layout.labels.push_back("in" + std::to_string(k));
  for (size_t k = 1; k <= ch.out_layout.dims.size(); ++k)
    ch.out_layout.labels.push_back("out" + std::to_string(k));
  if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].empty())
    throw invalid_input(path + ": missing \"ops\" array");
  for (const auto& op : j["ops"])
    ch.ops.push_back(read_matrix(op, ch.out_dim(), ch.in_dim(), path));
  ch.validate();
  return ch;
}

void save_channel(const std::string& path, const KrausChannel& ch) {
  nlohmann::ordered_json j;
  j["kind"] = "kraus";
  j["in_dims"] = ch.in_layout.dims;
  j["out_dims"] = ch.out_layout.dims;
  json ops = json::array();
  for (const Mat& k : ch.ops) ops.push_back(matrix_to_json(k));
  j["ops"] = ops;
  write_text(path, j.dump() + "\n");
}

WeightedGraph load_graph(const std::string& path) {
  json j = parse_file(path);
  WeightedGraph g;
  if (!j.contains("nodes") || !j["nodes"].is_array() || j["nodes"].empty())
    throw invalid_input(path + ": missing \"nodes\" array");
  for (const auto& n : j["nodes"]) {
    if (!n.is_string()) throw invalid_input(path + ": node names must be strings");
    g.nodes.push_back(n.get<std::string>());
  }
  auto index_of = [&](const std::string& name) {
    for (size_t i = 0; i < g.nodes.size(); ++i)
      if (g.nodes[i] == name) return static_cast<int>(i);
    throw invalid_input(path + ": edge references unknown node \"" + name + "\"");
  };
  if (!j.contains("edges") || !j["edges"].is_array())
    throw invalid_input(path + ": missing \"edges\" array");
  for (const auto& e : j["edges"]) {
    if (!e.contains("u") || !e.contains("v") || !e.contains("weight") || !e["u"].is_string() ||
        !e["v"].is_string() || !e["weight"].is_number())
      throw invalid_input(path + ": edges must be {\"u\",\"v\",\"weight\"} objects");
    g.edges.push_back(
        GraphEdge{index_of(e["u"].get<std::string>()), index_of(e["v"].get<std::string>()),
                  e["weight"].get<double>()});
  }
  g.validate();
  return g;
}

RateMatrix load_rates(const std::string& path) {
  json j = parse_file(path);
  RateMatrix r;
  if (!j.contains("labels") || !j["labels"].is_array() || j["labels"].empty())
    throw invalid_input(path + ": missing \"labels\" array");
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) throw invalid_input(path + ": labels must be strings");
    r.labels.push_back(l.get<std::string>());
  }
  int n = static_cast<int>(r.labels.size());
  if (!j.contains("rates") || !j["rates"].is_array() || static_cast<int>(j["rates"].size()) != n)
    throw invalid_input(path + ": \"rates\" must be an array of " + std::to_string(n) + " rows");
  r.rates = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j["rates"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw invalid_input(path + ": rates rows must have length " + std::to_string(n));
    for (int k = 0; k < n; ++k) {
      const auto& cell = row[k];
      if (cell.is_null())
        r.rates(i, k) = -kInf;
      else if (cell.is_number())
        r.rates(i, k) = cell.get<double>();
      else
        throw invalid_input(path + ": rate entries must be numbers or null");
    }
  }
  r.validate();
  return r;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw numerical_failure("number formatting failed");
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  require(!header.empty(), "CSV header must be non-empty");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, "CSV row width does not match header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double x : cells) s.push_back(format_number(x));
  add_row(s);
}

void CsvWriter::write(const std::string& path) const { write_text(path, text_); }

}  // namespace kr
