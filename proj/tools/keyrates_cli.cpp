// Command-line front end: divergence evaluation, one-shot state bounds,
// measurement-device-independent rate tables, and network aggregation.
// Exit codes: 0 success, 2 invalid input (including flag errors and bad
// files), 3 numerical failure (certificate or cross-check breakdown).
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "keyrates/channels.hpp"
#include "keyrates/divergences.hpp"
#include "keyrates/io.hpp"
#include "keyrates/mdi.hpp"
#include "keyrates/network.hpp"
#include "keyrates/privacy.hpp"
#include "keyrates/states.hpp"
#include "keyrates/tensor.hpp"

namespace {

using namespace kr;

// JSON-safe number: bare digits for finite values, quoted for inf/nan so the
// emitted report always parses.
std::string json_num(double x) {
  if (std::isfinite(x)) return format_number(x);
  return "\"" + format_number(x) + "\"";
}

std::string json_str(const std::string& s) { return "\"" + s + "\""; }

// Grid syntax: a bare number, or start:stop:step (start included; points run
// while start + k*step < stop - 1e-12, so the stop itself is excluded).
std::vector<double> parse_grid(const std::string& spec) {
  auto parse_one = [&](const std::string& s) {
    try {
      size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw invalid_input("trailing characters in number: " + spec);
      return v;
    } catch (const std::logic_error&) {
      throw invalid_input("not a number: " + spec);
    }
  };
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) return {parse_one(spec)};
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
    throw invalid_input("sweep must be start:stop:step, got " + spec);
  const double start = parse_one(spec.substr(0, c1));
  const double stop = parse_one(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = parse_one(spec.substr(c2 + 1));
  if (!(step > 0)) throw invalid_input("sweep step must be positive");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = start + k * step;
    if (v >= stop - 1e-12) break;
    out.push_back(v);
  }
  if (out.empty()) throw invalid_input("sweep " + spec + " contains no points");
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw invalid_input("cannot write file: " + out_path);
    f << text;
  }
}

// ---- divergence ----

struct DivergenceArgs {
  std::string kind, rho_path, sigma_path, out;
  double alpha = 2.0;
  double eps = 0.0;
};

void run_divergence(const DivergenceArgs& a) {
  DensityOperator rho = load_density(a.rho_path);
  DensityOperator sigma = load_density(a.sigma_path);
  if (rho.mat.rows() != sigma.mat.rows())
    throw invalid_input("operators must share one dimension");
  std::string report;
  if (a.kind == "hyp") {
    if (a.eps < 0 || a.eps >= 1) throw invalid_input("eps must lie in [0,1)");
    HypTestResult r = hypothesis_testing(rho.mat, sigma.mat, a.eps);
    report = "{\"value_bits\":" + json_num(r.value_bits) +
             ",\"primal_bits\":" + json_num(r.primal_bits) +
             ",\"dual_bits\":" + json_num(r.dual_bits) +
             ",\"gap_bits\":" + json_num(r.gap_bits) + "}\n";
  } else {
    double v = 0;
    if (a.kind == "rel")
      v = relative_entropy(rho.mat, sigma.mat);
    else if (a.kind == "max")
      v = max_relative_entropy(rho.mat, sigma.mat);
    else if (a.kind == "renyi")
      v = sandwiched_renyi(rho.mat, sigma.mat, a.alpha);
    else
      throw invalid_input("unknown divergence kind: " + a.kind);
    report = "{\"value_bits\":" + json_num(v) + "}\n";
  }
  emit(report, a.out);
}

// ---- state-bound ----

struct StateBoundArgs {
  std::string family, noise = "none", variant = "coherent", eps_grid, out;
  int parties = 3;
  int copies = 1;
  double q = 0.95;
};

void run_state_bound(const StateBoundArgs& a) {
  if (a.parties < 3 || a.parties > 6) throw invalid_input("parties must lie in [3,6]");
  if (a.copies != 1 && a.copies != 2) throw invalid_input("copies must be 1 or 2");

  DensityOperator rho;
  DensityOperator candidate;
  if (a.family == "w") {
    rho = density(w_state(a.parties));
    candidate = bisep_w(a.copies, a.parties).state;
  } else if (a.family == "ghz") {
    rho = density(ghz_state(a.parties));
    GhzVariant variant;
    if (a.variant == "coherent")
      variant = GhzVariant::coherent;
    else if (a.variant == "classical")
      variant = GhzVariant::classical;
    else
      throw invalid_input("ghz variant must be coherent or classical");
    candidate = bisep_ghz(a.copies, a.parties, variant).state;
  } else {
    throw invalid_input("family must be w or ghz");
  }
  if (a.copies == 2) rho = tensor_power(rho, 2);

  if (a.noise != "none") {
    if (a.q < 0 || a.q > 1) throw invalid_input("noise parameter q must lie in [0,1]");
    KrausChannel noise;
    if (a.noise == "dephasing")
      noise = dephasing_channel(a.q);
    else if (a.noise == "depolarizing")
      noise = depolarizing_channel(a.q);
    else
      throw invalid_input("noise must be none, dephasing, or depolarizing");
    // Both the state and the candidate pass through the same local noise:
    // local channels preserve the product structure across every cut, so the
    // noisy candidate stays a valid attack state.
    rho = apply_local_noise(rho, noise);
    candidate = apply_local_noise(candidate, noise);
  }

  std::vector<double> grid = parse_grid(a.eps_grid);
  CsvWriter csv({"epsilon", "bound_bits", "primal", "dual", "gap"});
  for (double eps : grid) {
    if (eps < 0 || eps >= 1) throw invalid_input("epsilon grid must lie in [0,1)");
    HypTestResult r = hypothesis_testing(rho.mat, candidate.mat, eps);
    csv.add_row(std::vector<double>{eps, r.value_bits, r.primal_bits, r.dual_bits, r.gap_bits});
  }
  emit(csv.text(), a.out);
}

// ---- mdi ----

struct MdiArgs {
  std::string kind, lambda_grid, distance_grid, out;
  double q = 1.0;
  double attenuation = kDefaultAttenuationPerKm;
  bool cross_check = false;
};

void run_mdi(const MdiArgs& a) {
  MdiKind kind = mdi_kind_from_string(a.kind);
  bool mismatch = false;

  if (kind == MdiKind::erasure) {
    if (a.distance_grid.empty())
      throw invalid_input("erasure tables sweep --distance");
    if (!a.lambda_grid.empty())
      throw invalid_input("--lambda does not apply to erasure legs");
    std::vector<double> grid = parse_grid(a.distance_grid);
    std::vector<RateDistanceRow> rows = rate_distance_sweep(kind, a.q, a.attenuation, grid);
    std::vector<std::string> header{"param", "value_bits", "rb_bits"};
    if (a.cross_check) {
      header.push_back("pipeline_bits");
      header.push_back("delta");
    }
    CsvWriter csv(header);
    for (const RateDistanceRow& r : rows) {
      std::vector<double> cells{r.distance_km, r.value_bits, r.rb_bits};
      if (a.cross_check) {
        const double eta = std::exp(-a.attenuation * r.distance_km);
        CrossCheckResult c = choi_cross_check(kind, {eta, eta}, a.q);
        cells.push_back(c.pipeline_bits);
        cells.push_back(c.delta);
        if (c.delta > 1e-9) mismatch = true;
      }
      csv.add_row(cells);
    }
    emit(csv.text(), a.out);
  } else {
    if (a.lambda_grid.empty())
      throw invalid_input("channel-parameter tables sweep --lambda");
    if (!a.distance_grid.empty())
      throw invalid_input("--distance applies only to erasure legs");
    std::vector<double> grid = parse_grid(a.lambda_grid);
    std::vector<std::string> header{"param", "value_bits"};
    if (a.cross_check) {
      header.push_back("pipeline_bits");
      header.push_back("delta");
    }
    CsvWriter csv(header);
    for (double lam : grid) {
      const double closed = kind == MdiKind::depolarizing ? depolarizing_bound(a.q, lam)
                                                          : dephasing_bound(a.q, lam);
      std::vector<double> cells{lam, closed};
      if (a.cross_check) {
        CrossCheckResult c = choi_cross_check(kind, {lam}, a.q);
        cells.push_back(c.pipeline_bits);
        cells.push_back(c.delta);
        if (c.delta > 1e-9) mismatch = true;
      }
      csv.add_row(cells);
    }
    emit(csv.text(), a.out);
  }
  if (mismatch)
    throw numerical_failure("choi pipeline disagrees with the closed form beyond 1e-9");
}

// ---- network ----

struct NetworkArgs {
  std::string graph_path, rates_path, method, out;
};

void run_network(const NetworkArgs& a) {
  if (a.method != "tree" && a.method != "star" && a.method != "chain")
    throw invalid_input("method must be tree, star, or chain");

  std::optional<WeightedGraph> graph;
  if (!a.graph_path.empty()) graph = load_graph(a.graph_path);

  std::string report;
  if (a.method == "tree") {
    if (!graph) throw invalid_input("tree method needs --graph");
    TreeResult t = max_bottleneck_spanning_tree(*graph);
    report = "{\"value\":" + json_num(t.value) + ",\"tree\":[";
    for (size_t i = 0; i < t.tree.size(); ++i) {
      const GraphEdge& e = t.tree[i];
      if (i) report += ",";
      report += "{\"u\":" + json_str(graph->nodes[e.u]) + ",\"v\":" + json_str(graph->nodes[e.v]) +
                ",\"weight\":" + json_num(e.weight) + "}";
    }
    report += "]}\n";
  } else {
    RateMatrix R;
    if (!a.rates_path.empty())
      R = load_rates(a.rates_path);
    else if (graph)
      R = rates_from_graph(*graph);
    else
      throw invalid_input("star/chain methods need --rates or --graph");
    if (a.method == "star") {
      StarResult s = star_rate(R);
      report = "{\"value\":" + json_num(s.value) + ",\"hub\":" + json_str(R.labels[s.hub]) + "}\n";
    } else {
      ChainResult c = chain_rate(R);
      report = "{\"value\":" + json_num(c.value) + ",\"path\":[";
      for (size_t i = 0; i < c.order.size(); ++i) {
        if (i) report += ",";
        report += json_str(R.labels[c.order[i]]);
      }
      report += "]}\n";
    }
  }
  emit(report, a.out);
}

// ---- scenario files ----

// {"command":"mdi","args":["--kind","erasure",...]} replayed through the
// regular flag parser.
std::vector<std::string> load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open scenario file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("command") || !j["command"].is_string())
    throw invalid_input("scenario file needs a \"command\" string");
  std::vector<std::string> argv{j["command"].get<std::string>()};
  if (j.contains("args")) {
    if (!j["args"].is_array()) throw invalid_input("scenario \"args\" must be an array");
    for (const auto& e : j["args"]) {
      if (!e.is_string()) throw invalid_input("scenario args must be strings");
      argv.push_back(e.get<std::string>());
    }
  }
  return argv;
}

int run(std::vector<std::string> args);

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{
      "Conference-key rate bounds: divergences, one-shot state bounds,\n"
      "measurement-device-independent rate tables, and network aggregation."};
  app.require_subcommand(0, 1);
  std::string scenario_path;
  app.add_option("--scenario", scenario_path,
                 "JSON file {\"command\":..., \"args\":[...]} replayed as flags");

  DivergenceArgs da;
  CLI::App* div = app.add_subcommand("divergence", "Evaluate a divergence between two states");
  div->add_option("--kind", da.kind, "hyp | rel | max | renyi")->required();
  div->add_option("--rho", da.rho_path, "state JSON file")->required();
  div->add_option("--sigma", da.sigma_path, "reference state JSON file")->required();
  div->add_option("--alpha", da.alpha, "Renyi order (renyi kind)");
  div->add_option("--eps", da.eps, "type-I error budget (hyp kind), default 0");

  StateBoundArgs sa;
  CLI::App* sb = app.add_subcommand(
      "state-bound", "One-shot key upper bound of a resource state against its attack family");
  sb->add_option("--family", sa.family, "w | ghz")->required();
  sb->add_option("--parties", sa.parties, "number of parties, 3..6")->required();
  sb->add_option("--copies", sa.copies, "resource copies, 1 or 2");
  sb->add_option("--noise", sa.noise, "none | dephasing | depolarizing (applied per qubit)");
  sb->add_option("--q", sa.q, "noise channel parameter, default 0.95");
  sb->add_option("--eps", sa.eps_grid, "epsilon grid: value or start:stop:step")->required();
  sb->add_option("--ghz-variant", sa.variant, "coherent | classical (ghz family)");
  sb->add_option("--out", sa.out, "write CSV here instead of stdout");

  MdiArgs ma;
  CLI::App* mdi = app.add_subcommand(
      "mdi", "Rate tables for measurement-device-independent setups");
  mdi->add_option("--kind", ma.kind, "erasure | depolarizing | dephasing")->required();
  mdi->add_option("--q", ma.q, "detector efficiency, default 1");
  mdi->add_option("--lambda", ma.lambda_grid, "channel parameter grid (value or start:stop:step)");
  mdi->add_option("--distance", ma.distance_grid, "distance grid in km (erasure legs)");
  mdi->add_option("--attenuation", ma.attenuation,
                  "attenuation per km for legs, default 1/22");
  mdi->add_flag("--cross-check", ma.cross_check,
                "append the numeric pipeline value and its deviation; exit 3 beyond 1e-9");
  mdi->add_option("--out", ma.out, "write CSV here instead of stdout");

  NetworkArgs na;
  CLI::App* net = app.add_subcommand("network", "Aggregate link rates over a network");
  net->add_option("--graph", na.graph_path, "graph JSON file");
  net->add_option("--rates", na.rates_path, "rate-matrix JSON file (star/chain)");
  net->add_option("--method", na.method, "tree | star | chain")->required();
  net->add_option("--out", na.out, "write report here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  }

  if (!scenario_path.empty()) {
    if (app.get_subcommands().size() > 0)
      throw invalid_input("--scenario replaces the subcommand");
    return run(load_scenario(scenario_path));
  }
  if (div->parsed())
    run_divergence(da);
  else if (sb->parsed())
    run_state_bound(sa);
  else if (mdi->parsed())
    run_mdi(ma);
  else if (net->parsed())
    run_network(na);
  else
    throw invalid_input("no command given (see --help)");
  return 0;
}

int run(std::vector<std::string> args) {
  try {
    return dispatch(args);
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_failure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args));
}
