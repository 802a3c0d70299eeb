// End-to-end tests of the command-line binary: spawns the real executable,
// captures bytes and exit codes. The binary path and a scratch directory
// arrive as compile definitions from the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "keyrates/divergences.hpp"
#include "keyrates/io.hpp"
#include "keyrates/tensor.hpp"
#include "support.hpp"

using namespace kr;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::filesystem::path work_dir() {
  static std::filesystem::path dir = [] {
    std::filesystem::path d{KEYRATES_WORK_DIR};
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string capture = path_of("stdout_" + std::to_string(++counter));
  const std::string cmd =
      std::string(KEYRATES_CLI_BIN) + " " + args + " > " + capture + " 2> /dev/null";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_file(capture);
  return r;
}

// Rows of a CSV body as doubles (header skipped).
std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  size_t pos = text.find('\n');
  REQUIRE(pos != std::string::npos);
  while (pos + 1 < text.size()) {
    size_t end = text.find('\n', pos + 1);
    std::string line = text.substr(pos + 1, end - pos - 1);
    if (!line.empty()) {
      std::vector<double> row;
      size_t start = 0;
      while (true) {
        size_t comma = line.find(',', start);
        row.push_back(std::strtod(line.substr(start, comma - start).c_str(), nullptr));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      rows.push_back(std::move(row));
    }
    if (end == std::string::npos) break;
    pos = end;
  }
  return rows;
}

const std::string kGraphJson =
    R"({"nodes":["v1","v2","v3","v4","v5","v6"],
        "edges":[{"u":"v1","v":"v2","weight":2},{"u":"v2","v":"v3","weight":2},
                 {"u":"v2","v":"v6","weight":2},{"u":"v3","v":"v4","weight":2},
                 {"u":"v3","v":"v5","weight":2},{"u":"v1","v":"v3","weight":1},
                 {"u":"v1","v":"v4","weight":1},{"u":"v1","v":"v5","weight":1},
                 {"u":"v1","v":"v6","weight":1}]})";

}  // namespace

TEST_CASE("help and argument errors map to documented exit codes") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("divergence --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("bogus-command").exit_code == 2);
  CHECK(run_cli("network --method tree").exit_code == 2);  // no graph
  CHECK(run_cli("divergence --kind hyp").exit_code == 2);  // missing operands
}

TEST_CASE("divergence command: values and certificates as json") {
  write_file(path_of("mm.json"), R"({"dims":[2],"data":[[0.5,0],[0,0],[0,0],[0.5,0]]})");
  write_file(path_of("d73.json"), R"({"dims":[2],"data":[[0.7,0],[0,0],[0,0],[0.3,0]]})");

  RunResult hyp = run_cli("divergence --kind hyp --rho " + path_of("mm.json") + " --sigma " +
                          path_of("mm.json") + " --eps 0.5");
  REQUIRE(hyp.exit_code == 0);
  auto j = nlohmann::json::parse(hyp.out);
  CHECK(j["value_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["gap_bits"].get<double>() <= 1e-6);

  // Renyi order 1/2 equals the fidelity route computed in-process.
  RunResult ren = run_cli("divergence --kind renyi --alpha 0.5 --rho " + path_of("d73.json") +
                          " --sigma " + path_of("mm.json"));
  REQUIRE(ren.exit_code == 0);
  Mat rho(2, 2), mm(2, 2);
  rho << 0.7, 0, 0, 0.3;
  mm << 0.5, 0, 0, 0.5;
  const double expected = -std::log2(fidelity(rho, mm));
  CHECK(nlohmann::json::parse(ren.out)["value_bits"].get<double>() ==
        doctest::Approx(expected).epsilon(1e-9));

  RunResult mx = run_cli("divergence --kind max --rho " + path_of("d73.json") + " --sigma " +
                         path_of("mm.json"));
  REQUIRE(mx.exit_code == 0);
  CHECK(nlohmann::json::parse(mx.out)["value_bits"].get<double>() ==
        doctest::Approx(std::log2(1.4)).epsilon(1e-9));

  CHECK(run_cli("divergence --kind hyp --rho " + path_of("mm.json") + " --sigma " +
                path_of("mm.json") + " --eps 1.5")
            .exit_code == 2);
  CHECK(run_cli("divergence --kind nope --rho " + path_of("mm.json") + " --sigma " +
                path_of("mm.json"))
            .exit_code == 2);
  CHECK(run_cli("divergence --kind rel --rho " + path_of("missing.json") + " --sigma " +
                path_of("mm.json"))
            .exit_code == 2);

  // Mismatched dimensions.
  write_file(path_of("q3.json"),
             R"({"dims":[3],"data":[[0.5,0],[0,0],[0,0],[0,0],[0.5,0],[0,0],[0,0],[0,0],[0,0]]})");
  CHECK(run_cli("divergence --kind rel --rho " + path_of("mm.json") + " --sigma " +
                path_of("q3.json"))
            .exit_code == 2);
}

TEST_CASE("state-bound command: csv table with certificates") {
  RunResult r = run_cli("state-bound --family w --parties 3 --copies 1 --eps 0:0.0021:0.001");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("epsilon,bound_bits,primal,dual,gap\n", 0) == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == 0.0);
  CHECK(rows[0][1] == doctest::Approx(std::log2(1.5)).epsilon(1e-9));
  CHECK(rows[1][0] == 0.001);
  CHECK(rows[2][0] == 0.002);
  for (const auto& row : rows) CHECK(row[4] <= 1e-6);  // certified gap column

  // Byte determinism across runs, and --out mirrors stdout bytes.
  RunResult again = run_cli("state-bound --family w --parties 3 --copies 1 --eps 0:0.0021:0.001");
  CHECK(again.out == r.out);
  RunResult to_file =
      run_cli("state-bound --family w --parties 3 --copies 1 --eps 0:0.0021:0.001 --out " +
              path_of("sb.csv"));
  REQUIRE(to_file.exit_code == 0);
  CHECK(read_file(path_of("sb.csv")) == r.out);

  // The ghz classical-variant point used by the reproduction table.
  RunResult ghz = run_cli(
      "state-bound --family ghz --parties 3 --copies 1 --ghz-variant classical --eps 0.001");
  REQUIRE(ghz.exit_code == 0);
  auto grows = csv_rows(ghz.out);
  REQUIRE(grows.size() == 1);
  CHECK(grows[0][1] == doctest::Approx(1.0014434168696684).epsilon(1e-9));

  CHECK(run_cli("state-bound --family w --parties 7 --copies 1 --eps 0").exit_code == 2);
  CHECK(run_cli("state-bound --family w --parties 3 --copies 3 --eps 0").exit_code == 2);
  CHECK(run_cli("state-bound --family x --parties 3 --copies 1 --eps 0").exit_code == 2);
  CHECK(run_cli("state-bound --family w --parties 3 --copies 1 --eps 0.999:0.5:0.1").exit_code ==
        2);
  CHECK(run_cli("state-bound --family ghz --parties 3 --copies 1 --ghz-variant odd --eps 0")
            .exit_code == 2);
}

TEST_CASE("mdi command: tables, thresholds, and cross-checks") {
  RunResult er = run_cli("mdi --kind erasure --q 0.7 --distance 0");
  REQUIRE(er.exit_code == 0);
  CHECK(er.out == "param,value_bits,rb_bits\n0,0.7,1\n");

  // The closed-form depolarizing curve is zero up to 1/sqrt(3) ~ 0.5774.
  RunResult dp = run_cli("mdi --kind depolarizing --q 1 --lambda 0.5:0.66:0.05");
  REQUIRE(dp.exit_code == 0);
  auto rows = csv_rows(dp.out);
  REQUIRE(rows.size() == 4);  // 0.5, 0.55, 0.6, 0.65
  CHECK(rows[0][1] == 0.0);
  CHECK(rows[1][1] == 0.0);
  CHECK(rows[2][1] > 0.0);
  CHECK(rows[3][1] > rows[2][1]);

  // Pipeline cross-check: depolarizing agrees to 1e-9 and exits 0.
  RunResult cc = run_cli("mdi --kind depolarizing --q 0.8 --lambda 0.5:0.96:0.15 --cross-check");
  REQUIRE(cc.exit_code == 0);
  CHECK(cc.out.rfind("param,value_bits,pipeline_bits,delta\n", 0) == 0);
  for (const auto& row : csv_rows(cc.out)) CHECK(row[3] <= 1e-9);

  // Dephasing: the pipeline and the closed form genuinely part ways, the
  // table is still written, and the exit code flags the disagreement.
  RunResult dc = run_cli("mdi --kind dephasing --q 0.5 --lambda 0.9 --cross-check");
  CHECK(dc.exit_code == 3);
  auto drows = csv_rows(dc.out);
  REQUIRE(drows.size() == 1);
  CHECK(drows[0][3] > 1e-3);

  // Erasure cross-check stays within tolerance along a distance sweep.
  RunResult ec = run_cli("mdi --kind erasure --q 0.9 --distance 0:45:22 --cross-check");
  REQUIRE(ec.exit_code == 0);
  for (const auto& row : csv_rows(ec.out)) CHECK(row[4] <= 1e-9);

  // Dephasing curves scale pointwise with detector efficiency.
  RunResult q1 = run_cli("mdi --kind dephasing --q 1 --lambda 0.8:1.0:0.05");
  RunResult q5 = run_cli("mdi --kind dephasing --q 0.5 --lambda 0.8:1.0:0.05");
  auto r1 = csv_rows(q1.out), r5 = csv_rows(q5.out);
  REQUIRE(r1.size() == r5.size());
  for (size_t i = 0; i < r1.size(); ++i)
    CHECK(r5[i][1] == doctest::Approx(0.5 * r1[i][1]).epsilon(1e-12));

  CHECK(run_cli("mdi --kind erasure --lambda 0.5").exit_code == 2);
  CHECK(run_cli("mdi --kind dephasing --distance 10").exit_code == 2);
  CHECK(run_cli("mdi --kind unknown --lambda 0.5").exit_code == 2);
  CHECK(run_cli("mdi --kind erasure --distance 0:10:0").exit_code == 2);  // bad step
}

TEST_CASE("network command: reports for tree, star, and chain") {
  write_file(path_of("net.json"), kGraphJson);
  RunResult tree = run_cli("network --graph " + path_of("net.json") + " --method tree");
  REQUIRE(tree.exit_code == 0);
  auto jt = nlohmann::json::parse(tree.out);
  CHECK(jt["value"].get<double>() == 2.0);
  CHECK(jt["tree"].size() == 5);
  for (const auto& e : jt["tree"]) CHECK(e["weight"].get<double>() == 2.0);

  RunResult star = run_cli("network --graph " + path_of("net.json") + " --method star");
  REQUIRE(star.exit_code == 0);
  auto js = nlohmann::json::parse(star.out);
  CHECK(js["value"].get<double>() == 1.0);
  CHECK(js["hub"].get<std::string>() == "v1");

  RunResult chain = run_cli("network --graph " + path_of("net.json") + " --method chain");
  REQUIRE(chain.exit_code == 0);
  auto jc = nlohmann::json::parse(chain.out);
  CHECK(jc["value"].get<double>() == 1.0);
  CHECK(jc["path"].size() == 6);

  // Two nodes, one link: every method reports the link rate.
  write_file(path_of("pair.json"),
             R"({"nodes":["a","b"],"edges":[{"u":"a","v":"b","weight":0.75}]})");
  for (const std::string method : {"tree", "star", "chain"}) {
    RunResult r = run_cli("network --graph " + path_of("pair.json") + " --method " + method);
    REQUIRE(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out)["value"].get<double>() == 0.75);
  }

  // Explicit rate matrix with an absent link.
  write_file(path_of("rates.json"),
             R"({"labels":["a","b","c"],"rates":[[0,2,null],[2,0,1],[null,1,0]]})");
  RunResult rs = run_cli("network --rates " + path_of("rates.json") + " --method star");
  REQUIRE(rs.exit_code == 0);
  auto jr = nlohmann::json::parse(rs.out);
  CHECK(jr["value"].get<double>() == 1.0);
  CHECK(jr["hub"].get<std::string>() == "b");

  write_file(path_of("disco.json"),
             R"({"nodes":["a","b","c"],"edges":[{"u":"a","v":"b","weight":1}]})");
  CHECK(run_cli("network --graph " + path_of("disco.json") + " --method tree").exit_code == 2);
  write_file(path_of("badnet.json"), "{broken");
  CHECK(run_cli("network --graph " + path_of("badnet.json") + " --method tree").exit_code == 2);
}

TEST_CASE("scenario files replay a command through the same parser") {
  nlohmann::json sc;
  sc["command"] = "mdi";
  sc["args"] = {"--kind", "erasure", "--q", "0.7", "--distance", "0"};
  write_file(path_of("scenario.json"), sc.dump());
  RunResult direct = run_cli("mdi --kind erasure --q 0.7 --distance 0");
  RunResult replay = run_cli("--scenario " + path_of("scenario.json"));
  REQUIRE(replay.exit_code == 0);
  CHECK(replay.out == direct.out);

  write_file(path_of("badsc.json"), R"({"args":["--kind","erasure"]})");
  CHECK(run_cli("--scenario " + path_of("badsc.json")).exit_code == 2);
}
