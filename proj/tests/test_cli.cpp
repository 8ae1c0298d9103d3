#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

// End-to-end checks of the mttkrp-bench binary: exit codes, JSON report
// schema, and reproducibility.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli_path() { return MTTKRP_CLI_PATH; }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mttkrp_cli_" + std::to_string(static_cast<unsigned>(::getpid())));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run_cli(const std::string& args, const fs::path& output_file) {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > " + output_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("gen writes the requested element count and is byte-reproducible") {
  TempDir tmp;
  const auto tns = tmp.path / "t.tns";
  const auto log = tmp.path / "log.txt";

  CHECK(run_cli("gen --dims 16,16,16 --nnz 1000 --seed 1 --out " + tns.string(), log) == 0);
  std::string first = slurp(tns);
  std::size_t lines = 0;
  for (char c : first) lines += c == '\n';
  CHECK(lines == 1000);

  CHECK(run_cli("gen --dims 16,16,16 --nnz 1000 --seed 1 --out " + tns.string(), log) == 0);
  CHECK(slurp(tns) == first);

  CHECK(run_cli("gen --dims 2,2 --nnz 5 --seed 1 --out " + tns.string(), log) != 0);
}

TEST_CASE("run verifies against the reference and reports the schema fields") {
  TempDir tmp;
  const auto tns = tmp.path / "t.tns";
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  REQUIRE(run_cli("gen --dims 40,6,30 --nnz 800 --seed 3 --out " + tns.string(), log) == 0);

  const int rc = run_cli("run --tensor " + tns.string() +
                             " --rank 8 --kappa 4 --iters 2 --verify --deterministic --json " +
                             report_path.string(),
                         log);
  CHECK(rc == 0);

  auto report = load_json(report_path);
  CHECK(report["nnz"] == 800);
  CHECK(report["kappa"] == 4);
  CHECK(report["timing"]["modes"].size() == 3);
  for (const auto& mode : report["timing"]["modes"]) {
    CHECK(mode.contains("scheme"));
    CHECK(mode["wall_ms"].size() == 2);
    CHECK(mode.contains("busy_workers"));
    CHECK(mode["elements_per_worker"].size() == 4);
  }
  CHECK(report["timing"]["total_ms"].size() == 2);
  CHECK(report["timing"]["outputs_bit_identical"] == true);
  for (const auto& bm : report["balance"]) {
    CHECK(bm.contains("loads"));
    CHECK(bm.contains("owned_index_counts"));
    CHECK(bm.contains("max_over_mean"));
  }
  CHECK(report["memory"].contains("bits_per_element"));
  CHECK(report["memory"].contains("total_copy_bits"));
  CHECK(report["memory"].contains("total_copy_bytes"));
  CHECK(report["memory"].contains("factor_matrix_bytes"));
  CHECK(report["verify"]["passed"] == true);
  CHECK(report["verify"]["max_rel_err"].get<double>() <= 1e-5);
}

TEST_CASE("policy override controls the per-mode busy workers") {
  TempDir tmp;
  const auto tns = tmp.path / "skew.tns";
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  REQUIRE(run_cli("gen --dims 100,2,100 --nnz 500 --dist skewed --skew-mode 1 --seed 5 --out " +
                      tns.string(),
                  log) == 0);

  REQUIRE(run_cli("run --tensor " + tns.string() + " --rank 4 --kappa 8 --policy s1 --json " +
                      report_path.string(),
                  log) == 0);
  auto s1 = load_json(report_path);
  CHECK(s1["timing"]["modes"][1]["scheme"] == "scheme1");
  CHECK(s1["timing"]["modes"][1]["busy_workers"] == 2);

  REQUIRE(run_cli("run --tensor " + tns.string() + " --rank 4 --kappa 8 --policy adaptive --json " +
                      report_path.string(),
                  log) == 0);
  auto adaptive = load_json(report_path);
  CHECK(adaptive["timing"]["modes"][1]["scheme"] == "scheme2");
  CHECK(adaptive["timing"]["modes"][1]["busy_workers"] == 8);

  REQUIRE(run_cli("run --tensor " + tns.string() + " --rank 4 --kappa 8 --policy s2 --json " +
                      report_path.string(),
                  log) == 0);
  auto s2 = load_json(report_path);
  for (const auto& mode : s2["timing"]["modes"]) CHECK(mode["scheme"] == "scheme2");
}

TEST_CASE("deterministic reruns reproduce every non-timing number") {
  TempDir tmp;
  const auto tns = tmp.path / "t.tns";
  const auto log = tmp.path / "log.txt";
  const auto r1 = tmp.path / "r1.json";
  const auto r2 = tmp.path / "r2.json";

  REQUIRE(run_cli("gen --dims 20,3,20 --nnz 300 --seed 9 --out " + tns.string(), log) == 0);
  const std::string args = "run --tensor " + tns.string() +
                           " --rank 8 --kappa 4 --seed 11 --verify --deterministic --json ";
  REQUIRE(run_cli(args + r1.string(), log) == 0);
  REQUIRE(run_cli(args + r2.string(), log) == 0);

  auto a = load_json(r1);
  auto b = load_json(r2);
  auto strip_timing = [](json& j) {
    for (auto& mode : j["timing"]["modes"]) {
      mode.erase("wall_ms");
      mode.erase("min_ms");
      mode.erase("median_ms");
    }
    j["timing"].erase("total_ms");
    j["timing"].erase("total_min_ms");
    j["timing"].erase("total_median_ms");
    j.erase("tensor");
  };
  strip_timing(a);
  strip_timing(b);
  CHECK(a == b);
}

TEST_CASE("inspect reports schemes, distinct counts, and the memory formula") {
  TempDir tmp;
  const auto tns = tmp.path / "t.tns";
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  REQUIRE(run_cli("gen --dims 4,4,4 --nnz 10 --seed 2 --out " + tns.string(), log) == 0);
  REQUIRE(run_cli("inspect --tensor " + tns.string() + " --kappa 2 --rank 2 --json " +
                      report_path.string(),
                  log) == 0);
  auto report = load_json(report_path);
  CHECK(report["memory"]["bits_per_element"] == 38);
  CHECK(report["memory"]["total_copy_bits"] == 1140);
  for (const auto& mode : report["modes"]) {
    CHECK(mode["scheme"] == "scheme1");  // extent 4 >= kappa 2
    CHECK(mode.contains("distinct_indices"));
    CHECK(mode.contains("extent"));
  }
}

TEST_CASE("narrow modes of a Chicago-shaped tensor route to scheme2 at kappa=82") {
  TempDir tmp;
  const auto tns = tmp.path / "chicago.tns";
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  REQUIRE(run_cli("gen --dims 6186,24,77,32 --nnz 5000 --seed 8 --out " + tns.string(), log) ==
          0);
  REQUIRE(run_cli("inspect --tensor " + tns.string() + " --kappa 82 --json " +
                      report_path.string(),
                  log) == 0);
  auto modes = load_json(report_path)["modes"];
  CHECK(modes[0]["scheme"] == "scheme1");
  CHECK(modes[1]["scheme"] == "scheme2");  // extent 24
  CHECK(modes[2]["scheme"] == "scheme2");  // extent 77
  CHECK(modes[3]["scheme"] == "scheme2");  // extent 32
}

TEST_CASE("f64 precision verifies at the tighter tolerance") {
  TempDir tmp;
  const auto tns = tmp.path / "t.tns";
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  REQUIRE(run_cli("gen --dims 12,13,14 --nnz 400 --seed 10 --precision f64 --out " + tns.string(),
                  log) == 0);
  REQUIRE(run_cli("run --tensor " + tns.string() +
                      " --rank 4 --kappa 3 --precision f64 --verify --json " +
                      report_path.string(),
                  log) == 0);
  auto report = load_json(report_path);
  CHECK(report["verify"]["tolerance"].get<double>() == 1e-12);
  CHECK(report["verify"]["max_rel_err"].get<double>() <= 1e-12);
}

TEST_CASE("kappa=1 selects scheme1 everywhere") {
  TempDir tmp;
  const auto tns = tmp.path / "t.tns";
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  REQUIRE(run_cli("gen --dims 3,2,3 --nnz 8 --seed 4 --out " + tns.string(), log) == 0);
  REQUIRE(run_cli("inspect --tensor " + tns.string() + " --kappa 1 --json " +
                      report_path.string(),
                  log) == 0);
  for (const auto& mode : load_json(report_path)["modes"]) CHECK(mode["scheme"] == "scheme1");
}

TEST_CASE("SPMTTKRP_WORKERS supplies kappa when the flag is absent") {
  TempDir tmp;
  const auto tns = tmp.path / "t.tns";
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  REQUIRE(run_cli("gen --dims 10,10,10 --nnz 50 --seed 6 --out " + tns.string(), log) == 0);
  const std::string cmd = "SPMTTKRP_WORKERS=3 " + std::string(cli_path()) + " run --tensor " +
                          tns.string() + " --rank 2 --json " + report_path.string() + " > " +
                          log.string() + " 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(load_json(report_path)["kappa"] == 3);
}

TEST_CASE("errors exit nonzero and still produce valid JSON") {
  TempDir tmp;
  const auto log = tmp.path / "log.txt";
  const auto report_path = tmp.path / "report.json";

  CHECK(run_cli("run --tensor " + (tmp.path / "missing.tns").string(), log) != 0);

  const auto bad = tmp.path / "bad.tns";
  std::ofstream(bad) << "1 1 oops\n";
  CHECK(run_cli("run --tensor " + bad.string() + " --json " + report_path.string(), log) != 0);
  auto report = load_json(report_path);
  CHECK(report.contains("error"));
}
