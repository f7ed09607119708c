#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out_root;
};

// FERMILT_BIN is injected by the build; runs are sandboxed under a fresh
// temporary output root per invocation.
RunResult run(const std::string& args, const std::string& tag) {
  const fs::path root = fs::temp_directory_path() / ("fermilt_cli_" + tag);
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cmd = std::string(FERMILT_BIN) + " " + args +
                          " > " + (root / "stdout.txt").string() + " 2>&1";
  ::setenv("FERMILT_OUT", root.string().c_str(), 1);
  const int raw = std::system(cmd.c_str());
  return {WEXITSTATUS(raw), root.string()};
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

fs::path only_run_dir(const std::string& root) {
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) return e.path();
  }
  FAIL("no run directory created under ", root);
  return {};
}

}  // namespace

TEST_CASE("help exits zero") {
  CHECK(run("--help", "help").exit_code == 0);
  CHECK(run("constant --help", "help2").exit_code == 0);
}

TEST_CASE("argument validation exits with code 1") {
  CHECK(run("constant --N 0 --n 8 --L 8", "badN").exit_code == 1);
  CHECK(run("constant --N 4 --n 8 --L 8", "badN2").exit_code == 1);
  CHECK(run("minimize --N 1 --n 8 --L 8", "missa").exit_code == 1);  // no --a
  CHECK(run("nonsense", "badsub").exit_code == 1);
  CHECK(run("constant --n 7 --L 8", "badgrid").exit_code == 1);
}

TEST_CASE("fit with too few usable records exits with code 2") {
  const fs::path csv = fs::temp_directory_path() / "fermilt_short.csv";
  {
    std::ofstream out(csv);
    out << "a,E,eps,mu1,mu2,grad_norm,iterations,converged,resolution_flag,"
           "frame_scale,grid_n,grid_L\n";
    out << "2.4,-0.5,0.8,-0.3,-0.2,1e-7,100,1,0,1.0,16,16\n";
    out << "2.5,-0.6,0.7,-0.3,-0.2,1e-7,100,1,0,1.0,16,16\n";
  }
  RunResult r = run("fit --csv " + csv.string() + " --target eps --D2 2.7",
                    "shortfit");
  CHECK(r.exit_code == 2);
  fs::remove(csv);
}

TEST_CASE("fit on a malformed csv exits with code 1") {
  const fs::path csv = fs::temp_directory_path() / "fermilt_bad.csv";
  {
    std::ofstream out(csv);
    out << "a,E,eps\n2.4,not_a_number,0.8\n";
  }
  RunResult r = run("fit --csv " + csv.string() + " --target eps --D2 2.7",
                    "badfit");
  CHECK(r.exit_code == 1);
  fs::remove(csv);
}

TEST_CASE("minimize writes config and result documents") {
  RunResult r =
      run("minimize --N 1 --a 1.3 --n 16 --L 16 --max-iters 1500", "min");
  REQUIRE(r.exit_code == 0);
  const fs::path dir = only_run_dir(r.out_root);
  auto cfg = read_json(dir / "config.json");
  CHECK(cfg["n"] == 16);
  CHECK(cfg["N"] == 1);
  auto res = read_json(dir / "result.json");
  CHECK(res["schema_version"] == 1);
  CHECK(res["kind"] == "minimize");
  CHECK(res["outputs"]["converged"] == true);
  CHECK(res["outputs"]["objective"].get<double>() < 0.0);
  CHECK(fs::exists(dir / "state.fvf"));
}

TEST_CASE("constant command reports a quotient and stores the optimizer") {
  RunResult r =
      run("constant --N 1 --n 16 --L 16 --starts 1 --no-refine "
          "--max-iters 1500",
          "const");
  REQUIRE(r.exit_code == 0);
  const fs::path dir = only_run_dir(r.out_root);
  auto res = read_json(dir / "result.json");
  const double v = res["outputs"]["value"].get<double>();
  CHECK(v > 2.0);
  CHECK(v < 3.1);
  CHECK(fs::exists(dir / "optimizer.fvf"));
}

TEST_CASE("identical invocations reproduce results exactly") {
  const std::string args =
      "minimize --N 1 --a 1.3 --n 16 --L 16 --max-iters 1500 --seed 7";
  RunResult r1 = run(args, "det1");
  RunResult r2 = run(args, "det2");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  auto a = read_json(only_run_dir(r1.out_root) / "result.json");
  auto b = read_json(only_run_dir(r2.out_root) / "result.json");
  CHECK(a["outputs"]["objective"].get<double>() ==
        b["outputs"]["objective"].get<double>());
  CHECK(a["outputs"]["iterations"] == b["outputs"]["iterations"]);
}

TEST_CASE("config file supplies defaults") {
  const fs::path cfg = fs::temp_directory_path() / "fermilt_cfg.toml";
  {
    std::ofstream out(cfg);
    out << "n = 16\nL = 16\nmax-iters = 1500\n";
  }
  RunResult r =
      run("minimize --N 1 --a 1.3 --config " + cfg.string(), "cfgfile");
  CHECK(r.exit_code == 0);
  auto doc = read_json(only_run_dir(r.out_root) / "config.json");
  CHECK(doc["n"] == 16);
  fs::remove(cfg);

  SUBCASE("unknown keys in the config file are rejected") {
    const fs::path bad = fs::temp_directory_path() / "fermilt_bad.toml";
    {
      std::ofstream out(bad);
      out << "n = 16\nL = 16\nbogus-key = 3\n";
    }
    CHECK(run("minimize --N 1 --a 1.3 --config " + bad.string(), "cfgbad")
              .exit_code == 1);
    fs::remove(bad);
  }
}
