#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "finsec_tools/cli.hpp"
#include "finsec_tools/io.hpp"

using finsec::io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("finsec_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(std::vector<std::string> args, const fs::path& out_dir) {
  args.insert(args.begin(), "finsec");
  args.push_back("--out");
  args.push_back(out_dir.string());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = finsec::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("cli boundary on Z") {
  auto dir = scratch("boundary");
  auto r = run({"boundary", "--group", "Z", "--omega", "-1,0,1", "--ball", "5"}, dir);
  REQUIRE(r.code == 0);
  CHECK(r.report()["boundary"] == json::array({-5, 5}));
  CHECK(fs::exists(dir / "boundary.json"));
  CHECK(fs::exists(dir / "run_manifest.json"));
}

TEST_CASE("cli scan of I - 0.5 L_1 is stable") {
  auto dir = scratch("scan");
  auto r = run({"scan", "--op", "1@0; -0.5@1", "--n-hi", "40"}, dir);
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "scan.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,size,sigma_min,condition");
  int rows = 0;
  while (std::getline(csv, line)) {
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    auto c3 = line.find(',', c2 + 1);
    CHECK(std::stod(line.substr(c2 + 1, c3 - c2 - 1)) >= 0.5 - 1e-9);
    ++rows;
  }
  CHECK(rows == 40);
  CHECK(json::parse(slurp(dir / "scan.json"))["verdict"] == "stable");
}

TEST_CASE("cli compare on L_1 agrees on instability") {
  auto dir = scratch("compare");
  auto r = run({"compare", "--op", "1@1", "--n-hi", "12"}, dir);
  CHECK(r.code == 2);
  auto rep = json::parse(slurp(dir / "compare.json"));
  CHECK(rep["agreement"] == "agree");
  CHECK(rep["scan"] == "unstable");
  CHECK(rep["prediction"] == "unstable");
}

TEST_CASE("cli spec file fields override flags") {
  auto dir = scratch("spec");
  auto spec = dir / "spec.json";
  std::ofstream(spec) << R"({"group": "Z2", "ball": 1})";
  auto r = run({"ball", "--group", "F2", "--ball", "3", "--spec", spec.string()}, dir);
  REQUIRE(r.code == 0);
  CHECK(r.report()["size"] == 5);
  auto manifest = json::parse(slurp(dir / "run_manifest.json"));
  CHECK(manifest["inputs"]["group"] == "Z2");
  CHECK(manifest["resolved"]["group"]["kind"] == "lattice");
}

TEST_CASE("cli reports are byte-identical across runs") {
  auto a = scratch("det_a");
  auto b = scratch("det_b");
  std::vector<std::string> args = {"predict", "--op", "1@0; 0.25@1; 0.25@-1", "--probe-depth", "10"};
  auto ra = run(args, a);
  auto rb = run(args, b);
  CHECK(ra.code == rb.code);
  CHECK(slurp(a / "predict.json") == slurp(b / "predict.json"));
  CHECK(slurp(a / "predict_curves.csv") == slurp(b / "predict_curves.csv"));
  auto ma = json::parse(slurp(a / "run_manifest.json"));
  auto mb = json::parse(slurp(b / "run_manifest.json"));
  ma.erase("resolved");
  mb.erase("resolved");
  ma["inputs"].erase("out");
  mb["inputs"].erase("out");
  CHECK(ma == mb);
}

TEST_CASE("cli manifest echoes thresholds and defaults") {
  auto dir = scratch("manifest");
  auto r = run({"predict", "--op", "2@0", "--tau-inv", "1e-3"}, dir);
  CHECK(r.code == 0);
  auto m = json::parse(slurp(dir / "run_manifest.json"));
  const auto& res = m["resolved"];
  for (const char* key : {"tau_stab", "tau_inv", "trend", "zero", "decay_factor"}) {
    CHECK(res["thresholds"].contains(key));
  }
  CHECK(res["thresholds"]["tau_inv"] == 1e-3);
  CHECK(res["probe"]["depth"] == 40);
  CHECK(res["probe"]["max_dim"] == 600);
  CHECK(res["probe"]["symbol_samples"] == 1024);
  CHECK(res["letter_rays"] == true);
  CHECK(res.contains("max_matrix_dim"));
  CHECK(m["versions"].contains("finsec"));
  CHECK(m["versions"].contains("eigen"));
}

TEST_CASE("cli exit codes for bad input and capacity") {
  auto dir = scratch("errors");
  CHECK(run({"ball", "--group", "Q"}, dir).code == 64);
  CHECK(run({"truncate", "--op", "1@x"}, dir).code == 64);
  CHECK(run({"scan", "--op", "{not json"}, dir).code == 64);
  CHECK(run({"ball", "--group", "F2", "--ball", "1000"}, dir).code == 65);
  CHECK(run({"nosuch"}, dir).code == 64);

  auto spec = dir / "bad.json";
  std::ofstream(spec) << R"({"operater": "1@0"})";
  auto r = run({"scan", "--spec", spec.string()}, dir);
  CHECK(r.code == 64);
  CHECK(r.err.find("operater") != std::string::npos);

  // Periodic rules need a lattice.
  auto r2 = run({"truncate", "--group", "F2", "--op",
                 R"({"terms":[{"shift":"e","diagonal":{"rule":"periodic","period":[2],"table":[1,2]}}]})"},
                dir);
  CHECK(r2.code == 64);
}

TEST_CASE("cli limit-op") {
  auto dir = scratch("limit");
  const std::string periodic =
      R"({"terms":[{"shift":0,"diagonal":{"rule":"periodic","period":[2],"table":[2,0.5]}}]})";
  auto ray = run({"limit-op", "--op", periodic, "--ray", "1"}, dir);
  REQUIRE(ray.code == 0);
  CHECK(ray.report()["branches"].size() == 2);

  auto points = run({"limit-op", "--op", periodic, "--points", "1,2,3,4,5,6,7,8"}, dir);
  CHECK(points.code == 3);
  CHECK(points.report()["converged"] == false);

  auto both = run({"limit-op", "--op", periodic, "--ray", "1", "--points", "1,2"}, dir);
  CHECK(both.code == 64);
}

TEST_CASE("cli geometry and sections subcommands") {
  auto dir = scratch("geometry");
  auto ball = run({"ball", "--group", "H", "--ball", "3"}, dir);
  REQUIRE(ball.code == 0);
  CHECK(ball.report()["growth_profile"] == json::array({1, 5, 17, 53}));

  auto nest = run({"nesting-check", "--group", "Z2", "--n-max", "5"}, dir);
  REQUIRE(nest.code == 0);
  CHECK(nest.report()["all_nested"] == true);

  auto ideal = run({"ideal-gen", "--group", "F2", "--ball", "2"}, dir);
  REQUIRE(ideal.code == 0);
  CHECK(ideal.report()["max_equals_boundary_projection"] == true);
  CHECK(ideal.report()["supports_in_boundary"] == true);

  auto qc = run({"quasicomm", "--op", "1@1", "--op-b", "1@-1", "--ball", "3"}, dir);
  REQUIRE(qc.code == 0);
  CHECK(qc.report()["support_rows"] == json::array({-3}));

  auto trunc = run({"truncate", "--op", "1@0; -0.5@1", "--ball", "2"}, dir);
  REQUIRE(trunc.code == 0);
  std::istringstream csv(slurp(dir / "truncate.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 5);

  auto inf = run({"inflate", "--group", "Z2", "--count", "3", "--strong"}, dir);
  REQUIRE(inf.code == 0);
  CHECK(inf.report()["disjoint"] == true);

  auto as = run({"assemble", "--op", "1@0; 0.5@1", "--count", "3"}, dir);
  REQUIRE(as.code == 0);
  CHECK(as.report()["dropped"].empty());

  auto ls = run({"limit-set", "--group", "F2", "--path", "a|b", "--n-max", "5"}, dir);
  REQUIRE(ls.code == 0);
  CHECK(ls.report()["nested"] == true);
  CHECK(ls.report()["first_non_geodesic"].is_null());
}
