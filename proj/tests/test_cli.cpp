#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sphbm/cli.hpp"
#include "sphbm/types.hpp"

using namespace sphbm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::path(testing::TempDir()) / ("sphbm_cli_" + name);
  fs::remove_all(d);
  return d;
}

RunConfig config(const std::string& command, const fs::path& out) {
  RunConfig c;
  c.command = command;
  c.out_dir = out.string();
  return c;
}

int run_quiet(const RunConfig& c) {
  std::ostringstream log;
  return run(c, log);
}

}  // namespace

TEST(Cli, ConfigRejectsUnknownKeys) {
  EXPECT_THROW(RunConfig::from_json({{"command", "detect"}, {"colour", "blue"}}), InvalidArgument);
  EXPECT_THROW(RunConfig::from_json({{"grid_level", "three"}}), InvalidArgument);
  const RunConfig c = RunConfig::from_json({{"command", "planar"}, {"seed", 11}});
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(RunConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(Cli, ValidationErrorsExit64) {
  RunConfig c = config("frobnicate", fresh_dir("bad"));
  EXPECT_EQ(run_quiet(c), kExitConfigError);
  c = config("identities", fresh_dir("bad2"));
  c.grid_level = 99;
  EXPECT_EQ(run_quiet(c), kExitConfigError);
  c = config("detect", fresh_dir("bad3"));
  c.function = "builtin:no_such_function";
  EXPECT_EQ(run_quiet(c), kExitConfigError);
}

TEST(Cli, IdentitiesCsvAndManifest) {
  const fs::path d = fresh_dir("identities");
  RunConfig c = config("identities", d);
  c.grid_level = 3;
  EXPECT_EQ(run_quiet(c), 0);
  const std::string csv = slurp(d / "identities.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# config_hash=", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "identity,grid_level,residual,threshold,pass");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",3,") != std::string::npos) EXPECT_EQ(line.back(), '1') << line;
  }
  EXPECT_EQ(rows, 12);
  const json m = json::parse(slurp(d / "manifest_identities.json"));
  EXPECT_EQ(m.at("version"), kVersion);
  EXPECT_EQ(m.at("exit_code"), 0);
  EXPECT_TRUE(m.at("tolerances").is_object());
  EXPECT_EQ(csv.find(m.at("config_hash").get<std::string>()), 14u);
}

TEST(Cli, OutputsAreReproducible) {
  const fs::path a = fresh_dir("repro_a"), b = fresh_dir("repro_b");
  for (const std::string cmd : {"identities", "mollify", "bm-scan"}) {
    RunConfig ca = config(cmd, a), cb = config(cmd, b);
    for (RunConfig* c : {&ca, &cb}) {
      c->grid_level = 2;
      c->function = cmd == "mollify" ? "builtin:abs_x" : "builtin:constant";
      c->samples = 2000;
      c->bodies = {"builtin:ball", "builtin:ellipsoid"};
    }
    // the output directory is part of the config; give both runs the same one
    cb.out_dir = ca.out_dir;
    ASSERT_EQ(run_quiet(ca), 0);
    fs::create_directories(b);
    for (const auto& e : fs::directory_iterator(a))
      if (e.path().filename().string().rfind("manifest", 0) != 0) fs::copy_file(e.path(), b / e.path().filename(), fs::copy_options::overwrite_existing);
    ASSERT_EQ(run_quiet(cb), 0);
    for (const auto& e : fs::directory_iterator(a)) {
      if (e.path().filename().string().rfind("manifest", 0) == 0) continue;
      EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
    }
  }
}

TEST(Cli, EveryOutputReferencesConfigHash) {
  const fs::path d = fresh_dir("hash");
  RunConfig c = config("area-measure", d);
  c.bodies = {"builtin:cone"};
  ASSERT_EQ(run_quiet(c), 0);
  const json m = json::parse(slurp(d / "manifest_area-measure.json"));
  const std::string hash = m.at("config_hash");
  ASSERT_FALSE(m.at("outputs").empty());
  for (const auto& o : m.at("outputs")) EXPECT_NE(slurp(d / o.get<std::string>()).find(hash), std::string::npos) << o;
  const json am = json::parse(slurp(d / "area_measure.json"));
  EXPECT_NEAR(am.at("total_mass").get<double>(), 2.0 * M_PI * (1.0 - std::cos(M_PI / 4)) + M_PI * std::sin(M_PI / 4),
              1e-9);
}

TEST(Cli, DetectConstantExitsZero) {
  const fs::path d = fresh_dir("detect0");
  RunConfig c = config("detect", d);
  c.function = "builtin:constant";
  EXPECT_EQ(run_quiet(c), 0);
  const json r = json::parse(slurp(d / "detect.json"));
  EXPECT_NEAR(r.at("report").at("lambda_min").get<double>(), 1.0, 1e-6);
  EXPECT_EQ(r.at("status"), "none");
}

TEST(Cli, DetectEmitsWitness) {
  const fs::path d = fresh_dir("detect1");
  RunConfig c = config("detect", d);
  c.function = "builtin:saddle";
  c.emit_witness = (d / "witness.json").string();
  EXPECT_EQ(run_quiet(c), 1);
  const json w = json::parse(slurp(d / "witness.json"));
  EXPECT_LT(w.at("bm_instance").at("margin").get<double>(), 0.0);
  EXPECT_TRUE(w.at("verification").at("verified").get<bool>());
}

TEST(Cli, BmScanExample) {
  const fs::path d = fresh_dir("bmscan");
  RunConfig c = config("bm-scan", d);
  c.function = "builtin:constant";
  c.bodies = {"builtin:ball", "builtin:ellipsoid"};
  c.t_grid = {0.25};
  EXPECT_EQ(run_quiet(c), 0);
  std::istringstream in(slurp(d / "bm_scan.csv"));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_GE(std::stod(line.substr(line.rfind(',') + 1)), -1e-6);
  }
  EXPECT_EQ(rows, 3);
}

TEST(Cli, BmScanConcaveRootOnNegativeIsConfigError) {
  RunConfig c = config("bm-scan", fresh_dir("bmneg"));
  c.function = "builtin:negative";
  c.bodies = {"builtin:ball"};
  c.form = "concave_root";
  EXPECT_EQ(run_quiet(c), kExitConfigError);
  c.case2 = true;
  EXPECT_EQ(run_quiet(c), 0);
}

TEST(Cli, VariationAndPlanarAndMollify) {
  const fs::path d = fresh_dir("misc");
  RunConfig v = config("variation", d);
  v.function = "builtin:exp_bump";
  v.h = "builtin:ellipsoid";
  v.phi = "builtin:mild_quadratic";
  EXPECT_EQ(run_quiet(v), 0);
  EXPECT_TRUE(json::parse(slurp(d / "variation.json")).at("consistent").get<bool>());

  RunConfig p = config("planar", d);
  p.planar_k0 = R"({"type":"disk","radius":1})";
  p.planar_k1 = R"({"type":"ellipse","a":2,"b":0.5,"rotation":0.3})";
  p.f2d = R"({"type":"fourier","c0":0.5,"a":[1,0.2],"b":[0,-0.3]})";
  EXPECT_EQ(run_quiet(p), 0);
  EXPECT_LT(json::parse(slurp(d / "planar.json")).at("residual").get<double>(), 1e-6);

  RunConfig m = config("mollify", d);
  m.function = "builtin:abs_x";
  m.samples = 2000;
  m.out_file = (d / "fk.json").string();
  EXPECT_EQ(run_quiet(m), 0);
  const json fk = json::parse(slurp(d / "fk.json"));
  EXPECT_EQ(fk.at("type"), "nodal");
  EXPECT_EQ(fk.at("values").size(), fk.at("nodes").size());
  EXPECT_EQ(fk.at("sigma").size(), fk.at("nodes").size());
}

TEST(Cli, FnvHash) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Cli, DefaultGridLevelFromEnvironment) {
  setenv("SPHBM_GRID_LEVEL", "5", 1);
  EXPECT_EQ(default_grid_level(), 5);
  unsetenv("SPHBM_GRID_LEVEL");
  EXPECT_EQ(default_grid_level(), 3);
}
