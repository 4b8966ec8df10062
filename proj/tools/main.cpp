#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "sphbm/cli.hpp"
#include "sphbm/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Flags {
  std::string config, function, h, phi, form, out, emit_witness, k0, k1, f2d, body, body_file;
  std::vector<std::string> bodies;
  std::vector<double> t_grid;
  int grid_level = 0, k = 0, samples = 0;
  std::uint64_t seed = 0;
  bool case2 = false, serial = false, scan_only = false;
};

std::vector<std::string> split_builtin_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    if (r.rfind("builtin:", 0) != 0) {
      out.push_back(r);
      continue;
    }
    std::stringstream ss(r);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool is_pairs_file(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return false;
  std::ifstream in(path);
  const json j = json::parse(in, nullptr, false);
  return !j.is_discarded() && j.is_array();
}

sphbm::RunConfig load_base(const std::string& path) {
  sphbm::RunConfig cfg;
  cfg.grid_level = sphbm::default_grid_level();
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw sphbm::InvalidArgument("cannot open config file " + path);
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw sphbm::InvalidArgument("config file is not valid JSON: " + path);
  json merged = j;
  if (!merged.contains("grid_level") && merged.is_object()) merged["grid_level"] = cfg.grid_level;
  return sphbm::RunConfig::from_json(merged);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support-function detection and Brunn-Minkowski checks on the sphere", "sphbm"};
  app.set_version_flag("--version", sphbm::kVersion);
  app.require_subcommand(1);
  Flags fl;

  const char* names[] = {"detect", "bm-scan", "variation", "identities", "mollify", "area-measure", "planar"};
  const char* help[] = {"decide whether f is a support function, emit a violation witness otherwise",
                        "scan Brunn-Minkowski margins over body pairs and t values",
                        "first and second variation of F along a perturbation",
                        "residual battery for the calculus identities",
                        "mollify f by averaging over rotations near the identity",
                        "area measure of a body",
                        "planar additivity check"};
  std::map<std::string, CLI::App*> subs;
  for (int i = 0; i < 7; ++i) {
    CLI::App* s = app.add_subcommand(names[i], help[i]);
    s->set_help_flag("--help", "print this help message and exit");
    s->add_option("--config", fl.config, "JSON config file; flags override its keys");
    s->add_option("--grid-level", fl.grid_level, "quadrature level")->check(CLI::Range(0, 8));
    s->add_option("--out", fl.out, "output directory, or a .json path for the main result");
    s->add_flag("--serial", fl.serial, "disable OpenMP kernels");
    s->add_option("--seed", fl.seed, "random seed");
    subs[names[i]] = s;
  }
  for (const char* n : {"detect", "bm-scan", "variation", "mollify"})
    subs[n]->add_option("--function", fl.function, "builtin:<name>, inline JSON, or a JSON file");
  subs["detect"]->add_option("--emit-witness", fl.emit_witness, "witness JSON path");
  subs["detect"]->add_flag("--scan-only", fl.scan_only, "stop after the eigenvalue scan");
  for (const char* n : {"detect", "mollify"}) {
    subs[n]->add_option("--k", fl.k, "mollifier concentration");
    subs[n]->add_option("--samples", fl.samples, "rotation samples");
  }
  subs["bm-scan"]->add_option("--bodies", fl.bodies, "comma separated builtin bodies, body JSON, or a pairs file");
  subs["bm-scan"]->add_option("--t-grid", fl.t_grid, "t values (space or comma separated), or one step s for s, 2s, ...")
      ->delimiter(',');
  subs["bm-scan"]->add_option("--form", fl.form, "min, concave_root, or negative_root");
  subs["bm-scan"]->add_flag("--case2", fl.case2, "use the negative_root form");
  subs["variation"]->add_option("--h", fl.h, "support function of K");
  subs["variation"]->add_option("--phi", fl.phi, "perturbation");
  subs["area-measure"]->add_option("--body", fl.body, "builtin:<name>, inline JSON, or a JSON file");
  subs["area-measure"]->add_option("--body-file", fl.body_file, "body JSON file");
  subs["planar"]->add_option("--k0", fl.k0, "planar body JSON");
  subs["planar"]->add_option("--k1", fl.k1, "planar body JSON");
  subs["planar"]->add_option("--f2d", fl.f2d, "circle function JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sphbm::kExitConfigError;
  }

  std::string command;
  CLI::App* sub = nullptr;
  for (auto& [n, s] : subs)
    if (s->parsed()) command = n, sub = s;
  auto given = [&](const char* opt) { return sub->count(opt) > 0; };

  sphbm::RunConfig cfg;
  try {
    cfg = load_base(fl.config);
    cfg.command = command;
    if (given("--grid-level")) cfg.grid_level = fl.grid_level;
    if (given("--seed")) cfg.seed = fl.seed;
    if (given("--serial")) cfg.serial = true;
    if (given("--out")) {
      const fs::path p(fl.out);
      if (p.extension() == ".json") {
        cfg.out_file = fl.out;
        cfg.out_dir = p.has_parent_path() ? p.parent_path().string() : ".";
      } else {
        cfg.out_dir = fl.out;
      }
    }
    auto opt = [&](const char* flag, auto& field, const auto& value) {
      if (sub->get_option_no_throw(flag) != nullptr && given(flag)) field = value;
    };
    opt("--function", cfg.function, fl.function);
    opt("--emit-witness", cfg.emit_witness, fl.emit_witness);
    opt("--k", cfg.k, fl.k);
    opt("--samples", cfg.samples, fl.samples);
    opt("--t-grid", cfg.t_grid, fl.t_grid);
    opt("--form", cfg.form, fl.form);
    opt("--h", cfg.h, fl.h);
    opt("--phi", cfg.phi, fl.phi);
    opt("--k0", cfg.planar_k0, fl.k0);
    opt("--k1", cfg.planar_k1, fl.k1);
    opt("--f2d", cfg.f2d, fl.f2d);
    if (sub->get_option_no_throw("--case2") != nullptr && given("--case2")) cfg.case2 = true;
    if (sub->get_option_no_throw("--scan-only") != nullptr && given("--scan-only")) cfg.scan_only = true;
    if (sub->get_option_no_throw("--bodies") != nullptr && given("--bodies")) {
      if (fl.bodies.size() == 1 && is_pairs_file(fl.bodies.front())) {
        cfg.bodies_file = fl.bodies.front();
        cfg.bodies.clear();
      } else {
        cfg.bodies = split_builtin_list(fl.bodies);
      }
    }
    if (sub->get_option_no_throw("--body") != nullptr && given("--body")) cfg.bodies = {fl.body};
    if (sub->get_option_no_throw("--body-file") != nullptr && given("--body-file")) cfg.bodies = {fl.body_file};
  } catch (const sphbm::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return sphbm::kExitConfigError;
  }
  return sphbm::run(cfg, std::cerr);
}
