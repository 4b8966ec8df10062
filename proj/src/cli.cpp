#include "sphbm/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sphbm/detector.hpp"
#include "sphbm/identities.hpp"
#include "sphbm/kernels.hpp"
#include "sphbm/mollifier.hpp"
#include "sphbm/random.hpp"

namespace sphbm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) h = (h ^ c) * 0x100000001b3ULL;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp + "'");
    out << content;
    if (!out) throw InvalidArgument("write failed for '" + tmp + "'");
  }
  fs::rename(tmp, p);
}

int default_grid_level() {
  if (const char* v = std::getenv("SPHBM_GRID_LEVEL")) {
    try {
      std::size_t pos = 0;
      const int level = std::stoi(v, &pos);
      if (pos == std::string(v).size() && level >= 0 && level <= 10) return level;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("SPHBM_GRID_LEVEL must be an integer in [0, 10], got '") + v + "'");
  }
  return 3;
}

json RunConfig::to_json() const {
  return {{"command", command},     {"grid_level", grid_level}, {"function", function},
          {"bodies", bodies},       {"bodies_file", bodies_file}, {"t_grid", t_grid},
          {"form", form},           {"case2", case2},           {"h", h},
          {"phi", phi},             {"k", k},                   {"samples", samples},
          {"seed", seed},           {"planar_k0", planar_k0},   {"planar_k1", planar_k1},
          {"f2d", f2d},             {"out_dir", out_dir},       {"emit_witness", emit_witness},
          {"out_file", out_file},   {"scan_only", scan_only}, {"serial", serial}};
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  RunConfig c;
  const json known = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw InvalidArgument("config: unknown key '" + key + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("command", c.command);
    get("grid_level", c.grid_level);
    get("function", c.function);
    get("bodies", c.bodies);
    get("bodies_file", c.bodies_file);
    get("t_grid", c.t_grid);
    get("form", c.form);
    get("case2", c.case2);
    get("h", c.h);
    get("phi", c.phi);
    get("k", c.k);
    get("samples", c.samples);
    get("seed", c.seed);
    get("planar_k0", c.planar_k0);
    get("planar_k1", c.planar_k1);
    get("f2d", c.f2d);
    get("out_dir", c.out_dir);
    get("emit_witness", c.emit_witness);
    get("out_file", c.out_file);
    get("scan_only", c.scan_only);
    get("serial", c.serial);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands = {"detect",  "bm-scan",      "variation", "identities",
                                                    "mollify", "area-measure", "planar"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw InvalidArgument("unknown command '" + command + "'");
  if (grid_level < 0 || grid_level > 8) throw InvalidArgument("grid_level must lie in [0, 8]");
  if (k < 1) throw InvalidArgument("k must be positive");
  if (samples < 1000) throw InvalidArgument("samples must be at least 1000");
  if (t_grid.empty()) throw InvalidArgument("t_grid must not be empty");
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 1.0) && !(t == 0.0)) throw InvalidArgument("t_grid values must lie in [0, 1]");
  bm_form_from_string(form);
  if (out_dir.empty()) throw InvalidArgument("out_dir must not be empty");
}

json body_arg_json(const std::string& arg) {
  const std::string prefix = "builtin:";
  if (arg.rfind(prefix, 0) == 0) {
    const std::string name = arg.substr(prefix.size());
    if (name == "ball") return {{"variant", "ball"}, {"r", 1.0}};
    if (name == "ellipsoid" || name == "shifted_ellipsoid" || name == "mild_quadratic" || name == "zonal_convex")
      return {{"variant", "smooth"}, {"h", "builtin:" + name}};
    if (name == "cone") return {{"variant", "cone"}, {"P", {0, 0, 1}}, {"theta", M_PI / 4.0}};
    if (name == "cylinder")
      return {{"variant", "cylinder"}, {"base", {{"type", "disk"}, {"radius", 1.0}}}, {"lambda", 1.0}, {"axis", {0, 0, 1}}};
    throw InvalidArgument("unknown builtin body '" + name + "' (ball, ellipsoid, shifted_ellipsoid, mild_quadratic, "
                          "zonal_convex, cone, cylinder)");
  }
  if (!arg.empty() && arg.front() == '{') return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw InvalidArgument("body argument '" + arg + "' is neither builtin:<name> nor a readable file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("cannot parse body file '" + arg + "': " + e.what());
  }
  return j;
}

namespace {

json parse_json_arg(const std::string& arg, const char* what) {
  try {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw InvalidArgument(std::string(what) + ": cannot read '" + arg + "'");
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string(what) + ": " + e.what());
  }
}

std::vector<double> expand_t_grid(const std::vector<double>& tg) {
  if (tg.size() == 1 && tg[0] > 0.0 && tg[0] < 1.0) {
    std::vector<double> out;
    for (int i = 1; i * tg[0] < 1.0 - 1e-12; ++i) out.push_back(i * tg[0]);
    return out;
  }
  return tg;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct Context {
  const RunConfig& cfg;
  std::ostream& log;
  std::string hash;
  std::vector<std::string> outputs;
  json tolerances = json::object();
  bool primary_copied = false;

  std::string path(const std::string& name) const { return (fs::path(cfg.out_dir) / name).string(); }

  void write_json(const std::string& name, const json& j) {
    json doc = j;
    doc["config_hash"] = hash;
    write_file_atomic(path(name), doc.dump(2) + "\n");
    outputs.push_back(name);
    if (!cfg.out_file.empty() && !primary_copied) {
      write_file_atomic(cfg.out_file, doc.dump(2) + "\n");
      outputs.push_back(cfg.out_file);
      primary_copied = true;
    }
  }

  void write_csv(const std::string& name, const std::string& header, const std::vector<std::string>& rows) {
    std::string s = "# config_hash=" + hash + "\n" + header + "\n";
    for (const auto& r : rows) s += r + "\n";
    write_file_atomic(path(name), s);
    outputs.push_back(name);
  }
};

int cmd_detect(Context& ctx);
int cmd_bm_scan(Context& ctx);
int cmd_variation(Context& ctx);
int cmd_identities(Context& ctx);
int cmd_mollify(Context& ctx);
int cmd_area_measure(Context& ctx);
int cmd_planar(Context& ctx);

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  Context ctx{cfg, log, "", {}, json::object(), false};
  int code = 0;
  try {
    cfg.validate();
    ctx.hash = fnv1a_hex(cfg.to_json().dump());
    set_default_exec(cfg.serial ? Exec::serial : Exec::parallel);
    if (cfg.command == "detect") code = cmd_detect(ctx);
    else if (cfg.command == "bm-scan") code = cmd_bm_scan(ctx);
    else if (cfg.command == "variation") code = cmd_variation(ctx);
    else if (cfg.command == "identities") code = cmd_identities(ctx);
    else if (cfg.command == "mollify") code = cmd_mollify(ctx);
    else if (cfg.command == "area-measure") code = cmd_area_measure(ctx);
    else code = cmd_planar(ctx);
  } catch (const InvalidArgument& e) {
    log << "configuration error: " << e.what() << "\n";
    code = kExitConfigError;
  } catch (const Unsupported& e) {
    log << "unsupported: " << e.what() << "\n";
    code = kExitConfigError;
  } catch (const NotSupportFunction& e) {
    log << "numerical failure: " << e.what() << "\n";
    code = kExitNumericalFailure;
  } catch (const NumericalFailure& e) {
    log << "numerical failure: " << e.what() << "\n";
    code = kExitNumericalFailure;
  }
  if (code == kExitConfigError && ctx.hash.empty()) return code;
  try {
    json manifest = {{"tool", "sphbm"},
                     {"version", kVersion},
                     {"command", cfg.command},
                     {"config", cfg.to_json()},
                     {"config_hash", ctx.hash},
                     {"tolerances", ctx.tolerances},
                     {"outputs", ctx.outputs},
                     {"exit_code", code},
                     {"timestamp", iso_timestamp()}};
    write_file_atomic(ctx.path("manifest_" + cfg.command + ".json"), manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "cannot write manifest: " << e.what() << "\n";
    if (code == 0) code = kExitConfigError;
  }
  return code;
}

}  // namespace sphbm

namespace sphbm {
namespace {

int cmd_detect(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  SphericalFunction f = parse_function_arg(cfg.function);
  json out = json::object();
  bool mollified = false;
  if (f.smoothness() < Smoothness::C2) {
    ctx.log << "'" << f.label() << "' is not C2; mollifying with k=" << cfg.k << "\n";
    f = mollify(f, cfg.k, cfg.samples, cfg.seed);
    out["mollified"] = {{"k", cfg.k}, {"samples", cfg.samples}, {"seed", cfg.seed}};
    mollified = true;
  }
  const SphereGrid grid = build_grid(cfg.grid_level);
  if (cfg.scan_only || mollified) {
    const DetectionReport rep = min_q_eigen_scan(f, build_icosphere(std::min(cfg.grid_level + 1, 7)));
    ctx.tolerances["psd"] = rep.tolerance;
    out["report"] = rep.to_json();
    if (mollified && !cfg.scan_only) out["note"] = "witness search skipped for mollified input";
    ctx.write_json("detect.json", out);
    ctx.log << "lambda_min " << rep.lambda_min << " -> "
            << (rep.decision == Decision::support ? "support" : "not_support") << "\n";
    if (rep.decision == Decision::support) return 0;
    return cfg.scan_only ? 1 : 2;
  }
  const ViolationResult res = find_bm_violation(f, grid);
  ctx.tolerances["psd"] = res.report.tolerance;
  const json rj = res.to_json();
  for (const auto& [k, v] : rj.items()) out[k] = v;
  ctx.write_json("detect.json", out);
  for (const auto& line : res.log) ctx.log << "  " << line << "\n";
  if (res.witness && !cfg.emit_witness.empty()) {
    json w = res.witness->to_json();
    w["config_hash"] = ctx.hash;
    write_file_atomic(cfg.emit_witness, w.dump(2) + "\n");
    ctx.outputs.push_back(cfg.emit_witness);
  }
  switch (res.status) {
    case ViolationStatus::none:
      ctx.log << "decision: support (lambda_min " << res.report.lambda_min << ")\n";
      return 0;
    case ViolationStatus::witness:
      ctx.log << "decision: not_support, witness margin " << res.witness->bm_instance.margin << "\n";
      return 1;
    case ViolationStatus::inconclusive:
      ctx.log << "decision: not_support, no witness found (inconclusive)\n";
      return 2;
  }
  return 2;
}

int cmd_bm_scan(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SphericalFunction f = parse_function_arg(cfg.function);
  std::vector<std::pair<json, json>> pairs;
  if (!cfg.bodies_file.empty()) {
    const json j = parse_json_arg(cfg.bodies_file, "bodies file");
    if (!j.is_array()) throw InvalidArgument("bodies file must hold an array of [body, body] pairs");
    for (const auto& p : j) {
      if (!p.is_array() || p.size() != 2) throw InvalidArgument("bodies file entries must be [body, body]");
      pairs.emplace_back(p[0], p[1]);
    }
  } else {
    if (cfg.bodies.empty()) throw InvalidArgument("bm-scan needs --bodies or --bodies-file");
    std::vector<json> bs;
    for (const auto& b : cfg.bodies) bs.push_back(body_arg_json(b));
    if (bs.size() == 1) pairs.emplace_back(bs[0], bs[0]);
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = i + 1; j < bs.size(); ++j) pairs.emplace_back(bs[i], bs[j]);
  }
  const BMForm form = cfg.case2 ? BMForm::negative_root : bm_form_from_string(cfg.form);
  const SphereGrid grid = build_grid(cfg.grid_level);
  const auto ts = expand_t_grid(cfg.t_grid);
  std::vector<std::string> rows;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const ConvexBody K0 = body_from_json(pairs[p].first), K1 = body_from_json(pairs[p].second);
    for (double t : ts) {
      const BMReport r = bm_check(f, K0, K1, t, form, grid);
      worst = std::min(worst, r.margin);
      rows.push_back(std::to_string(p) + "," + K0.kind() + "," + K1.kind() + "," + num(t) + "," + to_string(form) + "," +
                     num(r.F0) + "," + num(r.F1) + "," + num(r.Ft) + "," + num(r.lhs) + "," + num(r.rhs) + "," +
                     num(r.margin));
    }
  }
  ctx.write_csv("bm_scan.csv", "pair,body0,body1,t,form,F0,F1,Ft,lhs,rhs,margin", rows);
  ctx.write_json("bm_scan.json", {{"pairs", pairs.size()}, {"t", ts}, {"form", to_string(form)}, {"min_margin", worst}});
  ctx.log << rows.size() << " instances, min margin " << worst << "\n";
  return 0;
}

int cmd_variation(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SphericalFunction f = parse_function_arg(cfg.function);
  const SphericalFunction h = parse_function_arg(cfg.h);
  const SphericalFunction phi = parse_function_arg(cfg.phi);
  const VariationProfile vp = variation_profile(f, h, phi, build_grid(cfg.grid_level));
  ctx.tolerances["F1"] = VariationProfile::tolerance(vp.F1);
  ctx.tolerances["F2"] = VariationProfile::tolerance(vp.F2);
  ctx.write_json("variation.json", vp.to_json());
  ctx.log << "F0 " << vp.F0 << " F1 " << vp.F1 << " (fd " << vp.fd_F1 << ") F2 " << vp.F2 << " (fd " << vp.fd_F2
          << ")\n";
  if (!vp.consistent()) {
    ctx.log << "analytic and finite-difference derivatives disagree\n";
    return kExitNumericalFailure;
  }
  return 0;
}

struct IdentityRow {
  std::string name;
  int level;
  double residual;
  double threshold;
};

// max over samples of the eigenvalue mismatch between D^2 H and Q plus {0}, relative to 1 + |D^2 H|.
double eigenvalue_lemma_mismatch(const std::vector<SphericalFunction>& fam, const SphereGrid& grid, int samples,
                                 std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const SphericalFunction& f = fam[rng.index(static_cast<int>(fam.size()))];
    const Vec3 u = grid.rule.nodes[rng.index(static_cast<int>(grid.size()))];
    const Mat3 D = homogeneous_hessian(f, u, 1e-3);
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (D + D.transpose()));
    const QSample q = q_matrix(f, u);
    std::array<double, 3> a = {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
    std::array<double, 3> b = {q.eigenvalues[0], q.eigenvalues[1], 0.0};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    worst = std::max(worst, m / (1.0 + D.norm()));
  }
  return worst;
}

double rotation_mismatch(const SphericalFunction& f, std::uint64_t seed, int points) {
  Rng rng(seed);
  const Mat3 rho = rng.rotation();
  const SphericalFunction fr = rotate_function(f, rho);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const Vec3 x = rng.unit_vector();
    const QSample a = q_matrix(fr, x), b = q_matrix(f, rho.transpose() * x);
    worst = std::max({worst, std::abs(a.q.det() - b.q.det()), std::abs(a.q.trace() - b.q.trace())});
  }
  return worst;
}

// Integral identities are limited by quadrature error, which falls spectrally with the level.
double integral_threshold(int level) {
  if (level <= 2) return 0.5;
  if (level == 3) return 1e-3;
  return 1e-5;
}

int cmd_identities(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const int lo = std::min(2, cfg.grid_level);
  ctx.tolerances = {{"integral_identities_by_level", {{"2", integral_threshold(2)}, {"3", integral_threshold(3)},
                                                      {"4+", integral_threshold(4)}}},
                    {"eigenvalue_lemma", 1e-6},
                    {"rotation_equivariance", 1e-6}};
  const SphericalFunction h = builtin("mild_quadratic");
  const SphericalFunction ph = builtin("shifted_ellipsoid");
  const SphericalFunction ps = exp_linear(Vec3(0.3, 0.1, -0.2), 1.0);
  const SphericalFunction pf = builtin("zonal_quartic");
  const SphericalFunction sf = builtin("exp_bump");
  const SphericalFunction sp = builtin("ellipsoid");
  std::vector<IdentityRow> rows;
  for (int level = lo; level <= cfg.grid_level; ++level) {
    const SphereGrid grid = build_grid(level);
    const double thr = integral_threshold(level);
    rows.push_back({"cheng_yau", level, cheng_yau_residual(h, grid), thr});
    const PartsIdentity pi = parts_identity(ph, ps, pf, grid);
    rows.push_back({"parts_r1", level, pi.r1, thr});
    rows.push_back({"parts_r2", level, pi.r2, thr});
    rows.push_back({"second_variation", level, second_variation_identity_residual(sf, sp, grid), thr});
    const std::vector<SphericalFunction> fam = {builtin("ellipsoid"), builtin("shifted_ellipsoid"), builtin("quad"),
                                                builtin("exp_bump"), builtin("zonal_quartic")};
    rows.push_back({"eigenvalue_lemma", level, eigenvalue_lemma_mismatch(fam, grid, 50, cfg.seed), 1e-6});
    rows.push_back({"rotation_equivariance", level, rotation_mismatch(ph, cfg.seed + level, 100), 1e-6});
  }
  std::vector<std::string> lines;
  bool ok = true;
  for (const auto& r : rows) {
    const bool pass = std::isfinite(r.residual) && r.residual < r.threshold;
    if (r.level == cfg.grid_level) ok = ok && pass;
    lines.push_back(r.name + "," + std::to_string(r.level) + "," + num(r.residual) + "," + num(r.threshold) + "," +
                    (pass ? "1" : "0"));
    ctx.log << std::left << std::setw(24) << r.name << " level " << r.level << "  " << r.residual << (pass ? "" : "  (above threshold)")
            << "\n";
  }
  ctx.write_csv("identities.csv", "identity,grid_level,residual,threshold,pass", lines);
  return ok ? 0 : kExitNumericalFailure;
}

int cmd_mollify(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SphericalFunction f = parse_function_arg(cfg.function);
  const Mollified m(f, cfg.k, cfg.samples, cfg.seed);
  const SphereGrid grid = build_grid(cfg.grid_level);
  const auto& vals = m.on_nodes(grid.rule);
  json nodes = json::array(), values = json::array(), sigma = json::array();
  std::vector<std::string> rows;
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3& u = grid.rule.nodes[i];
    nodes.push_back({u.x(), u.y(), u.z()});
    values.push_back(vals[i].value);
    sigma.push_back(vals[i].sigma);
    const double fu = f(u);
    sup = std::max(sup, std::abs(vals[i].value - fu));
    rows.push_back(num(u.x()) + "," + num(u.y()) + "," + num(u.z()) + "," + num(fu) + "," + num(vals[i].value) + "," +
                   num(vals[i].sigma));
  }
  ctx.write_json("mollify.json", {{"type", "nodal"},
                                  {"nodes", nodes},
                                  {"values", values},
                                  {"sigma", sigma},
                                  {"k", cfg.k},
                                  {"samples", cfg.samples},
                                  {"seed", cfg.seed},
                                  {"source", f.spec()}});
  ctx.write_csv("mollify.csv", "x,y,z,f,f_k,sigma", rows);
  ctx.log << "sup |f_k - f| on " << grid.size() << " nodes: " << sup << "\n";
  return 0;
}

int cmd_area_measure(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.bodies.empty()) throw InvalidArgument("area-measure needs --body");
  const ConvexBody K = body_from_json(body_arg_json(cfg.bodies.front()));
  const AreaMeasure m = area_measure(K, build_grid(cfg.grid_level));
  json patches = json::array(), atoms = json::array(), curves = json::array();
  std::vector<std::string> rows;
  for (const auto& p : m.patches) {
    double mass = 0.0;
    for (std::size_t i = 0; i < p.rule.size(); ++i) {
      mass += p.rule.weights[i] * p.density[i];
      const Vec3& u = p.rule.nodes[i];
      rows.push_back(p.label + "," + num(u.x()) + "," + num(u.y()) + "," + num(u.z()) + "," + num(p.rule.weights[i]) +
                     "," + num(p.density[i]));
    }
    patches.push_back({{"label", p.label}, {"nodes", p.rule.size()}, {"mass", mass}});
  }
  for (const auto& a : m.atoms)
    atoms.push_back({{"direction", {a.direction.x(), a.direction.y(), a.direction.z()}}, {"mass", a.mass}});
  for (const auto& c : m.curves) {
    AreaMeasure only;
    only.level = m.level;
    only.curves.push_back(c);
    curves.push_back({{"label", c.label},
                      {"center", {c.center.x(), c.center.y(), c.center.z()}},
                      {"radius", c.radius},
                      {"length", 2.0 * M_PI * std::sin(c.radius)},
                      {"mass", only.total_mass()}});
  }
  const Vec3 cen = m.centroid();
  ctx.write_json("area_measure.json", {{"body", K.to_json()},
                                       {"total_mass", m.total_mass()},
                                       {"centroid", {cen.x(), cen.y(), cen.z()}},
                                       {"patches", patches},
                                       {"atoms", atoms},
                                       {"curves", curves}});
  ctx.write_csv("area_measure.csv", "patch,x,y,z,weight,density", rows);
  ctx.log << "total mass " << std::setprecision(12) << m.total_mass() << ", |centroid| " << cen.norm() << "\n";
  return 0;
}

int cmd_planar(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.planar_k0.empty() || cfg.planar_k1.empty()) throw InvalidArgument("planar needs --k0 and --k1");
  const PlanarBody K0 = planar_from_json(parse_json_arg(cfg.planar_k0, "planar body"));
  const PlanarBody K1 = planar_from_json(parse_json_arg(cfg.planar_k1, "planar body"));
  const CircleFunction f = circle_function_from_json(parse_json_arg(cfg.f2d, "f2d"));
  const double F0 = planar_F(f, K0), F1 = planar_F(f, K1), Fs = planar_F(f, planar_sum(K0, K1));
  const double res = std::abs(Fs - F0 - F1);
  ctx.tolerances["additivity"] = 1e-6;
  ctx.write_json("planar.json", {{"F_K0", F0},
                                 {"F_K1", F1},
                                 {"F_sum", Fs},
                                 {"residual", res},
                                 {"perimeter_K0", planar_perimeter(K0)},
                                 {"perimeter_K1", planar_perimeter(K1)},
                                 {"area_K0", planar_area(K0)},
                                 {"area_K1", planar_area(K1)}});
  ctx.log << "F(K0)=" << F0 << " F(K1)=" << F1 << " F(K0+K1)=" << Fs << " residual " << res << "\n";
  return res < 1e-6 ? 0 : kExitNumericalFailure;
}

}  // namespace
}  // namespace sphbm
