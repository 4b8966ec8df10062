#include "sphbm/detector.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "sphbm/identities.hpp"
#include "sphbm/kernels.hpp"

namespace sphbm {

namespace {

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

SphericalFunction make_sawtooth(const Vec3& u0, const Vec3& ambient_dir, double eps, double r, double smoothing) {
  SawtoothParams p;
  p.center = u0;
  p.direction = ambient_dir;
  p.eps = eps;
  p.r = r;
  p.smoothing = smoothing;
  return sawtooth_function(p);
}

Vec3 frame_direction(const Vec3& u0, const Vec2& direction) {
  if (!is_unit(u0, 1e-9)) throw InvalidArgument("sawtooth: u0 must be a unit vector");
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw InvalidArgument("sawtooth: direction must be a unit 2-vector");
  return tangent_basis(u0).to_ambient(direction.x(), direction.y());
}

// Support radius of the smoothed sawtooth of a ladder entry.
double sawtooth_radius(const SawtoothLadderEntry& e) {
  return std::asin(std::sqrt(2.0) * (e.r + kSmoothingFraction * e.eps));
}

}  // namespace

nlohmann::json DetectionReport::to_json() const {
  return {{"decision", decision == Decision::support ? "support" : "not_support"},
          {"lambda_min", lambda_min},
          {"argmin_node", vec_json(argmin_node)},
          {"eigvec", {eigvec.x(), eigvec.y()}},
          {"sawtooth_direction", vec_json(sawtooth_direction)},
          {"tolerance", tolerance},
          {"f_sup", f_sup},
          {"nodes", nodes}};
}

double psd_tolerance(double f_sup) { return 1e-6 * (1.0 + f_sup); }

DetectionReport min_q_eigen_scan(const SphericalFunction& f, const SphereGrid& grid, const FdOptions& opts) {
  if (f.smoothness() < Smoothness::C2)
    throw InvalidArgument("min_q_eigen_scan: '" + f.label() + "' is not C2; mollify it first");
  const auto jets = jet_field(f, grid.rule, opts);
  DetectionReport r;
  r.nodes = jets.size();
  std::size_t best = 0;
  double lmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < jets.size(); ++i) {
    r.f_sup = std::max(r.f_sup, std::abs(jets[i].value));
    const double l = jets[i].q.eigenvalues()[0];
    if (l < lmin) {
      lmin = l;
      best = i;
    }
  }
  r.lambda_min = lmin;
  r.argmin_node = grid.rule.nodes[best];
  const TangentFrame fr = node_frame(r.argmin_node);
  r.eigvec = jets[best].q.eigenvector(lmin);
  r.sawtooth_direction = fr.to_ambient(-r.eigvec.y(), r.eigvec.x());
  r.tolerance = psd_tolerance(r.f_sup);
  r.decision = lmin >= -r.tolerance ? Decision::support : Decision::not_support;
  return r;
}

SphericalFunction build_sawtooth_test(const Vec3& u0, const Vec2& direction, double eps, double r) {
  return make_sawtooth(u0, frame_direction(u0, direction), eps, r, 0.0);
}

SphericalFunction build_smoothed_sawtooth(const Vec3& u0, const Vec2& direction, double eps, double r, double smoothing) {
  return make_sawtooth(u0, frame_direction(u0, direction), eps, r, smoothing);
}

std::vector<SawtoothLadderEntry> sawtooth_ladder() {
  std::vector<SawtoothLadderEntry> out;
  for (double r : {0.2, 0.1})
    for (double div : {16.0, 64.0}) out.push_back({r, r / div});
  return out;
}

double sawtooth_second_variation(const SphericalFunction& f, const SphericalFunction& phi, const SphereGrid& grid,
                                 const FdOptions& opts) {
  return second_variation_sides(f, phi, integration_rule(phi, grid), opts).lhs;
}

double sawtooth_second_variation_ae(const SphericalFunction& f, const SawtoothParams& params, const SphereGrid& grid,
                                    const FdOptions& opts) {
  SawtoothParams p = params;
  p.smoothing = 0.0;
  const SawtoothField field(p);
  const Quadrature rule = field.chart_rule(grid.level);
  std::vector<double> v(rule.size());
  for_each_index(rule.size(), [&](std::size_t i) {
    const TangentFrame fr = node_frame(rule.nodes[i]);
    const LocalJet jf = local_jet(f, fr, opts);
    const AmbientJet aj = field.jet(rule.nodes[i]);
    const Vec2 g(aj.grad.dot(fr.e1), aj.grad.dot(fr.e2));
    v[i] = aj.value * aj.value * jf.q.trace() - cofactor(jf.q).quad(g);
  });
  return weighted_sum(rule.weights, v);
}

namespace {

std::optional<SecondVariation> search_ladder(const SphericalFunction& f, const DetectionReport& report,
                                             const SphereGrid& grid, const FdOptions& opts, double max_radius,
                                             double& best) {
  best = -std::numeric_limits<double>::infinity();
  for (const auto& e : sawtooth_ladder()) {
    if (sawtooth_radius(e) >= max_radius) continue;
    SphericalFunction phi = make_sawtooth(report.argmin_node, report.sawtooth_direction, e.eps, e.r,
                                          kSmoothingFraction * e.eps);
    const double v = sawtooth_second_variation(f, phi, grid, opts);
    best = std::max(best, v);
    if (v > 0.0) return SecondVariation{phi, v, e};
  }
  return std::nullopt;
}

void require_clear_negative(const DetectionReport& report) {
  if (report.decision != Decision::not_support || !(report.lambda_min < -10.0 * report.tolerance))
    throw InvalidArgument("second_variation_positive: needs a report with lambda_min < -10 * tolerance");
}

}  // namespace

SecondVariation second_variation_positive(const SphericalFunction& f, const DetectionReport& report,
                                          const SphereGrid& grid, const FdOptions& opts) {
  require_clear_negative(report);
  double best = 0.0;
  if (auto sv = search_ladder(f, report, grid, opts, M_PI / 2.0, best)) return *sv;
  throw NumericalFailure("second_variation_positive: sawtooth ladder exhausted, best value " + fmt(best) +
                         " (grid too coarse?)");
}

nlohmann::json Witness::to_json() const {
  nlohmann::json j = {{"case", case_id},
                      {"P", vec_json(P)},
                      {"Pbar", vec_json(Pbar)},
                      {"phi", phi.spec()},
                      {"sawtooth", {{"r", sawtooth.r}, {"eps", sawtooth.eps}}},
                      {"eta", eta},
                      {"s", s},
                      {"second_variation", second_variation},
                      {"profile", profile.to_json()},
                      {"base", base.to_json()},
                      {"K0", K0.to_json()},
                      {"K1", K1.to_json()},
                      {"rescale", {{"s0", scale0}, {"s1", scale1}}},
                      {"bm_instance", bm_instance.to_json()},
                      {"delta", delta},
                      {"verification",
                       {{"grid_level", verify_level},
                        {"margin", verify_margin},
                        {"second_variation", verify_second_variation},
                        {"verified", verified}}}};
  if (std::isfinite(theta)) {
    j["theta"] = theta;
    j["thetabar"] = thetabar;
  } else {
    j["theta"] = nullptr;
    j["thetabar"] = nullptr;
  }
  return j;
}

nlohmann::json ViolationResult::to_json() const {
  static const char* names[] = {"none", "witness", "inconclusive"};
  nlohmann::json j = {{"status", names[static_cast<int>(status)]}, {"report", report.to_json()}, {"log", log}};
  j["witness"] = witness ? witness->to_json() : nlohmann::json(nullptr);
  return j;
}

namespace {

struct Candidate {
  int case_id;
  ConvexBody base;
  double theta, thetabar, eta;
};

// Turns a profile whose root fails to be concave (case 1) or whose negative root fails to be convex (case 2)
// into a rescaled min-form instance with negative margin.
std::optional<Witness> assemble(const SphericalFunction& f, const Candidate& c, const SecondVariation& sv,
                                const VariationProfile& prof, const DetectionReport& report, const SphereGrid& grid,
                                const FdOptions& opts, std::vector<std::string>& log) {
  Witness w;
  w.case_id = c.case_id;
  w.P = report.argmin_node;
  w.Pbar = -report.argmin_node;
  w.theta = c.theta;
  w.thetabar = c.thetabar;
  w.phi = sv.phi;
  w.sawtooth = sv.entry;
  w.eta = c.eta;
  w.second_variation = sv.value;
  w.profile = prof;
  w.base = c.base;
  w.s = 0.9 * prof.eps;
  const ConvexBody L0 = perturbed_body(c.base, sv.phi, -w.s);
  const ConvexBody L1 = perturbed_body(c.base, sv.phi, w.s);
  const double F0 = evaluate_F(f, L0, grid, opts);
  const double F1 = evaluate_F(f, L1, grid, opts);
  if ((c.case_id == 1 && !(F0 > 0.0 && F1 > 0.0)) || (c.case_id == 2 && !(F0 < 0.0 && F1 < 0.0))) {
    log.push_back("end-point values changed sign; candidate skipped");
    return std::nullopt;
  }
  const RescaledInstance rs = case1_rescale(L0, L1, 0.5, F0, F1);
  w.K0 = rs.K0;
  w.K1 = rs.K1;
  w.scale0 = rs.s0;
  w.scale1 = rs.s1;
  w.bm_instance = bm_check(f, rs.K0, rs.K1, rs.t, BMForm::min_form, grid, opts);
  w.delta = 1e3 * DBL_EPSILON * (std::abs(w.bm_instance.F0) + std::abs(w.bm_instance.F1) + std::abs(w.bm_instance.Ft));
  log.push_back("candidate margin " + fmt(w.bm_instance.margin) + " (delta " + fmt(w.delta) + ")");
  if (!(w.bm_instance.margin < -w.delta)) return std::nullopt;

  w.verify_level = std::min(grid.level + 1, 10);
  const SphereGrid fine = build_grid(w.verify_level);
  w.verify_second_variation = sawtooth_second_variation(f, sv.phi, fine, opts);
  w.verify_margin = bm_check(f, rs.K0, rs.K1, rs.t, BMForm::min_form, fine, opts).margin;
  w.verified = w.verify_second_variation > 0.0 && w.verify_margin < -w.delta;
  log.push_back("re-check at level " + std::to_string(w.verify_level) + ": margin " + fmt(w.verify_margin) +
                ", second variation " + fmt(w.verify_second_variation));
  if (!w.verified) return std::nullopt;
  return w;
}

}  // namespace

ViolationResult find_bm_violation(const SphericalFunction& f, const SphereGrid& grid, const FdOptions& opts) {
  ViolationResult res;
  const SphereGrid scan = build_icosphere(std::min(grid.level + 1, 7));
  res.report = min_q_eigen_scan(f, scan, opts);
  const DetectionReport& rep = res.report;
  res.log.push_back("scan: lambda_min " + fmt(rep.lambda_min) + " on " + std::to_string(rep.nodes) + " nodes");
  if (rep.decision == Decision::support) {
    res.status = ViolationStatus::none;
    return res;
  }
  res.status = ViolationStatus::inconclusive;
  if (!(rep.lambda_min < -10.0 * rep.tolerance)) {
    res.log.push_back("eigenvalue too close to the tolerance for a witness");
    return res;
  }

  // sawtooth perturbations by ladder entry, computed once
  std::vector<std::optional<SecondVariation>> svs;
  for (const auto& e : sawtooth_ladder()) {
    SphericalFunction phi = make_sawtooth(rep.argmin_node, rep.sawtooth_direction, e.eps, e.r, kSmoothingFraction * e.eps);
    const double v = sawtooth_second_variation(f, phi, grid, opts);
    res.log.push_back("sawtooth r=" + fmt(e.r) + " eps=" + fmt(e.eps) + ": 2 int f det Q(phi) = " + fmt(v));
    svs.push_back(v > 0.0 ? std::optional<SecondVariation>(SecondVariation{phi, v, e}) : std::nullopt);
  }

  auto try_candidate = [&](const Candidate& c, double max_radius) -> bool {
    for (const auto& sv : svs) {
      if (!sv || sawtooth_radius(sv->entry) >= max_radius) continue;
      const VariationProfile prof = variation_profile(f, c.base, sv->phi, grid, opts);
      const double disc = 2.0 * prof.F0 * prof.F2 - prof.F1 * prof.F1;
      const bool fails = c.case_id == 1 ? (prof.F0 > 0.0 && disc > 0.0) : (prof.F0 < 0.0 && disc < 0.0);
      res.log.push_back("case " + std::to_string(c.case_id) + " eta=" + fmt(c.eta) + " thetabar=" + fmt(c.thetabar) +
                        " r=" + fmt(sv->entry.r) + ": F0=" + fmt(prof.F0) + " F1=" + fmt(prof.F1) +
                        " F2=" + fmt(prof.F2) + " 2F0F2-F1^2=" + fmt(disc));
      if (!fails) continue;
      if (auto w = assemble(f, c, *sv, prof, rep, grid, opts, res.log)) {
        res.witness = std::move(w);
        res.status = ViolationStatus::witness;
        return true;
      }
    }
    return false;
  };

  const Vec3 Pbar = -rep.argmin_node;
  std::vector<double> cone_F;
  for (double tb : kThetaBarLadder) {
    const double Fc = evaluate_F(f, cone(Pbar, tb), grid, opts);
    cone_F.push_back(Fc);
    res.log.push_back("F(C(Pbar, " + fmt(tb) + ")) = " + fmt(Fc));
    if (!(Fc > 0.0)) continue;
    for (double eta : kEtaLadder) {
      Candidate c{1, minkowski_combine({{1.0, cone(Pbar, tb)}, {eta, ball()}}), M_PI / 2.0 - tb, tb, eta};
      if (try_candidate(c, c.theta)) return res;
    }
  }

  // F negative on the family: the square root of -F must be convex
  res.log.push_back("no case-1 witness; trying negative-F bases");
  if (try_candidate({2, ball(), std::nan(""), std::nan(""), 1.0}, M_PI / 2.0)) return res;
  for (std::size_t i = 0; i < kThetaBarLadder.size(); ++i) {
    if (!(cone_F[i] < 0.0)) continue;
    const double tb = kThetaBarLadder[i];
    for (double eta : kEtaLadder) {
      Candidate c{2, minkowski_combine({{1.0, cone(Pbar, tb)}, {eta, ball()}}), M_PI / 2.0 - tb, tb, eta};
      if (try_candidate(c, c.theta)) return res;
    }
  }
  res.log.push_back("ladders exhausted");
  return res;
}

}  // namespace sphbm
