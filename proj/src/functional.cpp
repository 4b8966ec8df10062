#include "sphbm/functional.hpp"

#include <cmath>

#include "sphbm/kernels.hpp"

namespace sphbm {

namespace {

struct ConeBallParts {
  const ConeBody* cone = nullptr;
  const BallBody* ball = nullptr;
  const SmoothBody* smooth = nullptr;
};

// Decomposes a canonical combination into optional cone, ball and smooth parts; nullopt for anything else.
std::optional<ConeBallParts> cone_ball_parts(const ConvexBody& K) {
  const auto* c = K.as<ComboBody>();
  if (!c) return std::nullopt;
  ConeBallParts p;
  for (std::size_t i = 0; i < c->parts.size(); ++i) {
    if (c->weights[i] != 1.0) return std::nullopt;
    const ConvexBody& part = *c->parts[i];
    if (part.as<ConeBody>() && !p.cone) p.cone = part.as<ConeBody>();
    else if (part.as<BallBody>() && !p.ball) p.ball = part.as<BallBody>();
    else if (part.as<SmoothBody>() && !p.smooth) p.smooth = part.as<SmoothBody>();
    else return std::nullopt;
  }
  return p;
}

// Checks that the patch sits strictly inside the apex region of the cone, where the cone support vanishes.
void require_in_apex_region(const ConeBody& k, const SupportPatch& patch) {
  const double limit = M_PI / 2.0 - k.theta;
  const double ang = std::acos(std::clamp(patch.center.dot(-k.P), -1.0, 1.0));
  if (ang + patch.radius >= limit - 1e-9)
    throw Unsupported("evaluate_F: smooth part of a cone combination must live inside the cone's apex region");
}

const SupportPatch& require_patch(const SphericalFunction& h) {
  const auto& s = h.support();
  if (!s || !s->rule) throw Unsupported("evaluate_F: smooth part of a combination needs a compact support patch");
  return *s;
}

double fd1(const double* F, double h) { return (-F[4] + 8.0 * F[3] - 8.0 * F[1] + F[0]) / (12.0 * h); }
double fd2(const double* F, double h) {
  return (-F[4] + 16.0 * F[3] - 30.0 * F[2] + 16.0 * F[1] - F[0]) / (12.0 * h * h);
}

}  // namespace

double evaluate_F(const SphericalFunction& f, const ConvexBody& K, const SphereGrid& grid, const FdOptions& opts) {
  const auto parts = cone_ball_parts(K);
  if (!parts || !parts->smooth) return area_measure(K, grid, opts).integrate(f);
  if (!parts->ball || !(parts->ball->r > 0.0))
    throw Unsupported("evaluate_F: a localized smooth part needs a positive ball summand");
  const double eta = parts->ball->r;
  const SupportPatch& patch = require_patch(parts->smooth->h);
  double base = 0.0;
  if (const ConeBody* k = parts->cone) {
    require_in_apex_region(*k, patch);
    base = cone_ball_measure(k->P, k->theta, k->scale, eta, grid.level).integrate(f);
  } else {
    base = eta * eta * integrate_sphere(f, grid);
  }
  const Quadrature rule = patch.rule(grid.level);
  const auto jets = jet_field(parts->smooth->h, rule, opts);
  std::vector<double> corr(rule.size());
  for_each_index(rule.size(), [&](std::size_t i) {
    const SymMatrix2 q = SymMatrix2::identity() * eta + jets[i].q;
    if (q.eigenvalues()[0] < 0.0) throw NotSupportFunction("evaluate_F: perturbed cone combination is not convex");
    corr[i] = f(rule.nodes[i]) * (q.det() - eta * eta);
  });
  return base + weighted_sum(rule.weights, corr);
}

double mixed_volume(const ConvexBody& K, const SphericalFunction& h_L, const SphereGrid& grid, const FdOptions& opts) {
  const ConvexityResult c = support_convexity_oracle(h_L, 4000);
  if (!c.convex) throw NotSupportFunction("mixed_volume: '" + h_L.label() + "' is not a support function");
  return evaluate_F(h_L, K, grid, opts) / 3.0;
}

const char* to_string(BMForm f) {
  switch (f) {
    case BMForm::concave_root: return "concave_root";
    case BMForm::min_form: return "min";
    case BMForm::negative_root: return "negative_root";
  }
  return "?";
}

BMForm bm_form_from_string(const std::string& s) {
  if (s == "concave_root" || s == "root") return BMForm::concave_root;
  if (s == "min" || s == "min_form") return BMForm::min_form;
  if (s == "negative_root" || s == "case2") return BMForm::negative_root;
  throw InvalidArgument("unknown BM form '" + s + "' (expected concave_root, min or negative_root)");
}

nlohmann::json BMReport::to_json() const {
  return {{"form", to_string(form)}, {"t", t},     {"F0", F0},         {"F1", F1}, {"Ft", Ft},
          {"lhs", lhs},              {"rhs", rhs}, {"margin", margin}, {"bodies", bodies}};
}

BMReport bm_report_from_values(BMForm form, double t, double F0, double F1, double Ft) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("bm_check: t must lie in [0, 1]");
  BMReport r;
  r.form = form;
  r.t = t;
  r.F0 = F0;
  r.F1 = F1;
  r.Ft = Ft;
  switch (form) {
    case BMForm::concave_root:
      if (F0 < 0.0 || F1 < 0.0 || Ft < 0.0)
        throw Unsupported("bm_check: negative F under the concave_root form; use the negative_root (case 2) form");
      r.lhs = std::sqrt(Ft);
      r.rhs = (1.0 - t) * std::sqrt(F0) + t * std::sqrt(F1);
      break;
    case BMForm::min_form:
      r.lhs = Ft;
      r.rhs = std::min(F0, F1);
      break;
    case BMForm::negative_root:
      if (F0 > 0.0 || F1 > 0.0 || Ft > 0.0) throw Unsupported("bm_check: negative_root form needs F <= 0 throughout");
      r.lhs = (1.0 - t) * std::sqrt(-F0) + t * std::sqrt(-F1);
      r.rhs = std::sqrt(-Ft);
      break;
  }
  r.margin = r.lhs - r.rhs;
  return r;
}

BMReport bm_check(const SphericalFunction& f, const ConvexBody& K0, const ConvexBody& K1, double t, BMForm form,
                  const SphereGrid& grid, const FdOptions& opts) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("bm_check: t must lie in [0, 1]");
  const ConvexBody Kt = minkowski_combine({{1.0 - t, K0}, {t, K1}});
  BMReport r = bm_report_from_values(form, t, evaluate_F(f, K0, grid, opts), evaluate_F(f, K1, grid, opts),
                                     evaluate_F(f, Kt, grid, opts));
  r.bodies = {K0.to_json(), K1.to_json()};
  return r;
}

RescaledInstance case1_rescale(const ConvexBody& K0, const ConvexBody& K1, double t, double F0, double F1) {
  if (F0 == 0.0 || F1 == 0.0) throw InvalidArgument("case1_rescale: F must not vanish at the end points");
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("case1_rescale: t must lie in [0, 1]");
  const double r0 = std::sqrt(std::abs(F0)), r1 = std::sqrt(std::abs(F1));
  const double tb = t * r1 / ((1.0 - t) * r0 + t * r1);
  return {minkowski_combine({{1.0 / r0, K0}}), minkowski_combine({{1.0 / r1, K1}}), tb, 1.0 / r0, 1.0 / r1};
}

nlohmann::json VariationProfile::to_json() const {
  return {{"F0", F0},
          {"F1", F1},
          {"F2", F2},
          {"fd_F1", fd_F1},
          {"fd_F2", fd_F2},
          {"eps", std::isfinite(eps) ? nlohmann::json(eps) : nlohmann::json("unbounded")},
          {"fd_step", fd_step},
          {"independent_fd", independent_fd},
          {"tolerance_F1", tolerance(F1)},
          {"tolerance_F2", tolerance(F2)},
          {"consistent", consistent()}};
}

ConvexBody perturbed_body(const ConvexBody& K, const SphericalFunction& phi, double s) {
  return minkowski_combine({{1.0, K}, {1.0, smooth_body(sum({{s, phi}}))}});
}

VariationProfile variation_profile(const SphericalFunction& f, const SphericalFunction& h, const SphericalFunction& phi,
                                   const SphereGrid& grid, const FdOptions& opts) {
  return variation_profile(f, smooth_body(h), phi, grid, opts);
}

VariationProfile variation_profile(const SphericalFunction& f, const ConvexBody& K, const SphericalFunction& phi,
                                   const SphereGrid& grid, const FdOptions& opts) {
  const bool patched = phi.support() && phi.support()->rule;
  const Quadrature rule = patched ? phi.support()->rule(grid.level) : grid.rule;

  // Q of the unperturbed body on the rule
  std::vector<SymMatrix2> qb(rule.size());
  if (const auto* s = K.as<SmoothBody>()) {
    const auto jets = jet_field(s->h, rule, opts);
    for (std::size_t i = 0; i < rule.size(); ++i) qb[i] = jets[i].q;
  } else if (const auto* b = K.as<BallBody>()) {
    std::fill(qb.begin(), qb.end(), SymMatrix2::identity() * b->r);
  } else {
    const auto parts = cone_ball_parts(K);
    if (!parts || !parts->cone || !parts->ball || parts->smooth || !patched)
      throw Unsupported("variation_profile: base body must be smooth, a ball, or cone + ball with a localized phi");
    require_in_apex_region(*parts->cone, *phi.support());
    std::fill(qb.begin(), qb.end(), SymMatrix2::identity() * parts->ball->r);
  }

  const auto jp = jet_field(phi, rule, opts);
  VariationProfile vp;
  vp.F0 = evaluate_F(f, K, grid, opts);
  std::vector<double> fv = map_nodes(rule.nodes, [&f](const Vec3& u) { return f(u); });
  std::vector<double> a(rule.size()), b(rule.size());
  double gamma = std::numeric_limits<double>::infinity(), M = 0.0, phi_max = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    a[i] = fv[i] * contract(cofactor(qb[i]), jp[i].q);
    b[i] = 2.0 * fv[i] * jp[i].q.det();
    const double n = jp[i].q.spectral_norm();
    M = std::max(M, n);
    phi_max = std::max(phi_max, std::abs(jp[i].value));
    if (n != 0.0 || jp[i].value != 0.0) gamma = std::min(gamma, qb[i].eigenvalues()[0]);
  }
  vp.F1 = weighted_sum(rule.weights, a);
  vp.F2 = weighted_sum(rule.weights, b);

  const bool unbounded = M <= 1e-8 * (1.0 + phi_max);
  if (!unbounded && !(gamma > 0.0))
    throw NotSupportFunction("variation_profile: Q(h) is not positive definite where phi acts");
  vp.eps = unbounded ? std::numeric_limits<double>::infinity() : gamma / M;
  vp.fd_step = unbounded ? 0.25 : vp.eps / 4.0;

  double F[5];
  const double hs = vp.fd_step;
  if (!patched || !K.as<SmoothBody>()) {
    vp.independent_fd = true;
    for (int k = -2; k <= 2; ++k) {
      if (k == 0) {
        F[2] = vp.F0;
        continue;
      }
      F[k + 2] = evaluate_F(f, perturbed_body(K, phi, k * hs), grid, opts);
    }
  } else {
    // the grid cannot resolve a localized phi; perturb the density on its own rule
    for (int k = -2; k <= 2; ++k) {
      std::vector<double> d(rule.size());
      for (std::size_t i = 0; i < rule.size(); ++i) d[i] = fv[i] * ((qb[i] + jp[i].q * (k * hs)).det() - qb[i].det());
      F[k + 2] = vp.F0 + weighted_sum(rule.weights, d);
    }
  }
  vp.fd_F1 = fd1(F, hs);
  vp.fd_F2 = fd2(F, hs);
  return vp;
}

}  // namespace sphbm
