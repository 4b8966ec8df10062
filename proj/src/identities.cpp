#include "sphbm/identities.hpp"

namespace sphbm {

namespace {

void require_c2(const SphericalFunction& f, const char* who) {
  if (f.smoothness() < Smoothness::C2)
    throw InvalidArgument(std::string(who) + ": '" + f.label() + "' is not C2 (smoothness " + to_string(f.smoothness()) + ")");
}

SymMatrix2 hess_part(const LocalJet& j) { return j.q - SymMatrix2::identity() * j.value; }

}  // namespace

Quadrature integration_rule(const SphericalFunction& phi, const SphereGrid& grid) {
  if (const auto& s = phi.support(); s && s->rule) return s->rule(grid.level);
  return grid.rule;
}

std::vector<SphericalFunction> cheng_yau_battery() {
  Mat3 M;
  M << 0.3, 0.2, 0.0, 0.2, -0.1, 0.4, 0.0, 0.4, 0.5;
  return {
      linear(Vec3(0.2, -0.4, 0.7)),
      quadratic(0.0, M),
      zonal(Vec3(1.0, 2.0, 2.0) / 3.0, {0.0, 0.5, 0.0, 1.0}),
      exp_linear(Vec3(0.4, -0.3, 0.5), 1.0),
      ellipsoid_axes(Vec3(1.0, 2.0, 3.0)),
  };
}

double cheng_yau_residual(const SphericalFunction& h, const SphereGrid& grid, const FdOptions& opts) {
  require_c2(h, "cheng_yau_residual");
  const auto& rule = grid.rule;
  const auto jh = jet_field(h, rule, opts);
  double worst = 0.0;
  for (const auto& psi : cheng_yau_battery()) {
    const auto jp = jet_field(psi, rule, opts);
    std::vector<double> v(rule.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = contract(cofactor(jh[i].q), hess_part(jp[i]));
    worst = std::max(worst, std::abs(weighted_sum(rule.weights, v)));
  }
  return worst;
}

PartsIdentity parts_identity(const SphericalFunction& h, const SphericalFunction& psi, const SphericalFunction& phi,
                             const SphereGrid& grid, const FdOptions& opts) {
  require_c2(h, "parts_identity");
  require_c2(psi, "parts_identity");
  require_c2(phi, "parts_identity");
  const auto& rule = grid.rule;
  const auto jh = jet_field(h, rule, opts);
  const auto js = jet_field(psi, rule, opts);
  const auto jf = jet_field(phi, rule, opts);
  std::vector<double> a(rule.size()), b(rule.size()), c(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const SymMatrix2 C = cofactor(jh[i].q);
    a[i] = js[i].value * contract(C, hess_part(jf[i]));
    b[i] = -js[i].grad.dot(C.apply(jf[i].grad));
    c[i] = jf[i].value * contract(C, hess_part(js[i]));
  }
  PartsIdentity out;
  out.first = weighted_sum(rule.weights, a);
  out.second = weighted_sum(rule.weights, b);
  out.third = weighted_sum(rule.weights, c);
  out.r1 = std::abs(out.first - out.second);
  out.r2 = std::abs(out.first - out.third);
  return out;
}

SecondVariationSides second_variation_sides(const SphericalFunction& f, const SphericalFunction& phi,
                                            const Quadrature& rule, const FdOptions& opts) {
  require_c2(f, "second_variation_identity");
  require_c2(phi, "second_variation_identity");
  const auto jf = jet_field(f, rule, opts);
  const auto jp = jet_field(phi, rule, opts);
  std::vector<double> l(rule.size()), r(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    l[i] = 2.0 * jf[i].value * jp[i].q.det();
    r[i] = jp[i].value * jp[i].value * jf[i].q.trace() - cofactor(jf[i].q).quad(jp[i].grad);
  }
  return {weighted_sum(rule.weights, l), weighted_sum(rule.weights, r)};
}

double second_variation_identity_residual(const SphericalFunction& f, const SphericalFunction& phi,
                                          const SphereGrid& grid, const FdOptions& opts) {
  return second_variation_sides(f, phi, integration_rule(phi, grid), opts).residual();
}

}  // namespace sphbm
