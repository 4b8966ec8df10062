#include "sphbm/spherical_function.hpp"

#include <cmath>

#include "sphbm/kernels.hpp"

namespace sphbm {

namespace {

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

nlohmann::json mat_json(const Mat3& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

}  // namespace

const char* to_string(Smoothness s) {
  switch (s) {
    case Smoothness::C0: return "C0";
    case Smoothness::C2: return "C2";
    case Smoothness::Cinf: return "Cinf";
  }
  return "?";
}

SphericalFunction::SphericalFunction(Eval eval, Smoothness smoothness, std::string label, nlohmann::json spec,
                                     double feature_scale)
    : impl_(std::make_shared<Impl>(Impl{std::move(eval), smoothness, std::move(label), std::move(spec),
                                        feature_scale, std::nullopt, nullptr})) {
  if (!impl_->eval) throw InvalidArgument("SphericalFunction: empty callable");
  if (!(feature_scale > 0.0)) throw InvalidArgument("SphericalFunction: feature scale must be positive");
}

SphericalFunction SphericalFunction::with_support(SupportPatch patch) const {
  SphericalFunction out = *this;
  auto impl = std::make_shared<Impl>(*impl_);
  impl->support = std::move(patch);
  out.impl_ = std::move(impl);
  return out;
}

SphericalFunction SphericalFunction::with_label(std::string label) const {
  SphericalFunction out = *this;
  auto impl = std::make_shared<Impl>(*impl_);
  impl->label = std::move(label);
  out.impl_ = std::move(impl);
  return out;
}

SphericalFunction SphericalFunction::with_jet(JetFn jet) const {
  SphericalFunction out = *this;
  auto impl = std::make_shared<Impl>(*impl_);
  impl->jet = std::move(jet);
  out.impl_ = std::move(impl);
  return out;
}

SphericalFunction constant(double c) {
  return {[c](const Vec3&) { return c; }, Smoothness::Cinf, "constant", {{"type", "constant"}, {"c", c}}};
}

SphericalFunction linear(const Vec3& a) {
  return {[a](const Vec3& u) { return a.dot(u); }, Smoothness::Cinf, "linear", {{"type", "linear"}, {"a", vec_json(a)}}};
}

SphericalFunction ellipsoid(const Mat3& A) {
  const Mat3 S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> es(S);
  if (es.eigenvalues().minCoeff() <= 0.0) throw InvalidArgument("ellipsoid: matrix must be positive definite");
  return {[S](const Vec3& u) { return std::sqrt(u.dot(S * u)); }, Smoothness::Cinf, "ellipsoid",
          {{"type", "ellipsoid"}, {"A", mat_json(S)}}};
}

SphericalFunction ellipsoid_axes(const Vec3& semi_axes) {
  if (semi_axes.minCoeff() <= 0.0) throw InvalidArgument("ellipsoid: semi-axes must be positive");
  Mat3 A = Mat3::Zero();
  for (int i = 0; i < 3; ++i) A(i, i) = semi_axes[i] * semi_axes[i];
  return ellipsoid(A);
}

SphericalFunction quadratic(double c, const Mat3& M) {
  const Mat3 S = 0.5 * (M + M.transpose());
  return {[c, S](const Vec3& u) { return c + u.dot(S * u); }, Smoothness::Cinf, "quadratic",
          {{"type", "quadratic"}, {"c", c}, {"M", mat_json(S)}}};
}

SphericalFunction zonal(const Vec3& axis, std::vector<double> coeffs) {
  if (coeffs.empty()) throw InvalidArgument("zonal: need at least one coefficient");
  const Vec3 a = axis.normalized();
  nlohmann::json spec = {{"type", "zonal"}, {"axis", vec_json(a)}, {"coeffs", coeffs}};
  return {[a, coeffs = std::move(coeffs)](const Vec3& u) {
            const double z = a.dot(u);
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
            return acc;
          },
          Smoothness::Cinf, "zonal", std::move(spec)};
}

SphericalFunction abs_coordinate(int index) {
  if (index < 0 || index > 2) throw InvalidArgument("abs_coordinate: index must be 0, 1 or 2");
  return {[index](const Vec3& u) { return std::abs(u[index]); }, Smoothness::C0, "abs_coordinate",
          {{"type", "abs_coordinate"}, {"index", index}}};
}

SphericalFunction exp_linear(const Vec3& w, double scale) {
  return {[w, scale](const Vec3& u) { return scale * std::exp(w.dot(u)); }, Smoothness::Cinf, "exp_linear",
          {{"type", "exp"}, {"w", vec_json(w)}, {"scale", scale}}};
}

SphericalFunction sum(std::vector<std::pair<double, SphericalFunction>> terms) {
  if (terms.empty()) throw InvalidArgument("sum: need at least one term");
  Smoothness smooth = Smoothness::Cinf;
  double scale = terms.front().second.feature_scale();
  bool serializable = true;
  nlohmann::json jt = nlohmann::json::array();
  for (const auto& [w, f] : terms) {
    if (static_cast<int>(f.smoothness()) < static_cast<int>(smooth)) smooth = f.smoothness();
    scale = std::min(scale, f.feature_scale());
    if (f.spec().is_null()) serializable = false;
    jt.push_back({{"weight", w}, {"function", f.spec()}});
  }
  nlohmann::json spec = serializable ? nlohmann::json{{"type", "sum"}, {"terms", jt}} : nlohmann::json(nullptr);

  std::optional<SupportPatch> patch;
  bool all_supported = true;
  for (const auto& t : terms) {
    const auto& s = t.second.support();
    if (!s) {
      all_supported = false;
      break;
    }
    if (!patch) patch = s;
    else if ((patch->center - s->center).norm() > 0.0 || patch->radius != s->radius) all_supported = false;
  }

  SphericalFunction out(
      [terms](const Vec3& u) {
        double acc = 0.0;
        for (const auto& [w, f] : terms) acc += w * f(u);
        return acc;
      },
      smooth, "sum", std::move(spec), scale);
  if (all_supported && patch) out = out.with_support(*patch);
  bool all_jets = true;
  for (const auto& t : terms) all_jets = all_jets && static_cast<bool>(t.second.jet());
  if (all_jets) {
    out = out.with_jet([terms](const Vec3& u) {
      AmbientJet acc;
      for (const auto& [w, f] : terms) {
        const AmbientJet j = f.jet()(u);
        acc.value += w * j.value;
        acc.grad += w * j.grad;
        acc.q += w * j.q;
      }
      return acc;
    });
  }
  return out;
}

SphericalFunction rotate_function(const SphericalFunction& f, const Mat3& rho) {
  if ((rho.transpose() * rho - Mat3::Identity()).norm() > 1e-10 || std::abs(rho.determinant() - 1.0) > 1e-10)
    throw InvalidArgument("rotate_function: matrix is not a proper rotation");
  const Mat3 inv = rho.transpose();
  nlohmann::json spec = f.spec().is_null() ? nlohmann::json(nullptr)
                                           : nlohmann::json{{"type", "rotated"}, {"rho", mat_json(rho)}, {"function", f.spec()}};
  SphericalFunction out([f, inv](const Vec3& x) { return f(inv * x); }, f.smoothness(), "rotated(" + f.label() + ")",
                        std::move(spec), f.feature_scale());
  if (const auto& s = f.support()) {
    SupportPatch p;
    p.center = rho * s->center;
    p.radius = s->radius;
    p.rule = [rule = s->rule, rho](int level) {
      Quadrature q = rule(level);
      for (auto& n : q.nodes) n = (rho * n).normalized();
      return q;
    };
    out = out.with_support(std::move(p));
  }
  if (f.jet()) {
    out = out.with_jet([jf = f.jet(), rho, inv](const Vec3& x) {
      AmbientJet j = jf(inv * x);
      j.grad = rho * j.grad;
      j.q = rho * j.q * inv;
      return j;
    });
  }
  return out;
}

SphericalFunction nodal(std::vector<Vec3> nodes, std::vector<double> values) {
  if (nodes.empty() || nodes.size() != values.size()) throw InvalidArgument("nodal: nodes and values must match and be non-empty");
  // kernel radius ~ three mean node spacings (chordal)
  const double spacing = std::sqrt(4.0 * 3.141592653589793 / static_cast<double>(nodes.size()));
  const double radius = std::min(2.0, 3.0 * spacing);
  nlohmann::json jn = nlohmann::json::array();
  for (const auto& n : nodes) jn.push_back(vec_json(n));
  nlohmann::json spec = {{"type", "nodal"}, {"nodes", jn}, {"values", values}};
  auto data = std::make_shared<std::pair<std::vector<Vec3>, std::vector<double>>>(std::move(nodes), std::move(values));
  return {[data, radius](const Vec3& u) {
            const auto& [ns, vs] = *data;
            double num = 0.0, den = 0.0, best = 1e300, nearest = 0.0;
            const double r2 = radius * radius;
            for (std::size_t i = 0; i < ns.size(); ++i) {
              const double d2 = (ns[i] - u).squaredNorm();
              if (d2 < best) {
                best = d2;
                nearest = vs[i];
              }
              if (d2 < r2) {
                const double t = 1.0 - d2 / r2;
                const double w = t * t * t * t;
                num += w * vs[i];
                den += w;
              }
            }
            return den > 0.0 ? num / den : nearest;
          },
          Smoothness::C2, "nodal", std::move(spec), spacing};
}

double integrate(const SphericalFunction& f, const Quadrature& rule) {
  const std::vector<double> v = map_nodes(rule.nodes, [&f](const Vec3& u) { return f(u); });
  return weighted_sum(rule.weights, v);
}

double integrate_sphere(const SphericalFunction& f, const SphereGrid& grid) { return integrate(f, grid.rule); }

}  // namespace sphbm
