#include "sphbm/planar.hpp"

#include <algorithm>
#include <map>

#include <cmath>

#include "sphbm/kernels.hpp"
#include "sphbm/random.hpp"

namespace sphbm {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double fourier_sum(double c0, const std::vector<double>& a, const std::vector<double>& b, double phi, bool second) {
  double acc = second ? 0.0 : c0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    const double n = static_cast<double>(k + 1);
    const double ak = k < a.size() ? a[k] : 0.0;
    const double bk = k < b.size() ? b[k] : 0.0;
    const double term = ak * std::cos(n * phi) + bk * std::sin(n * phi);
    acc += second ? -n * n * term : term;
  }
  return acc;
}

// Periodic trapezoid sum of g over [0, 2 pi).
double trapezoid(const std::function<double(double)>& g, int nodes) {
  if (nodes < 8) throw InvalidArgument("planar quadrature needs at least 8 nodes");
  std::vector<double> v(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) v[i] = g(kTwoPi * i / nodes);
  return ordered_sum(v) * kTwoPi / nodes;
}

}  // namespace

PlanarBody::PlanarBody(Fn h, Fn h_dd, std::string label, nlohmann::json spec)
    : h_(std::move(h)), hdd_(std::move(h_dd)), label_(std::move(label)), spec_(std::move(spec)) {
  if (!h_ || !hdd_) throw InvalidArgument("PlanarBody: empty callable");
}

double PlanarBody::homogeneous(double x, double y) const {
  const double r = std::hypot(x, y);
  if (r == 0.0) return 0.0;
  return r * h_(std::atan2(y, x));
}

PlanarBody planar_disk(double radius, double cx, double cy) {
  if (!(radius >= 0.0)) throw InvalidArgument("planar_disk: radius must be non-negative");
  return {[=](double p) { return radius + cx * std::cos(p) + cy * std::sin(p); },
          [=](double p) { return -cx * std::cos(p) - cy * std::sin(p); }, "disk",
          {{"type", "disk"}, {"radius", radius}, {"center", {cx, cy}}}};
}

PlanarBody planar_ellipse(double a, double b, double rotation, double cx, double cy) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("planar_ellipse: semi-axes must be positive");
  const double m = 0.5 * (a * a + b * b), d = 0.5 * (a * a - b * b);
  auto g = [=](double p) { return m + d * std::cos(2.0 * (p - rotation)); };
  return {[=](double p) { return std::sqrt(g(p)) + cx * std::cos(p) + cy * std::sin(p); },
          [=](double p) {
            const double gv = g(p);
            const double g1 = -2.0 * d * std::sin(2.0 * (p - rotation));
            const double g2 = -4.0 * d * std::cos(2.0 * (p - rotation));
            return g2 / (2.0 * std::sqrt(gv)) - g1 * g1 / (4.0 * gv * std::sqrt(gv)) - cx * std::cos(p) - cy * std::sin(p);
          },
          "ellipse",
          {{"type", "ellipse"}, {"a", a}, {"b", b}, {"rotation", rotation}, {"center", {cx, cy}}}};
}

PlanarBody planar_point(double px, double py) {
  return {[=](double p) { return px * std::cos(p) + py * std::sin(p); },
          [=](double p) { return -px * std::cos(p) - py * std::sin(p); }, "point", {{"type", "point"}, {"p", {px, py}}}};
}

PlanarBody planar_fourier(double c0, std::vector<double> a, std::vector<double> b) {
  for (int i = 0; i < 4096; ++i) {
    const double p = kTwoPi * i / 4096;
    if (fourier_sum(c0, a, b, p, false) + fourier_sum(c0, a, b, p, true) <= 0.0)
      throw InvalidArgument("planar_fourier: h + h'' is not positive, not a smooth convex body");
  }
  nlohmann::json spec = {{"type", "fourier"}, {"c0", c0}, {"a", a}, {"b", b}};
  return {[=](double p) { return fourier_sum(c0, a, b, p, false); },
          [=](double p) { return fourier_sum(c0, a, b, p, true); }, "fourier", std::move(spec)};
}

PlanarBody planar_sum(const PlanarBody& K0, const PlanarBody& K1) {
  return {[=](double p) { return K0.support(p) + K1.support(p); },
          [=](double p) { return K0.support_dd(p) + K1.support_dd(p); }, K0.label() + "+" + K1.label(),
          {{"type", "sum"}, {"bodies", {K0.spec(), K1.spec()}}}};
}

PlanarBody planar_scale(const PlanarBody& K, double s) {
  if (!(s >= 0.0)) throw InvalidArgument("planar_scale: factor must be non-negative");
  return {[=](double p) { return s * K.support(p); }, [=](double p) { return s * K.support_dd(p); },
          "scaled(" + K.label() + ")", {{"type", "scaled"}, {"s", s}, {"body", K.spec()}}};
}

namespace {

void only_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw InvalidArgument(std::string(what) + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw InvalidArgument(std::string(what) + ": unknown key '" + k + "'");
  }
}

}  // namespace

PlanarBody planar_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InvalidArgument("planar body spec must be a JSON object");
    const std::string type = j.at("type").get<std::string>();
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"disk", {"radius", "center"}}, {"ellipse", {"a", "b", "rotation", "center"}}, {"point", {"p"}},
        {"fourier", {"c0", "a", "b"}},  {"sum", {"bodies"}},                           {"scaled", {"body", "s"}}};
    if (auto it = keys.find(type); it != keys.end())
      for (const auto& [k, v] : j.items())
        if (k != "type" && std::find(it->second.begin(), it->second.end(), k) == it->second.end())
          throw InvalidArgument("planar body spec: key '" + k + "' does not apply to type " + type);
    auto center = [&](double& cx, double& cy) {
      cx = cy = 0.0;
      if (j.contains("center")) {
        cx = j.at("center")[0].get<double>();
        cy = j.at("center")[1].get<double>();
      }
    };
    double cx, cy;
    if (type == "disk") {
      center(cx, cy);
      return planar_disk(j.value("radius", 1.0), cx, cy);
    }
    if (type == "ellipse") {
      center(cx, cy);
      return planar_ellipse(j.at("a").get<double>(), j.at("b").get<double>(), j.value("rotation", 0.0), cx, cy);
    }
    if (type == "point") return planar_point(j.at("p")[0].get<double>(), j.at("p")[1].get<double>());
    if (type == "fourier")
      return planar_fourier(j.at("c0").get<double>(), j.value("a", std::vector<double>{}),
                            j.value("b", std::vector<double>{}));
    if (type == "sum") {
      const auto& bs = j.at("bodies");
      if (bs.empty()) throw InvalidArgument("planar sum needs at least one body");
      PlanarBody acc = planar_from_json(bs[0]);
      for (std::size_t i = 1; i < bs.size(); ++i) acc = planar_sum(acc, planar_from_json(bs[i]));
      return acc;
    }
    if (type == "scaled") return planar_scale(planar_from_json(j.at("body")), j.at("s").get<double>());
    throw InvalidArgument("unknown planar body type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("planar body spec: ") + e.what());
  }
}

CircleFunction circle_constant(double c) {
  return {[c](double) { return c; }, {{"type", "constant"}, {"c", c}}};
}

CircleFunction circle_fourier(double c0, std::vector<double> a, std::vector<double> b) {
  nlohmann::json spec = {{"type", "fourier"}, {"c0", c0}, {"a", a}, {"b", b}};
  return {[=](double p) { return fourier_sum(c0, a, b, p, false); }, std::move(spec)};
}

CircleFunction circle_function_from_json(const nlohmann::json& j) {
  try {
    only_keys(j, {"type", "c", "c0", "a", "b"}, "circle function spec");
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return circle_constant(j.value("c", 1.0));
    if (type == "fourier")
      return circle_fourier(j.at("c0").get<double>(), j.value("a", std::vector<double>{}),
                            j.value("b", std::vector<double>{}));
    throw InvalidArgument("unknown circle function type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("circle function spec: ") + e.what());
  }
}

double planar_F(const CircleFunction& f, const PlanarBody& K, int nodes) {
  return trapezoid([&](double p) { return f.eval(p) * K.curvature_radius(p); }, nodes);
}

double planar_perimeter(const PlanarBody& K, int nodes) { return planar_F(circle_constant(1.0), K, nodes); }

double planar_area(const PlanarBody& K, int nodes) {
  return 0.5 * trapezoid([&](double p) { return K.support(p) * K.curvature_radius(p); }, nodes);
}

double planar_additivity_residual(const PlanarBody& K0, const PlanarBody& K1, const CircleFunction& f, int nodes) {
  return std::abs(planar_F(f, planar_sum(K0, K1), nodes) - planar_F(f, K0, nodes) - planar_F(f, K1, nodes));
}

bool planar_convexity_check(const PlanarBody& K, int samples, unsigned long long seed) {
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const double r0 = rng.uniform(0.5, 1.5), r1 = rng.uniform(0.5, 1.5);
    const double a0 = rng.uniform(0.0, kTwoPi), a1 = a0 + rng.uniform(-2.5, 2.5);
    const double x0 = r0 * std::cos(a0), y0 = r0 * std::sin(a0), x1 = r1 * std::cos(a1), y1 = r1 * std::sin(a1);
    const double mid = K.homogeneous(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    if (mid > 0.5 * K.homogeneous(x0, y0) + 0.5 * K.homogeneous(x1, y1) + 1e-9) return false;
  }
  return true;
}

}  // namespace sphbm
