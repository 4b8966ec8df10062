#include "sphbm/sawtooth.hpp"

#include <algorithm>
#include <cmath>

namespace sphbm {

namespace {

// Convolution of |t| with the biweight kernel (15/16)(1 - t^2)^2 on [-1, 1].
double bw_p(double t) { return (5.0 + t * t * (15.0 + t * t * (-5.0 + t * t))) / 16.0; }
double bw_dp(double t) { return t * (30.0 + t * t * (-20.0 + 6.0 * t * t)) / 16.0; }
double bw_ddp(double t) {
  const double s = 1.0 - t * t;
  return 30.0 * s * s / 16.0;
}

double sgn(double y) { return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0); }

// Adds the smoothing correction of a kink at `at` with slope jump `jump`.
void smooth_kink(Profile1D& pr, double x, double at, double jump, double delta) {
  if (delta <= 0.0) return;
  const double y = x - at;
  if (std::abs(y) >= delta) return;
  const double t = y / delta;
  const double h = 0.5 * jump;
  pr.v += h * (delta * bw_p(t) - std::abs(y));
  pr.d1 += h * (bw_dp(t) - sgn(y));
  pr.d2 += h * bw_ddp(t) / delta;
}

}  // namespace

double smoothed_abs(double x, double delta) {
  if (delta <= 0.0 || std::abs(x) >= delta) return std::abs(x);
  return delta * bw_p(x / delta);
}

SawtoothField::SawtoothField(SawtoothParams p) : p_(std::move(p)) {
  if (!is_unit(p_.center, 1e-10)) throw InvalidArgument("sawtooth: center must be a unit vector");
  if (!(p_.r > 0.0) || !(p_.eps > 0.0)) throw InvalidArgument("sawtooth: eps and r must be positive");
  if (p_.eps > p_.r / 4.0 * (1.0 + 1e-12)) throw InvalidArgument("sawtooth: eps must be at most r/4");
  if (p_.smoothing < 0.0 || p_.smoothing >= p_.eps / 2.0)
    throw InvalidArgument("sawtooth: smoothing width must lie in [0, eps/2)");
  if (std::sqrt(2.0) * half_width() >= 0.9) throw InvalidArgument("sawtooth: chart out of range (r too large)");
  Vec3 d = p_.direction - p_.direction.dot(p_.center) * p_.center;
  if (d.norm() < 1e-12) throw InvalidArgument("sawtooth: direction is not tangent at the center");
  d_ = d.normalized();
  e_ = p_.center.cross(d_);
}

Profile1D SawtoothField::wave(double x) const {
  const double eps = p_.eps;
  const double t = x / eps;
  const double k = std::round(t);
  const double m = t - 2.0 * std::round(t / 2.0);
  Profile1D pr;
  pr.v = eps * (1.0 - std::abs(m));
  pr.d1 = -sgn(m);
  const bool peak = std::fmod(std::abs(k), 2.0) == 0.0;
  smooth_kink(pr, x, k * eps, peak ? -2.0 : 2.0, p_.smoothing);
  return pr;
}

Profile1D SawtoothField::cutoff(double x) const {
  const double r = p_.r;
  const double a = std::abs(x);
  Profile1D pr;
  if (a <= r / 2.0) {
    pr.v = 1.0;
  } else if (a < r) {
    pr.v = 2.0 - 2.0 * a / r;
    pr.d1 = -2.0 * sgn(x) / r;
  }
  const double dl = p_.smoothing;
  smooth_kink(pr, x, r / 2.0, -2.0 / r, dl);
  smooth_kink(pr, x, -r / 2.0, -2.0 / r, dl);
  smooth_kink(pr, x, r, 2.0 / r, dl);
  smooth_kink(pr, x, -r, 2.0 / r, dl);
  return pr;
}

void SawtoothField::chart_derivatives(double x1, double x2, double& f, double& f1, double& f2, double& f11, double& f12,
                                      double& f22) const {
  const double R = half_width();
  if (std::abs(x1) >= R || std::abs(x2) >= R) {
    f = f1 = f2 = f11 = f12 = f22 = 0.0;
    return;
  }
  const Profile1D g = wave(x1), a = cutoff(x1), b = cutoff(x2);
  const double A = p_.amplitude;
  const double ga = g.v * a.v;
  const double ga1 = g.d1 * a.v + g.v * a.d1;
  const double ga11 = g.d2 * a.v + 2.0 * g.d1 * a.d1 + g.v * a.d2;
  f = A * ga * b.v;
  f1 = A * ga1 * b.v;
  f2 = A * ga * b.d1;
  f11 = A * ga11 * b.v;
  f12 = A * ga1 * b.d1;
  f22 = A * ga * b.d2;
}

double SawtoothField::chart_value(double x1, double x2) const {
  double f, f1, f2, f11, f12, f22;
  chart_derivatives(x1, x2, f, f1, f2, f11, f12, f22);
  return f;
}

double SawtoothField::value(const Vec3& u) const {
  if (u.dot(p_.center) <= 0.0) return 0.0;
  return chart_value(u.dot(d_), u.dot(e_));
}

AmbientJet SawtoothField::jet(const Vec3& u) const {
  AmbientJet j;
  if (u.dot(p_.center) <= 0.0) return j;
  double f, f1, f2, f11, f12, f22;
  chart_derivatives(u.dot(d_), u.dot(e_), f, f1, f2, f11, f12, f22);
  const Vec3 grad = f1 * d_ + f2 * e_;
  const Mat3 hess = f11 * d_ * d_.transpose() + f12 * (d_ * e_.transpose() + e_ * d_.transpose()) + f22 * e_ * e_.transpose();
  const Mat3 P = Mat3::Identity() - u * u.transpose();
  j.value = f;
  j.grad = P * grad;
  j.q = P * hess * P + (f - grad.dot(u)) * P;
  return j;
}

std::vector<double> SawtoothField::breakpoints_x1() const {
  const double R = half_width();
  const double dl = p_.smoothing;
  std::vector<double> kinks = {p_.r / 2.0, -p_.r / 2.0, p_.r, -p_.r};
  const int kmax = static_cast<int>(std::floor(R / p_.eps));
  for (int k = -kmax; k <= kmax; ++k) kinks.push_back(k * p_.eps);
  std::vector<double> out = {-R, R};
  for (double k : kinks) {
    out.push_back(k);
    if (dl > 0.0) {
      out.push_back(k - dl);
      out.push_back(k + dl);
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double x : out) {
    if (x < -R || x > R) continue;
    if (uniq.empty() || x - uniq.back() > 1e-14) uniq.push_back(x);
  }
  return uniq;
}

std::vector<double> SawtoothField::breakpoints_x2() const {
  const double R = half_width();
  const double dl = p_.smoothing;
  std::vector<double> out = {-R, R, 0.0};
  for (double k : {p_.r / 2.0, -p_.r / 2.0, p_.r, -p_.r}) {
    out.push_back(k);
    if (dl > 0.0) {
      out.push_back(k - dl);
      out.push_back(k + dl);
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double x : out) {
    if (x < -R || x > R) continue;
    if (uniq.empty() || x - uniq.back() > 1e-14) uniq.push_back(x);
  }
  return uniq;
}

Quadrature SawtoothField::chart_rule(int level) const {
  if (level < 0 || level > 10) throw InvalidArgument("chart rule level must lie in [0, 10]");
  std::vector<double> gx, gw;
  gauss_legendre(4 + level, gx, gw);
  auto composite = [&](const std::vector<double>& bps, std::vector<double>& xs, std::vector<double>& ws) {
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      const double a = bps[i], b = bps[i + 1];
      const double c = 0.5 * (a + b), h = 0.5 * (b - a);
      for (std::size_t k = 0; k < gx.size(); ++k) {
        xs.push_back(c + h * gx[k]);
        ws.push_back(h * gw[k]);
      }
    }
  };
  std::vector<double> x1, w1, x2, w2;
  composite(breakpoints_x1(), x1, w1);
  composite(breakpoints_x2(), x2, w2);
  Quadrature q;
  q.nodes.reserve(x1.size() * x2.size());
  q.weights.reserve(x1.size() * x2.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    for (std::size_t k = 0; k < x2.size(); ++k) {
      const double rho2 = x1[i] * x1[i] + x2[k] * x2[k];
      const double z = std::sqrt(1.0 - rho2);
      q.nodes.push_back(x1[i] * d_ + x2[k] * e_ + z * p_.center);
      q.weights.push_back(w1[i] * w2[k] / z);
    }
  }
  return q;
}

SphericalFunction sawtooth_function(const SawtoothParams& p) {
  auto field = std::make_shared<const SawtoothField>(p);
  nlohmann::json spec = {{"type", "sawtooth"},
                         {"center", {p.center.x(), p.center.y(), p.center.z()}},
                         {"direction", {field->d().x(), field->d().y(), field->d().z()}},
                         {"eps", p.eps},
                         {"r", p.r},
                         {"smoothing", p.smoothing},
                         {"amplitude", p.amplitude}};
  const bool smooth = p.smoothing > 0.0;
  SphericalFunction out([field](const Vec3& u) { return field->value(u); }, smooth ? Smoothness::C2 : Smoothness::C0,
                        smooth ? "sawtooth_smoothed" : "sawtooth", std::move(spec), smooth ? p.smoothing : p.eps);
  SupportPatch patch;
  patch.center = p.center;
  patch.radius = std::asin(std::sqrt(2.0) * field->half_width());
  patch.rule = [field](int level) { return field->chart_rule(level); };
  out = out.with_support(std::move(patch));
  if (smooth) out = out.with_jet([field](const Vec3& u) { return field->jet(u); });
  return out;
}

}  // namespace sphbm
