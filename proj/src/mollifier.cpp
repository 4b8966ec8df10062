#include "sphbm/mollifier.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "sphbm/identities.hpp"
#include "sphbm/kernels.hpp"

namespace sphbm {

double bump_xi(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

Mat3 sample_rotation_near_identity(Rng& rng, double alpha_max, double* angle) {
  const double cmax = 1.0 - std::cos(alpha_max);
  double a;
  do {
    a = rng.uniform(0.0, alpha_max);
  } while (rng.uniform() * cmax > 1.0 - std::cos(a));
  if (angle) *angle = a;
  return Rng::axis_angle(rng.unit_vector(), a);
}

RotationKernel::RotationKernel(int k, int samples, std::uint64_t seed) : k_(k) {
  if (k < 1) throw InvalidArgument("RotationKernel: k must be positive");
  if (samples < 1) throw InvalidArgument("RotationKernel: samples must be positive");
  alpha_max_ = std::acos(1.0 - 1.0 / (4.0 * k * k));
  const double k2 = static_cast<double>(k) * k;
  Rng rng(seed);
  rot_.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    double a;
    rot_.push_back(sample_rotation_near_identity(rng, alpha_max_, &a));
    // |rho - id|_F^2 = 4 (1 - cos a)
    const double t = k2 * (rot_.back() - Mat3::Identity()).squaredNorm();
    arg_.push_back(t);
    w_.push_back(bump_xi(t));
  }
  Rng norm_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> xs(100000);
  for (auto& x : xs) {
    double a;
    sample_rotation_near_identity(norm_rng, alpha_max_, &a);
    x = bump_xi(k2 * 4.0 * (1.0 - std::cos(a)));
  }
  const double mean = ordered_sum(xs) / static_cast<double>(xs.size());
  c_k_ = 1.0 / (support_probability() * mean);
}

double RotationKernel::support_probability() const { return (alpha_max_ - std::sin(alpha_max_)) / M_PI; }

struct Mollified::State {
  explicit State(SphericalFunction g) : f(std::move(g)) {}
  SphericalFunction f;
  std::mutex mu;
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<MollifiedValue>> memo;
};

Mollified::Mollified(SphericalFunction f, int k, int samples, std::uint64_t seed)
    : st_(std::make_shared<State>(std::move(f))),
      kernel_(std::make_shared<const RotationKernel>(k, samples, seed)) {}

MollifiedValue Mollified::evaluate(const Vec3& u) const {
  const auto& R = kernel_->rotations();
  const auto& w = kernel_->weights();
  std::vector<double> vals(R.size());
  for (std::size_t s = 0; s < R.size(); ++s) vals[s] = st_->f(R[s] * u);
  // Average deviations from one sample so that constants come back bit-exact.
  const double ref = vals.empty() ? 0.0 : vals[0];
  std::vector<double> dev(R.size());
  for (std::size_t s = 0; s < R.size(); ++s) dev[s] = vals[s] - ref;
  const double W = ordered_sum(w);
  const double v = ref + weighted_sum(w, dev) / W;
  std::vector<double> sq(R.size());
  for (std::size_t s = 0; s < R.size(); ++s) sq[s] = w[s] * w[s] * (vals[s] - v) * (vals[s] - v);
  return {v, std::sqrt(ordered_sum(sq)) / W};
}

const std::vector<MollifiedValue>& Mollified::on_nodes(const Quadrature& rule) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& n : rule.nodes) {
    for (int c = 0; c < 3; ++c) {
      std::uint64_t bits;
      const double x = n[c];
      std::memcpy(&bits, &x, sizeof bits);
      h = (h ^ bits) * 0x100000001b3ULL;
    }
  }
  const auto key = std::make_pair(rule.size(), h);
  {
    std::lock_guard<std::mutex> lock(st_->mu);
    if (auto it = st_->memo.find(key); it != st_->memo.end()) return it->second;
  }
  std::vector<MollifiedValue> out(rule.size());
  for_each_index(rule.size(), [&](std::size_t i) { out[i] = evaluate(rule.nodes[i]); });
  std::lock_guard<std::mutex> lock(st_->mu);
  return st_->memo.emplace(key, std::move(out)).first->second;
}

SphericalFunction Mollified::function() const {
  const Mollified self = *this;
  nlohmann::json spec = nullptr;
  return SphericalFunction([self](const Vec3& u) { return self.evaluate(u).value; }, Smoothness::Cinf,
                           "mollified(" + st_->f.label() + ", k=" + std::to_string(kernel_->k()) + ")", std::move(spec),
                           kernel_->max_angle());
}

SphericalFunction mollify(const SphericalFunction& f, int k, int samples, std::uint64_t seed) {
  return Mollified(f, k, samples, seed).function();
}

std::vector<SphericalFunction> cap_bump_battery(const Vec3& P, double theta_prime) {
  if (!(theta_prime > 0.0 && theta_prime < M_PI / 2.0)) throw InvalidArgument("cap_bump_battery: theta' must lie in (0, pi/2)");
  const Vec3 p = P.normalized();
  const TangentFrame fr = tangent_basis(p);
  // (offset angle, direction angle, radius fraction, tilt)
  const double specs[5][4] = {{0.0, 0.0, 0.9, 0.0}, {0.4, 0.0, 0.5, 0.3},   {0.5, 2.0, 0.4, -0.5},
                              {0.3, 4.0, 0.6, 0.8}, {0.2, 1.0, 0.7, -0.2}};
  std::vector<SphericalFunction> out;
  for (const auto& s : specs) {
    const double off = s[0] * theta_prime;
    const Vec3 dir = std::cos(s[1]) * fr.e1 + std::sin(s[1]) * fr.e2;
    const Vec3 c = (std::cos(off) * p + std::sin(off) * dir).normalized();
    const double rho = s[2] * (theta_prime - off);
    const double chord2 = 2.0 * (1.0 - std::cos(rho));
    const double tilt = s[3];
    const Vec3 tdir = fr.e2;
    SphericalFunction bump(
        [c, chord2, tilt, tdir](const Vec3& u) {
          const double q = (u - c).squaredNorm() / chord2;
          if (q >= 1.0) return 0.0;
          const double b = 1.0 - q;
          return b * b * b * b * (1.0 + tilt * u.dot(tdir));
        },
        Smoothness::C2, "cap_bump", nullptr, rho);
    // Ambient F = (1 - q)^4 T with q = |u - c|^2 / chord2, T = 1 + tilt (u, t); Q = P D^2F P + (F - (u, DF)) P.
    bump = bump.with_jet([c, chord2, tilt, tdir](const Vec3& u) {
      AmbientJet j;
      const double q = (u - c).squaredNorm() / chord2;
      if (q >= 1.0) return j;
      const double b = 1.0 - q, T = 1.0 + tilt * u.dot(tdir);
      const double B = b * b * b * b, dB = -4.0 * b * b * b, ddB = 12.0 * b * b;
      const Vec3 gq = 2.0 * (u - c) / chord2;
      const Vec3 gB = dB * gq;
      const Mat3 HB = ddB * gq * gq.transpose() + dB * (2.0 / chord2) * Mat3::Identity();
      const Vec3 gF = T * gB + B * tilt * tdir;
      const Mat3 HF = T * HB + tilt * (gB * tdir.transpose() + tdir * gB.transpose());
      const Mat3 P = Mat3::Identity() - u * u.transpose();
      j.value = B * T;
      j.grad = P * gF;
      j.q = P * HF * P + (j.value - u.dot(gF)) * P;
      return j;
    });
    SupportPatch patch;
    patch.center = c;
    patch.radius = rho;
    patch.rule = [c, rho](int level) { return build_zone_rule(c, 0.0, rho, level); };
    out.push_back(bump.with_support(std::move(patch)));
  }
  return out;
}

nlohmann::json TransferReport::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"k", r.k}, {"phi", r.battery_index}, {"original", r.original}, {"mollified", r.mollified}, {"agree", r.agree}});
  return {{"rows", rs}, {"ks", ks}, {"agreements", agreements}, {"battery_size", battery_size}};
}

TransferReport mollified_inequality_transfer(const SphericalFunction& f, double theta, double theta_prime,
                                             const SphereGrid& grid, const Vec3& P, std::vector<int> ks, int samples,
                                             std::uint64_t seed, double zero_tol) {
  if (!(theta_prime < theta)) throw InvalidArgument("mollified_inequality_transfer: need theta' < theta");
  const auto battery = cap_bump_battery(P, theta_prime);
  TransferReport rep;
  rep.ks = ks;
  rep.battery_size = static_cast<int>(battery.size());
  auto sgn = [zero_tol](double x) { return std::abs(x) <= zero_tol ? 0 : (x > 0 ? 1 : -1); };
  auto integral = [&](const SphericalFunction& g, const SphericalFunction& phi) {
    const Quadrature rule = integration_rule(phi, grid);
    const auto jp = jet_field(phi, rule);
    std::vector<double> gv = map_nodes(rule.nodes, [&g](const Vec3& u) { return g(u); });
    for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= jp[i].q.det();
    return weighted_sum(rule.weights, gv);
  };
  std::vector<double> orig;
  for (const auto& phi : battery) orig.push_back(integral(f, phi));
  for (int k : ks) {
    const SphericalFunction fk = mollify(f, k, samples, seed);
    int agree = 0;
    for (std::size_t b = 0; b < battery.size(); ++b) {
      TransferRow row;
      row.k = k;
      row.battery_index = static_cast<int>(b);
      row.original = orig[b];
      row.mollified = integral(fk, battery[b]);
      row.agree = sgn(row.original) == sgn(row.mollified);
      agree += row.agree;
      rep.rows.push_back(row);
    }
    rep.agreements.push_back(agree);
  }
  return rep;
}

}  // namespace sphbm
