#include "sphbm/kernels.hpp"

#include <atomic>
#include <exception>
#include <mutex>

namespace sphbm {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};

// Neumaier summation
struct Accumulator {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};
}  // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec exec) { g_exec.store(exec); }

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex m;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> map_nodes(std::span<const Vec3> nodes, const std::function<double(const Vec3&)>& fn, Exec exec) {
  std::vector<double> out(nodes.size());
  for_each_index(nodes.size(), [&](std::size_t i) { out[i] = fn(nodes[i]); }, exec);
  return out;
}

double weighted_sum(std::span<const double> w, std::span<const double> v) {
  if (w.size() != v.size()) throw InvalidArgument("weighted_sum: size mismatch");
  Accumulator acc;
  for (std::size_t i = 0; i < w.size(); ++i) acc.add(w[i] * v[i]);
  return acc.value();
}

double ordered_sum(std::span<const double> v) {
  Accumulator acc;
  for (double x : v) acc.add(x);
  return acc.value();
}

}  // namespace sphbm
