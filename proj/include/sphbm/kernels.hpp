#pragma once

// Node-parallel kernels. Every kernel has a serial reference path and an OpenMP path;
// both visit nodes independently and reduce in node order, so their results are bitwise equal.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sphbm/types.hpp"

namespace sphbm {

enum class Exec { serial, parallel };

/// Process-wide default used by the library when no policy is passed explicitly.
Exec default_exec();
void set_default_exec(Exec exec);

/// Calls body(i) for i in [0, n).
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec = default_exec());

/// out[i] = fn(nodes[i]).
std::vector<double> map_nodes(std::span<const Vec3> nodes, const std::function<double(const Vec3&)>& fn,
                              Exec exec = default_exec());

/// Compensated sum of w[i] * v[i] in index order.
double weighted_sum(std::span<const double> w, std::span<const double> v);

/// Compensated sum in index order.
double ordered_sum(std::span<const double> v);

}  // namespace sphbm
