#pragma once

#include <vector>

#include "sphbm/calculus.hpp"

namespace sphbm {

/// Rule to integrate against when phi is one factor of the integrand: the support patch rule if phi has one,
/// the full grid otherwise.
Quadrature integration_rule(const SphericalFunction& phi, const SphereGrid& grid);

/// Test functions used to probe the divergence-free property of C[Q(h)] in weak form.
std::vector<SphericalFunction> cheng_yau_battery();

/// max over the battery of |int sum_ij c_ij[Q(h)] psi_ij|, with psi_ij = q_ij(psi) - delta_ij psi.
double cheng_yau_residual(const SphericalFunction& h, const SphereGrid& grid, const FdOptions& opts = {});

struct PartsIdentity {
  double first = 0.0;   ///< int psi sum phi_ij c_ij
  double second = 0.0;  ///< -int sum phi_j psi_i c_ij
  double third = 0.0;   ///< int phi sum psi_ij c_ij
  double r1 = 0.0;      ///< |first - second|
  double r2 = 0.0;      ///< |first - third|
};

/// The three integrals, with c_ij = cofactor of Q(h).
PartsIdentity parts_identity(const SphericalFunction& h, const SphericalFunction& psi, const SphericalFunction& phi,
                             const SphereGrid& grid, const FdOptions& opts = {});

struct SecondVariationSides {
  double lhs = 0.0;  ///< 2 int f det Q(phi)
  double rhs = 0.0;  ///< int phi^2 tr Q(f) - int sum c_ij[Q(f)] phi_i phi_j
  double residual() const { return std::abs(lhs - rhs); }
};

SecondVariationSides second_variation_sides(const SphericalFunction& f, const SphericalFunction& phi,
                                            const Quadrature& rule, const FdOptions& opts = {});

double second_variation_identity_residual(const SphericalFunction& f, const SphericalFunction& phi,
                                          const SphereGrid& grid, const FdOptions& opts = {});

}  // namespace sphbm
