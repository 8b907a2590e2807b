#pragma once

// Information functionals of a density: the length-L relative entropy that
// interpolates between Fisher (L -> 0) and Shannon, plus a numeric
// functional-derivative oracle.

#include <functional>
#include <string>
#include <vector>

#include "infonls/grid.hpp"

namespace infonls {

struct FunctionalValue {
  double value = 0.0;
  /// Richardson estimate from the trapezoid on every other sample.
  double quadrature_error_estimate = 0.0;
};

/// I_KL = integral of p ln(p / p(x + L)). L must be a whole number of steps.
FunctionalValue kl_divergence_shifted(const Density& p, double L, ShiftPolicy policy);

/// I_F = integral of (p')^2 / p with a central-difference p' and floored
/// denominator.
FunctionalValue fisher_information(const Density& p);

/// S = -integral of p ln p.
FunctionalValue shannon_entropy(const Density& p);

/// A scalar functional F[p] together with a label for reports.
struct DensityFunctional {
  std::string name;
  std::function<double(const Density&)> evaluate;
};

/// scale * I_KL at length L.
DensityFunctional kl_functional(double L, ShiftPolicy policy, double scale = 1.0);
/// scale * I_F.
DensityFunctional fisher_functional(double scale = 1.0);
DensityFunctional shannon_functional();

/// Central-difference functional derivative
///   dF/dp(x_k) ~ [F(p + e_k d_k) - F(p - e_k d_k)] / (2 e_k dx),
/// with a per-point bump e_k = bump_eps * p[k] (bump_eps itself where p[k] is 0).
/// Throws BumpTooLarge if p - e_k would fall below the density floor.
std::vector<double> functional_derivative(const DensityFunctional& functional, const Density& p,
                                          double bump_eps = 1e-6);

}  // namespace infonls
