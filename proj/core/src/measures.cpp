#include "infonls/measures.hpp"

#include <algorithm>
#include <cmath>

#include "infonls/error.hpp"

namespace infonls {

namespace {

// Trapezoid on the full grid and on the even samples; the difference / 3 is
// the leading error of the fine estimate.
FunctionalValue with_error_estimate(const Grid& grid, std::span<const double> integrand) {
  const double fine = grid.integrate(integrand);
  double coarse_sum = 0.0;
  for (std::size_t k = 0; k < integrand.size(); k += 2) coarse_sum += integrand[k];
  const double coarse = 2.0 * grid.dx() * coarse_sum;
  return {fine, std::abs(fine - coarse) / 3.0};
}

}  // namespace

FunctionalValue kl_divergence_shifted(const Density& p, double L, ShiftPolicy policy) {
  const long steps = p.grid().steps_for(L);
  const double eps = p.floor();
  const Density shifted = shift_density(p, steps, policy);
  std::vector<double> integrand(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double here = std::max(p[k], eps);
    integrand[k] = p[k] * std::log(here / std::max(shifted[k], eps));
  }
  return with_error_estimate(p.grid(), integrand);
}

FunctionalValue fisher_information(const Density& p) {
  const Grid& grid = p.grid();
  const long n = static_cast<long>(p.size());
  const bool periodic = grid.boundary() == Boundary::periodic;
  const double eps = p.floor();
  auto at = [&](long j) {
    if (j >= 0 && j < n) return p[j];
    return periodic ? p[(j % n + n) % n] : 0.0;
  };
  std::vector<double> integrand(p.size());
  for (long k = 0; k < n; ++k) {
    const double dp = (at(k + 1) - at(k - 1)) / (2.0 * grid.dx());
    integrand[k] = dp * dp / std::max(p[k], eps);
  }
  return with_error_estimate(grid, integrand);
}

FunctionalValue shannon_entropy(const Density& p) {
  const double eps = p.floor();
  std::vector<double> integrand(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    integrand[k] = -p[k] * std::log(std::max(p[k], eps));
  }
  return with_error_estimate(p.grid(), integrand);
}

DensityFunctional kl_functional(double L, ShiftPolicy policy, double scale) {
  return {"kl_shifted", [=](const Density& p) {
            return scale * kl_divergence_shifted(p, L, policy).value;
          }};
}

DensityFunctional fisher_functional(double scale) {
  return {"fisher", [=](const Density& p) { return scale * fisher_information(p).value; }};
}

DensityFunctional shannon_functional() {
  return {"shannon", [](const Density& p) { return shannon_entropy(p).value; }};
}

std::vector<double> functional_derivative(const DensityFunctional& functional, const Density& p,
                                          double bump_eps) {
  if (!(bump_eps > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bump_eps must be positive");
  }
  const double eps_floor = p.floor();
  std::vector<double> work(p.values().begin(), p.values().end());
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double base = work[k];
    const double bump = base > 0.0 ? bump_eps * base : bump_eps;
    if (base - bump < eps_floor) {
      throw Error(ErrorCode::BumpTooLarge,
                  "bump pushes the density below its floor at index " + std::to_string(k));
    }
    work[k] = base + bump;
    const double up = functional.evaluate(Density(p.grid(), work));
    work[k] = base - bump;
    const double down = functional.evaluate(Density(p.grid(), work));
    work[k] = base;
    out[k] = (up - down) / (2.0 * bump * p.grid().dx());
  }
  return out;
}

}  // namespace infonls
