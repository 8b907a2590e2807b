#pragma once

// Exact stationary states psi = C exp(-kappa x) alpha(x) on the half-line,
// their energies, and the linear cotangent potential that shares them.

#include <utility>
#include <vector>

#include "infonls/dynamics.hpp"
#include "infonls/grid.hpp"

namespace infonls {

/// alpha(x) = sum_m a_m sin(2 pi m x / P) for harmonics m >= 1 and period P.
/// Every term vanishes at x = 0 and repeats with period P.
struct PeriodicProfile {
  std::vector<std::pair<int, double>> harmonics;  // (m, a_m)

  /// sin(2 pi x / P).
  static PeriodicProfile sine();

  /// Throws InvalidArgument for m < 1, non-finite or all-zero amplitudes.
  void validate() const;
  double value(double x, double period) const;
  /// Samples on a grid whose x_min is a multiple of dx, with the period
  /// spanning `period_steps` points. Phases are reduced by integer
  /// arithmetic, so zeros of every sine term come out exactly 0.
  std::vector<double> sample(const Grid& grid, long period_steps) const;

  bool operator==(const PeriodicProfile&) const = default;
};

struct ExactSolutionSpec {
  double kappa = 1.0;
  PeriodicProfile alpha = PeriodicProfile::sine();
  NonlinearParams params;
};

struct ExactState {
  Wavefunction psi;
  double norm_C = 0.0;
};

/// (cal_E / eta^4) (1 - ln q - 1/q), q = 1 + eta (gamma - 1), gamma = exp(-2 kappa eta L).
/// Requires kappa >= 0 and 0 < eta < 1 (DomainError).
double exact_energy(double kappa, const NonlinearParams& params);

struct EnergyBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// The kappa -> infinity and kappa -> 0 limits of exact_energy.
EnergyBounds exact_energy_bounds(const NonlinearParams& params);

/// Requires x_min = 0, Dirichlet walls and eta L commensurate with dx.
/// Throws DomainTooShort if exp(-2 kappa x_max) > 1e-10.
ExactState build_exact_state(const ExactSolutionSpec& spec, const Grid& grid);

struct ResidualReport {
  double max_residual = 0.0;
  double excluded_fraction = 0.0;
};

/// max |-(hbar^2/2m) psi'' + F psi - E psi| / (|E| max|psi|), both maxima
/// over retained points, sixth-order stencils throughout. Excluded: points within
/// `exclusion_radius` of a zero of psi, points whose shifts x +- eta L leave a
/// Dirichlet domain, and points whose stencil reaches a wall. With E = 0 the
/// residual is absolute. Throws AllPointsExcluded.
ResidualReport nonlinear_residual(const Wavefunction& psi, double E, const NonlinearParams& params,
                                  const PhysConstants& consts, double exclusion_radius);

/// <psi|H|psi> / <psi|psi> restricted to the points nonlinear_residual keeps.
double residual_energy(const Wavefunction& psi, const NonlinearParams& params,
                       const PhysConstants& consts, double exclusion_radius);

struct DegeneracyReport {
  double E_1 = 0.0;  // Rayleigh-quotient energies of the two states
  double E_2 = 0.0;
  double residual_1 = 0.0;  // against the closed-form energy
  double residual_2 = 0.0;
  bool both_pass = false;
};

/// Builds both states on `grid` and checks each against exact_energy(kappa):
/// both_pass requires residuals below `tolerance` and |E_i - E| <= tolerance |E|.
DegeneracyReport degeneracy_check(const PeriodicProfile& alpha_1, const PeriodicProfile& alpha_2,
                                  double kappa, const NonlinearParams& params,
                                  const PhysConstants& consts, const Grid& grid,
                                  double exclusion_radius, double tolerance = 1e-6);

struct CotangentPotentialParams {
  double A = 0.0;
  double B = 0.0;
  double beta = 0.0;
};

/// beta = 2 pi / (eta L), A = E + (hbar^2/2m)(kappa^2 - beta^2), B = -hbar^2 kappa beta / m.
CotangentPotentialParams cotangent_params(double kappa, const NonlinearParams& params,
                                          const PhysConstants& consts);

/// A + B cot(beta x); points with sin(beta x) = 0 are masked (value 0).
/// The period 2 pi / beta must be commensurate with dx.
Potential cotangent_potential(const CotangentPotentialParams& cot, const Grid& grid);

/// max |-(hbar^2/2m) psi'' + (A + B cot beta x) psi - E psi| / (|E| max|psi|)
/// away from the singular points and the walls.
double linear_residual_cotangent(const Wavefunction& psi, double E,
                                 const CotangentPotentialParams& cot, const PhysConstants& consts,
                                 double exclusion_radius,
                                 StencilOrder order = StencilOrder::sixth);

}  // namespace infonls
