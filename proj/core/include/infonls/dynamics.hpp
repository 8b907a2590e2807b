#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infonls/grid.hpp"

namespace infonls {

/// External potential sampled on a grid. Masked points are singular (hard
/// walls): the evolution pins the wavefunction to zero there and the
/// eigensolver refuses them.
struct Potential {
  Grid grid;
  std::vector<double> values;
  std::vector<bool> singular_mask;
  std::string id;

  bool has_singularities() const;

  static Potential zero(const Grid& grid);
  static Potential constant(const Grid& grid, double value);
  /// m omega^2 x^2 / 2.
  static Potential harmonic(const Grid& grid, const PhysConstants& consts, double omega);
  /// strength * x^4.
  static Potential quartic(const Grid& grid, double strength);
};

struct EvolutionReport {
  std::vector<double> times;
  std::vector<double> norm_drift;
  std::vector<double> energy_trace;
  Wavefunction final_state;
  /// Set when the run stopped early on a non-finite amplitude.
  std::optional<std::string> failure;
};

/// 0.5 m dx^2 / hbar.
double max_stable_dt(const Grid& grid, const PhysConstants& consts);

/// (1 / i hbar) [ -(hbar^2/2m) psi'' + V psi + F(p) psi ].
Wavefunction rhs_apply(const Wavefunction& psi, const Potential& V, const NonlinearParams& params,
                       const PhysConstants& consts, ShiftPolicy policy);

/// Classical RK4 step; F is recomputed from the density of every stage.
/// Negative dt steps backwards. Throws UnstableStep if |dt| > max_stable_dt.
Wavefunction rk4_step(const Wavefunction& psi, const Potential& V, const NonlinearParams& params,
                      const PhysConstants& consts, double dt, ShiftPolicy policy);

/// <psi|H_lin|psi> + integral of p F(p). Diagnostic only.
double energy_functional(const Wavefunction& psi, const Potential& V,
                         const NonlinearParams& params, const PhysConstants& consts,
                         ShiftPolicy policy);

/// Runs n_steps of rk4_step, recording norm drift and the energy diagnostic
/// after every step (entry 0 is the initial state). Stops with `failure` set
/// if an amplitude becomes non-finite.
EvolutionReport evolve(const Wavefunction& psi0, const Potential& V, const NonlinearParams& params,
                       const PhysConstants& consts, double dt, std::size_t n_steps,
                       ShiftPolicy policy);

}  // namespace infonls
