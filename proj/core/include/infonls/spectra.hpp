#pragma once

// Linear reference spectra and first-order energy shifts of the nonlinearity.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "infonls/dynamics.hpp"
#include "infonls/grid.hpp"

namespace infonls {

struct EigenSolution {
  std::vector<double> energies;       // ascending
  std::vector<Wavefunction> states;   // normalized, first lobe positive
  std::string potential_id;
};

/// Lowest n_states eigenpairs of the second-order finite-difference
/// Hamiltonian with Dirichlet walls one step outside the grid.
/// Requires a nonsingular potential and n_states < n_points / 4.
EigenSolution solve_linear_spectrum(const Potential& V, const PhysConstants& consts,
                                    std::size_t n_states);

enum class ShiftMethod { numeric_expectation, node_profile, nodeless_integral, sho_closed_form };

std::string_view to_string(ShiftMethod method);

struct ShiftResult {
  double eta = 0.0;
  double L = 0.0;
  int state_index = 0;
  double delta_E = 0.0;
  ShiftMethod method = ShiftMethod::numeric_expectation;
};

/// delta_E = <psi| F(p) |psi> with p the unperturbed density of `state`.
ShiftResult first_order_shift_numeric(const Wavefunction& state, const NonlinearParams& params,
                                      const PhysConstants& consts, ShiftPolicy policy,
                                      int state_index = 0);

/// sqrt(eta (1 - eta)) (1 - 4 eta): the universal eta-dependence of the
/// O(L) shift of states with nodes. The full shift is
/// (hbar^2 |L| pi / 6m) * profile * sum of squared node slopes.
double node_shift_eta_profile(double eta);

/// eta^2 (1 - eta)(1 - 3 eta) / 4 * (L/a)^2: the ground-state shift of the
/// harmonic oscillator in units of hbar omega, a = sqrt(hbar / m omega).
double sho_ground_shift_closed(double eta, double L_over_a);

/// Calibration of the nodeless shift integral, hbar^2 / (96 m). Fixed by
/// matching the oscillator ground state, for which the bracketed integral
/// equals 24 (1 - eta)(1 - 3 eta) / a^4.
double nodeless_calibration(const PhysConstants& consts);

/// Leading shift of a nodeless state,
///   K L^2 eta^2 integral dx / p^3 [ 6 (2 - 3 eta)^2 p'^4 - 12 (3 - 8 eta + 6 eta^2) p p'^2 p''
///                                   + 4 p^2 p' p''' + p^2 (3 p''^2 - 2 p p'''') ],
/// with K = nodeless_calibration and central-difference derivatives.
/// Throws NodeDetected if min(p) < 1e-6 max(p).
double nodeless_shift_integral(const Density& p, double eta, double L, const PhysConstants& consts);

struct EtaMinimum {
  double eta_star = 0.0;
  double value = 0.0;
};

/// Global minimum of `shift_fn` over [1e-4, 1 - 1e-4]: a coarse scan brackets
/// it, golden-section search narrows the bracket below 1e-10.
EtaMinimum minimize_over_eta(const std::function<double(double)>& shift_fn);

}  // namespace infonls
