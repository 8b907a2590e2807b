#pragma once

// Pointwise evaluation of the regularized nonlinear term
//
//   F(p) = (cal_E / eta^4) [ ln(p / D+) + 1 - (1 - eta) p / D+ - eta p- / D- ]
//          + (hbar^2 / 2m) (sqrt p)'' / sqrt p,
//
//   D+ = (1 - eta) p + eta p+,   D- = (1 - eta) p- + eta p,   p+-(x) = p(x +- eta L).
//
// Floors (1e-12 max p) enter logarithms and denominators only. eta = 0 is
// the linear theory and yields F = 0.

#include <vector>

#include "infonls/grid.hpp"

namespace infonls {

struct NonlinearField {
  Grid grid;
  std::vector<double> values;
  /// Set when eta = 1, the unregularized singular limit.
  bool unregularized = false;
};

/// The eta-regularized relative-entropy bracket times cal_E / eta^4.
NonlinearField regularized_kl_term(const Density& p, const NonlinearParams& params,
                                   ShiftPolicy policy);

/// (hbar^2/2m) (sqrt max(p, eps))'' / sqrt max(p, eps), second-order stencil.
NonlinearField quantum_potential_term(const Density& p, const PhysConstants& consts);

/// regularized_kl_term + quantum_potential_term.
NonlinearField nonlinear_term_F(const Density& p, const NonlinearParams& params,
                                const PhysConstants& consts, ShiftPolicy policy);

/// psi written as amplitude * phase with psi = amplitude * phase exactly at
/// every sample. Above the density floor the amplitude is real and allowed
/// to change sign, so that it stays smooth through the nodes of psi; there
/// |amplitude| = sqrt p. At floored samples the phase is carried over from
/// the previous sample and the amplitude absorbs the rest of psi, so it may
/// be complex.
///
/// |sqrt p| has a kink at every node; its second difference then carries a
/// spurious O(1/dx) spike which leaks an O(dx) error into expectation values
/// and makes explicit time stepping stiff. The signed branch removes it.
/// Because psi = amplitude * phase holds exactly, the product form
/// (amplitude'' * phase) keeps sum conj(psi) * term real and the evolution
/// unitary.
struct AmplitudeBranch {
  std::vector<Complex> amplitude;
  std::vector<Complex> phase;
};

/// Each phase is the one of +-psi/|psi| closest to the previous phase.
AmplitudeBranch amplitude_branch(const Wavefunction& psi);

/// Quantum-potential term built from the amplitude branch of psi.
NonlinearField quantum_potential_term(const Wavefunction& psi, const PhysConstants& consts,
                                      StencilOrder order = StencilOrder::second);

/// nonlinear_term_F with the quantum potential taken from the amplitude branch.
NonlinearField nonlinear_term_F(const Wavefunction& psi, const NonlinearParams& params,
                                const PhysConstants& consts, ShiftPolicy policy,
                                StencilOrder order = StencilOrder::second);

/// F(p) psi evaluated as KL * psi + (hbar^2/2m) amplitude'' * phase. The
/// product form stays bounded through nodes, where F itself is singular.
std::vector<Complex> apply_nonlinear_term(const Wavefunction& psi, const NonlinearParams& params,
                                          const PhysConstants& consts, ShiftPolicy policy,
                                          StencilOrder order = StencilOrder::second);

}  // namespace infonls
