#include "infonls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infonls/error.hpp"
#include "infonls/nonlinearity.hpp"

namespace infonls {

bool Potential::has_singularities() const {
  return std::find(singular_mask.begin(), singular_mask.end(), true) != singular_mask.end();
}

Potential Potential::zero(const Grid& grid) { return constant(grid, 0.0); }

Potential Potential::constant(const Grid& grid, double value) {
  std::ostringstream id;
  id << "constant(" << value << ")";
  return {grid, std::vector<double>(grid.size(), value), std::vector<bool>(grid.size(), false),
          id.str()};
}

Potential Potential::harmonic(const Grid& grid, const PhysConstants& consts, double omega) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double x = grid.x(k);
    v[k] = 0.5 * consts.mass * omega * omega * x * x;
  }
  std::ostringstream id;
  id << "harmonic(omega=" << omega << ")";
  return {grid, std::move(v), std::vector<bool>(grid.size(), false), id.str()};
}

Potential Potential::quartic(const Grid& grid, double strength) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = strength * std::pow(grid.x(k), 4);
  std::ostringstream id;
  id << "quartic(strength=" << strength << ")";
  return {grid, std::move(v), std::vector<bool>(grid.size(), false), id.str()};
}

double max_stable_dt(const Grid& grid, const PhysConstants& consts) {
  return 0.5 * consts.mass * grid.dx() * grid.dx() / consts.hbar;
}

namespace {

void check_potential(const Wavefunction& psi, const Potential& V) {
  if (!(V.grid == psi.grid()) || V.values.size() != psi.size() ||
      V.singular_mask.size() != psi.size()) {
    throw Error(ErrorCode::InvalidArgument, "potential and wavefunction live on different grids");
  }
}

// H psi without the 1/(i hbar), singular points forced to zero.
std::vector<Complex> apply_hamiltonian(const Wavefunction& psi, const Potential& V,
                                       const NonlinearParams& params, const PhysConstants& consts,
                                       ShiftPolicy policy) {
  std::vector<Complex> out = second_derivative(psi.values(), psi.grid());
  const double kinetic = -consts.kinetic_scale();
  const std::vector<Complex> nonlinear = apply_nonlinear_term(psi, params, consts, policy);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (V.singular_mask[k]) {
      out[k] = Complex{};
      continue;
    }
    out[k] = kinetic * out[k] + V.values[k] * psi[k] + nonlinear[k];
  }
  return out;
}

}  // namespace

Wavefunction rhs_apply(const Wavefunction& psi, const Potential& V, const NonlinearParams& params,
                       const PhysConstants& consts, ShiftPolicy policy) {
  check_potential(psi, V);
  std::vector<Complex> h = apply_hamiltonian(psi, V, params, consts, policy);
  const Complex factor = 1.0 / Complex(0.0, consts.hbar);
  for (auto& v : h) v *= factor;
  return Wavefunction(psi.grid(), std::move(h));
}

Wavefunction rk4_step(const Wavefunction& psi, const Potential& V, const NonlinearParams& params,
                      const PhysConstants& consts, double dt, ShiftPolicy policy) {
  const double dt_max = max_stable_dt(psi.grid(), consts);
  if (!(std::abs(dt) <= dt_max)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the explicit limit " << dt_max;
    throw Error(ErrorCode::UnstableStep, msg.str());
  }
  if (dt == 0.0) return psi;

  const std::size_t n = psi.size();
  auto stage = [&](const Wavefunction& base, const Wavefunction& slope, double h) {
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = base[k] + h * slope[k];
    return Wavefunction(psi.grid(), std::move(v));
  };
  const Wavefunction k1 = rhs_apply(psi, V, params, consts, policy);
  const Wavefunction k2 = rhs_apply(stage(psi, k1, 0.5 * dt), V, params, consts, policy);
  const Wavefunction k3 = rhs_apply(stage(psi, k2, 0.5 * dt), V, params, consts, policy);
  const Wavefunction k4 = rhs_apply(stage(psi, k3, dt), V, params, consts, policy);
  std::vector<Complex> next(n);
  for (std::size_t k = 0; k < n; ++k) {
    next[k] = psi[k] + (dt / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  return Wavefunction(psi.grid(), std::move(next));
}

double energy_functional(const Wavefunction& psi, const Potential& V,
                         const NonlinearParams& params, const PhysConstants& consts,
                         ShiftPolicy policy) {
  check_potential(psi, V);
  const std::vector<Complex> h = apply_hamiltonian(psi, V, params, consts, policy);
  double sum = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) sum += (std::conj(psi[k]) * h[k]).real();
  return psi.grid().dx() * sum;
}

EvolutionReport evolve(const Wavefunction& psi0, const Potential& V, const NonlinearParams& params,
                       const PhysConstants& consts, double dt, std::size_t n_steps,
                       ShiftPolicy policy) {
  check_potential(psi0, V);
  std::vector<Complex> start(psi0.values().begin(), psi0.values().end());
  for (std::size_t k = 0; k < start.size(); ++k) {
    if (V.singular_mask[k]) start[k] = Complex{};
  }
  EvolutionReport report{{}, {}, {}, Wavefunction(psi0.grid(), std::move(start)), std::nullopt};
  report.times.reserve(n_steps + 1);
  report.norm_drift.reserve(n_steps + 1);
  report.energy_trace.reserve(n_steps + 1);

  const double norm0 = report.final_state.squared_norm();
  auto record = [&](std::size_t step) {
    report.times.push_back(static_cast<double>(step) * dt);
    report.norm_drift.push_back(std::abs(report.final_state.squared_norm() - norm0));
    report.energy_trace.push_back(energy_functional(report.final_state, V, params, consts, policy));
  };
  record(0);
  for (std::size_t step = 1; step <= n_steps; ++step) {
    try {
      report.final_state = rk4_step(report.final_state, V, params, consts, dt, policy);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFinite) throw;
      report.failure = "non-finite amplitude at step " + std::to_string(step);
      return report;
    }
    record(step);
  }
  return report;
}

}  // namespace infonls
