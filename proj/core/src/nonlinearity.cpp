#include "infonls/nonlinearity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "infonls/error.hpp"

namespace infonls {

NonlinearField regularized_kl_term(const Density& p, const NonlinearParams& params,
                                   ShiftPolicy policy) {
  NonlinearField field{p.grid(), std::vector<double>(p.size(), 0.0), params.unregularized()};
  if (params.is_linear()) return field;

  const long s = params.shift_steps(p.grid());
  const Density plus = shift_density(p, s, policy);
  const Density minus = shift_density(p, -s, policy);
  const double eps = p.floor();
  const double eta = params.eta();
  const double prefactor = params.cal_E() / std::pow(eta, 4);

  for (std::size_t k = 0; k < p.size(); ++k) {
    const double a = std::max(p[k], eps);
    const double b = std::max(plus[k], eps);
    const double c = std::max(minus[k], eps);
    const double d_plus = (1.0 - eta) * a + eta * b;
    const double d_minus = (1.0 - eta) * c + eta * a;
    // eta b / D+ - eta c / D- over a common denominator, written in
    // differences of p to limit cancellation for smooth densities.
    const double ratio_terms =
        eta * ((1.0 - eta) * c * (b - a) + eta * b * (a - c)) / (d_plus * d_minus);
    field.values[k] = prefactor * (-std::log1p(eta * (b - a) / a) + ratio_terms);
  }
  return field;
}

NonlinearField quantum_potential_term(const Density& p, const PhysConstants& consts) {
  const double eps = p.floor();
  std::vector<double> root(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) root[k] = std::sqrt(std::max(p[k], eps));
  std::vector<double> curvature = second_derivative(root, p.grid());
  const double scale = consts.kinetic_scale();
  for (std::size_t k = 0; k < p.size(); ++k) curvature[k] *= scale / root[k];
  return {p.grid(), std::move(curvature), false};
}

NonlinearField nonlinear_term_F(const Density& p, const NonlinearParams& params,
                                const PhysConstants& consts, ShiftPolicy policy) {
  NonlinearField field = regularized_kl_term(p, params, policy);
  if (params.is_linear()) return field;
  const NonlinearField qp = quantum_potential_term(p, consts);
  for (std::size_t k = 0; k < field.values.size(); ++k) field.values[k] += qp.values[k];
  return field;
}

AmplitudeBranch amplitude_branch(const Wavefunction& psi) {
  const std::size_t n = psi.size();
  AmplitudeBranch branch{std::vector<Complex>(n), std::vector<Complex>(n, Complex{1.0, 0.0})};
  double max_p = 0.0;
  for (std::size_t k = 0; k < n; ++k) max_p = std::max(max_p, std::norm(psi[k]));
  const double eps = kDensityFloorRatio * max_p;

  std::size_t first = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::norm(psi[k]) > eps) {
      first = k;
      break;
    }
  }
  if (first == n) {
    for (std::size_t k = 0; k < n; ++k) branch.amplitude[k] = psi[k];
    return branch;
  }

  // Floored samples keep the last phase; their amplitude takes up the rest.
  Complex prev = psi[first] / std::abs(psi[first]);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::abs(psi[k]);
    if (m * m <= eps) {
      branch.amplitude[k] = std::conj(prev) * psi[k];
      branch.phase[k] = prev;
      continue;
    }
    const Complex v = psi[k] / m;
    const bool flip = (std::conj(prev) * v).real() < 0.0;
    branch.phase[k] = flip ? -v : v;
    branch.amplitude[k] = flip ? -m : m;
    prev = branch.phase[k];
  }
  return branch;
}

namespace {

// Second difference of the branch amplitude with every stencil link
// weighted by the overlap c = Re(conj(u_k) u_j) of the two phases:
//
//   sum_j w_j (c_kj a_j - |c_kj| a_k).
//
// With a constant phase this is the plain second difference. With a phase
// gradient it is what the kinetic stencil does to a * u minus its phase
// part, so amplitude perturbations of a moving state cancel against the
// kinetic term as they do at rest. The weights are symmetric in (k, j),
// which keeps sum conj(a) * result real. A sign flip of the branch across
// the periodic seam shows up as c = -1 and needs no special case. Links
// through a Dirichlet wall see a = 0 with |c| = 1.
std::vector<Complex> amplitude_curvature(const AmplitudeBranch& branch, const Grid& grid,
                                         StencilOrder order) {
  static constexpr std::array<double, 4> w2 = {-2.0, 1.0, 0.0, 0.0};
  static constexpr std::array<double, 4> w6 = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  const auto& w = order == StencilOrder::second ? w2 : w6;
  const long r = static_cast<long>(stencil_radius(order));
  const long n = static_cast<long>(grid.size());
  const bool periodic = grid.boundary() == Boundary::periodic;
  const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
  // Neighbour contribution c * a_j and the deficit 1 - |c| of each link.
  auto link = [&](long k, long j, Complex& weighted, double& deficit) {
    if (!periodic && (j < 0 || j >= n)) {
      weighted = Complex{};
      deficit = 0.0;
      return;
    }
    const auto jj = static_cast<std::size_t>((j % n + n) % n);
    const double c = (std::conj(branch.phase[static_cast<std::size_t>(k)]) * branch.phase[jj]).real();
    weighted = c * branch.amplitude[jj];
    deficit = 1.0 - std::abs(c);
  };
  // The terms are grouped as in second_derivative, so that for a constant
  // phase the result agrees with it bit for bit and cancels the kinetic
  // term exactly.
  std::vector<Complex> out(grid.size());
  for (long k = 0; k < n; ++k) {
    const Complex a_k = branch.amplitude[static_cast<std::size_t>(k)];
    Complex lo, hi;
    double d_lo = 0.0, d_hi = 0.0;
    Complex acc;
    double deficit = 0.0;
    if (order == StencilOrder::second) {
      link(k, k - 1, lo, d_lo);
      link(k, k + 1, hi, d_hi);
      acc = hi - 2.0 * a_k + lo;
      deficit = d_lo + d_hi;
    } else {
      acc = w[0] * a_k;
      for (long m = 1; m <= r; ++m) {
        link(k, k - m, lo, d_lo);
        link(k, k + m, hi, d_hi);
        acc += w[m] * (hi + lo);
        deficit += w[m] * (d_lo + d_hi);
      }
    }
    if (deficit != 0.0) acc += deficit * a_k;
    out[static_cast<std::size_t>(k)] = acc * inv_dx2;
  }
  return out;
}

}  // namespace

NonlinearField quantum_potential_term(const Wavefunction& psi, const PhysConstants& consts,
                                      StencilOrder order) {
  const AmplitudeBranch branch = amplitude_branch(psi);
  const std::vector<Complex> curvature = amplitude_curvature(branch, psi.grid(), order);
  double max_a = 0.0;
  for (const Complex& a : branch.amplitude) max_a = std::max(max_a, std::abs(a));
  const double root_floor = std::sqrt(kDensityFloorRatio) * max_a;
  const double scale = consts.kinetic_scale();
  std::vector<double> values(curvature.size(), 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Complex a = branch.amplitude[k];
    const double mag = std::abs(a);
    if (max_a == 0.0) break;
    const Complex denom = mag >= root_floor ? a : (mag > 0.0 ? a / mag : Complex{1.0}) * root_floor;
    values[k] = scale * (curvature[k] / denom).real();
  }
  return {psi.grid(), std::move(values), false};
}

NonlinearField nonlinear_term_F(const Wavefunction& psi, const NonlinearParams& params,
                                const PhysConstants& consts, ShiftPolicy policy,
                                StencilOrder order) {
  NonlinearField field = regularized_kl_term(density(psi), params, policy);
  if (params.is_linear()) return field;
  const NonlinearField qp = quantum_potential_term(psi, consts, order);
  for (std::size_t k = 0; k < field.values.size(); ++k) field.values[k] += qp.values[k];
  return field;
}

std::vector<Complex> apply_nonlinear_term(const Wavefunction& psi, const NonlinearParams& params,
                                          const PhysConstants& consts, ShiftPolicy policy,
                                          StencilOrder order) {
  std::vector<Complex> out(psi.size(), Complex{});
  if (params.is_linear()) return out;
  const NonlinearField kl = regularized_kl_term(density(psi), params, policy);
  const AmplitudeBranch branch = amplitude_branch(psi);
  const std::vector<Complex> curvature = amplitude_curvature(branch, psi.grid(), order);
  const double scale = consts.kinetic_scale();
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = kl.values[k] * psi[k] + scale * curvature[k] * branch.phase[k];
  }
  return out;
}

}  // namespace infonls
