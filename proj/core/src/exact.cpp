#include "infonls/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "infonls/error.hpp"
#include "infonls/nonlinearity.hpp"

namespace infonls {

PeriodicProfile PeriodicProfile::sine() { return {{{1, 1.0}}}; }

void PeriodicProfile::validate() const {
  bool any = false;
  for (const auto& [m, a] : harmonics) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "harmonic index must be >= 1");
    if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "harmonic amplitude not finite");
    any = any || a != 0.0;
  }
  if (!any) throw Error(ErrorCode::InvalidArgument, "periodic profile is identically zero");
}

double PeriodicProfile::value(double x, double period) const {
  double sum = 0.0;
  for (const auto& [m, a] : harmonics) sum += a * std::sin(2.0 * std::numbers::pi * m * x / period);
  return sum;
}

namespace {

// Index of grid.x(0) on the lattice j * dx.
long origin_index(const Grid& grid) {
  if (grid.x_min() == 0.0) return 0;
  const long steps = grid.steps_for(std::abs(grid.x_min()));
  return grid.x_min() < 0.0 ? -steps : steps;
}

long positive_mod(long a, long m) { return ((a % m) + m) % m; }

}  // namespace

std::vector<double> PeriodicProfile::sample(const Grid& grid, long period_steps) const {
  validate();
  if (period_steps < 1) throw Error(ErrorCode::InvalidArgument, "period must span >= 1 step");
  const long origin = origin_index(grid);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const long j = origin + static_cast<long>(k);
    double sum = 0.0;
    for (const auto& [m, a] : harmonics) {
      const long r = positive_mod(static_cast<long>(m) * j, period_steps);
      if ((2 * r) % period_steps == 0) continue;
      sum += a * std::sin(2.0 * std::numbers::pi * static_cast<double>(r) /
                          static_cast<double>(period_steps));
    }
    out[k] = sum;
  }
  return out;
}

namespace {

// u / (1 + u) - log1p(u) = 1 - 1/q - ln q with q = 1 + u. The series
// sum_{n>=2} (-1)^(n+1) (1 - 1/n) u^n avoids cancellation for small u.
double energy_kernel(double u) {
  if (std::abs(u) < 0.05) {
    double sum = 0.0;
    double power = u;
    for (int n = 2; n <= 24; ++n) {
      power *= -u;
      sum += power * (1.0 - 1.0 / n);
    }
    return sum;
  }
  return u / (1.0 + u) - std::log1p(u);
}

void require_open_eta(const NonlinearParams& params) {
  if (!(params.eta() > 0.0 && params.eta() < 1.0)) {
    throw Error(ErrorCode::DomainError, "exact solutions need 0 < eta < 1");
  }
}

}  // namespace

double exact_energy(double kappa, const NonlinearParams& params) {
  require_open_eta(params);
  if (!(kappa >= 0.0)) throw Error(ErrorCode::DomainError, "kappa must be >= 0");
  const double eta = params.eta();
  if (std::isinf(kappa)) return exact_energy_bounds(params).lower;
  const double u = eta * std::expm1(-2.0 * kappa * params.shift_length());
  return params.cal_E() / std::pow(eta, 4) * energy_kernel(u);
}

EnergyBounds exact_energy_bounds(const NonlinearParams& params) {
  require_open_eta(params);
  const double eta = params.eta();
  return {params.cal_E() / std::pow(eta, 4) * energy_kernel(-eta), 0.0};
}

ExactState build_exact_state(const ExactSolutionSpec& spec, const Grid& grid) {
  if (!(spec.kappa > 0.0) || !std::isfinite(spec.kappa)) {
    throw Error(ErrorCode::DomainError, "kappa must be positive and finite");
  }
  require_open_eta(spec.params);
  if (grid.x_min() != 0.0 || grid.boundary() != Boundary::dirichlet) {
    throw Error(ErrorCode::InvalidArgument, "exact states need a half-line grid (x_min = 0, dirichlet)");
  }
  const long s = spec.params.shift_steps(grid);
  if (std::exp(-2.0 * spec.kappa * grid.x_max()) > 1e-10) {
    std::ostringstream msg;
    msg << "domain too short: exp(-2 kappa x_max) = " << std::exp(-2.0 * spec.kappa * grid.x_max())
        << " > 1e-10";
    throw Error(ErrorCode::DomainTooShort, msg.str());
  }
  const std::vector<double> alpha = spec.alpha.sample(grid, s);
  std::vector<Complex> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = std::exp(-spec.kappa * grid.x(k)) * alpha[k];
  }
  Wavefunction raw(grid, std::move(values));
  const double norm2 = raw.squared_norm();
  Wavefunction psi = normalize(raw);
  return {std::move(psi), 1.0 / std::sqrt(norm2)};
}

namespace {

long radius_steps(double radius, const Grid& grid) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "exclusion radius must be finite and >= 0");
  }
  return static_cast<long>(std::ceil(radius / grid.dx() - 1e-9));
}

// Points within `rad` steps of a zero of psi: floored samples or sign
// changes of the amplitude branch between neighbours.
void exclude_nodes(const Wavefunction& psi, long rad, std::vector<bool>& excluded) {
  const long n = static_cast<long>(psi.size());
  const AmplitudeBranch branch = amplitude_branch(psi);
  double max_p = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) max_p = std::max(max_p, std::norm(psi[k]));
  const double eps = kDensityFloorRatio * max_p;
  const bool periodic = psi.grid().boundary() == Boundary::periodic;
  auto mark = [&](long lo, long hi) {
    for (long j = lo; j <= hi; ++j) {
      if (periodic) {
        excluded[static_cast<std::size_t>(positive_mod(j, n))] = true;
      } else if (j >= 0 && j < n) {
        excluded[static_cast<std::size_t>(j)] = true;
      }
    }
  };
  for (long k = 0; k < n; ++k) {
    if (std::norm(psi[static_cast<std::size_t>(k)]) <= eps) mark(k - rad, k + rad);
    if (k + 1 < n && branch.amplitude[static_cast<std::size_t>(k)].real() *
                             branch.amplitude[static_cast<std::size_t>(k + 1)].real() < 0.0) {
      mark(k + 1 - std::max(rad, 1L), k + std::max(rad, 1L));
    }
  }
}

void exclude_walls(const Grid& grid, long width, std::vector<bool>& excluded) {
  if (grid.boundary() == Boundary::periodic) return;
  const long n = static_cast<long>(grid.size());
  for (long k = 0; k < n; ++k) {
    if (k < width || k >= n - width) excluded[static_cast<std::size_t>(k)] = true;
  }
}

struct Retained {
  std::vector<bool> excluded;
  std::size_t kept = 0;
};

Retained nonlinear_exclusions(const Wavefunction& psi, const NonlinearParams& params,
                              double radius) {
  const Grid& grid = psi.grid();
  Retained r{std::vector<bool>(grid.size(), false), 0};
  const long s = params.is_linear() ? 0 : params.shift_steps(grid);
  exclude_walls(grid, std::max<long>(s, static_cast<long>(stencil_radius(StencilOrder::sixth))),
                r.excluded);
  exclude_nodes(psi, radius_steps(radius, grid), r.excluded);
  r.kept = static_cast<std::size_t>(std::count(r.excluded.begin(), r.excluded.end(), false));
  if (r.kept == 0) throw Error(ErrorCode::AllPointsExcluded, "every point was excluded");
  return r;
}

// H psi with sixth-order stencils and no external potential.
std::vector<Complex> stationary_hamiltonian(const Wavefunction& psi, const NonlinearParams& params,
                                            const PhysConstants& consts) {
  const ShiftPolicy policy =
      psi.grid().boundary() == Boundary::periodic ? ShiftPolicy::periodic : ShiftPolicy::floor;
  std::vector<Complex> h = second_derivative(psi.values(), psi.grid(), StencilOrder::sixth);
  const std::vector<Complex> f =
      apply_nonlinear_term(psi, params, consts, policy, StencilOrder::sixth);
  const double kinetic = -consts.kinetic_scale();
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = kinetic * h[k] + f[k];
  return h;
}

// |E| times the largest |psi| among retained points; 1 stands in for E = 0.
double residual_scale(double E, const Wavefunction& psi, const std::vector<bool>& excluded) {
  double m = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (!excluded[k]) m = std::max(m, std::abs(psi[k]));
  }
  if (m == 0.0) throw Error(ErrorCode::ZeroNorm, "wavefunction vanishes on the retained points");
  return (E != 0.0 ? std::abs(E) : 1.0) * m;
}

}  // namespace

ResidualReport nonlinear_residual(const Wavefunction& psi, double E, const NonlinearParams& params,
                                  const PhysConstants& consts, double exclusion_radius) {
  const Retained kept = nonlinear_exclusions(psi, params, exclusion_radius);
  const std::vector<Complex> h = stationary_hamiltonian(psi, params, consts);
  double worst = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!kept.excluded[k]) worst = std::max(worst, std::abs(h[k] - E * psi[k]));
  }
  const double n = static_cast<double>(psi.size());
  return {worst / residual_scale(E, psi, kept.excluded), (n - static_cast<double>(kept.kept)) / n};
}

double residual_energy(const Wavefunction& psi, const NonlinearParams& params,
                       const PhysConstants& consts, double exclusion_radius) {
  const Retained kept = nonlinear_exclusions(psi, params, exclusion_radius);
  const std::vector<Complex> h = stationary_hamiltonian(psi, params, consts);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (kept.excluded[k]) continue;
    num += (std::conj(psi[k]) * h[k]).real();
    den += std::norm(psi[k]);
  }
  if (den == 0.0) throw Error(ErrorCode::ZeroNorm, "retained points carry no weight");
  return num / den;
}

DegeneracyReport degeneracy_check(const PeriodicProfile& alpha_1, const PeriodicProfile& alpha_2,
                                  double kappa, const NonlinearParams& params,
                                  const PhysConstants& consts, const Grid& grid,
                                  double exclusion_radius, double tolerance) {
  const double E = exact_energy(kappa, params);
  const ExactState s1 = build_exact_state({kappa, alpha_1, params}, grid);
  const ExactState s2 = build_exact_state({kappa, alpha_2, params}, grid);
  DegeneracyReport report;
  report.E_1 = residual_energy(s1.psi, params, consts, exclusion_radius);
  report.E_2 = residual_energy(s2.psi, params, consts, exclusion_radius);
  report.residual_1 = nonlinear_residual(s1.psi, E, params, consts, exclusion_radius).max_residual;
  report.residual_2 = nonlinear_residual(s2.psi, E, params, consts, exclusion_radius).max_residual;
  const double band = tolerance * std::abs(E);
  report.both_pass = report.residual_1 < tolerance && report.residual_2 < tolerance &&
                     std::abs(report.E_1 - E) <= band && std::abs(report.E_2 - E) <= band;
  return report;
}

CotangentPotentialParams cotangent_params(double kappa, const NonlinearParams& params,
                                          const PhysConstants& consts) {
  consts.validate();
  const double E = exact_energy(kappa, params);
  const double beta = 2.0 * std::numbers::pi / params.shift_length();
  return {E + consts.kinetic_scale() * (kappa * kappa - beta * beta),
          -consts.hbar * consts.hbar * kappa * beta / consts.mass, beta};
}

namespace {

long cotangent_period_steps(const CotangentPotentialParams& cot, const Grid& grid) {
  if (!(cot.beta > 0.0) || !std::isfinite(cot.beta)) {
    throw Error(ErrorCode::DomainError, "beta must be positive and finite");
  }
  return grid.steps_for(2.0 * std::numbers::pi / cot.beta);
}

}  // namespace

Potential cotangent_potential(const CotangentPotentialParams& cot, const Grid& grid) {
  const long s = cotangent_period_steps(cot, grid);
  const long origin = origin_index(grid);
  std::vector<double> values(grid.size(), 0.0);
  std::vector<bool> mask(grid.size(), false);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const long r = positive_mod(origin + static_cast<long>(k), s);
    if ((2 * r) % s == 0) {
      mask[k] = true;
      continue;
    }
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(s);
    values[k] = cot.A + cot.B * std::cos(theta) / std::sin(theta);
  }
  std::ostringstream id;
  id << "cotangent(A=" << cot.A << ",B=" << cot.B << ",beta=" << cot.beta << ")";
  return {grid, std::move(values), std::move(mask), id.str()};
}

double linear_residual_cotangent(const Wavefunction& psi, double E,
                                 const CotangentPotentialParams& cot, const PhysConstants& consts,
                                 double exclusion_radius, StencilOrder order) {
  const Grid& grid = psi.grid();
  const Potential V = cotangent_potential(cot, grid);
  const long rad = radius_steps(exclusion_radius, grid);
  const long n = static_cast<long>(grid.size());
  std::vector<bool> excluded(grid.size(), false);
  exclude_walls(grid, static_cast<long>(stencil_radius(order)), excluded);
  for (long k = 0; k < n; ++k) {
    if (!V.singular_mask[static_cast<std::size_t>(k)]) continue;
    for (long j = k - rad; j <= k + rad; ++j) {
      if (grid.boundary() == Boundary::periodic) {
        excluded[static_cast<std::size_t>(positive_mod(j, n))] = true;
      } else if (j >= 0 && j < n) {
        excluded[static_cast<std::size_t>(j)] = true;
      }
    }
  }
  const std::vector<Complex> d2 = second_derivative(psi.values(), grid, order);
  const double kinetic = -consts.kinetic_scale();
  double worst = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < d2.size(); ++k) {
    if (excluded[k]) continue;
    any = true;
    const Complex r = kinetic * d2[k] + (V.values[k] - E) * psi[k];
    worst = std::max(worst, std::abs(r));
  }
  if (!any) throw Error(ErrorCode::AllPointsExcluded, "every point was excluded");
  return worst / residual_scale(E, psi, excluded);
}

}  // namespace infonls
