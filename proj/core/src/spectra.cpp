#include "infonls/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "infonls/error.hpp"
#include "infonls/nonlinearity.hpp"

namespace infonls {

std::string_view to_string(ShiftMethod method) {
  switch (method) {
    case ShiftMethod::numeric_expectation: return "numeric_expectation";
    case ShiftMethod::node_profile: return "node_profile";
    case ShiftMethod::nodeless_integral: return "nodeless_integral";
    case ShiftMethod::sho_closed_form: return "sho_closed_form";
  }
  return "unknown";
}

EigenSolution solve_linear_spectrum(const Potential& V, const PhysConstants& consts,
                                    std::size_t n_states) {
  consts.validate();
  const Grid& grid = V.grid;
  const std::size_t n = grid.size();
  if (n_states == 0 || n_states >= n / 4) {
    throw Error(ErrorCode::InvalidArgument, "n_states must be in [1, n_points / 4)");
  }
  if (V.has_singularities()) {
    throw Error(ErrorCode::InvalidArgument, "eigensolver needs a nonsingular potential");
  }
  for (double v : V.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "potential is not finite");
  }

  const double t = consts.kinetic_scale() / (grid.dx() * grid.dx());
  std::vector<double> diag(n), off(n - 1, -t);
  for (std::size_t k = 0; k < n; ++k) diag[k] = 2.0 * t + V.values[k];

  const auto ln = static_cast<lapack_int>(n);
  const auto il = lapack_int{1};
  const auto iu = static_cast<lapack_int>(n_states);
  lapack_int found = 0;
  lapack_int nsplit = 0;
  std::vector<double> w(n);
  std::vector<lapack_int> iblock(n), isplit(n);
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_dstebz('I', 'B', ln, 0.0, 0.0, il, iu, abstol, diag.data(), off.data(),
                                   &found, &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0 || found != iu) {
    throw Error(ErrorCode::ConvergenceFailure,
                "bisection failed (info = " + std::to_string(info) + ")");
  }
  std::vector<double> z(n * n_states);
  std::vector<lapack_int> ifail(n_states);
  info = LAPACKE_dstein(LAPACK_COL_MAJOR, ln, diag.data(), off.data(), found, w.data(),
                        iblock.data(), isplit.data(), z.data(), ln, ifail.data());
  if (info != 0) {
    throw Error(ErrorCode::ConvergenceFailure,
                "inverse iteration failed (info = " + std::to_string(info) + ")");
  }

  // dstebz with order 'B' groups by block; sort the pairs by energy.
  std::vector<std::size_t> order(n_states);
  for (std::size_t j = 0; j < n_states; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] < w[b]; });

  EigenSolution solution;
  solution.potential_id = V.id;
  const double scale = 1.0 / std::sqrt(grid.dx());
  for (std::size_t j : order) {
    const double* col = z.data() + j * n;
    double max_abs = 0.0;
    for (std::size_t k = 0; k < n; ++k) max_abs = std::max(max_abs, std::abs(col[k]));
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(col[k]) > 1e-3 * max_abs) {
        sign = col[k] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    std::vector<Complex> values(n);
    for (std::size_t k = 0; k < n; ++k) values[k] = sign * scale * col[k];
    solution.energies.push_back(w[j]);
    solution.states.push_back(normalize(Wavefunction(grid, std::move(values))));
  }
  return solution;
}

ShiftResult first_order_shift_numeric(const Wavefunction& state, const NonlinearParams& params,
                                      const PhysConstants& consts, ShiftPolicy policy,
                                      int state_index) {
  const std::vector<Complex> f_psi = apply_nonlinear_term(state, params, consts, policy);
  double sum = 0.0;
  for (std::size_t k = 0; k < f_psi.size(); ++k) sum += (std::conj(state[k]) * f_psi[k]).real();
  const double shift = state.grid().dx() * sum / state.squared_norm();
  if (!std::isfinite(shift)) throw Error(ErrorCode::NonFinite, "energy shift is not finite");
  return {params.eta(), params.L(), state_index, shift, ShiftMethod::numeric_expectation};
}

namespace {

void require_unit_interval(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::DomainError, "eta must lie in [0, 1]");
}

}  // namespace

double node_shift_eta_profile(double eta) {
  require_unit_interval(eta);
  return std::sqrt(eta * (1.0 - eta)) * (1.0 - 4.0 * eta);
}

double sho_ground_shift_closed(double eta, double L_over_a) {
  require_unit_interval(eta);
  return eta * eta * (1.0 - eta) * (1.0 - 3.0 * eta) / 4.0 * L_over_a * L_over_a;
}

double nodeless_calibration(const PhysConstants& consts) {
  return consts.hbar * consts.hbar / (96.0 * consts.mass);
}

double nodeless_shift_integral(const Density& p, double eta, double L,
                               const PhysConstants& consts) {
  require_unit_interval(eta);
  const double max_p = p.max();
  const auto values = p.values();
  if (*std::min_element(values.begin(), values.end()) < 1e-6 * max_p) {
    throw Error(ErrorCode::NodeDetected, "density drops below 1e-6 of its maximum");
  }
  const Grid& grid = p.grid();
  const long n = static_cast<long>(p.size());
  const bool periodic = grid.boundary() == Boundary::periodic;
  const double h = grid.dx();
  auto at = [&](long j) { return values[static_cast<std::size_t>((j % n + n) % n)]; };

  const long lo = periodic ? 0 : 2;
  const long hi = periodic ? n : n - 2;
  const double c1 = 6.0 * (2.0 - 3.0 * eta) * (2.0 - 3.0 * eta);
  const double c2 = 12.0 * (3.0 - 8.0 * eta + 6.0 * eta * eta);
  double sum = 0.0;
  for (long k = lo; k < hi; ++k) {
    const double m2 = at(k - 2), m1 = at(k - 1), p0 = at(k), p1 = at(k + 1), p2 = at(k + 2);
    const double d1 = (p1 - m1) / (2.0 * h);
    const double d2 = (p1 - 2.0 * p0 + m1) / (h * h);
    const double d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
    const double d4 = (p2 - 4.0 * p1 + 6.0 * p0 - 4.0 * m1 + m2) / (h * h * h * h);
    const double bracket = c1 * std::pow(d1, 4) - c2 * p0 * d1 * d1 * d2 +
                           4.0 * p0 * p0 * d1 * d3 + p0 * p0 * (3.0 * d2 * d2 - 2.0 * p0 * d4);
    sum += bracket / (p0 * p0 * p0);
  }
  return nodeless_calibration(consts) * L * L * eta * eta * h * sum;
}

EtaMinimum minimize_over_eta(const std::function<double(double)>& shift_fn) {
  constexpr double lo = 1e-4;
  constexpr double hi = 1.0 - 1e-4;
  constexpr int scan_points = 2001;
  auto eval = [&](double eta) {
    const double v = shift_fn(eta);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteObjective,
                  "objective is not finite at eta = " + std::to_string(eta));
    }
    return v;
  };

  const double step = (hi - lo) / (scan_points - 1);
  int best = 0;
  double best_value = eval(lo);
  for (int i = 1; i < scan_points; ++i) {
    const double v = eval(lo + step * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = lo + step * std::max(best - 1, 0);
  double b = lo + step * std::min(best + 1, scan_points - 1);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  const double eta_star = 0.5 * (a + b);
  return {eta_star, eval(eta_star)};
}

}  // namespace infonls
