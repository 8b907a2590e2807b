#include "infonls/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "infonls/error.hpp"

namespace infonls {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::IncommensurateShift: return "IncommensurateShift";
    case ErrorCode::BumpTooLarge: return "BumpTooLarge";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NodeDetected: return "NodeDetected";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::DomainTooShort: return "DomainTooShort";
    case ErrorCode::AllPointsExcluded: return "AllPointsExcluded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void PhysConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  }
}

Grid::Grid(double x_min, double dx, std::size_t n_points, Boundary boundary)
    : x_min_(x_min), dx_(dx), n_points_(n_points), boundary_(boundary) {
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x_min)) {
    throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive and finite");
  }
  if (n_points < 8) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least 8 points");
  }
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> xs(n_points_);
  for (std::size_t k = 0; k < n_points_; ++k) xs[k] = x(k);
  return xs;
}

double Grid::integrate(std::span<const double> f) const {
  return dx_ * std::accumulate(f.begin(), f.end(), 0.0);
}

Complex Grid::integrate(std::span<const Complex> f) const {
  return dx_ * std::accumulate(f.begin(), f.end(), Complex{});
}

long Grid::steps_for(double length) const {
  const double ratio = length / dx_;
  const double nearest = std::round(ratio);
  if (!std::isfinite(ratio) || std::abs(ratio - nearest) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "length " << length << " is not a whole number of grid steps (dx = " << dx_
        << ", ratio = " << ratio << ")";
    throw Error(ErrorCode::IncommensurateShift, msg.str());
  }
  return static_cast<long>(nearest);
}

NonlinearParams NonlinearParams::create(double L, double eta, const PhysConstants& c) {
  c.validate();
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw Error(ErrorCode::InvalidArgument, "nonlinearity length L must be positive");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::DomainError, "eta must lie in (0, 1]");
  }
  return NonlinearParams(L, eta, c.hbar * c.hbar / (4.0 * c.mass * L * L));
}

NonlinearParams NonlinearParams::linear(double L, const PhysConstants& c) {
  auto p = create(L, 1.0, c);
  p.eta_ = 0.0;
  return p;
}

long NonlinearParams::shift_steps(const Grid& grid) const {
  if (is_linear()) return 0;
  const long s = grid.steps_for(shift_length());
  if (s < 1) {
    throw Error(ErrorCode::IncommensurateShift, "eta * L is shorter than one grid step");
  }
  return s;
}

Wavefunction::Wavefunction(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::InvalidArgument, "wavefunction length does not match grid");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::NonFinite, "wavefunction has a non-finite amplitude");
    }
  }
}

double Wavefunction::squared_norm() const {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return grid_.dx() * sum;
}

Density::Density(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::InvalidArgument, "density length does not match grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "density values must be finite and non-negative");
    }
  }
}

double Density::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Density::floor() const { return kDensityFloorRatio * max(); }

Density density(const Wavefunction& psi) {
  std::vector<double> p(psi.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(psi[k]);
  return Density(psi.grid(), std::move(p));
}

Wavefunction normalize(const Wavefunction& psi) {
  const double n2 = psi.squared_norm();
  if (!(n2 >= 1e-300)) throw Error(ErrorCode::ZeroNorm, "cannot normalize a zero wavefunction");
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<Complex> out(psi.values().begin(), psi.values().end());
  for (auto& v : out) v *= scale;
  return Wavefunction(psi.grid(), std::move(out));
}

Density shift_density(const Density& p, long steps, ShiftPolicy policy) {
  const long n = static_cast<long>(p.size());
  if (std::labs(steps) >= n) {
    throw Error(ErrorCode::StepTooLarge, "shift of " + std::to_string(steps) +
                                             " steps on a grid of " + std::to_string(n));
  }
  const double eps = p.floor();
  const auto src = p.values();
  std::vector<double> out(src.size());
  for (long k = 0; k < n; ++k) {
    const long j = k + steps;
    if (j >= 0 && j < n) {
      out[k] = src[j];
      continue;
    }
    switch (policy) {
      case ShiftPolicy::periodic:
        out[k] = src[(j % n + n) % n];
        break;
      case ShiftPolicy::floor:
        out[k] = eps;
        break;
      case ShiftPolicy::geometric: {
        const long back = k - steps;
        if (back >= 0 && back < n) {
          const double here = std::max(src[k], eps);
          out[k] = std::max(here * here / std::max(src[back], eps), eps);
        } else {
          out[k] = eps;
        }
        break;
      }
    }
  }
  return Density(p.grid(), std::move(out));
}

namespace {

template <typename T>
std::vector<T> second_derivative_impl(std::span<const T> f, const Grid& grid, StencilOrder order) {
  const long n = static_cast<long>(f.size());
  if (n != static_cast<long>(grid.size())) {
    throw Error(ErrorCode::InvalidArgument, "field length does not match grid");
  }
  const bool periodic = grid.boundary() == Boundary::periodic;
  auto at = [&](long j) -> T {
    if (j >= 0 && j < n) return f[j];
    if (periodic) return f[(j % n + n) % n];
    return T{};
  };
  const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
  std::vector<T> out(f.size());
  if (order == StencilOrder::second) {
    for (long k = 0; k < n; ++k) out[k] = (at(k + 1) - 2.0 * f[k] + at(k - 1)) * inv_dx2;
    return out;
  }
  static constexpr std::array<double, 4> c6 = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  for (long k = 0; k < n; ++k) {
    T acc = c6[0] * f[k];
    for (long m = 1; m <= 3; ++m) acc += c6[m] * (at(k + m) + at(k - m));
    out[k] = acc * inv_dx2;
  }
  return out;
}

}  // namespace

std::vector<double> second_derivative(std::span<const double> f, const Grid& grid,
                                      StencilOrder order) {
  return second_derivative_impl<double>(f, grid, order);
}

std::vector<Complex> second_derivative(std::span<const Complex> f, const Grid& grid,
                                       StencilOrder order) {
  return second_derivative_impl<Complex>(f, grid, order);
}

Wavefunction laplacian(const Wavefunction& psi) {
  return Wavefunction(psi.grid(), second_derivative(psi.values(), psi.grid()));
}

}  // namespace infonls
