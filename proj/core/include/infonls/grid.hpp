#pragma once

// Uniform 1-D grid, wavefunction/density containers and the shift and
// finite-difference operators shared by every other module.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace infonls {

using Complex = std::complex<double>;

/// Ratio of the density floor to max(p).
inline constexpr double kDensityFloorRatio = 1e-12;

struct PhysConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const;
  /// hbar^2 / (2 m), the kinetic prefactor.
  double kinetic_scale() const { return hbar * hbar / (2.0 * mass); }
  bool operator==(const PhysConstants&) const = default;
};

enum class Boundary { periodic, dirichlet };

/// How samples that fall outside the grid are filled by shift_density.
///   periodic  - wrap around.
///   floor     - the density floor 1e-12 * max(p).
///   geometric - continue each shift lattice geometrically,
///               p(x + s) = p(x)^2 / p(x - s); exact for exponential tails.
enum class ShiftPolicy { periodic, floor, geometric };

/// Finite-difference stencil for second derivatives.
enum class StencilOrder { second = 2, sixth = 6 };

/// x_k = x_min + k * dx, k = 0 .. n_points - 1.
///
/// Dirichlet grids hold interior samples only: the walls sit one step
/// outside, at x_min - dx and x_min + n_points * dx, where the field is 0.
/// Quadrature is the trapezoidal rule, which for both boundary kinds reduces
/// to dx * sum (periodic wrap, or zero-valued walls).
class Grid {
 public:
  Grid(double x_min, double dx, std::size_t n_points, Boundary boundary);

  double x_min() const { return x_min_; }
  double dx() const { return dx_; }
  std::size_t size() const { return n_points_; }
  Boundary boundary() const { return boundary_; }
  double x(std::size_t k) const { return x_min_ + static_cast<double>(k) * dx_; }
  double x_max() const { return x(n_points_ - 1); }
  std::vector<double> coordinates() const;

  double integrate(std::span<const double> f) const;
  Complex integrate(std::span<const Complex> f) const;

  /// Number of grid steps spanned by `length`; throws IncommensurateShift
  /// unless length / dx is an integer within relative 1e-9.
  long steps_for(double length) const;

  bool operator==(const Grid&) const = default;

 private:
  double x_min_;
  double dx_;
  std::size_t n_points_;
  Boundary boundary_;
};

/// Parameters (L, eta, cal_E) of the nonlinearity, with cal_E * L^2 =
/// hbar^2 / (4 m) enforced at construction.
class NonlinearParams {
 public:
  /// Requires L > 0 and 0 < eta <= 1.
  static NonlinearParams create(double L, double eta, const PhysConstants& c);
  /// eta = 0: the linear theory, for which the nonlinear term is identically 0.
  static NonlinearParams linear(double L, const PhysConstants& c);

  double L() const { return L_; }
  double eta() const { return eta_; }
  double cal_E() const { return cal_E_; }
  bool is_linear() const { return eta_ == 0.0; }
  /// eta = 1 is the unregularized, singular theory.
  bool unregularized() const { return eta_ == 1.0; }
  /// eta * L.
  double shift_length() const { return eta_ * L_; }
  /// eta * L / dx as an integer; throws IncommensurateShift.
  long shift_steps(const Grid& grid) const;

  bool operator==(const NonlinearParams&) const = default;

 private:
  NonlinearParams(double L, double eta, double cal_E)
      : L_(L), eta_(eta), cal_E_(cal_E) {}
  double L_;
  double eta_;
  double cal_E_;
};

class Density;

class Wavefunction {
 public:
  Wavefunction(Grid grid, std::vector<Complex> values);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t k) const { return values_[k]; }
  Complex& operator[](std::size_t k) { return values_[k]; }

  double squared_norm() const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

class Density {
 public:
  Density(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  double integral() const { return grid_.integrate(values_); }
  double max() const;
  /// kDensityFloorRatio * max(p).
  double floor() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

Density density(const Wavefunction& psi);

/// Throws ZeroNorm when the squared norm is below 1e-300.
Wavefunction normalize(const Wavefunction& psi);

/// out[k] = p[k + steps]; out-of-range samples are filled per `policy`.
/// Throws StepTooLarge if |steps| >= n_points.
Density shift_density(const Density& p, long steps, ShiftPolicy policy);

/// Second-order central difference; Dirichlet ghosts are 0, periodic wraps.
Wavefunction laplacian(const Wavefunction& psi);

/// Second derivative of an arbitrary sampled field on `grid`.
std::vector<double> second_derivative(std::span<const double> f, const Grid& grid,
                                      StencilOrder order = StencilOrder::second);
std::vector<Complex> second_derivative(std::span<const Complex> f, const Grid& grid,
                                       StencilOrder order = StencilOrder::second);

/// Half-width of the stencil in grid points.
constexpr std::size_t stencil_radius(StencilOrder order) {
  return order == StencilOrder::second ? 1 : 3;
}

}  // namespace infonls
