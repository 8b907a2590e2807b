#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "infonls/error.hpp"
#include "infonls/grid.hpp"

namespace infonls::testing {

// Runs `body` and checks that it throws an infonls::Error with `code`.
inline void expect_error(ErrorCode code, const std::function<void()>& body) {
  try {
    body();
    ADD_FAILURE() << "expected " << to_string(code) << ", nothing was thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

template <class F>
Wavefunction sample_psi(const Grid& g, F f) {
  std::vector<Complex> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.x(k));
  return Wavefunction(g, std::move(v));
}

template <class F>
Density sample_density(const Grid& g, F f) {
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.x(k));
  return Density(g, std::move(v));
}

// Periodic grid on [x_min, x_min + n dx).
inline Grid periodic_grid(double x_min, double dx, std::size_t n) {
  return Grid(x_min, dx, n, Boundary::periodic);
}

// Dirichlet grid with walls at -half and +half.
inline Grid box_grid(double half, std::size_t n_interior) {
  const double dx = 2.0 * half / static_cast<double>(n_interior + 1);
  return Grid(-half + dx, dx, n_interior, Boundary::dirichlet);
}

inline Wavefunction random_psi(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> v(g.size());
  for (auto& c : v) c = {d(rng), d(rng)};
  return Wavefunction(g, std::move(v));
}

}  // namespace infonls::testing
