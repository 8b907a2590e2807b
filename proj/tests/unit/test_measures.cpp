#include <gtest/gtest.h>

#include <numbers>

#include "helpers.hpp"
#include "infonls/measures.hpp"
#include "infonls/nonlinearity.hpp"

namespace infonls {
namespace {

using testing::expect_error;

constexpr double kPi = std::numbers::pi;

Density gaussian_density(const Grid& g, double sigma, double center = 0.0) {
  return testing::sample_density(g, [=](double x) {
    const double z = (x - center) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
  });
}

// Smooth, strictly positive, normalized density on the periodic box [0, 10).
Density wavy_density(const Grid& g) {
  const double box = g.dx() * static_cast<double>(g.size());
  auto raw = testing::sample_density(g, [=](double x) {
    return 1.0 + 0.3 * std::cos(2.0 * kPi * x / box) + 0.1 * std::sin(6.0 * kPi * x / box);
  });
  std::vector<double> v(raw.values().begin(), raw.values().end());
  const double norm = raw.integral();
  for (auto& x : v) x /= norm;
  return Density(g, v);
}

TEST(KlDivergence, ConstantDensityIsZero) {
  const Grid g(0.0, 0.01, 500, Boundary::periodic);
  const Density p(g, std::vector<double>(500, 0.2));
  EXPECT_NEAR(kl_divergence_shifted(p, 0.1, ShiftPolicy::periodic).value, 0.0, 1e-15);
}

TEST(KlDivergence, GaussianFollowsQuadraticLaw) {
  const Grid g = Grid(-10.0, 0.001, 20001, Boundary::dirichlet);
  const auto p = gaussian_density(g, 1.0);
  const double L = 0.01;
  const auto kl = kl_divergence_shifted(p, L, ShiftPolicy::floor);
  EXPECT_NEAR(kl.value / (L * L / 2.0), 1.0, 0.02);
  EXPECT_LT(std::abs(kl.quadrature_error_estimate), 1e-3 * kl.value);
}

TEST(KlDivergence, IncommensurateLength) {
  const Grid g(0.0, 0.01, 100, Boundary::periodic);
  const Density p(g, std::vector<double>(100, 1.0));
  expect_error(ErrorCode::IncommensurateShift,
               [&] { kl_divergence_shifted(p, 0.0105, ShiftPolicy::periodic); });
}

TEST(KlDivergenceProperty, GibbsInequalityOnPeriodicGrids) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g(0.0, 0.02, 300, Boundary::periodic);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng) * u(rng);
    double norm = g.integrate(v);
    for (auto& x : v) x /= norm;
    const Density p(g, v);
    for (double L : {0.02, 0.2, 1.0}) {
      EXPECT_GE(kl_divergence_shifted(p, L, ShiftPolicy::periodic).value, -1e-10);
    }
  }
}

TEST(FisherInformation, ConstantDensityIsZero) {
  const Grid g(0.0, 0.01, 400, Boundary::periodic);
  EXPECT_NEAR(fisher_information(Density(g, std::vector<double>(400, 0.25))).value, 0.0, 1e-15);
}

TEST(FisherInformation, GaussianIsInverseVariance) {
  for (double sigma : {0.7, 1.0, 1.5}) {
    const Grid g = testing::box_grid(12.0, 4096);
    const auto fi = fisher_information(gaussian_density(g, sigma));
    EXPECT_NEAR(fi.value * sigma * sigma, 1.0, 0.01) << "sigma = " << sigma;
  }
}

TEST(FisherInformation, TranslationInvariantOnPeriodicGrid) {
  const Grid g(-10.0, 0.01, 2000, Boundary::periodic);
  const auto p = gaussian_density(g, 1.2);
  std::vector<double> moved(p.size());
  const std::size_t a = 137;
  for (std::size_t k = 0; k < p.size(); ++k) moved[(k + a) % p.size()] = p[k];
  EXPECT_NEAR(fisher_information(Density(g, moved)).value, fisher_information(p).value, 1e-10);
}

TEST(ShannonEntropy, UniformDensities) {
  const Grid unit(0.0, 0.01, 100, Boundary::periodic);
  EXPECT_NEAR(shannon_entropy(Density(unit, std::vector<double>(100, 1.0))).value, 0.0, 1e-12);
  const Grid wide(0.0, 0.01, 300, Boundary::periodic);
  EXPECT_NEAR(shannon_entropy(Density(wide, std::vector<double>(300, 1.0 / 3.0))).value,
              std::log(3.0), 1e-6);
}

TEST(ShannonEntropy, GaussianMatchesClosedForm) {
  const Grid g = testing::box_grid(12.0, 4096);
  EXPECT_NEAR(shannon_entropy(gaussian_density(g, 1.0)).value / (0.5 * std::log(2.0 * kPi * std::exp(1.0))),
              1.0, 0.01);
}

TEST(FunctionalDerivative, QuadraticFunctional) {
  const Grid g(0.0, 0.05, 40, Boundary::periodic);
  const auto p = testing::sample_density(g, [](double x) { return 1.0 + 0.5 * std::sin(x); });
  const DensityFunctional square{"square", [](const Density& q) {
                                   double s = 0.0;
                                   for (double v : q.values()) s += v * v;
                                   return q.grid().dx() * s;
                                 }};
  const auto d = functional_derivative(square, p);
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(d[k] / (2.0 * p[k]), 1.0, 1e-6);
}

TEST(FunctionalDerivative, KlReproducesUnregularizedBracket) {
  const Grid g(0.0, 0.05, 200, Boundary::periodic);
  const auto p = wavy_density(g);
  const double L = 0.5;
  const PhysConstants c;
  const auto params = NonlinearParams::create(L, 1.0, c);
  const auto d = functional_derivative(kl_functional(L, ShiftPolicy::periodic, params.cal_E()), p);
  const auto bracket = regularized_kl_term(p, params, ShiftPolicy::periodic);
  const double scale = testing::max_abs(bracket.values);
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_NEAR(d[k], bracket.values[k], 1e-4 * scale) << "k = " << k;
  }
}

TEST(FunctionalDerivative, FisherMatchesQuantumPotential) {
  const Grid g(0.0, 0.01, 1000, Boundary::periodic);
  const auto p = wavy_density(g);
  const PhysConstants c;
  const auto d = functional_derivative(fisher_functional(c.hbar * c.hbar / (8.0 * c.mass)), p);
  const auto qp = quantum_potential_term(p, c);
  std::vector<double> target(qp.values.size());
  for (std::size_t k = 0; k < target.size(); ++k) target[k] = -qp.values[k];
  EXPECT_LT(testing::max_abs_diff(d, target), 1e-3 * testing::max_abs(target));
}

TEST(FunctionalDerivative, BumpTooLargeAndBadEps) {
  const Grid g(0.0, 0.1, 16, Boundary::periodic);
  const Density p(g, std::vector<double>(16, 1.0));
  const auto f = shannon_functional();
  expect_error(ErrorCode::BumpTooLarge, [&] { functional_derivative(f, p, 1.5); });
  expect_error(ErrorCode::InvalidArgument, [&] { functional_derivative(f, p, 0.0); });
  expect_error(ErrorCode::InvalidArgument, [&] { functional_derivative(f, p, -1e-6); });
}

TEST(FunctionalDerivative, ShannonOfUniform) {
  const Grid g(0.0, 0.1, 16, Boundary::periodic);
  const Density p(g, std::vector<double>(16, 0.625));
  const auto d = functional_derivative(shannon_functional(), p);
  for (double v : d) EXPECT_NEAR(v, -(std::log(0.625) + 1.0), 1e-6);
}

TEST(MeasuresProperty, KlOverFisherLimitLaw) {
  // 2 I_KL / L^2 -> I_F as L -> 0; the relative gap halves (at least) with L.
  const Grid g(0.0, 0.001, 10000, Boundary::periodic);
  const auto p = wavy_density(g);
  const double fisher = fisher_information(p).value;
  std::vector<double> gaps;
  for (double L : {0.4, 0.2, 0.1, 0.05}) {
    const double kl = kl_divergence_shifted(p, L, ShiftPolicy::periodic).value;
    gaps.push_back(std::abs(2.0 * kl / (L * L) - fisher) / fisher);
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) EXPECT_GT(gaps[i - 1] / gaps[i], 1.8);
}

TEST(MeasuresProperty, DerivativePredictsFirstVariation) {
  const Grid g(0.0, 0.05, 200, Boundary::periodic);
  const auto p = wavy_density(g);
  const auto f = kl_functional(0.25, ShiftPolicy::periodic);
  const auto d = functional_derivative(f, p);
  std::vector<double> q(p.size());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = std::cos(2.0 * kPi * g.x(k) / 10.0 * 2.0);
  auto error_at = [&](double eps) {
    std::vector<double> moved(p.values().begin(), p.values().end());
    double predicted = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      moved[k] += eps * q[k] * 0.01;
      predicted += d[k] * eps * q[k] * 0.01 * g.dx();
    }
    return std::abs(f.evaluate(Density(g, moved)) - f.evaluate(p) - predicted);
  };
  const double e1 = error_at(1.0), e2 = error_at(0.5);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

TEST(MeasuresProperty, KlScaledFunctionalNames) {
  EXPECT_FALSE(kl_functional(0.1, ShiftPolicy::periodic).name.empty());
  EXPECT_FALSE(fisher_functional().name.empty());
  EXPECT_FALSE(shannon_functional().name.empty());
}

}  // namespace
}  // namespace infonls
