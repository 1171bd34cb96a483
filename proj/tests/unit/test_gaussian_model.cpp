#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conformal/gaussian_model.hpp"

namespace conformal {
namespace {

BivariateGaussian unit(double rho) { return BivariateGaussian::make(0, 0, 1, 1, rho); }

// Composite Simpson rule, test-side oracle.
template <typename F>
double simpson(F f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

BivariateGaussian random_gaussian(RandomStream& rng) {
  const double sx = 0.2 + 3.0 * rng.uniform();
  const double sy = 0.2 + 3.0 * rng.uniform();
  const double r = -0.95 + 1.9 * rng.uniform();
  return BivariateGaussian::make(-10 + 20 * rng.uniform(), -10 + 20 * rng.uniform(),
                                 sx, sy, r * sx * sy);
}

TEST(GaussianModel, ValidationRejectsDegenerateCovariance) {
  EXPECT_THROW(BivariateGaussian::make(0, 0, 0, 1, 0), std::invalid_argument);
  EXPECT_THROW(BivariateGaussian::make(0, 0, 1, -1, 0), std::invalid_argument);
  EXPECT_THROW(BivariateGaussian::make(0, 0, 1, 1, 1.0), std::invalid_argument);
  EXPECT_THROW(BivariateGaussian::make(0, 0, 2, 3, -6.0), std::invalid_argument);
  EXPECT_NO_THROW(BivariateGaussian::make(0, 0, 2, 3, 5.9));
}

TEST(GaussianModel, CorrelationFromCovarianceEntry) {
  EXPECT_DOUBLE_EQ(unit(0.5).correlation(), 0.5);
  EXPECT_DOUBLE_EQ(BivariateGaussian::make(0, 0, 2, 4, 4.0).correlation(), 0.5);
}

TEST(GaussianModel, ConditionalMeanExamples) {
  EXPECT_DOUBLE_EQ(conditional_mean(unit(0.5), 0.0), 0.0);
  EXPECT_DOUBLE_EQ(conditional_mean(unit(0.0), 7.3), 0.0);
  EXPECT_DOUBLE_EQ(conditional_mean(unit(0.5), 2.0), 1.0);
}

TEST(GaussianModel, ConditionalVarianceExamples) {
  EXPECT_DOUBLE_EQ(conditional_variance(unit(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(conditional_variance(unit(0.5)), 0.75);
  // sigma_y = 2, r = 0.8 -> rho_cov = 0.8 * 1 * 2.
  EXPECT_NEAR(conditional_variance(BivariateGaussian::make(0, 0, 1, 2, 1.6)), 1.44,
              1e-12);
}

TEST(GaussianModel, ConditionalVarianceIndependentOfX) {
  RandomStream rng(3);
  const auto q = random_gaussian(rng);
  const double v = conditional_variance(q);
  // The density at the conditional mean only depends on the variance.
  const double peak = conditional_density(q, q.mu_x, conditional_mean(q, q.mu_x));
  for (int i = 0; i < 100; ++i) {
    const double x = -50 + 100 * rng.uniform();
    EXPECT_EQ(conditional_variance(q), v);
    EXPECT_NEAR(conditional_density(q, x, conditional_mean(q, x)), peak, 1e-12 * peak);
  }
}

TEST(GaussianModel, ConditionalDensityExamples) {
  EXPECT_NEAR(conditional_density(unit(0.0), 1.5, 0.0), 1.0 / std::sqrt(2 * std::numbers::pi),
              1e-15);
  // Normal pdf at 0 with mean 1, variance 0.75 (scipy.stats.norm reference).
  EXPECT_NEAR(conditional_density(unit(0.5), 2.0, 0.0), 0.23651014781891838, 1e-15);
  const auto q = unit(0.5);
  const double m = conditional_mean(q, 1.3);
  for (double d : {0.1, 0.7, 2.5}) {
    EXPECT_DOUBLE_EQ(conditional_density(q, 1.3, m + d), conditional_density(q, 1.3, m - d));
  }
}

TEST(GaussianModel, ConditionalDensityIntegratesToOne) {
  RandomStream rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto q = random_gaussian(rng);
    const double x = q.mu_x + q.sigma_x * (-2 + 4 * rng.uniform());
    const double m = conditional_mean(q, x);
    const double sd = std::sqrt(conditional_variance(q));
    const double mass = simpson([&](double y) { return conditional_density(q, x, y); },
                                m - 8 * sd, m + 8 * sd, 4000);
    EXPECT_NEAR(mass, 1.0, 1e-6);
  }
}

TEST(GaussianModel, JointDensityMatchesFactorization) {
  RandomStream rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto q = random_gaussian(rng);
    const Example z{q.mu_x + rng.uniform(), q.mu_y - rng.uniform()};
    const double marginal = normal_pdf(z.x, q.mu_x, q.sigma_x * q.sigma_x);
    EXPECT_NEAR(density(q, z), marginal * conditional_density(q, z.x, z.y),
                1e-12 * density(q, z));
  }
}

TEST(GaussianModel, SampleEmptyAndDeterministic) {
  RandomStream rng(1);
  EXPECT_TRUE(sample(unit(0.5), rng, 0).empty());

  RandomStream a(99);
  RandomStream b(99);
  EXPECT_EQ(sample(unit(0.5), a, 500), sample(unit(0.5), b, 500));
}

TEST(GaussianModel, SampleMomentsMatch) {
  RandomStream rng(2024);
  const std::size_t n = 100000;
  const auto q = unit(0.5);
  const auto xs = sample(q, rng, n);
  double mx = 0, my = 0;
  for (const auto& z : xs) {
    mx += z.x;
    my += z.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& z : xs) {
    sxx += (z.x - mx) * (z.x - mx);
    syy += (z.y - my) * (z.y - my);
    sxy += (z.x - mx) * (z.y - my);
  }
  EXPECT_NEAR(mx, 0.0, 0.02);
  EXPECT_NEAR(my, 0.0, 0.02);
  EXPECT_NEAR(sxy / std::sqrt(sxx * syy), 0.5, 0.02);
}

TEST(GaussianModel, SampleCovarianceWithinFiveStandardErrors) {
  RandomStream rng(77);
  const auto q = BivariateGaussian::make(1.0, -2.0, 1.5, 0.7, -0.63);
  const std::size_t n = 100000;
  const auto xs = sample(q, rng, n);
  double mx = 0, my = 0;
  for (const auto& z : xs) {
    mx += z.x;
    my += z.y;
  }
  mx /= n;
  my /= n;
  double cxx = 0, cyy = 0, cxy = 0;
  for (const auto& z : xs) {
    cxx += (z.x - mx) * (z.x - mx);
    cyy += (z.y - my) * (z.y - my);
    cxy += (z.x - mx) * (z.y - my);
  }
  cxx /= n;
  cyy /= n;
  cxy /= n;
  const double vx = q.sigma_x * q.sigma_x;
  const double vy = q.sigma_y * q.sigma_y;
  const double nn = static_cast<double>(n);
  // Standard errors of Gaussian sample covariances.
  EXPECT_NEAR(cxx, vx, 5 * std::sqrt(2 * vx * vx / nn));
  EXPECT_NEAR(cyy, vy, 5 * std::sqrt(2 * vy * vy / nn));
  EXPECT_NEAR(cxy, q.rho_cov, 5 * std::sqrt((vx * vy + q.rho_cov * q.rho_cov) / nn));
}

}  // namespace
}  // namespace conformal
