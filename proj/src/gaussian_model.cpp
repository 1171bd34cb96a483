#include "conformal/gaussian_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace conformal {

BivariateGaussian BivariateGaussian::make(double mu_x, double mu_y,
                                          double sigma_x, double sigma_y,
                                          double rho_cov) {
  BivariateGaussian q{mu_x, mu_y, sigma_x, sigma_y, rho_cov};
  q.validate();
  return q;
}

bool BivariateGaussian::valid() const {
  if (!std::isfinite(mu_x) || !std::isfinite(mu_y) ||
      !std::isfinite(sigma_x) || !std::isfinite(sigma_y) ||
      !std::isfinite(rho_cov)) {
    return false;
  }
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) return false;
  return determinant() > 0.0 && std::abs(correlation()) < 1.0;
}

void BivariateGaussian::validate() const {
  if (valid()) return;
  std::ostringstream msg;
  msg << "invalid bivariate Gaussian (mu=(" << mu_x << ", " << mu_y
      << "), sigma=(" << sigma_x << ", " << sigma_y << "), rho_cov=" << rho_cov
      << "): need sigma_x > 0, sigma_y > 0 and |rho_cov| < sigma_x*sigma_y";
  throw std::invalid_argument(msg.str());
}

BivariateGaussian BivariateGaussian::with_mean(double new_mu_x,
                                               double new_mu_y) const {
  BivariateGaussian q = *this;
  q.mu_x = new_mu_x;
  q.mu_y = new_mu_y;
  return q;
}

double conditional_mean(const BivariateGaussian& q, double x) {
  return q.mu_y + q.correlation() * q.sigma_y * (x - q.mu_x) / q.sigma_x;
}

double conditional_variance(const BivariateGaussian& q) {
  const double r = q.correlation();
  return (1.0 - r * r) * q.sigma_y * q.sigma_y;
}

double normal_pdf(double value, double mean, double variance) {
  const double d = value - mean;
  return std::exp(-0.5 * d * d / variance) /
         std::sqrt(2.0 * std::numbers::pi * variance);
}

double conditional_density(const BivariateGaussian& q, double x, double y) {
  return normal_pdf(y, conditional_mean(q, x), conditional_variance(q));
}

double log_density(const BivariateGaussian& q, const Example& z) {
  const double dx = z.x - q.mu_x;
  const double dy = z.y - q.mu_y;
  const double det = q.determinant();
  // Quadratic form with the explicit 2x2 inverse.
  const double quad = (q.sigma_y * q.sigma_y * dx * dx -
                       2.0 * q.rho_cov * dx * dy +
                       q.sigma_x * q.sigma_x * dy * dy) /
                      det;
  return -0.5 * quad - std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det);
}

double density(const BivariateGaussian& q, const Example& z) {
  return std::exp(log_density(q, z));
}

Example sample_one(const BivariateGaussian& q, RandomStream& rng) {
  const double u1 = rng.uniform_open_zero();
  const double u2 = rng.uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  const double n1 = radius * std::cos(angle);
  const double n2 = radius * std::sin(angle);

  const double l21 = q.rho_cov / q.sigma_x;
  const double l22 = std::sqrt(q.sigma_y * q.sigma_y - l21 * l21);
  return Example{q.mu_x + q.sigma_x * n1, q.mu_y + l21 * n1 + l22 * n2};
}

std::vector<Example> sample(const BivariateGaussian& q, RandomStream& rng,
                            std::size_t n) {
  std::vector<Example> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(q, rng));
  return out;
}

}  // namespace conformal
