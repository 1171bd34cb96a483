#pragma once

#include <cstddef>
#include <vector>

#include "conformal/random_stream.hpp"

namespace conformal {

// One observation z = (x, y).
struct Example {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Example&, const Example&) = default;
};

// Bivariate Gaussian with mean (mu_x, mu_y) and covariance
//   [ sigma_x^2   rho_cov   ]
//   [ rho_cov     sigma_y^2 ]
// rho_cov is the off-diagonal covariance entry; correlation() is derived from
// it. The two readings coincide at unit variances.
struct BivariateGaussian {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double rho_cov = 0.0;

  // Throws std::invalid_argument unless sigmas are positive and the
  // covariance matrix is strictly positive definite.
  static BivariateGaussian make(double mu_x, double mu_y, double sigma_x,
                                double sigma_y, double rho_cov);

  bool valid() const;
  void validate() const;

  double correlation() const { return rho_cov / (sigma_x * sigma_y); }
  double determinant() const {
    return sigma_x * sigma_x * sigma_y * sigma_y - rho_cov * rho_cov;
  }

  // Same covariance, shifted mean.
  BivariateGaussian with_mean(double new_mu_x, double new_mu_y) const;

  friend bool operator==(const BivariateGaussian&,
                         const BivariateGaussian&) = default;
};

double conditional_mean(const BivariateGaussian& q, double x);

// (1 - r^2) sigma_y^2; does not depend on x.
double conditional_variance(const BivariateGaussian& q);

// Density of Y | X = x evaluated at y.
double conditional_density(const BivariateGaussian& q, double x, double y);

double log_density(const BivariateGaussian& q, const Example& z);
double density(const BivariateGaussian& q, const Example& z);

double normal_pdf(double value, double mean, double variance);

// n draws. Each example consumes exactly two uniforms (u1 in (0,1], u2 in
// [0,1)), turned into two standard normals by Box-Muller and mapped through
// the lower Cholesky factor of the covariance.
std::vector<Example> sample(const BivariateGaussian& q, RandomStream& rng,
                            std::size_t n);

Example sample_one(const BivariateGaussian& q, RandomStream& rng);

}  // namespace conformal
