#pragma once

#include "conformal/gaussian_model.hpp"

namespace conformal {

// A pre/post-change pair whose oracle conformity scores share one
// distribution: same covariance, and the mean moves along the line
//   mu_1y - mu_0y = r * (sigma_y / sigma_x) * (mu_1x - mu_0x).
struct CrypticPair {
  BivariateGaussian q0;
  BivariateGaussian q1;
};

// Moves the mean of q0 by delta_mu_x along x and by the matching amount along
// y, keeping the covariance.
CrypticPair cryptic_shift(const BivariateGaussian& q0, double delta_mu_x);

// y-coordinate of the cryptic line through the mean of q0 at abscissa x.
double cryptic_line(const BivariateGaussian& q0, double x);

struct ConditionReport {
  // max |E_q0[Y|X=x] - E_q1[Y|X=x]| over x = mu_0x + k*sigma_0x, k = -5..5.
  double cond1_max_residual = 0.0;
  // |Var_q0[Y|X] - Var_q1[Y|X]|.
  double cond2_residual = 0.0;
};

// Residuals of the conditional-mean and conditional-variance invariance
// conditions. Reported raw; callers choose their tolerance.
ConditionReport verify_conditions(const CrypticPair& pair);

// Signed vertical offset of q1's mean from the cryptic line of q0.
double line_offset(const CrypticPair& pair);

}  // namespace conformal
