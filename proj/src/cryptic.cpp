#include "conformal/cryptic.hpp"

#include <algorithm>
#include <cmath>

namespace conformal {

double cryptic_line(const BivariateGaussian& q0, double x) {
  q0.validate();
  return q0.mu_y + q0.correlation() * (q0.sigma_y / q0.sigma_x) * (x - q0.mu_x);
}

CrypticPair cryptic_shift(const BivariateGaussian& q0, double delta_mu_x) {
  q0.validate();
  const double delta_mu_y =
      q0.correlation() * (q0.sigma_y / q0.sigma_x) * delta_mu_x;
  return CrypticPair{q0, q0.with_mean(q0.mu_x + delta_mu_x, q0.mu_y + delta_mu_y)};
}

ConditionReport verify_conditions(const CrypticPair& pair) {
  pair.q0.validate();
  pair.q1.validate();
  ConditionReport report;
  for (int k = -5; k <= 5; ++k) {
    const double x = pair.q0.mu_x + k * pair.q0.sigma_x;
    const double diff =
        std::abs(conditional_mean(pair.q0, x) - conditional_mean(pair.q1, x));
    report.cond1_max_residual = std::max(report.cond1_max_residual, diff);
  }
  report.cond2_residual = std::abs(conditional_variance(pair.q0) -
                                   conditional_variance(pair.q1));
  return report;
}

double line_offset(const CrypticPair& pair) {
  return pair.q1.mu_y - cryptic_line(pair.q0, pair.q1.mu_x);
}

}  // namespace conformal
