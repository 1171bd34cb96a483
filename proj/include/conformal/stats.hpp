#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conformal {

struct KSReport {
  double statistic = 0.0;
  std::size_t n = 0;
  double threshold_at_alpha = 0.0;
  bool reject = false;
};

// Asymptotic Kolmogorov coefficient c(alpha); supports alpha in {0.05, 0.01}.
double ks_coefficient(double alpha);

// One-sample KS against U(0, 1), threshold c(alpha) / sqrt(n).
// Throws std::invalid_argument for empty input, values outside [0, 1] or an
// unsupported alpha.
KSReport ks_uniform(std::span<const double> values, double alpha);

// Two-sample KS, threshold c(alpha) * sqrt((m + n) / (m * n)); n in the
// report is m + n.
KSReport two_sample_ks(std::span<const double> a, std::span<const double> b,
                       double alpha);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

// Equal-width bins over [0, 1]; right-open except the last. Values outside
// [0, 1] are clamped into the end bins.
std::vector<HistogramBin> histogram(std::span<const double> values,
                                    std::size_t bins = 20);

// Lag-k sample autocorrelation.
double autocorrelation(std::span<const double> values, std::size_t lag = 1);

double median(std::vector<double> values);

}  // namespace conformal
