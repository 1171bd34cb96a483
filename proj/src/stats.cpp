#include "conformal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace conformal {

double ks_coefficient(double alpha) {
  if (alpha == 0.05) return 1.358;
  if (alpha == 0.01) return 1.628;
  throw std::invalid_argument("KS threshold tabulated only for alpha 0.05 and "
                              "0.01, got " +
                              std::to_string(alpha));
}

KSReport ks_uniform(std::span<const double> values, double alpha) {
  const double c = ks_coefficient(alpha);
  if (values.empty()) throw std::invalid_argument("KS test on empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("KS uniformity input outside [0, 1]: " +
                                  std::to_string(v));
    }
  }
  std::sort(sorted.begin(), sorted.end());

  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto rank = static_cast<double>(i + 1);
    d = std::max({d, rank / n - sorted[i], sorted[i] - (rank - 1.0) / n});
  }
  KSReport report;
  report.statistic = d;
  report.n = sorted.size();
  report.threshold_at_alpha = c / std::sqrt(n);
  report.reject = d > report.threshold_at_alpha;
  return report;
}

KSReport two_sample_ks(std::span<const double> a, std::span<const double> b,
                       double alpha) {
  const double c = ks_coefficient(alpha);
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("two-sample KS needs two nonempty samples");
  }
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  const auto m = static_cast<double>(xs.size());
  const auto n = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m -
                             static_cast<double>(j) / n));
  }

  KSReport report;
  report.statistic = d;
  report.n = xs.size() + ys.size();
  report.threshold_at_alpha = c * std::sqrt((m + n) / (m * n));
  report.reject = d > report.threshold_at_alpha;
  return report;
}

std::vector<HistogramBin> histogram(std::span<const double> values,
                                    std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  std::vector<HistogramBin> out(bins);
  const auto width = 1.0 / static_cast<double>(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out[k].lower = static_cast<double>(k) * width;
    out[k].upper = k + 1 == bins ? 1.0 : static_cast<double>(k + 1) * width;
  }
  for (double v : values) {
    const double scaled = std::floor(v * static_cast<double>(bins));
    const double clamped =
        std::clamp(scaled, 0.0, static_cast<double>(bins - 1));
    ++out[static_cast<std::size_t>(clamped)].count;
  }
  return out;
}

double autocorrelation(std::span<const double> values, std::size_t lag) {
  if (values.size() <= lag) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    den += d * d;
    if (i >= lag) num += d * (values[i - lag] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace conformal
