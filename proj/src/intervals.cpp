#include "conformal/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "conformal/conformity.hpp"

namespace conformal {

std::size_t threshold_rank(std::size_t size, double epsilon) {
  // The small offset keeps products like 0.05 * 20 from rounding up a rank.
  const double raw = std::ceil(epsilon * static_cast<double>(size + 1) - 1e-9);
  const auto rank = static_cast<std::size_t>(std::max(raw, 1.0));
  return std::min(rank, size);
}

double level_set_halfwidth(double threshold, double variance) {
  const double sd = std::sqrt(variance);
  const double peak = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  if (threshold >= peak) return 0.0;
  if (!(threshold > 0.0)) return std::numeric_limits<double>::infinity();
  return sd * std::sqrt(-2.0 * std::log(threshold / peak));
}

PredictionInterval predict_interval(const BivariateGaussian& q0,
                                    const ScoreStore& store, double x,
                                    double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("significance level must lie in (0, 1), got " +
                                std::to_string(epsilon));
  }
  if (store.empty()) {
    throw std::invalid_argument("prediction interval needs a nonempty store");
  }
  const double threshold =
      store.kth_smallest(threshold_rank(store.size(), epsilon));
  const double center = conditional_mean(q0, x);
  const double half = level_set_halfwidth(threshold, conditional_variance(q0));
  return PredictionInterval{center - half, center + half, center, store.size() + 1};
}

IntervalPredictor::IntervalPredictor(const BivariateGaussian& q0, double epsilon)
    : q0_(q0), epsilon_(epsilon) {
  q0_.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("significance level must lie in (0, 1), got " +
                                std::to_string(epsilon));
  }
}

bool IntervalPredictor::push(const Example& z, EfficiencyPoint& out) {
  ++step_;
  bool emitted = false;
  if (!store_.empty()) {
    const auto interval = predict_interval(q0_, store_, z.x, epsilon_);
    out = EfficiencyPoint{step_,          interval.center,
                          interval.lower, interval.upper,
                          interval.width(), interval.contains(z.y)};
    emitted = true;
  }
  store_.insert(oracle_score(q0_, z));
  return emitted;
}

std::vector<EfficiencyPoint> efficiency_series(std::span<const Example> stream,
                                               const BivariateGaussian& q0,
                                               double epsilon) {
  IntervalPredictor predictor(q0, epsilon);
  std::vector<EfficiencyPoint> out;
  out.reserve(stream.empty() ? 0 : stream.size() - 1);
  EfficiencyPoint point;
  for (const auto& z : stream) {
    if (predictor.push(z, point)) out.push_back(point);
  }
  return out;
}

std::vector<double> rolling_mean(std::span<const double> values,
                                 std::size_t window) {
  if (window == 0) throw std::invalid_argument("rolling window must be >= 1");
  std::vector<double> out;
  out.reserve(values.size());
  // Summed per window rather than sliding, so an infinite width only poisons
  // the windows that contain it.
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t begin = i + 1 >= window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = begin; j <= i; ++j) sum += values[j];
    out.push_back(sum / static_cast<double>(i + 1 - begin));
  }
  return out;
}

}  // namespace conformal
