#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conformal/gaussian_model.hpp"
#include "conformal/score_store.hpp"

namespace conformal {

struct PredictionInterval {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
  std::size_t step = 0;

  double width() const { return upper - lower; }
  bool contains(double y) const { return lower <= y && y <= upper; }
};

// Rank of the threshold score among `size` stored scores:
// ceil(epsilon * (size + 1)), clamped to [1, size].
std::size_t threshold_rank(std::size_t size, double epsilon);

// Half-width of the level set {y : N(y; m, variance) >= threshold}. Zero when
// the threshold is at or above the peak density, +inf when it is <= 0.
double level_set_halfwidth(double threshold, double variance);

// Oracle-measure prediction interval for x at significance epsilon.
// The threshold is the threshold_rank()-th smallest stored score and the
// interval is the set of labels whose oracle score reaches it, solved in
// closed form around the conditional mean. Excluding the candidate from its
// own bag shifts the rank by at most one.
// Throws std::invalid_argument for an empty store or epsilon outside (0, 1).
PredictionInterval predict_interval(const BivariateGaussian& q0,
                                    const ScoreStore& store, double x,
                                    double epsilon);

struct EfficiencyPoint {
  std::size_t step = 0;
  double center = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double width = 0.0;
  bool covered = false;
};

// Online interval predictor: predicts for x_n from z_1..z_{n-1}, then admits
// z_n. The first example only seeds the store.
class IntervalPredictor {
 public:
  IntervalPredictor(const BivariateGaussian& q0, double epsilon);

  std::size_t steps() const { return step_; }

  // Returns false (and leaves `out` untouched) on the first call.
  bool push(const Example& z, EfficiencyPoint& out);

 private:
  BivariateGaussian q0_;
  double epsilon_;
  ScoreStore store_;
  std::size_t step_ = 0;
};

// One point per step n = 2..N. Streams shorter than two yield nothing.
std::vector<EfficiencyPoint> efficiency_series(std::span<const Example> stream,
                                               const BivariateGaussian& q0,
                                               double epsilon);

// Trailing mean over up to `window` values ending at each index.
std::vector<double> rolling_mean(std::span<const double> values,
                                 std::size_t window);

}  // namespace conformal
