#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "conformal/gaussian_model.hpp"

namespace conformal {

// All measures follow one polarity: higher score = more conforming.

// Conditional density f_{Y|X}(y | x) under q0 (the predictive oracle).
double oracle_score(const BivariateGaussian& q0, const Example& z);

// Negated squared Mahalanobis distance from the mean of q0.
double mahalanobis_score(const BivariateGaussian& q0, const Example& z);

// -log(f_{q1}(z) / f_{q0}(z)).
double lr_score(const BivariateGaussian& q0, const BivariateGaussian& q1,
                const Example& z);

enum class MeasureKind {
  PredictiveOracle,
  Mahalanobis,
  LikelihoodRatio,
  ConvexEnsemble,
};

std::string_view to_string(MeasureKind kind);

// A stateless measure: one of oracle, Mahalanobis or likelihood ratio.
class BaseMeasure {
 public:
  static BaseMeasure oracle(const BivariateGaussian& q0);
  static BaseMeasure mahalanobis(const BivariateGaussian& q0);
  static BaseMeasure likelihood_ratio(const BivariateGaussian& q0,
                                      const BivariateGaussian& q1);

  MeasureKind kind() const { return kind_; }
  const BivariateGaussian& reference() const { return q0_; }
  const std::optional<BivariateGaussian>& alternative() const { return q1_; }

  double operator()(const Example& z) const;

 private:
  BaseMeasure(MeasureKind kind, const BivariateGaussian& q0,
              std::optional<BivariateGaussian> q1);

  MeasureKind kind_;
  BivariateGaussian q0_;
  std::optional<BivariateGaussian> q1_;
};

// Online mean / population standard deviation (Welford).
class RunningStats {
 public:
  void push(double value);
  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double stddev() const;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EnsembleComponent {
  BaseMeasure measure;
  double weight;
};

// Per-component running normalization for an ensemble stream.
struct EnsembleState {
  std::vector<RunningStats> stats;
  std::vector<double> last_standardized;
};

inline constexpr double kStdFloor = 1e-12;

// Standardizes each component score by its running mean/std (history
// including the current score) and returns the weighted sum. The first
// score of every component standardizes to 0.
// Throws std::invalid_argument on an empty list or weights that are negative
// or do not sum to 1.
double ensemble_score(std::span<const EnsembleComponent> components,
                      const Example& z, EnsembleState& state);

void validate_ensemble(std::span<const EnsembleComponent> components);

// The measure a transducer runs with. Base kinds are pure; ConvexEnsemble
// carries normalization state and must not be shared between streams.
class ConformityMeasure {
 public:
  static ConformityMeasure oracle(const BivariateGaussian& q0);
  static ConformityMeasure mahalanobis(const BivariateGaussian& q0);
  static ConformityMeasure likelihood_ratio(const BivariateGaussian& q0,
                                            const BivariateGaussian& q1);
  // lambda on the oracle, (1 - lambda) on Mahalanobis.
  static ConformityMeasure convex_ensemble(const BivariateGaussian& q0,
                                           double lambda);
  static ConformityMeasure ensemble(std::vector<EnsembleComponent> components);

  MeasureKind kind() const { return kind_; }
  const BivariateGaussian& reference() const;
  double lambda() const { return lambda_; }
  const std::vector<EnsembleComponent>& components() const {
    return components_;
  }
  const EnsembleState& state() const { return state_; }

  double score(const Example& z);

  // Drops ensemble normalization history.
  void reset();

 private:
  ConformityMeasure() = default;

  MeasureKind kind_ = MeasureKind::PredictiveOracle;
  double lambda_ = 1.0;
  std::vector<EnsembleComponent> components_;
  EnsembleState state_;
};

}  // namespace conformal
