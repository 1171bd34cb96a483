#include "conformal/conformity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conformal {

double oracle_score(const BivariateGaussian& q0, const Example& z) {
  return conditional_density(q0, z.x, z.y);
}

double mahalanobis_score(const BivariateGaussian& q0, const Example& z) {
  const double dx = z.x - q0.mu_x;
  const double dy = z.y - q0.mu_y;
  const double quad = (q0.sigma_y * q0.sigma_y * dx * dx -
                       2.0 * q0.rho_cov * dx * dy +
                       q0.sigma_x * q0.sigma_x * dy * dy) /
                      q0.determinant();
  return -quad;
}

double lr_score(const BivariateGaussian& q0, const BivariateGaussian& q1,
                const Example& z) {
  return log_density(q0, z) - log_density(q1, z);
}

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::PredictiveOracle:
      return "oracle";
    case MeasureKind::Mahalanobis:
      return "mahalanobis";
    case MeasureKind::LikelihoodRatio:
      return "likelihood_ratio";
    case MeasureKind::ConvexEnsemble:
      return "ensemble";
  }
  return "unknown";
}

BaseMeasure::BaseMeasure(MeasureKind kind, const BivariateGaussian& q0,
                         std::optional<BivariateGaussian> q1)
    : kind_(kind), q0_(q0), q1_(q1) {
  q0_.validate();
  if (q1_) q1_->validate();
  if (kind_ == MeasureKind::LikelihoodRatio && !q1_) {
    throw std::invalid_argument(
        "likelihood-ratio measure requires an alternative distribution");
  }
}

BaseMeasure BaseMeasure::oracle(const BivariateGaussian& q0) {
  return {MeasureKind::PredictiveOracle, q0, std::nullopt};
}

BaseMeasure BaseMeasure::mahalanobis(const BivariateGaussian& q0) {
  return {MeasureKind::Mahalanobis, q0, std::nullopt};
}

BaseMeasure BaseMeasure::likelihood_ratio(const BivariateGaussian& q0,
                                          const BivariateGaussian& q1) {
  return {MeasureKind::LikelihoodRatio, q0, q1};
}

double BaseMeasure::operator()(const Example& z) const {
  switch (kind_) {
    case MeasureKind::PredictiveOracle:
      return oracle_score(q0_, z);
    case MeasureKind::Mahalanobis:
      return mahalanobis_score(q0_, z);
    case MeasureKind::LikelihoodRatio:
      return lr_score(q0_, *q1_, z);
    case MeasureKind::ConvexEnsemble:
      break;
  }
  throw std::logic_error("base measure cannot be an ensemble");
}

void RunningStats::push(double value) {
  ++count_;
  const double delta = value - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (value - mean_);
}

double RunningStats::stddev() const {
  if (count_ == 0) return 0.0;
  return std::sqrt(std::max(m2_, 0.0) / static_cast<double>(count_));
}

void validate_ensemble(std::span<const EnsembleComponent> components) {
  if (components.empty()) {
    throw std::invalid_argument("ensemble needs at least one component");
  }
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw std::invalid_argument("ensemble weight must be finite and >= 0, got " +
                                  std::to_string(c.weight));
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("ensemble weights must sum to 1, got " +
                                std::to_string(total));
  }
}

double ensemble_score(std::span<const EnsembleComponent> components,
                      const Example& z, EnsembleState& state) {
  validate_ensemble(components);
  if (state.stats.size() != components.size()) {
    state.stats.assign(components.size(), RunningStats{});
  }
  state.last_standardized.resize(components.size());

  double combined = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const double raw = components[i].measure(z);
    auto& stats = state.stats[i];
    stats.push(raw);
    const double sd = std::max(stats.stddev(), kStdFloor);
    const double standardized = (raw - stats.mean()) / sd;
    state.last_standardized[i] = standardized;
    combined += components[i].weight * standardized;
  }
  return combined;
}

ConformityMeasure ConformityMeasure::oracle(const BivariateGaussian& q0) {
  ConformityMeasure m;
  m.kind_ = MeasureKind::PredictiveOracle;
  m.components_.push_back({BaseMeasure::oracle(q0), 1.0});
  return m;
}

ConformityMeasure ConformityMeasure::mahalanobis(const BivariateGaussian& q0) {
  ConformityMeasure m;
  m.kind_ = MeasureKind::Mahalanobis;
  m.components_.push_back({BaseMeasure::mahalanobis(q0), 1.0});
  return m;
}

ConformityMeasure ConformityMeasure::likelihood_ratio(
    const BivariateGaussian& q0, const BivariateGaussian& q1) {
  ConformityMeasure m;
  m.kind_ = MeasureKind::LikelihoodRatio;
  m.components_.push_back({BaseMeasure::likelihood_ratio(q0, q1), 1.0});
  return m;
}

ConformityMeasure ConformityMeasure::convex_ensemble(const BivariateGaussian& q0,
                                                     double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("ensemble lambda must lie in [0, 1], got " +
                                std::to_string(lambda));
  }
  ConformityMeasure m;
  m.kind_ = MeasureKind::ConvexEnsemble;
  m.lambda_ = lambda;
  m.components_.push_back({BaseMeasure::oracle(q0), lambda});
  m.components_.push_back({BaseMeasure::mahalanobis(q0), 1.0 - lambda});
  return m;
}

ConformityMeasure ConformityMeasure::ensemble(
    std::vector<EnsembleComponent> components) {
  validate_ensemble(components);
  ConformityMeasure m;
  m.kind_ = MeasureKind::ConvexEnsemble;
  m.lambda_ = components.front().weight;
  m.components_ = std::move(components);
  return m;
}

const BivariateGaussian& ConformityMeasure::reference() const {
  return components_.front().measure.reference();
}

double ConformityMeasure::score(const Example& z) {
  if (kind_ == MeasureKind::ConvexEnsemble) {
    return ensemble_score(components_, z, state_);
  }
  return components_.front().measure(z);
}

void ConformityMeasure::reset() { state_ = EnsembleState{}; }

}  // namespace conformal
