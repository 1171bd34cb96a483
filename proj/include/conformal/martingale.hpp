#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conformal {

// Simple Jumper conformal test martingale.
//
// Defaults (epsilons {-1, 0, 1}, jump rate 0.01) follow the usual Simple
// Jumper setup from the conformal retraining literature; both are
// configurable.
struct JumperConfig {
  std::vector<double> epsilons{-1.0, 0.0, 1.0};
  double jump_rate = 0.01;
  // Capital is rescaled by a power of ten once the linear sum leaves
  // [1 / renorm_bound, renorm_bound]. Does not change the reported value.
  double renorm_bound = 1e6;

  // Throws std::invalid_argument on an empty grid, |eps| > 1,
  // jump_rate outside [0, 1) or renorm_bound <= 1.
  void validate() const;
};

// Total capital S = sum(per_epsilon_capital) * 10^log10_scale.
struct CapitalState {
  std::vector<double> per_epsilon_capital;
  double log10_scale = 0.0;
  std::size_t step = 0;

  static CapitalState initial(const JumperConfig& cfg);

  double linear_sum() const;
  double log10_total() const;
};

// f_eps(p) = 1 + eps * (p - 1/2).
double betting_function(double epsilon, double p);

// One step: mix (jump), bet on p, then rescale if needed.
CapitalState jumper_step(const CapitalState& state, const JumperConfig& cfg,
                         double p);

struct TrajectoryPoint {
  std::size_t step = 0;
  double log10_capital = 0.0;
};

// log10 S_n for n = 0..N; the first point is always (0, 0).
std::vector<TrajectoryPoint> run_ctm(const JumperConfig& cfg,
                                     std::span<const double> pvalues);

// Incremental form used by the scenario runner.
class SimpleJumper {
 public:
  explicit SimpleJumper(JumperConfig cfg);

  double push(double p);  // returns log10 S after this step

  const CapitalState& state() const { return state_; }
  double log10_capital() const { return state_.log10_total(); }

 private:
  JumperConfig cfg_;
  CapitalState state_;
};

}  // namespace conformal
