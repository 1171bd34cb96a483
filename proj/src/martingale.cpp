#include "conformal/martingale.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace conformal {

void JumperConfig::validate() const {
  if (epsilons.empty()) {
    throw std::invalid_argument("jumper epsilons must be nonempty");
  }
  for (double eps : epsilons) {
    if (!(std::abs(eps) <= 1.0)) {
      throw std::invalid_argument("jumper epsilon must satisfy |eps| <= 1, got " +
                                  std::to_string(eps));
    }
  }
  if (!(jump_rate >= 0.0 && jump_rate < 1.0)) {
    throw std::invalid_argument("jump_rate must lie in [0, 1), got " +
                                std::to_string(jump_rate));
  }
  if (!(renorm_bound > 1.0) || !std::isfinite(renorm_bound)) {
    throw std::invalid_argument("renorm_bound must be finite and > 1");
  }
}

CapitalState CapitalState::initial(const JumperConfig& cfg) {
  cfg.validate();
  CapitalState s;
  const auto k = static_cast<double>(cfg.epsilons.size());
  s.per_epsilon_capital.assign(cfg.epsilons.size(), 1.0 / k);
  return s;
}

double CapitalState::linear_sum() const {
  return std::accumulate(per_epsilon_capital.begin(), per_epsilon_capital.end(),
                         0.0);
}

double CapitalState::log10_total() const {
  return std::log10(linear_sum()) + log10_scale;
}

double betting_function(double epsilon, double p) {
  return 1.0 + epsilon * (p - 0.5);
}

CapitalState jumper_step(const CapitalState& state, const JumperConfig& cfg,
                         double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p-value must lie in [0, 1], got " +
                                std::to_string(p));
  }
  if (state.per_epsilon_capital.size() != cfg.epsilons.size()) {
    throw std::invalid_argument("capital state does not match epsilon grid");
  }

  CapitalState next = state;
  auto& capital = next.per_epsilon_capital;
  const double k = static_cast<double>(capital.size());
  const double jump = cfg.jump_rate;

  const double before = state.linear_sum();
  for (auto& c : capital) c = (1.0 - jump) * c + (jump / k) * before;

  for (std::size_t i = 0; i < capital.size(); ++i) {
    capital[i] *= betting_function(cfg.epsilons[i], p);
  }

  const double sum = next.linear_sum();
  if (sum > 0.0 && (sum > cfg.renorm_bound || sum < 1.0 / cfg.renorm_bound)) {
    const double m = std::floor(std::log10(sum));
    const double factor = std::pow(10.0, m);
    for (auto& c : capital) c /= factor;
    next.log10_scale += m;
  }
  ++next.step;
  return next;
}

std::vector<TrajectoryPoint> run_ctm(const JumperConfig& cfg,
                                     std::span<const double> pvalues) {
  std::vector<TrajectoryPoint> out;
  out.reserve(pvalues.size() + 1);
  CapitalState state = CapitalState::initial(cfg);
  out.push_back({0, 0.0});
  for (double p : pvalues) {
    state = jumper_step(state, cfg, p);
    out.push_back({state.step, state.log10_total()});
  }
  return out;
}

SimpleJumper::SimpleJumper(JumperConfig cfg)
    : cfg_(std::move(cfg)), state_(CapitalState::initial(cfg_)) {}

double SimpleJumper::push(double p) {
  state_ = jumper_step(state_, cfg_, p);
  return state_.log10_total();
}

}  // namespace conformal
