#include "conformal/transducer.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace conformal {

double smoothed_p_value(const ScoreStore& store, double alpha_n, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("smoothing tau must lie in [0, 1], got " +
                                std::to_string(tau));
  }
  if (store.empty()) {
    throw std::invalid_argument("p-value requested from an empty score store");
  }
  const auto less = static_cast<double>(store.count_less(alpha_n));
  const auto equal = static_cast<double>(store.count_equal(alpha_n));
  return (less + tau * equal) / static_cast<double>(store.size());
}

PValue observe(ScoreStore& store, double alpha_n, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("smoothing tau must lie in [0, 1], got " +
                                std::to_string(tau));
  }
  store.insert(alpha_n);
  return PValue{smoothed_p_value(store, alpha_n, tau), store.size()};
}

Transducer::Transducer(ConformityMeasure measure, RandomStream smoothing)
    : measure_(std::move(measure)), smoothing_(smoothing) {}

PValue Transducer::push(const Example& z) {
  last_score_ = measure_.score(z);
  return observe(store_, last_score_, smoothing_.uniform());
}

std::vector<PValue> run_transducer(ConformityMeasure measure,
                                   std::span<const Example> stream,
                                   RandomStream& rng) {
  ScoreStore store;
  std::vector<PValue> out;
  out.reserve(stream.size());
  for (const auto& z : stream) {
    const double alpha = measure.score(z);
    out.push_back(observe(store, alpha, rng.uniform()));
  }
  return out;
}

}  // namespace conformal
