#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conformal/conformity.hpp"
#include "conformal/gaussian_model.hpp"
#include "conformal/random_stream.hpp"
#include "conformal/score_store.hpp"

namespace conformal {

struct PValue {
  double value = 0.0;
  std::size_t step = 0;  // 1-based position in the stream
};

// Smoothed p-value of alpha_n against a store that already contains it:
//   (#{alpha_i < alpha_n} + tau * #{alpha_i == alpha_n}) / size
// Throws std::invalid_argument for an empty store or tau outside [0, 1].
double smoothed_p_value(const ScoreStore& store, double alpha_n, double tau);

// Inserts alpha_n into the store, then returns its smoothed p-value.
PValue observe(ScoreStore& store, double alpha_n, double tau);

// Online smoothed conformal transducer. Each push() scores the realized
// example, adds it to the bag and draws one tau from the smoothing stream.
class Transducer {
 public:
  Transducer(ConformityMeasure measure, RandomStream smoothing);

  PValue push(const Example& z);

  // Score of the most recent example.
  double last_score() const { return last_score_; }
  const ScoreStore& store() const { return store_; }
  const ConformityMeasure& measure() const { return measure_; }

 private:
  ConformityMeasure measure_;
  RandomStream smoothing_;
  ScoreStore store_;
  double last_score_ = 0.0;
};

// One p-value per example, in order. tau_n is the n-th uniform() of rng.
std::vector<PValue> run_transducer(ConformityMeasure measure,
                                   std::span<const Example> stream,
                                   RandomStream& rng);

}  // namespace conformal
