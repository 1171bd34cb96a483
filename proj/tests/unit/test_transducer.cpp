#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conformal/stats.hpp"
#include "conformal/transducer.hpp"

namespace conformal {
namespace {

BivariateGaussian unit(double rho) { return BivariateGaussian::make(0, 0, 1, 1, rho); }

std::vector<double> values(const std::vector<PValue>& ps) {
  std::vector<double> out;
  for (const auto& p : ps) out.push_back(p.value);
  return out;
}

TEST(Observe, FirstExampleReturnsTau) {
  ScoreStore store;
  const PValue p = observe(store, 4.2, 0.37);
  EXPECT_DOUBLE_EQ(p.value, 0.37);
  EXPECT_EQ(p.step, 1u);
}

TEST(Observe, SmoothedFormula) {
  ScoreStore store;
  store.insert(1.0);
  store.insert(2.0);
  const PValue p = observe(store, 3.0, 0.5);
  EXPECT_NEAR(p.value, 2.5 / 3.0, 1e-15);
  EXPECT_EQ(store.size(), 3u);
}

TEST(Observe, AllTiesAtTauExtremes) {
  ScoreStore store;
  store.insert(5.0);
  store.insert(5.0);
  store.insert(5.0);
  EXPECT_EQ(smoothed_p_value(store, 5.0, 0.0), 0.0);
  EXPECT_EQ(smoothed_p_value(store, 5.0, 1.0), 1.0);
}

TEST(Observe, Errors) {
  ScoreStore store;
  EXPECT_THROW(smoothed_p_value(store, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(observe(store, 1.0, 1.5), std::invalid_argument);
  EXPECT_THROW(observe(store, 1.0, -0.1), std::invalid_argument);
  EXPECT_TRUE(store.empty());
}

TEST(Observe, MonotoneInScoreAndInRange) {
  RandomStream rng(9);
  ScoreStore store;
  for (int i = 0; i < 500; ++i) store.insert(std::floor(rng.uniform() * 50));
  for (double tau : {0.0, 0.3, 1.0}) {
    double prev = -1.0;
    for (double a = -1.0; a <= 51.0; a += 0.5) {
      ScoreStore copy = store;
      const double p = observe(copy, a, tau).value;
      EXPECT_GE(p, prev);
      EXPECT_LE(p, 1.0);
      if (tau > 0.0) {
        EXPECT_GT(p, 0.0);
      }
      prev = p;
    }
  }
  ScoreStore copy = store;
  EXPECT_EQ(observe(copy, -100.0, 0.0).value, 0.0);
}

TEST(RunTransducer, EmptyStream) {
  RandomStream rng(1);
  EXPECT_TRUE(run_transducer(ConformityMeasure::oracle(unit(0.5)), {}, rng).empty());
}

TEST(RunTransducer, OnlineAndDeterministic) {
  RandomStream data(5);
  const auto stream = sample(unit(0.5), data, 400);
  RandomStream r1(6), r2(6), r3(6);
  const auto full = run_transducer(ConformityMeasure::oracle(unit(0.5)), stream, r1);
  const auto again = run_transducer(ConformityMeasure::oracle(unit(0.5)), stream, r2);
  const auto prefix = run_transducer(ConformityMeasure::oracle(unit(0.5)),
                                     std::span(stream).first(150), r3);
  ASSERT_EQ(full.size(), stream.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    EXPECT_EQ(full[i].value, again[i].value);
    EXPECT_EQ(full[i].step, i + 1);
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) EXPECT_EQ(prefix[i].value, full[i].value);
}

TEST(RunTransducer, TransducerClassMatchesFunction) {
  RandomStream data(5);
  const auto stream = sample(unit(0.5), data, 300);
  RandomStream r1(6);
  const auto ref = run_transducer(ConformityMeasure::mahalanobis(unit(0.5)), stream, r1);
  Transducer t(ConformityMeasure::mahalanobis(unit(0.5)), RandomStream(6));
  for (std::size_t i = 0; i < stream.size(); ++i) {
    EXPECT_EQ(t.push(stream[i]).value, ref[i].value);
  }
}

TEST(RunTransducer, UniformUnderIidData) {
  int passes = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream root(seed);
    RandomStream data = root.split("data");
    RandomStream tau = root.split("smoothing");
    const auto stream = sample(unit(0.5), data, 10000);
    const auto p = values(run_transducer(ConformityMeasure::oracle(unit(0.5)), stream, tau));
    const auto report = ks_uniform(p, 0.01);
    EXPECT_NEAR(report.threshold_at_alpha, 1.628 / 100.0, 1e-12);
    passes += report.reject ? 0 : 1;
  }
  EXPECT_GE(passes, 18);
}

TEST(RunTransducer, UniformForEveryBaseMeasure) {
  const auto q0 = BivariateGaussian::make(1, -1, 2, 0.5, 0.4);
  std::vector<ConformityMeasure> measures{
      ConformityMeasure::oracle(q0), ConformityMeasure::mahalanobis(q0),
      ConformityMeasure::likelihood_ratio(q0, q0.with_mean(2, 0)),
      ConformityMeasure::convex_ensemble(q0, 0.5)};
  for (auto& m : measures) {
    int passes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RandomStream data(100 + seed);
      RandomStream tau(200 + seed);
      m.reset();
      const auto stream = sample(q0, data, 3000);
      passes += ks_uniform(values(run_transducer(m, stream, tau)), 0.01).reject ? 0 : 1;
    }
    EXPECT_GE(passes, 18) << to_string(m.kind());
  }
}

TEST(RunTransducer, Lag1AutocorrelationNearZero) {
  RandomStream data(41);
  RandomStream tau(42);
  const std::size_t n = 20000;
  const auto p = values(
      run_transducer(ConformityMeasure::oracle(unit(0.5)), sample(unit(0.5), data, n), tau));
  EXPECT_LT(std::abs(autocorrelation(p, 1)), 4.0 / std::sqrt(static_cast<double>(n)));
}

}  // namespace
}  // namespace conformal
