#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "conformal/conformity.hpp"
#include "conformal/gaussian_model.hpp"
#include "conformal/intervals.hpp"
#include "conformal/martingale.hpp"
#include "conformal/stats.hpp"

namespace conformal {

// Invalid or incomplete scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::string reason);
  const std::string& field() const { return field_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

// Failure reading or writing a file.
class IoError : public std::runtime_error {
 public:
  IoError(std::filesystem::path path, const std::string& what);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct CrypticDelta {
  double delta_mu_x = 0.0;
};

struct MeasureSpec {
  MeasureKind kind = MeasureKind::PredictiveOracle;
  double lambda = 0.5;  // ensemble weight on the oracle
  // Likelihood-ratio alternative; defaults to the post-change distribution.
  std::optional<BivariateGaussian> alternative;
};

struct ScenarioConfig {
  std::string name;
  BivariateGaussian pre;
  std::variant<BivariateGaussian, CrypticDelta> post = CrypticDelta{0.0};
  std::size_t n_pre = 10000;
  std::size_t n_post = 10000;
  std::uint64_t seed = 0;
  MeasureSpec measure;
  JumperConfig jumper;
  double epsilon = 0.05;
  std::size_t replications = 1;
  std::size_t histogram_bins = 20;
  std::size_t rolling_window = 200;
  std::filesystem::path output_dir;

  BivariateGaussian post_distribution() const;
  ConformityMeasure make_measure() const;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

inline constexpr std::size_t kQuickScale = 2000;

// Caps both phases at kQuickScale examples.
ScenarioConfig quick(ScenarioConfig cfg);

// Parses the YAML scenario format; relative output_dir values are kept as
// written. Throws ConfigError on schema violations.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& source = "<string>");

// Throws IoError when the file cannot be read, ConfigError otherwise.
ScenarioConfig load_config(const std::filesystem::path& path);

enum class Phase { Pre, Post };

struct ScenarioSummary {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t n_pre = 0;
  std::size_t n_post = 0;
  double final_log10_capital = 0.0;
  double max_log10_capital = 0.0;
  KSReport ks_all;
  KSReport ks_pre;
  KSReport ks_post;
  // NaN when the phase has no interval steps.
  double coverage_pre = 0.0;
  double coverage_post = 0.0;
  double mean_width_pre = 0.0;
  double mean_width_post = 0.0;
};

// Every per-step series of one run.
struct ScenarioTrace {
  ScenarioConfig config;
  std::vector<Example> stream;
  std::vector<double> scores;
  std::vector<double> pvalues;
  std::vector<double> log10_capital;  // after steps 1..N
  std::vector<EfficiencyPoint> intervals;  // steps 2..N

  Phase phase(std::size_t step) const {
    return step <= config.n_pre ? Phase::Pre : Phase::Post;
  }
};

// Single online pass: stream generation, transducer, Simple Jumper and
// oracle prediction intervals. Deterministic in the config.
ScenarioTrace simulate(const ScenarioConfig& cfg);

ScenarioSummary summarize(const ScenarioTrace& trace);

// Writes stream.csv, pvalues.csv, martingale.csv, intervals.csv,
// intervals_rolling.csv, histogram.csv and summary.json into `dir`.
void write_artifacts(const ScenarioTrace& trace, const ScenarioSummary& summary,
                     const std::filesystem::path& dir);

// simulate + summarize, writing artifacts when cfg.output_dir is set.
ScenarioSummary run_scenario(const ScenarioConfig& cfg);

struct ReplicationReport {
  std::vector<ScenarioSummary> summaries;  // seed order
  std::string aggregate_json;
};

// Runs seeds seed, seed+1, ... in parallel. With one replication artifacts go
// to output_dir; otherwise to output_dir/seed_<seed>. aggregate.json holds
// per-field medians, rejection fractions and every summary.
ReplicationReport run_replications(const ScenarioConfig& cfg,
                                   unsigned max_threads = 0);

std::string summary_json(const ScenarioSummary& summary);
std::string aggregate_json(const std::vector<ScenarioSummary>& summaries);

}  // namespace conformal
