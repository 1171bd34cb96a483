#include "conformal/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "conformal/random_stream.hpp"
#include "conformal/transducer.hpp"

namespace conformal {

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* phase_name(Phase phase) {
  return phase == Phase::Pre ? "pre" : "post";
}

// 17 significant digits, locale independent for the "C" locale used by
// printf-family functions.
std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

KSReport empty_ks() { return KSReport{0.0, 0, kNaN, false}; }

KSReport ks_or_empty(std::span<const double> values) {
  if (values.empty()) return empty_ks();
  return ks_uniform(values, 0.01);
}

ordered_json ks_json(const KSReport& r) {
  ordered_json j;
  j["statistic"] = r.statistic;
  j["n"] = r.n;
  j["threshold_at_alpha"] = r.threshold_at_alpha;
  j["alpha"] = 0.01;
  j["reject"] = r.reject;
  return j;
}

ordered_json summary_to_json(const ScenarioSummary& s) {
  ordered_json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["n_pre"] = s.n_pre;
  j["n_post"] = s.n_post;
  j["final_log10_capital"] = s.final_log10_capital;
  j["max_log10_capital"] = s.max_log10_capital;
  j["ks_all"] = ks_json(s.ks_all);
  j["ks_pre"] = ks_json(s.ks_pre);
  j["ks_post"] = ks_json(s.ks_post);
  j["coverage_pre"] = s.coverage_pre;
  j["coverage_post"] = s.coverage_post;
  j["mean_width_pre"] = s.mean_width_pre;
  j["mean_width_post"] = s.mean_width_post;
  return j;
}

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError(path, "cannot open output file");
  }

  std::ofstream& stream() { return out_; }

  void close() {
    out_.close();
    if (!out_) throw IoError(path_, "failed writing output file");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  CsvFile file(path);
  file.stream() << text;
  file.close();
}

}  // namespace

ScenarioTrace simulate(const ScenarioConfig& cfg) {
  cfg.validate();
  const BivariateGaussian post = cfg.post_distribution();

  RandomStream root(cfg.seed);
  RandomStream data = root.split("data");
  Transducer transducer(cfg.make_measure(), root.split("smoothing"));
  SimpleJumper jumper(cfg.jumper);
  IntervalPredictor predictor(cfg.pre, cfg.epsilon);

  ScenarioTrace trace;
  trace.config = cfg;
  const std::size_t n = cfg.n_pre + cfg.n_post;
  trace.stream.reserve(n);
  trace.scores.reserve(n);
  trace.pvalues.reserve(n);
  trace.log10_capital.reserve(n);
  trace.intervals.reserve(n);

  EfficiencyPoint point;
  for (std::size_t i = 0; i < n; ++i) {
    const Example z = sample_one(i < cfg.n_pre ? cfg.pre : post, data);
    const PValue p = transducer.push(z);
    trace.stream.push_back(z);
    trace.scores.push_back(transducer.last_score());
    trace.pvalues.push_back(p.value);
    trace.log10_capital.push_back(jumper.push(p.value));
    if (predictor.push(z, point)) trace.intervals.push_back(point);
  }
  return trace;
}

ScenarioSummary summarize(const ScenarioTrace& trace) {
  const auto& cfg = trace.config;
  ScenarioSummary s;
  s.name = cfg.name;
  s.seed = cfg.seed;
  s.n_pre = cfg.n_pre;
  s.n_post = cfg.n_post;

  s.final_log10_capital =
      trace.log10_capital.empty() ? 0.0 : trace.log10_capital.back();
  s.max_log10_capital = 0.0;  // S_0 = 1
  for (double v : trace.log10_capital) {
    s.max_log10_capital = std::max(s.max_log10_capital, v);
  }

  const std::span<const double> all(trace.pvalues);
  s.ks_all = ks_or_empty(all);
  s.ks_pre = ks_or_empty(all.first(cfg.n_pre));
  s.ks_post = ks_or_empty(all.subspan(cfg.n_pre));

  std::size_t count[2] = {0, 0};
  std::size_t covered[2] = {0, 0};
  double width[2] = {0.0, 0.0};
  for (const auto& pt : trace.intervals) {
    const int k = trace.phase(pt.step) == Phase::Pre ? 0 : 1;
    ++count[k];
    covered[k] += pt.covered ? 1 : 0;
    width[k] += pt.width;
  }
  auto ratio = [](double num, std::size_t den) {
    return den == 0 ? kNaN : num / static_cast<double>(den);
  };
  s.coverage_pre = ratio(static_cast<double>(covered[0]), count[0]);
  s.coverage_post = ratio(static_cast<double>(covered[1]), count[1]);
  s.mean_width_pre = ratio(width[0], count[0]);
  s.mean_width_post = ratio(width[1], count[1]);
  return s;
}

std::string summary_json(const ScenarioSummary& summary) {
  return summary_to_json(summary).dump(2) + "\n";
}

std::string aggregate_json(const std::vector<ScenarioSummary>& summaries) {
  ordered_json j;
  j["replications"] = summaries.size();
  ordered_json seeds = ordered_json::array();
  for (const auto& s : summaries) seeds.push_back(s.seed);
  j["seeds"] = seeds;

  auto field_median = [&](auto getter) {
    std::vector<double> values;
    for (const auto& s : summaries) values.push_back(getter(s));
    return median(std::move(values));
  };
  ordered_json med;
  med["final_log10_capital"] =
      field_median([](const ScenarioSummary& s) { return s.final_log10_capital; });
  med["max_log10_capital"] =
      field_median([](const ScenarioSummary& s) { return s.max_log10_capital; });
  med["ks_all_statistic"] =
      field_median([](const ScenarioSummary& s) { return s.ks_all.statistic; });
  med["ks_pre_statistic"] =
      field_median([](const ScenarioSummary& s) { return s.ks_pre.statistic; });
  med["ks_post_statistic"] =
      field_median([](const ScenarioSummary& s) { return s.ks_post.statistic; });
  med["coverage_pre"] =
      field_median([](const ScenarioSummary& s) { return s.coverage_pre; });
  med["coverage_post"] =
      field_median([](const ScenarioSummary& s) { return s.coverage_post; });
  med["mean_width_pre"] =
      field_median([](const ScenarioSummary& s) { return s.mean_width_pre; });
  med["mean_width_post"] =
      field_median([](const ScenarioSummary& s) { return s.mean_width_post; });
  j["median"] = med;

  auto reject_fraction = [&](auto getter) {
    if (summaries.empty()) return kNaN;
    std::size_t hits = 0;
    for (const auto& s : summaries) hits += getter(s).reject ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(summaries.size());
  };
  ordered_json frac;
  frac["ks_all"] =
      reject_fraction([](const ScenarioSummary& s) { return s.ks_all; });
  frac["ks_pre"] =
      reject_fraction([](const ScenarioSummary& s) { return s.ks_pre; });
  frac["ks_post"] =
      reject_fraction([](const ScenarioSummary& s) { return s.ks_post; });
  j["fraction_rejecting"] = frac;

  ordered_json all = ordered_json::array();
  for (const auto& s : summaries) all.push_back(summary_to_json(s));
  j["summaries"] = all;
  return j.dump(2) + "\n";
}

void write_artifacts(const ScenarioTrace& trace, const ScenarioSummary& summary,
                     const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create output directory (" + ec.message() + ")");

  {
    CsvFile f(dir / "stream.csv");
    auto& out = f.stream();
    out << "step,x,y,phase\n";
    for (std::size_t i = 0; i < trace.stream.size(); ++i) {
      out << i + 1 << ',' << fmt_real(trace.stream[i].x) << ','
          << fmt_real(trace.stream[i].y) << ',' << phase_name(trace.phase(i + 1))
          << '\n';
    }
    f.close();
  }
  {
    CsvFile f(dir / "pvalues.csv");
    auto& out = f.stream();
    out << "step,pvalue,phase\n";
    for (std::size_t i = 0; i < trace.pvalues.size(); ++i) {
      out << i + 1 << ',' << fmt_real(trace.pvalues[i]) << ','
          << phase_name(trace.phase(i + 1)) << '\n';
    }
    f.close();
  }
  {
    CsvFile f(dir / "martingale.csv");
    auto& out = f.stream();
    out << "step,log10_capital\n";
    for (std::size_t i = 0; i < trace.log10_capital.size(); ++i) {
      out << i + 1 << ',' << fmt_real(trace.log10_capital[i]) << '\n';
    }
    f.close();
  }
  {
    CsvFile f(dir / "intervals.csv");
    auto& out = f.stream();
    out << "step,center,lower,upper,width,covered\n";
    for (const auto& pt : trace.intervals) {
      out << pt.step << ',' << fmt_real(pt.center) << ',' << fmt_real(pt.lower)
          << ',' << fmt_real(pt.upper) << ',' << fmt_real(pt.width) << ','
          << (pt.covered ? 1 : 0) << '\n';
    }
    f.close();
  }
  {
    std::vector<double> widths;
    widths.reserve(trace.intervals.size());
    for (const auto& pt : trace.intervals) widths.push_back(pt.width);
    const auto rolled = rolling_mean(widths, trace.config.rolling_window);
    CsvFile f(dir / "intervals_rolling.csv");
    auto& out = f.stream();
    out << "step,rolling_mean_width\n";
    for (std::size_t i = 0; i < rolled.size(); ++i) {
      out << trace.intervals[i].step << ',' << fmt_real(rolled[i]) << '\n';
    }
    f.close();
  }
  {
    const std::span<const double> all(trace.pvalues);
    const std::size_t n_pre = trace.config.n_pre;
    CsvFile f(dir / "histogram.csv");
    auto& out = f.stream();
    out << "phase,bin_lower,bin_upper,count\n";
    for (Phase phase : {Phase::Pre, Phase::Post}) {
      const auto part = phase == Phase::Pre ? all.first(n_pre) : all.subspan(n_pre);
      for (const auto& bin : histogram(part, trace.config.histogram_bins)) {
        out << phase_name(phase) << ',' << fmt_real(bin.lower) << ','
            << fmt_real(bin.upper) << ',' << bin.count << '\n';
      }
    }
    f.close();
  }
  write_text(dir / "summary.json", summary_json(summary));
}

ScenarioSummary run_scenario(const ScenarioConfig& cfg) {
  const ScenarioTrace trace = simulate(cfg);
  ScenarioSummary summary = summarize(trace);
  if (!cfg.output_dir.empty()) write_artifacts(trace, summary, cfg.output_dir);
  return summary;
}

ReplicationReport run_replications(const ScenarioConfig& cfg,
                                   unsigned max_threads) {
  cfg.validate();
  const std::size_t reps = cfg.replications;

  std::vector<ScenarioConfig> jobs(reps, cfg);
  for (std::size_t r = 0; r < reps; ++r) {
    jobs[r].seed = cfg.seed + r;
    jobs[r].replications = 1;
    if (reps > 1 && !cfg.output_dir.empty()) {
      jobs[r].output_dir =
          cfg.output_dir / ("seed_" + std::to_string(jobs[r].seed));
    }
  }

  std::vector<ScenarioSummary> summaries(reps);
  std::vector<std::exception_ptr> errors(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        summaries[r] = run_scenario(jobs[r]);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };

  unsigned threads = max_threads != 0 ? max_threads
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ReplicationReport report;
  report.summaries = std::move(summaries);
  report.aggregate_json = aggregate_json(report.summaries);
  if (!cfg.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) {
      throw IoError(cfg.output_dir,
                    "cannot create output directory (" + ec.message() + ")");
    }
    write_text(cfg.output_dir / "aggregate.json", report.aggregate_json);
  }
  return report;
}

}  // namespace conformal
