// cblind: run conformal-testing change-point scenarios from config files.
//
//   cblind run --config scenarios/cryptic.cfg [--output-dir DIR] [--seed N]
//              [--replications N] [--quick]
//   cblind verify --config scenarios/cryptic.cfg
//
// Exit codes: 0 success, 1 configuration or usage error, 2 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "conformal/cryptic.hpp"
#include "conformal/scenario.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr double kCrypticTolerance = 1e-10;

void print_gaussian(const char* label, const conformal::BivariateGaussian& q) {
  std::printf("%s: mu=(%.17g, %.17g) sigma=(%.17g, %.17g) rho=%.17g\n", label,
              q.mu_x, q.mu_y, q.sigma_x, q.sigma_y, q.rho_cov);
}

void print_summary(const conformal::ScenarioSummary& s) {
  std::printf(
      "seed=%llu final_log10_capital=%.6f max_log10_capital=%.6f "
      "ks_all=%.5f(%s) ks_pre=%.5f ks_post=%.5f coverage_pre=%.4f "
      "coverage_post=%.4f width_pre=%.5f width_post=%.5f\n",
      static_cast<unsigned long long>(s.seed), s.final_log10_capital,
      s.max_log10_capital, s.ks_all.statistic,
      s.ks_all.reject ? "reject" : "accept", s.ks_pre.statistic,
      s.ks_post.statistic, s.coverage_pre, s.coverage_post, s.mean_width_pre,
      s.mean_width_post);
}

int cmd_run(const std::string& config_path,
            const std::optional<std::string>& output_dir,
            const std::optional<std::uint64_t>& seed,
            const std::optional<std::size_t>& replications, bool quick_mode) {
  conformal::ScenarioConfig cfg = conformal::load_config(config_path);
  if (output_dir) cfg.output_dir = *output_dir;
  if (cfg.output_dir.empty()) cfg.output_dir = std::filesystem::path("out") / cfg.name;
  if (seed) cfg.seed = *seed;
  if (replications) cfg.replications = *replications;
  if (quick_mode) cfg = conformal::quick(cfg);
  cfg.validate();

  std::printf("scenario %s: n_pre=%zu n_post=%zu replications=%zu -> %s\n",
              cfg.name.c_str(), cfg.n_pre, cfg.n_post, cfg.replications,
              cfg.output_dir.string().c_str());
  const auto report = conformal::run_replications(cfg);
  for (const auto& s : report.summaries) print_summary(s);
  return 0;
}

int cmd_verify(const std::string& config_path) {
  const conformal::ScenarioConfig cfg = conformal::load_config(config_path);
  const conformal::CrypticPair pair{cfg.pre, cfg.post_distribution()};
  const auto report = conformal::verify_conditions(pair);
  const double offset = conformal::line_offset(pair);

  std::printf("config: %s (valid)\n", config_path.c_str());
  print_gaussian("pre", pair.q0);
  print_gaussian("post", pair.q1);
  if (const auto* delta = std::get_if<conformal::CrypticDelta>(&cfg.post)) {
    std::printf("post given as cryptic_delta_mu_x=%.17g\n", delta->delta_mu_x);
  }
  std::printf("cryptic line at post mu_x: y=%.17g\n",
              conformal::cryptic_line(pair.q0, pair.q1.mu_x));
  std::printf("line offset: %.17g\n", offset);
  std::printf("conditional mean residual (max over probe grid): %.17g\n",
              report.cond1_max_residual);
  std::printf("conditional variance residual: %.17g\n", report.cond2_residual);
  const bool cryptic = report.cond1_max_residual <= kCrypticTolerance &&
                       report.cond2_residual <= kCrypticTolerance;
  std::printf("cryptic for the oracle measure: %s (tolerance %g)\n",
              cryptic ? "yes" : "no", kCrypticTolerance);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal test martingales under cryptic change-points"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  bool quick_mode = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV artifacts");
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--output-dir", output_dir, "Artifact directory");
  run->add_option("--seed", seed, "Override the base seed");
  run->add_option("--replications", replications, "Override the replication count")
      ->check(CLI::PositiveNumber);
  run->add_flag("--quick", quick_mode, "Cap each phase at 2000 examples");

  auto* verify = app.add_subcommand(
      "verify", "Validate a config and print cryptic-line residuals");
  verify->add_option("--config", config_path, "Scenario config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, output_dir, seed, replications, quick_mode);
    return cmd_verify(config_path);
  } catch (const conformal::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const conformal::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
