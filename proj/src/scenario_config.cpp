#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string_view>

#include "conformal/cryptic.hpp"
#include "conformal/scenario.hpp"

namespace conformal {

ConfigError::ConfigError(std::string field, std::string reason)
    : std::runtime_error("config error in '" + field + "': " + reason),
      field_(std::move(field)),
      reason_(std::move(reason)) {}

IoError::IoError(std::filesystem::path path, const std::string& what)
    : std::runtime_error(what + ": " + path.string()), path_(std::move(path)) {}

BivariateGaussian ScenarioConfig::post_distribution() const {
  if (const auto* delta = std::get_if<CrypticDelta>(&post)) {
    return cryptic_shift(pre, delta->delta_mu_x).q1;
  }
  return std::get<BivariateGaussian>(post);
}

ConformityMeasure ScenarioConfig::make_measure() const {
  switch (measure.kind) {
    case MeasureKind::PredictiveOracle:
      return ConformityMeasure::oracle(pre);
    case MeasureKind::Mahalanobis:
      return ConformityMeasure::mahalanobis(pre);
    case MeasureKind::LikelihoodRatio:
      return ConformityMeasure::likelihood_ratio(
          pre, measure.alternative.value_or(post_distribution()));
    case MeasureKind::ConvexEnsemble:
      return ConformityMeasure::convex_ensemble(pre, measure.lambda);
  }
  throw ConfigError("measure.kind", "unknown measure kind");
}

void ScenarioConfig::validate() const {
  if (!pre.valid()) {
    throw ConfigError("pre", "need sigma_x > 0, sigma_y > 0, |rho| < sigma_x*sigma_y");
  }
  if (const auto* delta = std::get_if<CrypticDelta>(&post)) {
    if (!std::isfinite(delta->delta_mu_x)) {
      throw ConfigError("post.cryptic_delta_mu_x", "must be finite");
    }
  } else if (!std::get<BivariateGaussian>(post).valid()) {
    throw ConfigError("post", "need sigma_x > 0, sigma_y > 0, |rho| < sigma_x*sigma_y");
  }
  if (n_pre + n_post == 0) {
    throw ConfigError("n_pre", "n_pre + n_post must be at least 1");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("epsilon", "must lie in (0, 1)");
  }
  if (replications == 0) throw ConfigError("replications", "must be >= 1");
  if (histogram_bins == 0) throw ConfigError("histogram_bins", "must be >= 1");
  if (rolling_window == 0) throw ConfigError("rolling_window", "must be >= 1");
  if (measure.kind == MeasureKind::ConvexEnsemble &&
      !(measure.lambda >= 0.0 && measure.lambda <= 1.0)) {
    throw ConfigError("measure.lambda", "must lie in [0, 1]");
  }
  if (measure.alternative && !measure.alternative->valid()) {
    throw ConfigError("measure.alternative",
                      "need sigma_x > 0, sigma_y > 0, |rho| < sigma_x*sigma_y");
  }
  try {
    jumper.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("jumper", e.what());
  }
}

ScenarioConfig quick(ScenarioConfig cfg) {
  cfg.n_pre = std::min(cfg.n_pre, kQuickScale);
  cfg.n_post = std::min(cfg.n_post, kQuickScale);
  return cfg;
}

namespace {

std::string join(std::string_view prefix, std::string_view key) {
  if (prefix.empty()) return std::string(key);
  return std::string(prefix) + "." + std::string(key);
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) throw ConfigError(field.empty() ? "<root>" : field, "expected a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& prefix,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(prefix, key), "unknown key");
    }
  }
}

double read_real(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected a number");
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
    return v;
  } catch (const YAML::Exception&) {
    throw ConfigError(field, "expected a number, got '" + node.Scalar() + "'");
  }
}

std::uint64_t read_u64(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected a nonnegative integer");
  const std::string& text = node.Scalar();
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(field, "expected a nonnegative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw ConfigError(field, "integer out of range: '" + text + "'");
  }
}

std::size_t read_count(const YAML::Node& node, const std::string& field) {
  const std::uint64_t v = read_u64(node, field);
  if (v > std::numeric_limits<std::size_t>::max()) {
    throw ConfigError(field, "count out of range");
  }
  return static_cast<std::size_t>(v);
}

std::string read_string(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected a string");
  return node.Scalar();
}

// Parses a distribution block. Missing covariance keys fall back to
// `defaults` when given; otherwise every key is required.
BivariateGaussian read_gaussian(const YAML::Node& node, const std::string& field,
                                const BivariateGaussian* defaults) {
  require_map(node, field);
  reject_unknown(node, field, {"mu_x", "mu_y", "sigma_x", "sigma_y", "rho"});
  auto get = [&](const char* key, double fallback, bool has_fallback) {
    const auto child = node[key];
    if (!child) {
      if (!has_fallback) throw ConfigError(join(field, key), "missing required key");
      return fallback;
    }
    return read_real(child, join(field, key));
  };
  BivariateGaussian q;
  q.mu_x = get("mu_x", 0.0, false);
  q.mu_y = get("mu_y", 0.0, false);
  const bool inherit = defaults != nullptr;
  q.sigma_x = get("sigma_x", inherit ? defaults->sigma_x : 0.0, inherit);
  q.sigma_y = get("sigma_y", inherit ? defaults->sigma_y : 0.0, inherit);
  q.rho_cov = get("rho", inherit ? defaults->rho_cov : 0.0, inherit);
  if (!(q.sigma_x > 0.0)) throw ConfigError(join(field, "sigma_x"), "must be > 0");
  if (!(q.sigma_y > 0.0)) throw ConfigError(join(field, "sigma_y"), "must be > 0");
  if (!q.valid()) {
    throw ConfigError(join(field, "rho"),
                      "covariance must be positive definite (|rho| < sigma_x*sigma_y)");
  }
  return q;
}

MeasureKind parse_kind(const std::string& text, const std::string& field) {
  if (text == "oracle") return MeasureKind::PredictiveOracle;
  if (text == "mahalanobis") return MeasureKind::Mahalanobis;
  if (text == "likelihood_ratio") return MeasureKind::LikelihoodRatio;
  if (text == "ensemble") return MeasureKind::ConvexEnsemble;
  throw ConfigError(field, "unknown measure '" + text +
                               "' (expected oracle, mahalanobis, "
                               "likelihood_ratio or ensemble)");
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", source + ": " + e.what());
  }
  require_map(root, "");
  reject_unknown(root, "",
                 {"name", "pre", "post", "n_pre", "n_post", "seed", "measure",
                  "jumper", "epsilon", "replications", "histogram_bins",
                  "rolling_window", "output_dir"});

  ScenarioConfig cfg;
  if (root["name"]) cfg.name = read_string(root["name"], "name");

  if (!root["pre"]) throw ConfigError("pre", "missing required key");
  cfg.pre = read_gaussian(root["pre"], "pre", nullptr);

  if (!root["post"]) throw ConfigError("post", "missing required key");
  const auto post = root["post"];
  require_map(post, "post");
  if (post["cryptic_delta_mu_x"]) {
    if (post.size() != 1) {
      throw ConfigError("post", "cryptic_delta_mu_x cannot be combined with "
                                "explicit distribution keys");
    }
    cfg.post = CrypticDelta{read_real(post["cryptic_delta_mu_x"],
                                      "post.cryptic_delta_mu_x")};
  } else {
    cfg.post = read_gaussian(post, "post", &cfg.pre);
  }

  if (root["n_pre"]) cfg.n_pre = read_count(root["n_pre"], "n_pre");
  if (root["n_post"]) cfg.n_post = read_count(root["n_post"], "n_post");
  if (root["seed"]) cfg.seed = read_u64(root["seed"], "seed");
  if (root["epsilon"]) cfg.epsilon = read_real(root["epsilon"], "epsilon");
  if (root["replications"]) {
    cfg.replications = read_count(root["replications"], "replications");
  }
  if (root["histogram_bins"]) {
    cfg.histogram_bins = read_count(root["histogram_bins"], "histogram_bins");
  }
  if (root["rolling_window"]) {
    cfg.rolling_window = read_count(root["rolling_window"], "rolling_window");
  }
  if (root["output_dir"]) {
    cfg.output_dir = read_string(root["output_dir"], "output_dir");
  }

  if (const auto m = root["measure"]) {
    require_map(m, "measure");
    reject_unknown(m, "measure", {"kind", "lambda", "alternative"});
    if (!m["kind"]) throw ConfigError("measure.kind", "missing required key");
    cfg.measure.kind = parse_kind(read_string(m["kind"], "measure.kind"), "measure.kind");
    if (m["lambda"]) cfg.measure.lambda = read_real(m["lambda"], "measure.lambda");
    if (m["alternative"]) {
      cfg.measure.alternative =
          read_gaussian(m["alternative"], "measure.alternative", &cfg.pre);
    }
  }

  if (const auto j = root["jumper"]) {
    require_map(j, "jumper");
    reject_unknown(j, "jumper", {"epsilons", "jump_rate"});
    if (const auto eps = j["epsilons"]) {
      if (!eps.IsSequence()) throw ConfigError("jumper.epsilons", "expected a list");
      cfg.jumper.epsilons.clear();
      for (std::size_t i = 0; i < eps.size(); ++i) {
        cfg.jumper.epsilons.push_back(
            read_real(eps[i], "jumper.epsilons[" + std::to_string(i) + "]"));
      }
    }
    if (j["jump_rate"]) cfg.jumper.jump_rate = read_real(j["jump_rate"], "jumper.jump_rate");
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(path, "failed reading config file");
  ScenarioConfig cfg = parse_config(buf.str(), path.string());
  if (cfg.name.empty()) cfg.name = path.stem().string();
  return cfg;
}

}  // namespace conformal
