#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "conformal/conformity.hpp"
#include "conformal/cryptic.hpp"
#include "conformal/intervals.hpp"
#include "conformal/martingale.hpp"
#include "conformal/scenario.hpp"
#include "conformal/stats.hpp"
#include "conformal/transducer.hpp"

namespace py = pybind11;
using namespace conformal;

namespace {

std::vector<double> p_values(const std::vector<Example>& stream, const BivariateGaussian& q0,
                             const std::string& kind, double lambda, std::uint64_t seed) {
  ConformityMeasure measure = ConformityMeasure::oracle(q0);
  if (kind == "mahalanobis") {
    measure = ConformityMeasure::mahalanobis(q0);
  } else if (kind == "ensemble") {
    measure = ConformityMeasure::convex_ensemble(q0, lambda);
  } else if (kind != "oracle") {
    throw std::invalid_argument("unknown measure kind: " + kind);
  }
  RandomStream rng(seed);
  std::vector<double> out;
  for (const auto& p : run_transducer(std::move(measure), stream, rng)) out.push_back(p.value);
  return out;
}

std::vector<double> log10_trajectory(const std::vector<double>& pvalues,
                                     const std::vector<double>& epsilons, double jump_rate) {
  JumperConfig cfg;
  cfg.epsilons = epsilons;
  cfg.jump_rate = jump_rate;
  cfg.validate();
  std::vector<double> out;
  for (const auto& pt : run_ctm(cfg, pvalues)) out.push_back(pt.log10_capital);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conformal change detection on bivariate Gaussian streams";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Example>(m, "Example")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Example::x)
      .def_readwrite("y", &Example::y)
      .def("__repr__", [](const Example& z) {
        return "Example(x=" + std::to_string(z.x) + ", y=" + std::to_string(z.y) + ")";
      });

  py::class_<BivariateGaussian>(m, "BivariateGaussian")
      .def(py::init(&BivariateGaussian::make), py::arg("mu_x"), py::arg("mu_y"),
           py::arg("sigma_x"), py::arg("sigma_y"), py::arg("rho"))
      .def_readonly("mu_x", &BivariateGaussian::mu_x)
      .def_readonly("mu_y", &BivariateGaussian::mu_y)
      .def_readonly("sigma_x", &BivariateGaussian::sigma_x)
      .def_readonly("sigma_y", &BivariateGaussian::sigma_y)
      .def_readonly("rho", &BivariateGaussian::rho_cov)
      .def("correlation", &BivariateGaussian::correlation)
      .def("with_mean", &BivariateGaussian::with_mean)
      .def("conditional_mean", [](const BivariateGaussian& q, double x) { return conditional_mean(q, x); })
      .def("conditional_variance", [](const BivariateGaussian& q) { return conditional_variance(q); })
      .def("density", [](const BivariateGaussian& q, const Example& z) { return density(q, z); })
      .def("sample",
           [](const BivariateGaussian& q, std::size_t n, std::uint64_t seed) {
             RandomStream rng(seed);
             return sample(q, rng, n);
           },
           py::arg("n"), py::arg("seed"))
      .def(py::self == py::self);

  m.def("oracle_score", &oracle_score);
  m.def("mahalanobis_score", &mahalanobis_score);
  m.def("lr_score", &lr_score);

  m.def("p_values", &p_values, py::arg("stream"), py::arg("reference"),
        py::arg("kind") = "oracle", py::arg("lam") = 0.5, py::arg("seed") = 0,
        "Smoothed conformal p-values, one per example.");
  m.def("log10_trajectory", &log10_trajectory, py::arg("pvalues"),
        py::arg("epsilons") = std::vector<double>{-1, 0, 1}, py::arg("jump_rate") = 0.01,
        "log10 of the Simple Jumper capital for steps 0..N.");

  py::class_<CrypticPair>(m, "CrypticPair")
      .def_readonly("q0", &CrypticPair::q0)
      .def_readonly("q1", &CrypticPair::q1);
  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("cond1_max_residual", &ConditionReport::cond1_max_residual)
      .def_readonly("cond2_residual", &ConditionReport::cond2_residual);
  m.def("cryptic_shift", &cryptic_shift, py::arg("q0"), py::arg("delta_mu_x"));
  m.def("cryptic_line", &cryptic_line, py::arg("q0"), py::arg("x"));
  m.def("verify_conditions",
        [](const BivariateGaussian& q0, const BivariateGaussian& q1) {
          return verify_conditions({q0, q1});
        });

  py::class_<KSReport>(m, "KSReport")
      .def_readonly("statistic", &KSReport::statistic)
      .def_readonly("n", &KSReport::n)
      .def_readonly("threshold", &KSReport::threshold_at_alpha)
      .def_readonly("reject", &KSReport::reject);
  m.def("ks_uniform", [](const std::vector<double>& v, double a) { return ks_uniform(v, a); },
        py::arg("values"), py::arg("alpha") = 0.01);
  m.def("two_sample_ks",
        [](const std::vector<double>& a, const std::vector<double>& b, double alpha) {
          return two_sample_ks(a, b, alpha);
        },
        py::arg("a"), py::arg("b"), py::arg("alpha") = 0.01);
  m.def("histogram",
        [](const std::vector<double>& v, std::size_t bins) {
          std::vector<std::size_t> counts;
          for (const auto& b : histogram(v, bins)) counts.push_back(b.count);
          return counts;
        },
        py::arg("values"), py::arg("bins") = 20);

  py::class_<EfficiencyPoint>(m, "EfficiencyPoint")
      .def_readonly("step", &EfficiencyPoint::step)
      .def_readonly("center", &EfficiencyPoint::center)
      .def_readonly("lower", &EfficiencyPoint::lower)
      .def_readonly("upper", &EfficiencyPoint::upper)
      .def_readonly("width", &EfficiencyPoint::width)
      .def_readonly("covered", &EfficiencyPoint::covered);
  m.def("efficiency_series",
        [](const std::vector<Example>& s, const BivariateGaussian& q0, double eps) {
          return efficiency_series(s, q0, eps);
        },
        py::arg("stream"), py::arg("q0"), py::arg("epsilon") = 0.05);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("n_pre", &ScenarioConfig::n_pre)
      .def_readwrite("n_post", &ScenarioConfig::n_post)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("epsilon", &ScenarioConfig::epsilon)
      .def_readwrite("replications", &ScenarioConfig::replications)
      .def_readwrite("output_dir", &ScenarioConfig::output_dir)
      .def_readonly("pre", &ScenarioConfig::pre)
      .def("post_distribution", &ScenarioConfig::post_distribution);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<string>");
  m.def("load_config", &load_config, py::arg("path"));
  m.def("quick", &quick);

  py::class_<ScenarioSummary>(m, "ScenarioSummary")
      .def_readonly("name", &ScenarioSummary::name)
      .def_readonly("seed", &ScenarioSummary::seed)
      .def_readonly("final_log10_capital", &ScenarioSummary::final_log10_capital)
      .def_readonly("max_log10_capital", &ScenarioSummary::max_log10_capital)
      .def_readonly("ks_all", &ScenarioSummary::ks_all)
      .def_readonly("coverage_pre", &ScenarioSummary::coverage_pre)
      .def_readonly("coverage_post", &ScenarioSummary::coverage_post)
      .def_readonly("mean_width_pre", &ScenarioSummary::mean_width_pre)
      .def_readonly("mean_width_post", &ScenarioSummary::mean_width_post)
      .def("to_json", &summary_json);
  m.def("run_scenario", &run_scenario, py::call_guard<py::gil_scoped_release>());
}
