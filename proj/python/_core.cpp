#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "anticonc/core/errors.hpp"
#include "anticonc/counting/counting.hpp"
#include "anticonc/fourier/fourier.hpp"
#include "anticonc/harness/run.hpp"
#include "anticonc/matrix/singular.hpp"
#include "anticonc/matrix/smoothed.hpp"

namespace py = pybind11;
using namespace anticonc;

namespace {

py::dict levy_dict(const LevyEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["radius"] = e.radius;
  d["method"] = to_string(e.method);
  d["center"] = e.center;
  d["trials"] = e.trials;
  d["ci95"] = e.ci95;
  d["exact"] = e.exact_value ? py::object(py::str(to_string(*e.exact_value))) : py::object(py::none());
  return d;
}

ComplexMatrix to_matrix(const std::vector<std::vector<cplx>>& rows) {
  ComplexMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == m.cols(), "matrix rows must have equal length");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::string report_json(RunReport rep) {
  write_artifacts(rep);
  return rep.to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anti-concentration and smallest singular value toolkit";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def(
      "lcf_exact",
      [](const std::string& dist, const ComplexVec& v, double r) {
        return levy_dict(lcf_exact(NoiseDistribution::parse(dist), v, r));
      },
      py::arg("dist"), py::arg("v"), py::arg("r"));
  m.def(
      "lcf_monte_carlo",
      [](const std::string& dist, const ComplexVec& v, double r, std::size_t trials, std::uint64_t seed) {
        return levy_dict(lcf_monte_carlo(NoiseDistribution::parse(dist), v, r, trials, RandomSource(seed)));
      },
      py::arg("dist"), py::arg("v"), py::arg("r"), py::arg("trials"), py::arg("seed") = 0);
  m.def(
      "xi_norm_sq", [](cplx w, const std::string& dist) { return xi_norm_sq(w, NoiseDistribution::parse(dist)); },
      py::arg("w"), py::arg("dist"));
  m.def(
      "p_xi_exact", [](const ComplexVec& v, const std::string& dist) { return p_xi_exact(v, NoiseDistribution::parse(dist)); },
      py::arg("v"), py::arg("dist"));
  m.def(
      "smallest_singular_value",
      [](const std::vector<std::vector<cplx>>& rows) { return smallest_singular_value(to_matrix(rows)); },
      py::arg("matrix"));
  m.def(
      "singular_values", [](const std::vector<std::vector<cplx>>& rows) { return singular_values(to_matrix(rows)); },
      py::arg("matrix"));
  m.def(
      "rk_alpha",
      [](std::uint32_t p, const std::vector<std::pair<std::int64_t, std::int64_t>>& entries, unsigned k,
         const std::string& alpha) {
        return py::int_(py::str(rk_alpha(FpVector(p, entries), k, parse_rational(alpha)).str()));
      },
      py::arg("p"), py::arg("entries"), py::arg("k"), py::arg("alpha") = "-1");
  m.def(
      "theorem13_threshold",
      [](double alpha, double m_norm, std::size_t n, double c) {
        const auto t = theorem13_threshold(alpha, m_norm, n, c);
        py::dict d;
        d["log"] = t.log_value;
        d["log10"] = t.log10_value;
        d["value"] = t.value;
        return d;
      },
      py::arg("alpha"), py::arg("m_norm"), py::arg("n"), py::arg("c") = 1.0);
  m.def(
      "run_config_json",
      [](const std::string& text) { return report_json(run_experiment(ExperimentConfig::parse(text))); },
      py::arg("text"), "Runs a config given as text; returns the JSON report.");
  m.def(
      "verify_suite_json", [](const std::string& suite, std::uint64_t seed) { return report_json(verify_suite(suite, seed)); },
      py::arg("suite"), py::arg("seed") = 0);
}
