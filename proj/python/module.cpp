#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blcft/config.hpp"
#include "blcft/fusion.hpp"
#include "blcft/green.hpp"
#include "blcft/lcft.hpp"
#include "blcft/markov.hpp"
#include "blcft/report.hpp"
#include "blcft/spectral.hpp"

namespace py = pybind11;
using namespace blcft;

namespace {

LiouvilleParams params_of(double gamma, double mu, double mu_boundary) {
  LiouvilleParams p;
  p.gamma = gamma;
  p.mu = mu;
  p.mu_boundary = mu_boundary;
  p.validate();
  return p;
}

InsertionSet insertions_of(
    const std::vector<std::tuple<double, double, double>>& bulk,
    const std::vector<std::tuple<double, double, double>>& boundary) {
  InsertionSet ins;
  for (const auto& [u, v, a] : bulk) ins.bulk.push_back({{u, v}, a});
  for (const auto& [u, v, b] : boundary) ins.boundary.push_back({{u, v}, b});
  return ins;
}

FusionKind kind_of(const std::string& kind) {
  if (kind == "bulk-bulk") return FusionKind::BulkBulk;
  if (kind == "bulk-reflection") return FusionKind::BulkReflection;
  if (kind == "boundary-boundary") return FusionKind::BoundaryBoundary;
  throw std::invalid_argument("unknown fusion kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_blcft, m) {
  m.doc() = "Free fields on bordered surfaces, chaos measures, and Liouville "
            "correlators";

  m.def("q_parameter",
        [](double gamma) { return params_of(gamma, 1.0, 0.0).q(); },
        py::arg("gamma"));
  m.def("central_charge",
        [](double gamma) {
          return params_of(gamma, 1.0, 0.0).central_charge();
        },
        py::arg("gamma"));

  m.def(
      "charge_excess",
      [](double gamma, double mu, double mu_boundary, double chi,
         const std::vector<std::tuple<double, double, double>>& bulk,
         const std::vector<std::tuple<double, double, double>>& boundary) {
        return charge_excess(insertions_of(bulk, boundary),
                             params_of(gamma, mu, mu_boundary), chi);
      },
      py::arg("gamma"), py::arg("mu"), py::arg("mu_boundary"), py::arg("chi"),
      py::arg("bulk"), py::arg("boundary"));

  m.def(
      "seiberg_admissible",
      [](double gamma, double mu, double mu_boundary, double chi,
         const std::vector<std::tuple<double, double, double>>& bulk,
         const std::vector<std::tuple<double, double, double>>& boundary) {
        return seiberg_check(insertions_of(bulk, boundary),
                             params_of(gamma, mu, mu_boundary), chi)
            .admissible;
      },
      py::arg("gamma"), py::arg("mu"), py::arg("mu_boundary"), py::arg("chi"),
      py::arg("bulk"), py::arg("boundary"));

  m.def(
      "zero_mode_integral",
      [](double bulk_mass, double boundary_mass, double sbar, double gamma,
         double mu, double mu_boundary) {
        ZeroModeResult r = zero_mode_integral(
            bulk_mass, boundary_mass, sbar, params_of(gamma, mu, mu_boundary));
        return py::make_tuple(r.value, r.divergent);
      },
      py::arg("bulk_mass"), py::arg("boundary_mass"), py::arg("sbar"),
      py::arg("gamma"), py::arg("mu"), py::arg("mu_boundary"));

  m.def(
      "green_neumann",
      [](const std::string& surface, double modulus, double xu, double xv,
         double yu, double yv) {
        Surface s = Surface::from_name(surface, modulus);
        return green_bordered(s, BoundaryCondition::Neumann, {xu, xv},
                              {yu, yv});
      },
      py::arg("surface"), py::arg("modulus"), py::arg("xu"), py::arg("xv"),
      py::arg("yu"), py::arg("yv"));

  m.def(
      "weyl_slopes",
      [](const std::string& surface, double modulus, int n_eigen) {
        Surface s = Surface::from_name(surface, modulus);
        SpectralBasis b =
            SpectralBasis::bordered(s, BoundaryCondition::Neumann, n_eigen);
        return py::make_tuple(b.weyl_slope(), b.weyl_predicted_slope());
      },
      py::arg("surface"), py::arg("modulus"), py::arg("n_eigen"));

  m.def(
      "markov_residual",
      [](const std::string& surface, double modulus, int grid_n, double cut) {
        Surface s = Surface::from_name(surface, modulus);
        return markov_covariance_residual(s, grid_n, cut);
      },
      py::arg("surface"), py::arg("modulus"), py::arg("grid_n"),
      py::arg("cut"));

  m.def(
      "dozz_covariance",
      [](double xu, double xv, double yu, double yv) {
        return dozz_covariance({xu, xv}, {yu, yv});
      },
      py::arg("xu"), py::arg("xv"), py::arg("yu"), py::arg("yv"));

  m.def(
      "fusion_predicted_exponent",
      [](const std::string& kind, double w1, double w2, double gamma) {
        FusionCase fc{kind_of(kind), w1, w2};
        return fusion_predicted_exponent(fc, params_of(gamma, 1.0, 0.0));
      },
      py::arg("kind"), py::arg("w1"), py::arg("w2"), py::arg("gamma"));

  m.def("config_hash_hex",
        [](const std::string& text) {
          return hex64(config_hash(parse_config(text)));
        },
        py::arg("text"));

  // Parses a config document, dispatches the command, and returns
  // (report_json_without_timing, exit_code, {artifact_name: contents}).
  m.def(
      "run_experiment",
      [](const std::string& text) {
        ExperimentConfig cfg = parse_config(text);
        RunOutcome out = run_experiment(cfg);
        py::dict artifacts;
        for (const auto& [name, contents] : out.artifacts)
          artifacts[py::str(name)] = contents;
        return py::make_tuple(out.report.to_json(false), out.exit_code,
                              artifacts);
      },
      py::arg("text"));
}
