#include "blcft/report.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blcft/field.hpp"
#include "blcft/fusion.hpp"
#include "blcft/gmc.hpp"
#include "blcft/green.hpp"
#include "blcft/lcft.hpp"
#include "blcft/markov.hpp"
#include "blcft/spectral.hpp"

#ifndef BLCFT_BUILD_ID
#define BLCFT_BUILD_ID "unknown"
#endif

namespace blcft {

bool ReportRecord::all_pass() const {
  for (const auto& m : metrics)
    if (m.has_pass && !m.pass) return false;
  return true;
}

std::string ReportRecord::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["workers"] = workers;
  j["build"] = build;
  j["metrics"] = nlohmann::ordered_json::array();
  for (const auto& m : metrics) {
    nlohmann::ordered_json jm;
    jm["name"] = m.name;
    jm["value"] = m.value;
    jm["stderr"] = m.stderr_;
    jm["tolerance"] = m.tolerance;
    if (m.has_pass) jm["pass"] = m.pass;
    j["metrics"].push_back(jm);
  }
  j["note"] = note;
  if (include_timing) j["wall_time_s"] = wall_time_s;
  return j.dump(2) + "\n";
}

Metric make_metric(const std::string& name, double value) {
  Metric m;
  m.name = name;
  m.value = value;
  return m;
}

Metric make_checked(const std::string& name, double value, double tolerance,
                    bool pass, double stderr_) {
  Metric m;
  m.name = name;
  m.value = value;
  m.stderr_ = stderr_;
  m.tolerance = tolerance;
  m.has_pass = true;
  m.pass = pass;
  return m;
}

namespace {

std::string csv_cell(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Point probe_point(const Surface& s) {
  switch (s.kind()) {
    case SurfaceKind::FlatCylinder: return {0.5 * s.modulus(), 0.25};
    case SurfaceKind::Hemisphere: return {0.7, 1.0};
    default: return {0.0, 1.0};
  }
}

void require_spectral(const Surface& s, const std::string& command) {
  if (!s.has_spectral_basis())
    throw std::invalid_argument(command +
                                " needs a surface with a spectral basis");
}

void run_sample_gff(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  require_spectral(s, cfg.command);
  SpectralBasis basis = SpectralBasis::bordered_cutoff(
      s, BoundaryCondition::Neumann, cfg.mc.basis_cutoff);
  Point probe = probe_point(s);
  std::vector<double> vals(cfg.mc.n_samples);
  parallel_for(vals.size(), cfg.mc.workers, [&](std::size_t r) {
    GffSample smp = sample_gff(basis, cfg.mc.seed, r);
    vals[r] = eval_gff(basis, smp, probe);
  });
  std::vector<double> sq(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = vals[i] * vals[i];
  double emp = pairwise_sum(sq) / static_cast<double>(sq.size());
  double pred = gff_pointwise_variance(basis, probe);
  double rel_se = std::sqrt(2.0 / static_cast<double>(sq.size()));
  bool ok = std::abs(emp / pred - 1.0) < 4.0 * rel_se;
  out.report.metrics.push_back(make_metric("n_modes", double(basis.size())));
  out.report.metrics.push_back(
      make_checked("probe_variance", emp, 4.0 * rel_se * pred, ok,
                   pred * rel_se));
  out.report.metrics.push_back(make_metric("probe_variance_pred", pred));

  GffSample first = sample_gff(basis, cfg.mc.seed, 0);
  Quadrature q = s.bulk_quadrature(cfg.mc.n1, cfg.mc.n2);
  std::string csv = "u,v,value\n";
  for (std::size_t i = 0; i < q.pts.size(); ++i)
    csv += csv_cell(q.pts[i].u) + "," + csv_cell(q.pts[i].v) + "," +
           csv_cell(eval_gff(basis, first, q.pts[i])) + "\n";
  out.artifacts.emplace_back("field.csv", csv);
}

void run_gmc_mass(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  require_spectral(s, cfg.command);
  SpectralBasis basis = SpectralBasis::bordered_cutoff(
      s, BoundaryCondition::Neumann, cfg.mc.basis_cutoff);
  double g = cfg.params.gamma;
  std::string csv = "eps,kind,mean,stderr,expected,z\n";
  for (int k = 0; k < cfg.ladder_rungs; ++k) {
    double eps = cfg.ladder_eps0 / std::pow(2.0, k);
    std::vector<double> bulk(cfg.mc.n_samples), bdry(cfg.mc.n_samples);
    double exp_bulk = 0.0, exp_bdry = 0.0;
    parallel_for(bulk.size(), cfg.mc.workers, [&](std::size_t r) {
      GffSample smp = sample_gff(basis, cfg.mc.seed, r);
      RegularizedField f(basis, smp, eps, cfg.mc.n1, cfg.mc.n2, cfg.mc.nb);
      bulk[r] = bulk_measure(f, g).total();
      bdry[r] = boundary_measure(f, g).total();
      if (r == 0) {
        exp_bulk = expected_bulk_mass(f, g);
        exp_bdry = expected_boundary_mass(f, g);
      }
    });
    MeanErr mb = mean_and_stderr(bulk), md = mean_and_stderr(bdry);
    double zb = (mb.mean - exp_bulk) / mb.stderr_;
    double zd = (md.mean - exp_bdry) / md.stderr_;
    std::string tag = csv_cell(eps);
    csv += tag + ",bulk," + csv_cell(mb.mean) + "," + csv_cell(mb.stderr_) +
           "," + csv_cell(exp_bulk) + "," + csv_cell(zb) + "\n";
    csv += tag + ",boundary," + csv_cell(md.mean) + "," +
           csv_cell(md.stderr_) + "," + csv_cell(exp_bdry) + "," +
           csv_cell(zd) + "\n";
    out.report.metrics.push_back(make_checked(
        "bulk_mass_z_eps" + std::to_string(k), zb, 3.0, std::abs(zb) < 3.0));
    out.report.metrics.push_back(make_checked(
        "bdry_mass_z_eps" + std::to_string(k), zd, 3.0, std::abs(zd) < 3.0));
  }
  out.artifacts.emplace_back("gmc_mass.csv", csv);
}

void run_correlate(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  require_spectral(s, cfg.command);
  CorrelationEstimate est =
      correlation_estimate(s, cfg.params, cfg.insertions, nullptr, cfg.mc);
  if (est.diverged) {
    out.report.note = "correlation diverges: insertion set is inadmissible";
    out.report.metrics.push_back(make_metric("diverged", 1.0));
    out.exit_code = 2;
    return;
  }
  out.report.metrics.push_back(make_metric("diverged", 0.0));
  Metric m = make_metric("correlation", est.value);
  m.stderr_ = est.stderr_;
  out.report.metrics.push_back(m);
  out.report.metrics.push_back(make_metric("n_samples", est.n_samples));
}

void run_check_seiberg(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  double chi = s.euler_characteristic();
  SeibergReport rep = seiberg_check(cfg.insertions, cfg.params, chi);
  out.report.metrics.push_back(
      make_checked("bound1_total_charge", rep.bound1 ? 1.0 : 0.0, 1.0,
                   rep.bound1));
  std::string violated;
  if (!rep.bound1) violated = "bound1: total charge must exceed Q chi";
  for (std::size_t i = 0; i < rep.bound2.size(); ++i) {
    bool need = cfg.params.mu > 0.0;
    bool ok = rep.bound2[i] || !need;
    out.report.metrics.push_back(make_checked(
        "bound2_bulk" + std::to_string(i), rep.bound2[i] ? 1.0 : 0.0, 1.0, ok));
    if (!ok && violated.empty())
      violated = "bound2: bulk weight " + std::to_string(i) + " must stay below Q";
  }
  for (std::size_t j = 0; j < rep.bound3.size(); ++j) {
    bool need = cfg.params.mu_boundary > 0.0;
    bool ok = rep.bound3[j] || !need;
    out.report.metrics.push_back(make_checked(
        "bound3_bdry" + std::to_string(j), rep.bound3[j] ? 1.0 : 0.0, 1.0, ok));
    if (!ok && violated.empty())
      violated =
          "bound3: boundary weight " + std::to_string(j) + " must stay below Q";
  }
  out.report.metrics.push_back(make_checked(
      "admissible", rep.admissible ? 1.0 : 0.0, 1.0, rep.admissible));
  if (!rep.admissible) {
    out.report.note = violated;
    out.exit_code = 2;
  }
}

void run_verify_anomaly(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  if (s.kind() != SurfaceKind::FlatCylinder)
    throw std::invalid_argument(
        "verify-anomaly uses the cylinder profile a cos(2 pi y)");
  double a = cfg.phi_amplitude;
  ConformalFactor phi;
  phi.phi = [a](const Point& p) { return a * std::cos(kTwoPi * p.v); };
  phi.laplacian_phi = [a](const Point& p) {
    return -kTwoPi * kTwoPi * a * std::cos(kTwoPi * p.v);
  };
  phi.normal_derivative = [](const Point&, int) { return 0.0; };

  CorrelationEstimate curved =
      correlation_estimate(s, cfg.params, cfg.insertions, &phi, cfg.mc);
  CorrelationEstimate flat =
      correlation_estimate(s, cfg.params, cfg.insertions, nullptr, cfg.mc);
  if (curved.diverged || flat.diverged) {
    out.report.note = "correlation diverges: insertion set is inadmissible";
    out.exit_code = 2;
    return;
  }
  double zr = z_gff_ratio(s, phi, cfg.mc.n1, cfg.mc.n2, cfg.mc.nb);
  double an = anomaly_factor(s, cfg.params, cfg.insertions, phi, cfg.mc.n1,
                             cfg.mc.n2, cfg.mc.nb);
  double ratio = (zr * curved.value) / (an * flat.value);
  double se = std::abs(ratio) *
              std::hypot(curved.stderr_ / curved.value,
                         flat.stderr_ / flat.value);
  bool ok = std::abs(ratio - 1.0) < 3.0 * se;
  out.report.metrics.push_back(make_metric("anomaly_factor", an));
  out.report.metrics.push_back(make_metric("z_gff_ratio", zr));
  out.report.metrics.push_back(
      make_checked("anomaly_ratio", ratio, 3.0 * se, ok, se));
}

void run_verify_scaling(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  require_spectral(s, cfg.command);
  ScalingResult r = scaling_residual(s, cfg.params, cfg.insertions, cfg.mc);
  Metric lhs = make_metric("lhs", r.lhs);
  lhs.stderr_ = r.lhs_stderr;
  Metric rhs = make_metric("rhs", r.rhs);
  rhs.stderr_ = r.rhs_stderr;
  out.report.metrics.push_back(lhs);
  out.report.metrics.push_back(rhs);
  out.report.metrics.push_back(make_checked("residual_over_stderr",
                                            r.residual_over_stderr, 3.0,
                                            std::abs(r.residual_over_stderr) < 3.0));
}

void run_verify_markov(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  require_spectral(s, cfg.command);
  double res = markov_covariance_residual(s, cfg.markov_grid, cfg.markov_cut);
  out.report.metrics.push_back(
      make_checked("covariance_residual", res, 1e-6, res < 1e-6));
  TwinResult twin = markov_sampled_twin(s, cfg.mc.n_samples, cfg.mc.seed,
                                        cfg.mc.workers, cfg.markov_cut);
  out.report.metrics.push_back(
      make_checked("twin_max_abs_z", twin.max_abs_z, 3.0, twin.max_abs_z < 3.0));
  out.report.metrics.push_back(make_metric("twin_pairs", double(twin.n_pairs)));
}

void run_fusion_scan(const ExperimentConfig& cfg, RunOutcome& out) {
  FusionCase fc;
  if (cfg.fusion_kind == "bulk-bulk")
    fc.kind = FusionKind::BulkBulk;
  else if (cfg.fusion_kind == "bulk-reflection")
    fc.kind = FusionKind::BulkReflection;
  else if (cfg.fusion_kind == "boundary-boundary")
    fc.kind = FusionKind::BoundaryBoundary;
  else
    throw std::invalid_argument("unknown fusion kind: " + cfg.fusion_kind);
  fc.w1 = cfg.fusion_w1;
  fc.w2 = cfg.fusion_w2;

  FusionScanConfig sc;
  sc.params = cfg.params;
  sc.eps = cfg.fusion_eps;
  sc.n_samples = cfg.mc.n_samples;
  sc.seed = cfg.mc.seed;
  sc.workers = cfg.mc.workers;
  sc.n_rings = cfg.fusion_rings;
  sc.n_angles = cfg.fusion_angles;
  sc.window_radius = cfg.window_radius;
  sc.spectators = cfg.insertions;
  double d = cfg.fusion_d0;
  for (int i = 0; i < cfg.fusion_count; ++i, d *= cfg.fusion_ratio)
    sc.distances.push_back(d);

  FusionScanResult r = fusion_scan(fc, sc);
  out.report.metrics.push_back(
      make_checked("slope", r.slope, 3.0 * r.slope_stderr, !r.bound_violated,
                   r.slope_stderr));
  out.report.metrics.push_back(make_metric("predicted", r.predicted));
  out.report.metrics.push_back(make_metric("z_score", r.z_score));
  std::string csv = "distance,statistic,stderr\n";
  for (const auto& p : r.points)
    csv += csv_cell(p.distance) + "," + csv_cell(p.statistic) + "," +
           csv_cell(p.stderr_) + "\n";
  out.artifacts.emplace_back("fusion_scan.csv", csv);
}

void run_weyl_check(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  require_spectral(s, cfg.command);
  SpectralBasis basis =
      SpectralBasis::bordered(s, BoundaryCondition::Neumann, cfg.n_eigen);
  double slope = basis.weyl_slope();
  double pred = basis.weyl_predicted_slope();
  bool ok = std::abs(slope / pred - 1.0) < 0.05;
  out.report.metrics.push_back(make_checked("slope", slope, 0.05 * pred, ok));
  out.report.metrics.push_back(make_metric("predicted", pred));
}

void run_green_residuals(const ExperimentConfig& cfg, RunOutcome& out) {
  Surface s = config_surface(cfg);
  require_spectral(s, cfg.command);
  struct TestFn {
    std::string name;
    std::function<double(const Point&)> f, lap;
    std::function<double(const Point&, int)> dn;
  };
  std::vector<TestFn> fns;
  if (s.kind() == SurfaceKind::FlatCylinder) {
    double T = s.modulus();
    fns.push_back({"cos_2pi_v",
                   [](const Point& p) { return std::cos(kTwoPi * p.v); },
                   [](const Point& p) {
                     return -kTwoPi * kTwoPi * std::cos(kTwoPi * p.v);
                   },
                   [](const Point&, int) { return 0.0; }});
    fns.push_back({"cos_pi_u",
                   [T](const Point& p) { return std::cos(kPi * p.u / T); },
                   [T](const Point& p) {
                     return -kPi * kPi / (T * T) * std::cos(kPi * p.u / T);
                   },
                   [](const Point&, int) { return 0.0; }});
    fns.push_back({"centered_square",
                   [T](const Point& p) {
                     return (p.u - 0.5 * T) * (p.u - 0.5 * T);
                   },
                   [](const Point&) { return 2.0; },
                   [T](const Point&, int) { return T; }});
  } else {
    fns.push_back({"cos_theta",
                   [](const Point& p) { return std::cos(p.u); },
                   [](const Point& p) { return -2.0 * std::cos(p.u); },
                   [](const Point&, int) { return -1.0; }});
    fns.push_back({"quadrupole",
                   [](const Point& p) {
                     return std::sin(p.u) * std::sin(p.u) * std::cos(2.0 * p.v);
                   },
                   [](const Point& p) {
                     return -6.0 * std::sin(p.u) * std::sin(p.u) *
                            std::cos(2.0 * p.v);
                   },
                   [](const Point&, int) { return 0.0; }});
    fns.push_back({"cos_sq_theta",
                   [](const Point& p) {
                     return std::cos(p.u) * std::cos(p.u);
                   },
                   [](const Point& p) {
                     return 2.0 - 6.0 * std::cos(p.u) * std::cos(p.u);
                   },
                   [](const Point&, int) { return 0.0; }});
  }
  Point x = probe_point(s);
  for (const auto& fn : fns) {
    int nb = std::max(cfg.green_grid / 4, 16);
    double res = std::abs(green_identity_residual(
        s, fn.f, fn.lap, fn.dn, x, cfg.green_grid, cfg.green_grid, nb));
    out.report.metrics.push_back(
        make_checked("identity_residual_" + fn.name, res, 1e-6, res < 1e-6));
  }
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  RunOutcome out;
  out.report.command = cfg.command;
  out.report.config_hash = hex64(config_hash(cfg));
  out.report.seed = cfg.mc.seed;
  out.report.workers = cfg.mc.workers;
  out.report.build = BLCFT_BUILD_ID;
  try {
    if (cfg.command == "sample-gff")
      run_sample_gff(cfg, out);
    else if (cfg.command == "gmc-mass")
      run_gmc_mass(cfg, out);
    else if (cfg.command == "correlate")
      run_correlate(cfg, out);
    else if (cfg.command == "check-seiberg")
      run_check_seiberg(cfg, out);
    else if (cfg.command == "verify-anomaly")
      run_verify_anomaly(cfg, out);
    else if (cfg.command == "verify-scaling")
      run_verify_scaling(cfg, out);
    else if (cfg.command == "verify-markov")
      run_verify_markov(cfg, out);
    else if (cfg.command == "fusion-scan")
      run_fusion_scan(cfg, out);
    else if (cfg.command == "weyl-check")
      run_weyl_check(cfg, out);
    else if (cfg.command == "green-residuals")
      run_green_residuals(cfg, out);
    else
      throw std::invalid_argument("unknown command: " + cfg.command);
  } catch (const std::exception& e) {
    throw std::runtime_error(cfg.command + ": " + e.what());
  }
  if (out.exit_code == 0 && !out.report.all_pass()) out.exit_code = 1;
  return out;
}

}  // namespace blcft
