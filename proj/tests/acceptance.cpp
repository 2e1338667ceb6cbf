// End-to-end acceptance checks: one pass/fail line per criterion, exit 0
// only when every criterion passes.  Each check is self-contained and
// prints the measured quantity next to its tolerance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "blcft/config.hpp"
#include "blcft/field.hpp"
#include "blcft/fusion.hpp"
#include "blcft/gmc.hpp"
#include "blcft/green.hpp"
#include "blcft/lcft.hpp"
#include "blcft/markov.hpp"
#include "blcft/report.hpp"
#include "blcft/spectral.hpp"
#include "blcft/surface.hpp"
#include "blcft/util.hpp"

using namespace blcft;

namespace {

struct Criterion {
  const char* title;
  std::function<bool(std::string&)> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. Neumann kernel assembled through the double vs the directly
//    symmetrized eigen sum, 20 x 20 pair grid, both compact models.
bool check_doubling(std::string& detail) {
  double worst = 0.0;
  for (auto kind : {SurfaceKind::FlatCylinder, SurfaceKind::Hemisphere}) {
    Surface s = kind == SurfaceKind::FlatCylinder ? Surface::flat_cylinder(1.0)
                                                  : Surface::hemisphere();
    double cutoff = kind == SurfaceKind::FlatCylinder ? 1500.0 : 1520.0;
    auto dbl = SpectralBasis::doubled_cutoff(s, cutoff);
    auto neu = SpectralBasis::bordered_cutoff(s, BoundaryCondition::Neumann,
                                              cutoff);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        Point x, y;
        if (kind == SurfaceKind::FlatCylinder) {
          x = {0.03 + 0.047 * i, 0.015 + 0.0491 * i};
          y = {0.06 + 0.0461 * j, 0.4 + 0.0293 * j};
        } else {
          x = {0.08 + 0.071 * i, 0.1 + 0.29 * i};
          y = {0.11 + 0.069 * j, 2.9 + 0.31 * j};
        }
        double lhs =
            dbl.green_eigensum(x, y) + dbl.green_eigensum(x, s.involution(y));
        worst = std::max(worst, std::abs(lhs - neu.green_eigensum(x, y)));
      }
    }
  }
  detail = "max |G_d(x,y)+G_d(x,sy) - G_N(x,y)| = " + fmt(worst) + " (tol 1e-10)";
  return worst < 1e-10;
}

// 2. Defining system of the Neumann kernel and the integration-by-parts
//    identity, including a test function with nonzero normal derivative.
bool check_green_system(std::string& detail) {
  Surface cyl = Surface::flat_cylinder(1.0);
  Point y{0.41, 0.27};
  auto G = [&](double u, double v) {
    return green_bordered(cyl, BoundaryCondition::Neumann, {u, v}, y);
  };

  // PDE residual lap G = 1/Vol away from the source (4th-order stencil).
  double h = 3e-3;
  auto lap4 = [&](double u, double v) {
    auto d2 = [&](bool along_u) {
      auto g = [&](double s) { return along_u ? G(u + s, v) : G(u, v + s); };
      return (-g(2 * h) + 16 * g(h) - 30 * g(0) + 16 * g(-h) - g(-2 * h)) /
             (12 * h * h);
    };
    return d2(true) + d2(false);
  };
  double pde = 0.0;
  for (Point p : {Point{0.12, 0.8}, Point{0.75, 0.27}, Point{0.5, 0.55}})
    pde = std::max(pde, std::abs(lap4(p.u, p.v) - 1.0 / cyl.volume()));

  // Normal derivative on both boundary circles.
  double nrm = 0.0;
  for (double v : {0.1, 0.45, 0.9}) {
    nrm = std::max(nrm, std::abs((G(h, v) - G(-h, v)) / (2 * h)));
    nrm = std::max(nrm, std::abs((G(1 + h, v) - G(1 - h, v)) / (2 * h)));
  }

  // Zero average.
  auto slice = [&](const Point& p) {
    return green_bordered(cyl, BoundaryCondition::Neumann, p, y);
  };
  double avg = std::abs(mg_average(cyl, nullptr, slice, &y, 512, 512));

  // Integration by parts for three test functions; f3 has dn f != 0.
  Point x{0.37, 0.21};
  auto f1 = [](const Point& p) { return std::cos(kTwoPi * p.v); };
  auto l1 = [](const Point& p) { return -kTwoPi * kTwoPi * std::cos(kTwoPi * p.v); };
  auto d0 = [](const Point&, int) { return 0.0; };
  auto f2 = [](const Point& p) { return std::cos(kPi * p.u); };
  auto l2 = [](const Point& p) { return -kPi * kPi * std::cos(kPi * p.u); };
  auto f3 = [](const Point& p) { return 0.5 * p.u * p.u; };
  auto l3 = [](const Point&) { return 1.0; };
  auto d3 = [](const Point& p, int c) { return c == 0 ? -p.u : p.u; };
  double ibp = std::abs(green_identity_residual(cyl, f1, l1, d0, x, 1024, 1024, 256));
  ibp = std::max(ibp, std::abs(green_identity_residual(cyl, f2, l2, d0, x, 1024, 1024, 256)));
  ibp = std::max(ibp, std::abs(green_identity_residual(cyl, f3, l3, d3, x, 1024, 1024, 256)));

  detail = "pde " + fmt(pde) + ", normal " + fmt(nrm) + ", average " + fmt(avg) +
           " (tol 1e-5); parts identity " + fmt(ibp) + " (tol 1e-6)";
  return pde < 1e-5 && nrm < 1e-5 && avg < 1e-5 && ibp < 1e-6;
}

// 3. Counting-function slope vs 4 pi / volume at 2000 modes.
bool check_weyl(std::string& detail) {
  double worst = 0.0;
  for (auto kind : {SurfaceKind::FlatCylinder, SurfaceKind::Hemisphere}) {
    Surface s = kind == SurfaceKind::FlatCylinder ? Surface::flat_cylinder(1.0)
                                                  : Surface::hemisphere();
    auto basis = SpectralBasis::bordered(s, BoundaryCondition::Neumann, 2000);
    worst = std::max(
        worst, std::abs(basis.weyl_slope() / basis.weyl_predicted_slope() - 1.0));
  }
  detail = "max relative slope error " + fmt(worst) + " (tol 0.05)";
  return worst < 0.05;
}

// 4. Circle-average variance gains ln 2 per dyadic halving of eps at
//    interior nodes of both compact models.
bool check_circle_ladder(std::string& detail) {
  double worst = 0.0;
  for (auto kind : {SurfaceKind::FlatCylinder, SurfaceKind::Hemisphere}) {
    Surface s = kind == SurfaceKind::FlatCylinder ? Surface::flat_cylinder(1.0)
                                                  : Surface::hemisphere();
    Point x = kind == SurfaceKind::FlatCylinder ? Point{0.5, 0.3} : Point{0.8, 1.0};
    double prev = circle_average_variance(s, x, 1.0 / 16.0);
    for (int k = 1; k <= 3; ++k) {
      double cur = circle_average_variance(s, x, 1.0 / 16.0 / (1 << k));
      worst = std::max(worst,
                       std::abs((cur - prev) - std::log(2.0)) / std::log(2.0));
      prev = cur;
    }
  }
  detail = "max relative increment error " + fmt(worst) + " (tol 0.02)";
  return worst < 0.02;
}

// 5. Chaos-mass expectations, L2 Cauchy decay, and the critical coupling.
bool check_gmc(std::string& detail) {
  Surface s = Surface::flat_cylinder(1.0);
  SpectralBasis basis =
      SpectralBasis::bordered_cutoff(s, BoundaryCondition::Neumann, 3000.0);

  // MC means vs Gaussian-moment closed forms at gamma in {0.5, 1}, two rungs.
  double worst_z = 0.0;
  for (double eps : {1.0 / 8.0, 1.0 / 16.0}) {
    std::vector<double> b05, d05, b1, d1;
    double eb05 = 0, ed05 = 0, eb1 = 0, ed1 = 0;
    for (int r = 0; r < 250; ++r) {
      GffSample sample = sample_gff(basis, 42, r);
      RegularizedField f(basis, sample, eps, 64, 64, 64);
      b05.push_back(bulk_measure(f, 0.5).total());
      d05.push_back(boundary_measure(f, 0.5).total());
      b1.push_back(bulk_measure(f, 1.0).total());
      d1.push_back(boundary_measure(f, 1.0).total());
      if (r == 0) {
        eb05 = expected_bulk_mass(f, 0.5);
        ed05 = expected_boundary_mass(f, 0.5);
        eb1 = expected_bulk_mass(f, 1.0);
        ed1 = expected_boundary_mass(f, 1.0);
      }
    }
    auto z = [&](const std::vector<double>& v, double target) {
      MeanErr m = mean_and_stderr(v);
      return std::abs(m.mean - target) / m.stderr_;
    };
    worst_z = std::max({worst_z, z(b05, eb05), z(d05, ed05), z(b1, eb1),
                        z(d1, ed1)});
  }

  // Coupled L2 differences decrease along the ladder (gamma = 1 < sqrt 2).
  SpectralBasis deep =
      SpectralBasis::bordered_cutoff(s, BoundaryCondition::Neumann, 8000.0);
  std::vector<double> d1sq, d2sq, b1sq, b2sq;
  for (int r = 0; r < 150; ++r) {
    GffSample sample = sample_gff(deep, 7, r);
    RegularizedField f0(deep, sample, 1.0 / 8.0, 128, 128, 128);
    RegularizedField f1(deep, sample, 1.0 / 16.0, 128, 128, 128);
    RegularizedField f2(deep, sample, 1.0 / 32.0, 128, 128, 128);
    double m0 = bulk_measure(f0, 1.0).total();
    double m1 = bulk_measure(f1, 1.0).total();
    double m2 = bulk_measure(f2, 1.0).total();
    d1sq.push_back((m1 - m0) * (m1 - m0));
    d2sq.push_back((m2 - m1) * (m2 - m1));
    double p0 = boundary_measure(f0, 1.0).total();
    double p1 = boundary_measure(f1, 1.0).total();
    double p2 = boundary_measure(f2, 1.0).total();
    b1sq.push_back((p1 - p0) * (p1 - p0));
    b2sq.push_back((p2 - p1) * (p2 - p1));
  }
  bool cauchy = mean_and_stderr(d2sq).mean < mean_and_stderr(d1sq).mean &&
                mean_and_stderr(b2sq).mean < mean_and_stderr(b1sq).mean;

  // Critical coupling: positive, non-degenerate masses across the ladder.
  bool critical_ok = true;
  for (double eps : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
    std::vector<double> tot;
    for (int r = 0; r < 20; ++r) {
      GffSample sample = sample_gff(basis, 17, r);
      RegularizedField f(basis, sample, eps, 64, 64, 64);
      GmcMeasure m = bulk_measure(f, 2.0);
      critical_ok = critical_ok && m.critical;
      tot.push_back(m.total());
    }
    MeanErr t = mean_and_stderr(tot);
    critical_ok = critical_ok && t.mean > 0.0 && std::isfinite(t.mean) &&
                  t.stderr_ > 0.0;
  }

  detail = "worst mass z-score " + fmt(worst_z) + " (tol 3); L2 Cauchy " +
           (cauchy ? "decreasing" : "NOT decreasing") + "; critical masses " +
           (critical_ok ? "positive/non-degenerate" : "degenerate");
  return worst_z < 3.0 && cauchy && critical_ok;
}

// 6. Admissibility truth table: for each coupling regime, each of the three
//    bounds is enforced exactly when its coupling is active.
bool check_seiberg_table(std::string& detail) {
  LiouvilleParams p;
  p.gamma = 1.0;  // Q = 2.5
  Surface cyl = Surface::flat_cylinder(1.0);
  double chi = cyl.euler_characteristic();

  // One violating set per bound: total charge too low / alpha >= Q / beta >= Q.
  InsertionSet bad1, bad2, bad3;
  bad1.bulk.push_back({Point{0.5, 0.25}, -1.0});
  bad2.bulk.push_back({Point{0.5, 0.25}, 3.0});
  bad3.boundary.push_back({cyl.boundary_point(0, 0.1), 3.0});
  bad3.bulk.push_back({Point{0.5, 0.25}, 0.5});  // keep bound1 satisfied

  struct Regime {
    double mu, mub;
    bool needs2, needs3;
  };
  const Regime regimes[] = {{1.0, 1.0, true, true},
                            {1.0, 0.0, true, false},
                            {0.0, 1.0, false, true}};
  int ok = 0;
  for (const Regime& rg : regimes) {
    LiouvilleParams q = p;
    q.mu = rg.mu;
    q.mu_boundary = rg.mub;
    // bound1 is required in every regime.
    if (!seiberg_check(bad1, q, chi).admissible) ++ok;
    if (seiberg_check(bad2, q, chi).admissible == !rg.needs2) ++ok;
    if (seiberg_check(bad3, q, chi).admissible == !rg.needs3) ++ok;
  }
  detail = std::to_string(ok) + "/9 regime x bound entries correct";
  return ok == 9;
}

// 7. Zero-mode quadrature vs the Gamma-function closed forms; divergence
//    flag raised exactly when the charge excess is non-positive.
bool check_zero_mode(std::string& detail) {
  LiouvilleParams p;
  p.gamma = 1.3;
  p.mu = 0.8;
  p.mu_boundary = 0.6;
  double worst = 0.0;
  for (auto [a, b, sbar] : {std::array<double, 3>{2.0, 0.0, 1.0},
                            std::array<double, 3>{1.5, 0.0, 0.8},
                            std::array<double, 3>{0.37, 0.0, 2.1}}) {
    // Bulk specialization: I = Gamma(sbar/g) (mu a)^{-sbar/g} / g, reached
    // through the generic quadrature by a negligible boundary weight.
    double oracle = std::exp(std::lgamma(sbar / p.gamma) -
                             (sbar / p.gamma) * std::log(p.mu * a)) /
                    p.gamma;
    double quad = zero_mode_integral(a, 1e-14, sbar, p).value;
    worst = std::max(worst, std::abs(quad / oracle - 1.0));
    // Boundary specialization: I = 2 Gamma(2 sbar/g) (mu_b l)^{-2 sbar/g} / g.
    double l = 1.0 + a;
    double oracle_b =
        2.0 *
        std::exp(std::lgamma(2.0 * sbar / p.gamma) -
                 (2.0 * sbar / p.gamma) * std::log(p.mu_boundary * l)) /
        p.gamma;
    double quad_b = zero_mode_integral(1e-14, l, sbar, p).value;
    worst = std::max(worst, std::abs(quad_b / oracle_b - 1.0));
  }
  bool flags = zero_mode_integral(1.0, 1.0, 0.0, p).divergent &&
               zero_mode_integral(1.0, 1.0, -0.5, p).divergent &&
               !zero_mode_integral(1.0, 1.0, 1e-8, p).divergent &&
               !zero_mode_integral(1.0, 1.0, 2.0, p).divergent;
  detail = "max relative error vs Gamma forms " + fmt(worst) +
           " (tol 1e-8); divergence flags " + (flags ? "exact" : "WRONG");
  return worst < 1e-8 && flags;
}

// 8. mu-differentiation identity at 1e4 samples, and the exact rescaling
//    under common random numbers when the boundary coupling vanishes.
bool check_scaling(std::string& detail) {
  Surface cyl = Surface::flat_cylinder(1.0);
  LiouvilleParams p;
  p.gamma = 1.0;
  p.mu = 1.0;
  p.mu_boundary = 1.0;
  InsertionSet ins;
  ins.bulk.push_back({Point{0.5, 0.25}, 1.0});
  ins.boundary.push_back({cyl.boundary_point(0, 0.3), 1.0});
  McConfig mc;
  mc.n_samples = 10000;
  mc.eps = 1.0 / 8.0;
  mc.n1 = mc.n2 = mc.nb = 32;
  mc.basis_cutoff = 500.0;
  ScalingResult r = scaling_residual(cyl, p, ins, mc);

  // Same samples, doubled mu: the closed-form zero mode makes the ratio
  // exactly 2^{-sbar/gamma}.
  LiouvilleParams pb = p;
  pb.mu_boundary = 0.0;
  McConfig mcs = mc;
  mcs.n_samples = 64;
  CorrelationEstimate base = correlation_estimate(cyl, pb, ins, nullptr, mcs);
  LiouvilleParams pb2 = pb;
  pb2.mu = 2.0 * pb.mu;
  CorrelationEstimate twice = correlation_estimate(cyl, pb2, ins, nullptr, mcs);
  double sbar = charge_excess(ins, pb, 0.0);
  double rescale_err =
      std::abs(twice.value / (std::pow(2.0, -sbar / pb.gamma) * base.value) -
               1.0);

  detail = "|lhs-rhs|/stderr = " + fmt(std::abs(r.residual_over_stderr)) +
           " (tol 3); coupled rescaling error " + fmt(rescale_err) +
           " (tol 1e-10)";
  return std::abs(r.residual_over_stderr) < 3.0 && rescale_err < 1e-10;
}

// 9. Metric-change factor end to end: Z-ratio * curved = anomaly * flat for
//    phi = 0.3 cos(2 pi y) on the cylinder, common random numbers.
bool check_anomaly(std::string& detail) {
  Surface cyl = Surface::flat_cylinder(1.0);
  LiouvilleParams p;
  p.gamma = 1.0;
  p.mu = 1.0;
  p.mu_boundary = 0.0;
  InsertionSet ins;
  ins.bulk.push_back({Point{0.5, 0.25}, 1.0});
  double a = 0.3;
  ConformalFactor phi;
  phi.phi = [a](const Point& q) { return a * std::cos(kTwoPi * q.v); };
  phi.laplacian_phi = [a](const Point& q) {
    return -kTwoPi * kTwoPi * a * std::cos(kTwoPi * q.v);
  };
  phi.normal_derivative = [](const Point&, int) { return 0.0; };

  McConfig mc;
  mc.n_samples = 2000;
  mc.eps = 1.0 / 8.0;
  mc.n1 = mc.n2 = mc.nb = 48;
  mc.basis_cutoff = 900.0;
  CorrelationEstimate curved = correlation_estimate(cyl, p, ins, &phi, mc);
  CorrelationEstimate flat = correlation_estimate(cyl, p, ins, nullptr, mc);
  if (curved.diverged || flat.diverged) {
    detail = "unexpected divergence";
    return false;
  }
  double zr = z_gff_ratio(cyl, phi, mc.n1, mc.n2, mc.nb);
  double an = anomaly_factor(cyl, p, ins, phi, mc.n1, mc.n2, mc.nb);
  double ratio = (zr * curved.value) / (an * flat.value);
  double se = std::abs(ratio) * std::hypot(curved.stderr_ / curved.value,
                                           flat.stderr_ / flat.value);
  detail = "ratio = " + fmt(ratio) + " +- " + fmt(se) + " (|ratio-1| tol 3 se)";
  return std::abs(ratio - 1.0) < 3.0 * se;
}

// 10. Cut decomposition of the free field: deterministic covariance residual
//     on both cut types, and the sampled statistical twin.
bool check_markov(std::string& detail) {
  double rc = markov_covariance_residual(Surface::flat_cylinder(1.0), 20);
  double rh = markov_covariance_residual(Surface::hemisphere(), 20);
  TwinResult tc = markov_sampled_twin(Surface::flat_cylinder(1.0), 2000, 11, 1);
  TwinResult th = markov_sampled_twin(Surface::hemisphere(), 2000, 11, 1);
  detail = "residuals " + fmt(rc) + " / " + fmt(rh) +
           " (tol 1e-6); twin z " + fmt(tc.max_abs_z) + " / " +
           fmt(th.max_abs_z) + " (tol 3)";
  return rc < 1e-6 && rh < 1e-6 && tc.max_abs_z < 3.0 && th.max_abs_z < 3.0;
}

// 11. Collision scan: bulk-bulk slope at 1e5 samples vs the predicted -0.25,
//     and no case exceeds its predicted bound by more than 3 stderr.
bool check_fusion(std::string& detail) {
  LiouvilleParams p;
  p.gamma = 1.0;
  p.mu = 1.0;
  p.mu_boundary = 0.0;
  FusionScanConfig cfg;
  cfg.distances = {0.4, 0.2, 0.1, 0.05};
  cfg.eps = 0.01;
  cfg.n_samples = 100000;
  cfg.seed = 5;
  cfg.workers = 1;
  cfg.params = p;
  cfg.spectators.bulk.push_back({Point{0.0, 2.0}, 2.0});

  FusionCase bb{FusionKind::BulkBulk, 0.5, 0.5};
  FusionScanResult rb = fusion_scan(bb, cfg);
  bool slope_ok = std::abs(rb.slope - rb.predicted) < 0.1 * std::abs(rb.predicted);
  bool bounds_ok = !rb.bound_violated;

  FusionScanConfig cheap = cfg;
  cheap.n_samples = 20000;
  // Heavier spectator: the lighter colliding sets must still clear the
  // total-charge gate.
  cheap.spectators.bulk[0].alpha = 2.2;
  // The bound compares against the leading short-distance exponent, and the
  // common-random-number slope error is ~5e-5; push the ladder deep enough
  // that the smooth sub-leading variation of the correlator (which decays
  // roughly quadratically in distance) drops below that precision.
  cheap.distances = {0.1, 0.05, 0.025, 0.0125};
  cheap.eps = 0.0025;
  cheap.n_rings = 88;
  cheap.n_angles = 56;
  FusionScanResult rr =
      fusion_scan(FusionCase{FusionKind::BulkReflection, 0.5, 0.0}, cheap);
  FusionScanResult rd =
      fusion_scan(FusionCase{FusionKind::BoundaryBoundary, 0.5, 0.5}, cheap);
  bounds_ok = bounds_ok && !rr.bound_violated && !rd.bound_violated;

  detail = "bulk-bulk slope " + fmt(rb.slope) + " vs " + fmt(rb.predicted) +
           " (tol 10%); bound checks " + (bounds_ok ? "clean" : "VIOLATED");
  return slope_ok && bounds_ok;
}

// 12. Identical (config, seed, workers) produce byte-identical reports
//     once the timing field is stripped.
bool check_reproducibility(std::string& detail) {
  const std::string text =
      "command correlate\n"
      "[liouville]\n"
      "gamma 1.0\n"
      "mu 1.0\n"
      "mu_boundary 0.5\n"
      "[insertions]\n"
      "bulk 0.5 0.25 1.0\n"
      "boundary 0.0 0.3 1.0\n"
      "[mc]\n"
      "n_samples 64\n"
      "seed 9\n"
      "workers 2\n"
      "eps 0.125\n"
      "n1 32\nn2 32\nnb 32\n"
      "basis_cutoff 400\n";
  ExperimentConfig cfg = parse_config(text);
  RunOutcome a = run_experiment(cfg);
  RunOutcome b = run_experiment(cfg);
  bool same = a.report.to_json(false) == b.report.to_json(false) &&
              a.exit_code == b.exit_code && a.artifacts == b.artifacts;
  detail = same ? "reports byte-identical modulo timing"
                : "reports DIFFER";
  return same;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"doubling identity reassembles the Neumann kernel", check_doubling},
      {"Neumann kernel defining system and parts identity", check_green_system},
      {"eigenvalue counting slope matches 4 pi / volume", check_weyl},
      {"circle-average variance gains ln 2 per dyadic rung", check_circle_ladder},
      {"chaos masses: expectations, L2 Cauchy decay, critical coupling", check_gmc},
      {"admissibility truth table across coupling regimes", check_seiberg_table},
      {"zero-mode quadrature vs Gamma closed forms", check_zero_mode},
      {"mu-differentiation identity and exact rescaling", check_scaling},
      {"metric-change factor end to end", check_anomaly},
      {"cut decomposition: deterministic residual and sampled twin", check_markov},
      {"collision scan slope and bound checks", check_fusion},
      {"byte-identical reports for identical inputs", check_reproducibility},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    std::printf("[%2zu] %s  %s: %s  (%.1fs)\n", i + 1, ok ? "PASS" : "FAIL",
                criteria[i].title, detail.c_str(), dt);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (failed) std::printf("%d of 12 criteria failed\n", failed);
  else std::printf("all 12 criteria passed\n");
  return failed == 0 ? 0 : 1;
}
