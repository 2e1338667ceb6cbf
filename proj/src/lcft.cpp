#include "blcft/lcft.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace blcft {

void LiouvilleParams::validate() const {
  if (!(gamma > 0.0) || gamma > 2.0)
    throw std::invalid_argument("gamma must lie in (0, 2]");
  if (mu < 0.0 || mu_boundary < 0.0)
    throw std::invalid_argument("cosmological constants must be nonnegative");
  if (mu == 0.0 && mu_boundary == 0.0)
    throw std::invalid_argument("mu and mu_boundary cannot both vanish");
}

double charge_excess(const InsertionSet& ins, const LiouvilleParams& p,
                     double chi) {
  double s = 0.0;
  for (const auto& b : ins.bulk) s += b.alpha;
  for (const auto& b : ins.boundary) s += 0.5 * b.beta;
  return s - p.q() * chi;
}

SeibergReport seiberg_check(const InsertionSet& ins, const LiouvilleParams& p,
                            double chi) {
  p.validate();
  SeibergReport r;
  r.regime = p.mu > 0.0
                 ? (p.mu_boundary > 0.0 ? SeibergReport::Regime::BothPositive
                                        : SeibergReport::Regime::BulkOnly)
                 : SeibergReport::Regime::BoundaryOnly;
  double q = p.q();
  r.bound1 = charge_excess(ins, p, chi) > 0.0;
  bool all2 = true, all3 = true;
  for (const auto& b : ins.bulk) {
    r.bound2.push_back(b.alpha < q);
    all2 = all2 && r.bound2.back();
  }
  for (const auto& b : ins.boundary) {
    r.bound3.push_back(b.beta < q);
    all3 = all3 && r.bound3.back();
  }
  r.admissible = r.bound1 && (p.mu > 0.0 ? all2 : true) &&
                 (p.mu_boundary > 0.0 ? all3 : true);
  return r;
}

double insertion_potential(const Surface& s, const InsertionSet& ins,
                           const Point& x) {
  double h = 0.0;
  for (const auto& b : ins.bulk) {
    if (s.double_distance(b.z, x) < 1e-12)
      throw std::invalid_argument("potential evaluated at an insertion point");
    h += kTwoPi * b.alpha *
         green_bordered(s, BoundaryCondition::Neumann, b.z, x);
  }
  for (const auto& b : ins.boundary) {
    if (s.double_distance(b.s, x) < 1e-12)
      throw std::invalid_argument("potential evaluated at an insertion point");
    h += kPi * b.beta * green_bordered(s, BoundaryCondition::Neumann, b.s, x);
  }
  return h;
}

ZeroModeResult zero_mode_integral(double bulk_mass, double boundary_mass,
                                  double sbar, const LiouvilleParams& p) {
  double a = p.mu * bulk_mass;
  double b = p.mu_boundary * boundary_mass;
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("negative chaos mass");
  ZeroModeResult r;
  if (sbar <= 0.0 || (a == 0.0 && b == 0.0)) {
    r.divergent = true;
    return r;
  }
  double g = p.gamma;
  if (b == 0.0) {
    r.value = std::exp(std::lgamma(sbar / g) - (sbar / g) * std::log(a)) / g;
    return r;
  }
  if (a == 0.0) {
    r.value =
        std::exp(std::lgamma(2.0 * sbar / g) - (2.0 * sbar / g) * std::log(b)) *
        2.0 / g;
    return r;
  }
  // Saddle of log f(c) = sbar c - a e^{gc} - b e^{gc/2}: quadratic in
  // w = e^{gc/2}.
  double A2 = a * g, B2 = 0.5 * b * g;
  double w = (-B2 + std::sqrt(B2 * B2 + 4.0 * A2 * sbar)) / (2.0 * A2);
  double cstar = 2.0 * std::log(w) / g;
  auto logf = [&](double c) {
    return sbar * c - a * std::exp(g * c) - b * std::exp(0.5 * g * c);
  };
  double top = logf(cstar);
  double lo = cstar, hi = cstar;
  while (logf(lo) > top - 42.0) lo -= 1.0;
  while (logf(hi) > top - 42.0) hi += 1.0;
  auto f = [&](double c) { return std::exp(logf(c) - top); };
  r.value = std::exp(top) * integrate(f, lo, hi, 1e-10, 40);
  return r;
}

namespace {

struct McContext {
  double sbar = 0.0;
  double log_prefactor = 0.0;              // ln C, conformal terms included
  std::vector<double> bulk_h;              // H at bulk nodes, row-major
  std::vector<double> bdry_h;              // H at boundary nodes, comp-major
};

double boundary_quad(const Surface& s, int nb,
                     const std::function<double(const Point&)>& f) {
  double acc = 0.0;
  for (int c = 0; c < s.boundary_components(); ++c) {
    double hb = s.boundary_component_length(c) / nb;
    for (int j = 0; j < nb; ++j) acc += hb * f(s.boundary_point(c, (j + 0.5) * hb));
  }
  return acc;
}

// ln C(z, s) plus the explicit conformal terms when phi is present.
McContext make_context(const Surface& s, const LiouvilleParams& p,
                       const InsertionSet& ins, const ConformalFactor* phi,
                       const RegularizedField& nodes) {
  McContext ctx;
  ctx.sbar = charge_excess(ins, p, s.euler_characteristic());

  auto kn = [&](const Point& a, const Point& b) {
    return green_bordered(s, BoundaryCondition::Neumann, a, b);
  };
  auto kd = [&](const Point& a, const Point& b) { return green_double(s, a, b); };

  // Insertion self-energies: W(z) = lim E[X_eps(z)^2] + ln eps = 2 pi times
  // the regular part of the relevant kernel.
  double lc = 0.0;
  std::vector<Point> pts;
  std::vector<double> wts;
  for (const auto& b : ins.bulk) {
    lc += 0.5 * b.alpha * b.alpha * kTwoPi * green_regular_part(s, kn, b.z);
    pts.push_back(b.z);
    wts.push_back(b.alpha);
  }
  for (const auto& b : ins.boundary) {
    lc += 0.25 * b.beta * b.beta * kTwoPi * green_regular_part(s, kd, b.s);
    pts.push_back(b.s);
    wts.push_back(0.5 * b.beta);
  }
  for (std::size_t k = 0; k < pts.size(); ++k)
    for (std::size_t l = k + 1; l < pts.size(); ++l)
      lc += wts[k] * wts[l] * kTwoPi * kn(pts[k], pts[l]);

  ctx.bulk_h.resize(std::size_t(nodes.n1()) * nodes.n2());
  for (int i = 0; i < nodes.n1(); ++i)
    for (int j = 0; j < nodes.n2(); ++j)
      ctx.bulk_h[std::size_t(i) * nodes.n2() + j] =
          insertion_potential(s, ins, nodes.bulk_node(i, j));
  for (int c = 0; c < s.boundary_components(); ++c)
    for (int j = 0; j < nodes.nb(); ++j)
      ctx.bdry_h.push_back(insertion_potential(s, ins, nodes.boundary_node(c, j)));

  if (phi) {
    // Metric change e^phi g0.  Every covariance in the reduction is the
    // recentred kernel C_g(x,y) = C0(x,y) - u(x) - u(y) + M, with
    // u(x) = 2 pi m_g(G0(x, .)) and M its double average, because the field
    // of the new metric is X - m_g(X).  The curvature Girsanov additionally
    // shifts the field inside the chaos masses by
    //   S(x) = -(Q/2)(phi(x) - m_g(phi)) - (Q R0 Vol0 / 4 pi)(M - u(x)),
    // contributes S at each insertion, and leaves the Gaussian prefactor
    // (1/2) int S dnu with nu = -(Q/4 pi)[(R0 - lap phi) dv0 + dn phi dl0]
    // (the boundary is geodesic in the base metric, k0 = 0).
    double qc = p.q();
    ConformalGreen cg(s, BoundaryCondition::Neumann, phi->phi);
    Quadrature q = s.bulk_quadrature(nodes.n1(), nodes.n2());
    double wsum = 0.0, psum = 0.0;
    for (std::size_t i = 0; i < q.pts.size(); ++i) {
      double w = q.w[i] * std::exp(phi->phi(q.pts[i]));
      wsum += w;
      psum += w * phi->phi(q.pts[i]);
    }
    double mgphi = psum / wsum;
    double r0 = s.scalar_curvature();
    double vol0 = s.volume();
    double big_m = kTwoPi * cg.double_average();
    auto uu = [&](const Point& x) { return kTwoPi * cg.slot_average(x); };
    auto shift_s = [&](const Point& x) {
      return -0.5 * qc * (phi->phi(x) - mgphi) -
             qc * r0 * vol0 / (4.0 * kPi) * (big_m - uu(x));
    };

    double bulkpart = 0.0;
    for (std::size_t i = 0; i < q.pts.size(); ++i)
      bulkpart += q.w[i] * shift_s(q.pts[i]) *
                  (r0 - phi->laplacian_phi(q.pts[i]));
    double bdrypart = 0.0;
    for (int c = 0; c < s.boundary_components(); ++c) {
      double hb = s.boundary_component_length(c) / nodes.nb();
      for (int j = 0; j < nodes.nb(); ++j) {
        Point pt = s.boundary_point(c, (j + 0.5) * hb);
        bdrypart += hb * shift_s(pt) * phi->normal_derivative(pt, c);
      }
    }
    lc += -qc / (8.0 * kPi) * (bulkpart + bdrypart);

    // Per-insertion conversion of the regularization scale, the curvature
    // shift at the insertion, and the recentring of the insertion
    // self/cross covariances (which telescopes to W^2 M / 2 - W sum w u).
    for (const auto& b : ins.bulk)
      lc += 0.25 * b.alpha * b.alpha * phi->phi(b.z) + b.alpha * shift_s(b.z);
    for (const auto& b : ins.boundary)
      lc += 0.125 * b.beta * b.beta * phi->phi(b.s) +
            0.5 * b.beta * shift_s(b.s);
    double wtot = 0.0, su = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      wtot += wts[k];
      su += wts[k] * uu(pts[k]);
    }
    lc += 0.5 * wtot * wtot * big_m - wtot * su;

    // Recentred insertion potential and curvature shift on the mass mesh:
    // H_g(x) = H0(x) + (W M - sum_k w_k u_k) - W u(x), plus S(x).
    double hconst = wtot * big_m - su;
    for (int i = 0; i < nodes.n1(); ++i)
      for (int j = 0; j < nodes.n2(); ++j) {
        Point x = nodes.bulk_node(i, j);
        ctx.bulk_h[std::size_t(i) * nodes.n2() + j] +=
            hconst - wtot * uu(x) + shift_s(x);
      }
    std::size_t off = 0;
    for (int c = 0; c < s.boundary_components(); ++c)
      for (int j = 0; j < nodes.nb(); ++j, ++off) {
        Point x = nodes.boundary_node(c, j);
        ctx.bdry_h[off] += hconst - wtot * uu(x) + shift_s(x);
      }
  }
  ctx.log_prefactor = lc;
  return ctx;
}

// H-weighted chaos masses of one sample (measure cells are ordered exactly
// like the context H tables).
void weighted_masses(const McContext& ctx, const LiouvilleParams& p,
                     const ConformalFactor* phi, const RegularizedField& f,
                     double* bulk_out, double* bdry_out) {
  GmcMeasure mb = bulk_measure(f, p.gamma);
  GmcMeasure md = boundary_measure(f, p.gamma);
  if (phi) {
    double mg = field_mean(f, phi->phi);
    mb = measure_change(mb, phi->phi, mg);
    md = measure_change(md, phi->phi, mg);
  }
  double a = 0.0;
  for (std::size_t i = 0; i < mb.weights.size(); ++i)
    a += mb.weights[i] * std::exp(p.gamma * ctx.bulk_h[i]);
  double l = 0.0;
  for (std::size_t i = 0; i < md.weights.size(); ++i)
    l += md.weights[i] * std::exp(0.5 * p.gamma * ctx.bdry_h[i]);
  *bulk_out = a;
  *bdry_out = l;
}

}  // namespace

CorrelationEstimate correlation_estimate(const Surface& s,
                                         const LiouvilleParams& p,
                                         const InsertionSet& ins,
                                         const ConformalFactor* phi,
                                         const McConfig& mc) {
  p.validate();
  CorrelationEstimate out;
  out.seed = mc.seed;
  SeibergReport gate = seiberg_check(ins, p, s.euler_characteristic());
  if (!gate.admissible) {
    out.diverged = true;
    return out;
  }

  SpectralBasis basis =
      SpectralBasis::bordered_cutoff(s, BoundaryCondition::Neumann,
                                     mc.basis_cutoff);
  RegularizedField probe(basis, sample_gff(basis, mc.seed, 0), mc.eps, mc.n1,
                         mc.n2, mc.nb);
  McContext ctx = make_context(s, p, ins, phi, probe);

  std::vector<double> values(mc.n_samples, 0.0);
  std::vector<char> bad(mc.n_samples, 0);
  parallel_for(mc.n_samples, mc.workers, [&](std::size_t r) {
    GffSample sample = sample_gff(basis, mc.seed, r);
    RegularizedField f(basis, sample, mc.eps, mc.n1, mc.n2, mc.nb);
    double a = 0.0, l = 0.0;
    weighted_masses(ctx, p, phi, f, &a, &l);
    ZeroModeResult zm = zero_mode_integral(a, l, ctx.sbar, p);
    if (zm.divergent)
      bad[r] = 1;
    else
      values[r] = zm.value;
  });
  for (char c : bad)
    if (c) {
      out.diverged = true;
      return out;
    }
  MeanErr m = mean_and_stderr(values);
  double pref = std::exp(ctx.log_prefactor);
  out.value = pref * m.mean;
  out.stderr_ = pref * m.stderr_;
  out.n_samples = mc.n_samples;
  return out;
}

double dirichlet_energy(const Surface& s, const ConformalFactor& phi, int n1,
                        int n2, int nb) {
  Quadrature q = s.bulk_quadrature(n1, n2);
  double vol = 0.0;
  for (std::size_t i = 0; i < q.pts.size(); ++i)
    vol -= q.w[i] * phi.phi(q.pts[i]) * phi.laplacian_phi(q.pts[i]);
  double bd = 0.0;
  for (int c = 0; c < s.boundary_components(); ++c) {
    double hb = s.boundary_component_length(c) / nb;
    for (int j = 0; j < nb; ++j) {
      Point pt = s.boundary_point(c, (j + 0.5) * hb);
      bd += hb * phi.phi(pt) * phi.normal_derivative(pt, c);
    }
  }
  return vol + bd;
}

namespace {

double conformal_action(const Surface& s, const ConformalFactor& phi, int n1,
                        int n2, int nb) {
  double x = dirichlet_energy(s, phi, n1, n2, nb);
  double r0 = s.scalar_curvature();
  if (r0 != 0.0) {
    Quadrature q = s.bulk_quadrature(n1, n2);
    for (std::size_t i = 0; i < q.pts.size(); ++i)
      x += 2.0 * r0 * q.w[i] * phi.phi(q.pts[i]);
  }
  double k0 = s.boundary_geodesic_curvature();
  if (k0 != 0.0)
    x += 4.0 * k0 * boundary_quad(s, nb, phi.phi);
  return x;
}

}  // namespace

double anomaly_factor(const Surface& s, const LiouvilleParams& p,
                      const InsertionSet& ins, const ConformalFactor& phi,
                      int n1, int n2, int nb) {
  double q = p.q();
  double ex = p.central_charge() / (96.0 * kPi) *
              conformal_action(s, phi, n1, n2, nb);
  auto delta = [&](double a) { return 0.5 * a * (q - 0.5 * a); };
  for (const auto& b : ins.bulk) ex -= delta(b.alpha) * phi.phi(b.z);
  for (const auto& b : ins.boundary)
    ex -= 0.5 * delta(b.beta) * phi.phi(b.s);
  return std::exp(ex);
}

double z_gff_ratio(const Surface& s, const ConformalFactor& phi, int n1,
                   int n2, int nb) {
  return std::exp(conformal_action(s, phi, n1, n2, nb) / (96.0 * kPi));
}

ScalingResult scaling_residual(const Surface& s, const LiouvilleParams& p,
                               const InsertionSet& ins, const McConfig& mc) {
  p.validate();
  if (!(p.mu > 0.0))
    throw std::invalid_argument("scaling residual requires mu > 0");
  SeibergReport gate = seiberg_check(ins, p, s.euler_characteristic());
  if (!gate.admissible)
    throw std::invalid_argument("inadmissible insertion set");

  SpectralBasis basis =
      SpectralBasis::bordered_cutoff(s, BoundaryCondition::Neumann,
                                     mc.basis_cutoff);
  RegularizedField probe(basis, sample_gff(basis, mc.seed, 0), mc.eps, mc.n1,
                         mc.n2, mc.nb);
  McContext ctx = make_context(s, p, ins, nullptr, probe);
  double g = p.gamma;

  std::vector<double> lhs(mc.n_samples, 0.0), rhs(mc.n_samples, 0.0);
  parallel_for(mc.n_samples, mc.workers, [&](std::size_t r) {
    GffSample sample = sample_gff(basis, mc.seed, r);
    RegularizedField f(basis, sample, mc.eps, mc.n1, mc.n2, mc.nb);
    double a = 0.0, l = 0.0;
    weighted_masses(ctx, p, nullptr, f, &a, &l);
    // The integrated extra insertion is absorbed into the chaos mass: the
    // bulk term adds charge gamma (shift sbar -> sbar + gamma), the boundary
    // term gamma/2.
    double vb = p.mu * g * a * zero_mode_integral(a, l, ctx.sbar + g, p).value;
    double vd = p.mu_boundary > 0.0
                    ? p.mu_boundary * 0.5 * g * l *
                          zero_mode_integral(a, l, ctx.sbar + 0.5 * g, p).value
                    : 0.0;
    lhs[r] = vb + vd;
    rhs[r] = ctx.sbar * zero_mode_integral(a, l, ctx.sbar, p).value;
  });
  double pref = std::exp(ctx.log_prefactor);
  MeanErr ml = mean_and_stderr(lhs), mr = mean_and_stderr(rhs);
  ScalingResult res;
  res.lhs = pref * ml.mean;
  res.rhs = pref * mr.mean;
  res.lhs_stderr = pref * ml.stderr_;
  res.rhs_stderr = pref * mr.stderr_;
  double se = std::hypot(res.lhs_stderr, res.rhs_stderr);
  res.residual_over_stderr = se > 0.0 ? (res.lhs - res.rhs) / se : 0.0;
  return res;
}

}  // namespace blcft
