#include "blcft/fusion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blcft {
namespace {

double dist2d(const Point& a, const Point& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

void require_closed_half_plane(const Point& x) {
  if (x.v < 0.0) throw std::invalid_argument("point below the real axis");
}

// Circle average of ln max(|w|, eps) over |w - d| = eps.  Because a single
// circle average of ln|.| is exactly ln max(|.|, eps), this equals the double
// circle average of ln|x - y| over two radius-eps circles at distance d: the
// smoothed log kernel.  For d >= 2 eps it reduces to ln d (mean value).
double avg_log_max(double d, double eps) {
  if (d >= 2.0 * eps) return std::log(d);
  if (d <= 0.0) return std::log(eps);
  // |d + eps e^{i th}| crosses eps at cos th = -d / (2 eps).
  double th_star = std::acos(std::clamp(-d / (2.0 * eps), -1.0, 1.0));
  double part = integrate(
      [d, eps](double th) {
        return 0.5 * std::log(d * d + eps * eps + 2.0 * d * eps * std::cos(th));
      },
      0.0, th_star, 1e-13);
  return (part + (kPi - th_star) * std::log(eps)) / kPi;
}

// Circle average of ln_+ |x + eps e^{i th}| for |x| = r: exact except for the
// quadrature across the kink arc when the circle straddles the unit circle.
double avg_log_plus(double r, double eps) {
  if (r >= 1.0 + eps) return std::log(r);
  if (r <= 1.0 - eps) return 0.0;
  // |x + eps e^{i th}| > 1 iff cos th > (1 - r^2 - eps^2) / (2 r eps).
  double c = (1.0 - r * r - eps * eps) / (2.0 * r * eps);
  double th_star = std::acos(std::clamp(c, -1.0, 1.0));
  if (th_star <= 0.0) return 0.0;
  double part = integrate(
      [r, eps](double th) {
        return 0.5 * std::log(r * r + eps * eps + 2.0 * r * eps * std::cos(th));
      },
      0.0, th_star, 1e-13);
  return part / kPi;
}

struct WeightedInsertion {
  Point p;
  double w = 0.0;       // Gaussian weight: alpha (bulk) or beta/2 (boundary)
  double eps_pow = 0.0; // power of eps in the vertex normalization
};

std::vector<WeightedInsertion> weighted(const InsertionSet& ins) {
  std::vector<WeightedInsertion> out;
  for (const auto& b : ins.bulk)
    out.push_back({b.z, b.alpha, 0.5 * b.alpha * b.alpha});
  for (const auto& s : ins.boundary)
    out.push_back({s.s, 0.5 * s.beta, 0.25 * s.beta * s.beta});
  return out;
}

// log of the deterministic prefactor produced by shifting the vertex
// operators into the field: self-energies, eps powers, and cross terms.
double log_prefactor(const std::vector<WeightedInsertion>& ws, double eps) {
  double lp = 0.0;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    lp += 0.5 * ws[k].w * ws[k].w *
              dozz_covariance_smoothed(ws[k].p, ws[k].p, eps) +
          ws[k].eps_pow * std::log(eps);
    for (std::size_t l = k + 1; l < ws.size(); ++l)
      lp += ws[k].w * ws[l].w *
            dozz_covariance_smoothed(ws[k].p, ws[l].p, eps);
  }
  return lp;
}

double shift_at(const std::vector<WeightedInsertion>& ws, const Point& x,
                double eps) {
  double h = 0.0;
  for (const auto& wi : ws) h += wi.w * dozz_covariance_smoothed(wi.p, x, eps);
  return h;
}

double delta_weight(double a, double q) { return 0.5 * a * (q - 0.5 * a); }

constexpr int kBatch = 256;

// Per-replicate values f(cfg_idx, A, L) for every configuration sharing one
// field sample; replicate r uses stream (seed, r) regardless of batching.
std::vector<std::vector<double>> run_field_mc(
    const DozzFieldSampler& sampler, double gamma,
    const std::vector<std::vector<double>>& eff_area,
    const std::vector<std::vector<double>>& eff_len, int n_samples,
    std::uint64_t seed, int workers,
    const std::function<double(std::size_t, double, double)>& f) {
  std::size_t n_cfg = eff_area.size();
  std::size_t nb = sampler.bulk_size();
  std::size_t n = sampler.size();
  std::vector<std::vector<double>> out(n_cfg,
                                       std::vector<double>(n_samples, 0.0));
  std::size_t n_batches = (n_samples + kBatch - 1) / kBatch;
  parallel_for(n_batches, workers, [&](std::size_t bi) {
    int first = static_cast<int>(bi) * kBatch;
    int count = std::min(kBatch, n_samples - first);
    Eigen::MatrixXd x(n, count);
    sampler.sample_batch(seed, first, count, x.data());
    std::vector<double> ebulk(nb), ebdry(n - nb);
    for (int c = 0; c < count; ++c) {
      for (std::size_t i = 0; i < nb; ++i)
        ebulk[i] = std::exp(gamma * x(i, c));
      for (std::size_t j = nb; j < n; ++j)
        ebdry[j - nb] = std::exp(0.5 * gamma * x(j, c));
      for (std::size_t k = 0; k < n_cfg; ++k) {
        double area = 0.0, len = 0.0;
        for (std::size_t i = 0; i < nb; ++i)
          area += eff_area[k][i] * ebulk[i];
        for (std::size_t j = 0; j + nb < n; ++j)
          len += eff_len[k][j] * ebdry[j];
        out[k][first + c] = f(k, area, len);
      }
    }
  });
  return out;
}

}  // namespace

double dozz_covariance(const Point& x, const Point& y) {
  require_closed_half_plane(x);
  require_closed_half_plane(y);
  double dxy = dist2d(x, y);
  if (dxy < 1e-12) throw std::invalid_argument("coincident points");
  double dmir = std::hypot(x.u - y.u, x.v + y.v);
  double rx = std::hypot(x.u, x.v), ry = std::hypot(y.u, y.v);
  return -std::log(dxy) - std::log(dmir) + 2.0 * std::log(std::max(rx, 1.0)) +
         2.0 * std::log(std::max(ry, 1.0));
}

double dozz_covariance_smoothed(const Point& x, const Point& y, double eps) {
  require_closed_half_plane(x);
  require_closed_half_plane(y);
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  double dxy = dist2d(x, y);
  double dmir = std::hypot(x.u - y.u, x.v + y.v);
  double rx = std::hypot(x.u, x.v), ry = std::hypot(y.u, y.v);
  return -avg_log_max(dxy, eps) - avg_log_max(dmir, eps) +
         2.0 * avg_log_plus(rx, eps) + 2.0 * avg_log_plus(ry, eps);
}

double fusion_predicted_exponent(const FusionCase& c,
                                 const LiouvilleParams& p) {
  double q = p.q();
  switch (c.kind) {
    case FusionKind::BulkBulk:
      return 2.0 * (delta_weight(std::min(c.w1 + c.w2, q), q) -
                    delta_weight(c.w1, q) - delta_weight(c.w2, q));
    case FusionKind::BulkReflection:
      return delta_weight(std::min(2.0 * c.w1, q), q) -
             2.0 * delta_weight(c.w1, q);
    case FusionKind::BoundaryBoundary:
      return delta_weight(std::min(c.w1 + c.w2, q), q) -
             delta_weight(c.w1, q) - delta_weight(c.w2, q);
  }
  throw std::logic_error("unknown fusion kind");
}

DozzMesh dozz_collision_mesh(double window_radius, const Point& center,
                             double eps, int n_rings, int n_angles,
                             bool with_boundary) {
  if (!(window_radius > 1.0)) throw std::invalid_argument("window radius");
  if (!(eps > 0.0) || n_rings < 2 || n_angles < 4)
    throw std::invalid_argument("mesh parameters");
  require_closed_half_plane(center);
  DozzMesh mesh;
  double r0 = 0.5 * eps;
  double rmax = window_radius + std::hypot(center.u, center.v);
  double q = std::pow(rmax / r0, 1.0 / n_rings);
  bool boundary_centered = center.v < 1e-12;
  double span = boundary_centered ? kPi : kTwoPi;
  double dth = span / n_angles;
  for (int k = 0; k < n_rings; ++k) {
    double a = r0 * std::pow(q, k);
    double rho = a * std::sqrt(q);
    double drho = a * (q - 1.0);
    for (int j = 0; j < n_angles; ++j) {
      double th = (j + 0.5) * dth;
      Point p{center.u + rho * std::cos(th), center.v + rho * std::sin(th)};
      double rp = std::hypot(p.u, p.v);
      if (p.v <= 1e-9 || rp > window_radius) continue;
      double conf = std::pow(std::max(rp, 1.0), -4.0);
      mesh.bulk_pts.push_back(p);
      mesh.bulk_w.push_back(rho * drho * dth * conf);
    }
    if (with_boundary) {
      for (double sgn : {-1.0, 1.0}) {
        double xx = center.u + sgn * rho;
        if (std::abs(xx) > window_radius) continue;
        mesh.bdry_pts.push_back({xx, 0.0});
        mesh.bdry_w.push_back(drho / std::pow(std::max(std::abs(xx), 1.0), 2));
      }
    }
  }
  return mesh;
}

struct DozzFieldSampler::Impl {
  Eigen::MatrixXd chol;
};

DozzFieldSampler::~DozzFieldSampler() = default;

DozzFieldSampler::DozzFieldSampler(const DozzMesh& mesh, double eps)
    : impl_(new Impl) {
  std::vector<Point> nodes = mesh.bulk_pts;
  nodes.insert(nodes.end(), mesh.bdry_pts.begin(), mesh.bdry_pts.end());
  n_ = nodes.size();
  n_bulk_ = mesh.bulk_pts.size();
  if (n_ == 0) throw std::invalid_argument("empty mesh");
  Eigen::MatrixXd cov(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      double v = dozz_covariance_smoothed(nodes[i], nodes[j], eps);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    // The smoothed kernel is PSD; absorb roundoff with a tiny ridge.
    cov.diagonal().array() += 1e-10;
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("covariance factorization failed");
  }
  impl_->chol = llt.matrixL();
}

void DozzFieldSampler::sample_batch(std::uint64_t seed, std::uint64_t first,
                                    int count, double* out) const {
  Eigen::MatrixXd z(n_, count);
  for (int c = 0; c < count; ++c) {
    RngStream rng(seed, first + c);
    for (std::size_t i = 0; i < n_; ++i) z(i, c) = rng.normal();
  }
  Eigen::Map<Eigen::MatrixXd> view(out, n_, count);
  view.noalias() = impl_->chol * z;
}

FusionScanResult fusion_scan(const FusionCase& c, const FusionScanConfig& cfg) {
  const LiouvilleParams& p = cfg.params;
  p.validate();
  const auto& ds = cfg.distances;
  if (ds.size() < 2)
    throw std::invalid_argument("need at least two scan distances");
  double ratio = ds[1] / ds[0];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!(ds[i] > 2.0 * cfg.eps))
      throw std::invalid_argument("scan distance below resolution (2 eps)");
    if (i > 0) {
      if (!(ds[i] < ds[i - 1]))
        throw std::invalid_argument("distances must be strictly decreasing");
      if (std::abs(ds[i] / ds[i - 1] - ratio) > 1e-9 * ratio)
        throw std::invalid_argument("distances must form a geometric ladder");
    }
  }
  if (cfg.n_samples < 2) throw std::invalid_argument("n_samples too small");

  Point center = c.kind == FusionKind::BulkBulk ? Point{0.0, 1.0}
                                                : Point{0.0, 0.0};
  auto colliding = [&](double d) {
    InsertionSet ins;
    switch (c.kind) {
      case FusionKind::BulkBulk:
        ins.bulk.push_back({{-0.5 * d, 1.0}, c.w1});
        ins.bulk.push_back({{0.5 * d, 1.0}, c.w2});
        break;
      case FusionKind::BulkReflection:
        ins.bulk.push_back({{0.0, 0.5 * d}, c.w1});
        break;
      case FusionKind::BoundaryBoundary:
        ins.boundary.push_back({{-0.5 * d, 0.0}, c.w1});
        ins.boundary.push_back({{0.5 * d, 0.0}, c.w2});
        break;
    }
    ins.bulk.insert(ins.bulk.end(), cfg.spectators.bulk.begin(),
                    cfg.spectators.bulk.end());
    ins.boundary.insert(ins.boundary.end(), cfg.spectators.boundary.begin(),
                        cfg.spectators.boundary.end());
    return ins;
  };

  InsertionSet probe = colliding(ds.front());
  SeibergReport gate = seiberg_check(probe, p, 1.0);
  if (!gate.admissible)
    throw std::invalid_argument("inadmissible insertion set for fusion scan");
  double sbar = charge_excess(probe, p, 1.0);

  bool with_boundary = p.mu_boundary > 0.0;
  DozzMesh mesh = dozz_collision_mesh(cfg.window_radius, center, cfg.eps,
                                      cfg.n_rings, cfg.n_angles, with_boundary);
  DozzFieldSampler sampler(mesh, cfg.eps);

  double g = p.gamma, leps = std::log(cfg.eps);
  std::size_t nd = ds.size();
  std::vector<double> log_pref(nd);
  std::vector<std::vector<double>> eff_area(nd), eff_len(nd);
  for (std::size_t k = 0; k < nd; ++k) {
    auto ws = weighted(colliding(ds[k]));
    log_pref[k] = log_prefactor(ws, cfg.eps);
    eff_area[k].resize(mesh.bulk_pts.size());
    for (std::size_t i = 0; i < mesh.bulk_pts.size(); ++i)
      eff_area[k][i] =
          mesh.bulk_w[i] * std::exp(0.5 * g * g * leps +
                                    g * shift_at(ws, mesh.bulk_pts[i], cfg.eps));
    eff_len[k].resize(mesh.bdry_pts.size());
    for (std::size_t j = 0; j < mesh.bdry_pts.size(); ++j)
      eff_len[k][j] = mesh.bdry_w[j] *
                      std::exp(0.25 * g * g * leps +
                               0.5 * g * shift_at(ws, mesh.bdry_pts[j], cfg.eps));
  }

  auto vals = run_field_mc(sampler, g, eff_area, eff_len, cfg.n_samples,
                           cfg.seed, cfg.workers,
                           [&](std::size_t, double area, double len) {
                             return zero_mode_integral(area, len, sbar, p).value;
                           });

  FusionScanResult res;
  res.predicted = fusion_predicted_exponent(c, p);
  std::vector<MeanErr> means(nd);
  for (std::size_t k = 0; k < nd; ++k) {
    means[k] = mean_and_stderr(vals[k]);
    double scale = std::exp(log_pref[k]);
    res.points.push_back({ds[k], scale * means[k].mean,
                          scale * means[k].stderr_});
  }

  // Least squares slope of log(statistic) against log(distance); the error
  // propagates the full covariance of the per-distance means, which share
  // replicates by construction.
  std::vector<double> xs(nd), coef(nd);
  double xbar = 0.0;
  for (std::size_t k = 0; k < nd; ++k) xbar += (xs[k] = std::log(ds[k]));
  xbar /= static_cast<double>(nd);
  double sxx = 0.0;
  for (std::size_t k = 0; k < nd; ++k)
    sxx += (xs[k] - xbar) * (xs[k] - xbar);
  double slope = 0.0;
  for (std::size_t k = 0; k < nd; ++k) {
    coef[k] = (xs[k] - xbar) / sxx;
    slope += coef[k] * (log_pref[k] + std::log(means[k].mean));
  }
  double var = 0.0;
  double nn = static_cast<double>(cfg.n_samples);
  for (std::size_t k = 0; k < nd; ++k)
    for (std::size_t l = 0; l < nd; ++l) {
      double cov = 0.0;
      for (int r = 0; r < cfg.n_samples; ++r)
        cov += (vals[k][r] - means[k].mean) * (vals[l][r] - means[l].mean);
      cov /= (nn - 1.0) * nn;
      var += coef[k] * coef[l] * cov / (means[k].mean * means[l].mean);
    }
  res.slope = slope;
  res.slope_stderr = std::sqrt(std::max(var, 0.0));
  res.z_score = res.slope_stderr > 0.0
                    ? (res.slope - res.predicted) / res.slope_stderr
                    : 0.0;
  res.bound_violated = res.slope < res.predicted - 3.0 * res.slope_stderr;
  return res;
}

MeanErr quantum_moment(int n_area, int m_length, const InsertionSet& ins,
                       const FusionScanConfig& cfg) {
  const LiouvilleParams& p = cfg.params;
  p.validate();
  if (n_area < 0 || m_length < 0)
    throw std::invalid_argument("moment orders must be nonnegative");
  SeibergReport gate = seiberg_check(ins, p, 1.0);
  if (!gate.admissible)
    throw std::invalid_argument("inadmissible insertion set for moment");
  double sbar = charge_excess(ins, p, 1.0);
  double g = p.gamma, leps = std::log(cfg.eps);
  double sbar_shift = sbar + n_area * g + 0.5 * m_length * g;

  bool with_boundary = m_length > 0 || p.mu_boundary > 0.0;
  DozzMesh mesh = dozz_collision_mesh(cfg.window_radius, {0.0, 0.0}, cfg.eps,
                                      cfg.n_rings, cfg.n_angles, with_boundary);
  DozzFieldSampler sampler(mesh, cfg.eps);

  auto ws = weighted(ins);
  double lp = log_prefactor(ws, cfg.eps);
  std::vector<std::vector<double>> eff_area(1), eff_len(1);
  eff_area[0].resize(mesh.bulk_pts.size());
  for (std::size_t i = 0; i < mesh.bulk_pts.size(); ++i)
    eff_area[0][i] = mesh.bulk_w[i] *
                     std::exp(0.5 * g * g * leps +
                              g * shift_at(ws, mesh.bulk_pts[i], cfg.eps));
  eff_len[0].resize(mesh.bdry_pts.size());
  for (std::size_t j = 0; j < mesh.bdry_pts.size(); ++j)
    eff_len[0][j] = mesh.bdry_w[j] *
                    std::exp(0.25 * g * g * leps +
                             0.5 * g * shift_at(ws, mesh.bdry_pts[j], cfg.eps));

  auto vals = run_field_mc(
      sampler, g, eff_area, eff_len, cfg.n_samples, cfg.seed, cfg.workers,
      [&](std::size_t, double area, double len) {
        double v = zero_mode_integral(area, len, sbar_shift, p).value;
        return std::pow(area, n_area) * std::pow(len, m_length) * v;
      });
  MeanErr m = mean_and_stderr(vals[0]);
  double scale = std::exp(lp);
  m.mean *= scale;
  m.stderr_ *= scale;
  return m;
}

CollisionDiagnostic boundary_collision_diagnostic(double beta,
                                                  const LiouvilleParams& p,
                                                  double eps, int n_samples,
                                                  std::uint64_t seed,
                                                  int workers) {
  p.validate();
  if (!(eps > 0.0) || n_samples < 8)
    throw std::invalid_argument("diagnostic parameters");
  // 1D graded boundary mesh on [-1, 1] around the insertion at the origin;
  // inside the unit disk the boundary metric weight is 1.
  DozzMesh mesh;
  int n_rings = 48;
  double r0 = 0.5 * eps;
  double q = std::pow(1.0 / r0, 1.0 / n_rings);
  for (int k = 0; k < n_rings; ++k) {
    double a = r0 * std::pow(q, k);
    double rho = a * std::sqrt(q), drho = a * (q - 1.0);
    for (double sgn : {-1.0, 1.0}) {
      mesh.bdry_pts.push_back({sgn * rho, 0.0});
      mesh.bdry_w.push_back(drho);
    }
  }
  // A lone far bulk node keeps the sampler layout (bulk block first) valid
  // while contributing nothing to the boundary masses.
  mesh.bulk_pts.push_back({0.0, 2.0});
  mesh.bulk_w.push_back(0.0);
  DozzFieldSampler sampler(mesh, eps);

  double g = p.gamma, leps = std::log(eps);
  Point src{0.0, 0.0};
  std::size_t nb = mesh.bdry_pts.size();
  std::vector<double> density(nb);
  for (std::size_t j = 0; j < nb; ++j)
    density[j] = mesh.bdry_w[j] *
                 std::exp(0.25 * g * g * leps +
                          0.25 * g * beta *
                              dozz_covariance_smoothed(src, mesh.bdry_pts[j], eps));

  std::vector<double> radii;
  for (double r = eps; 2.0 * r <= 1.0; r *= 2.0) radii.push_back(r);
  std::size_t na = radii.size();

  std::vector<std::vector<double>> masses(na,
                                          std::vector<double>(n_samples, 0.0));
  std::size_t n_batches = (n_samples + kBatch - 1) / kBatch;
  parallel_for(n_batches, workers, [&](std::size_t bi) {
    int first = static_cast<int>(bi) * kBatch;
    int count = std::min(kBatch, n_samples - first);
    Eigen::MatrixXd x(sampler.size(), count);
    sampler.sample_batch(seed, first, count, x.data());
    for (int c = 0; c < count; ++c)
      for (std::size_t j = 0; j < nb; ++j) {
        double r = std::abs(mesh.bdry_pts[j].u);
        auto it = std::upper_bound(radii.begin(), radii.end(), r);
        if (it == radii.begin()) continue;
        std::size_t bin = static_cast<std::size_t>(it - radii.begin()) - 1;
        if (r >= 2.0 * radii[bin]) continue;
        masses[bin][first + c] +=
            density[j] * std::exp(0.5 * g * x(1 + j, c));
      }
  });

  CollisionDiagnostic diag;
  diag.radii = radii;
  for (std::size_t i = 0; i < na; ++i) {
    std::vector<double>& v = masses[i];
    std::nth_element(v.begin(), v.begin() + n_samples / 2, v.end());
    diag.median_annulus_mass.push_back(v[n_samples / 2]);
  }
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    xbar += std::log(radii[i]);
    ybar += std::log(diag.median_annulus_mass[i]);
  }
  xbar /= static_cast<double>(na);
  ybar /= static_cast<double>(na);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    double dx = std::log(radii[i]) - xbar;
    sxx += dx * dx;
    sxy += dx * (std::log(diag.median_annulus_mass[i]) - ybar);
  }
  diag.slope = sxy / sxx;
  return diag;
}

}  // namespace blcft
