#include "blcft/green.hpp"

#include <cmath>
#include <stdexcept>

namespace blcft {

namespace {

double wrap_centered(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r > 0.5 * period) r -= period;
  return r;
}

// Green function of the flat torus (R/PZ) x (R/Z) at separation (t, y):
// exact zero mode + exponentially convergent Fourier remainder, with the
// slowly converging log tail resummed in closed form.
double torus_green(double P, double t, double y) {
  t = std::abs(wrap_centered(t, P));
  y = wrap_centered(y, 1.0);
  double g = t * t / (2.0 * P) - 0.5 * t + P / 12.0;

  // Resummed tail: -(1/4pi) ln(1 - 2 q cos(2 pi y) + q^2), q = e^{-2 pi t}.
  double q = std::exp(-kTwoPi * t);
  double c = std::cos(kTwoPi * y);
  double arg = 1.0 - 2.0 * q * c + q * q;
  if (arg <= 0.0) return std::numeric_limits<double>::infinity();
  g -= std::log(arg) / (4.0 * kPi);

  // Remainder: cosh(2 pi k (P/2 - t)) / (2 pi k sinh(pi k P)) - e^{-2 pi k t}/(2 pi k),
  // written in decaying exponentials; powers and cosines by recurrence.
  const double q1 = std::exp(-kTwoPi * (P - t));
  const double qP = q * q1;  // e^{-2 pi P}
  double e1 = 1.0, e2 = 1.0, eP = 1.0;
  double ck = 1.0, ckm1 = c;  // cos(2 pi k y), cos(2 pi (k-1) y)
  for (int k = 1; k <= 64; ++k) {
    e1 *= q1;
    e2 *= q;
    eP *= qP;
    double tmp = 2.0 * c * ck - ckm1;
    ckm1 = ck;
    ck = tmp;
    double bracket = ((e2 + e1) / (1.0 - eP) - e2) / (kTwoPi * k);
    g += bracket * ck;
    if (std::abs(bracket) < 1e-18) break;
  }
  return g;
}

double sphere_green(double d) {
  double sd = std::sin(0.5 * d);
  if (sd <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(sd) / kTwoPi - 1.0 / (4.0 * kPi);
}

}  // namespace

double green_double(const Surface& s, const Point& x, const Point& y) {
  switch (s.kind()) {
    case SurfaceKind::FlatCylinder:
      return torus_green(2.0 * s.modulus(), x.u - y.u, x.v - y.v);
    case SurfaceKind::Hemisphere:
      return sphere_green(s.double_distance(x, y));
    case SurfaceKind::HalfPlaneDozz:
      throw std::invalid_argument("half plane model has no Green double; use its covariance");
  }
  return 0;
}

double green_bordered(const Surface& s, BoundaryCondition bc, const Point& x,
                      const Point& y) {
  double a = green_double(s, x, y);
  double b = green_double(s, x, s.involution(y));
  return bc == BoundaryCondition::Neumann ? a + b : a - b;
}

double green_regular_part(const Surface& s,
                          const std::function<double(const Point&, const Point&)>& kernel,
                          const Point& x) {
  // Offset along the second chart direction; the regular part has an O(d^2)
  // error, so 1e-6 is far below any tolerance used here.
  const double d = 1e-6;
  Point y = x;
  if (s.kind() == SurfaceKind::Hemisphere && std::sin(x.u) < 0.25) {
    y.u += d;  // near the pole, offset in theta instead
  } else if (s.kind() == SurfaceKind::Hemisphere) {
    y.v += d / std::sin(x.u);
  } else {
    y.v += d;
  }
  double dist = s.double_distance(x, y);
  return kernel(x, y) + std::log(dist) / kTwoPi;
}

double mg_average(const Surface& s,
                  const std::function<double(const Point&)>& phi,
                  const std::function<double(const Point&)>& f,
                  const Point* sing, int n1, int n2) {
  Quadrature q = s.bulk_quadrature(n1, n2);
  double h = (s.kind() == SurfaceKind::FlatCylinder ? s.modulus() / n1
                                                    : 0.5 * kPi / n1);
  double r0 = sing ? 4.0 * h : 0.0;

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < q.pts.size(); ++i) {
    double w = q.w[i] * (phi ? std::exp(phi(q.pts[i])) : 1.0);
    den += w;
    if (sing && s.double_distance(q.pts[i], *sing) < r0) continue;
    num += w * f(q.pts[i]);
  }
  if (sing) {
    // Analytic patch over the excluded geodesic disk: f ~ -(1/2pi) ln d + freg.
    auto kernel = [&f](const Point& a, const Point& b) {
      (void)a;
      return f(b);
    };
    double freg = green_regular_part(s, kernel, *sing);
    double disk_log = -0.5 * r0 * r0 * (std::log(r0) - 0.5);  // int_B -(1/2pi) ln r dA
    double patch = disk_log + kPi * r0 * r0 * freg;
    num += patch * (phi ? std::exp(phi(*sing)) : 1.0);
  }
  return num / den;
}

ConformalGreen::ConformalGreen(const Surface& s, BoundaryCondition bc,
                               std::function<double(const Point&)> phi,
                               int n_modes, int nq1, int nq2)
    : surf_(s), bc_(bc), basis_(SpectralBasis::bordered(s, bc, n_modes)) {
  Quadrature q = s.bulk_quadrature(nq1, nq2);
  std::vector<double> rho(q.pts.size());
  double z = 0.0;
  for (std::size_t i = 0; i < q.pts.size(); ++i) {
    rho[i] = q.w[i] * (phi ? std::exp(phi(q.pts[i])) : 1.0);
    z += rho[i];
  }
  coef_.resize(basis_.size());
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    const Mode& m = basis_.modes()[j];
    double c = 0.0;
    for (std::size_t i = 0; i < q.pts.size(); ++i)
      c += rho[i] * basis_.eval(m, q.pts[i]);
    c /= z;
    coef_[j] = c / m.lambda;
    mm_ += c * coef_[j];
  }
}

double ConformalGreen::slot_average(const Point& x) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < basis_.size(); ++j)
    acc += coef_[j] * basis_.eval(basis_.modes()[j], x);
  return acc;
}

double ConformalGreen::operator()(const Point& x, const Point& y) const {
  return green_bordered(surf_, bc_, x, y) - slot_average(x) - slot_average(y) +
         mm_;
}

namespace {

// C^3 cutoff: 1 on [0, rho/2], 0 on [rho, inf), 7th-order smoothstep between.
double radial_cutoff(double r, double rho) {
  if (r <= 0.5 * rho) return 1.0;
  if (r >= rho) return 0.0;
  double t = (r - 0.5 * rho) / (0.5 * rho);
  double t4 = t * t * t * t;
  return 1.0 - t4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

}  // namespace

double green_identity_residual(const Surface& s,
                               const std::function<double(const Point&)>& f,
                               const std::function<double(const Point&)>& lap_f,
                               const std::function<double(const Point&, int)>& dn_f,
                               const Point& x, int n1, int n2, int nb) {
  auto G = [&](const Point& p) { return green_bordered(s, BoundaryCondition::Neumann, x, p); };

  // Volume term: int G(x,.) lap f dv by singularity subtraction.  The midpoint
  // rule integrates the smooth part G + (1/2pi) chi ln d; the subtracted piece
  // -(1/2pi) chi ln r is integrated in geodesic polar coordinates, where the
  // angular average is a spectrally accurate equal-weight circle sum.
  double rho = std::min(0.2, 0.9 * s.distance_to_boundary(x));
  Quadrature q = s.bulk_quadrature(n1, n2);
  double vol_term = 0.0, mean_f = 0.0, vol = 0.0;
  for (std::size_t i = 0; i < q.pts.size(); ++i) {
    mean_f += q.w[i] * f(q.pts[i]);
    vol += q.w[i];
    double d = s.double_distance(q.pts[i], x);
    double smooth = G(q.pts[i]);
    if (d < rho) smooth += radial_cutoff(d, rho) * std::log(d) / kTwoPi;
    vol_term += q.w[i] * smooth * lap_f(q.pts[i]);
  }
  mean_f /= vol;
  auto polar_term = [&](double r) {
    if (r <= 0.0) return 0.0;
    CircleSample c = s.geodesic_circle(x, r, 64);
    double avg = 0.0;
    for (const Point& p : c.points) avg += lap_f(p);
    avg /= double(c.points.size());
    double jac = (s.kind() == SurfaceKind::Hemisphere) ? std::sin(r) : r;
    return -radial_cutoff(r, rho) * std::log(r) * jac * avg;
  };
  vol_term += integrate(polar_term, 0.0, rho, 1e-11, 30);

  // Boundary term: smooth periodic integrand, midpoint rule per component.
  double bd_term = 0.0;
  for (int c = 0; c < s.boundary_components(); ++c) {
    double len = s.boundary_component_length(c);
    // Base-metric arclength parametrization for the two compact models.
    double chart_len = (s.kind() == SurfaceKind::FlatCylinder) ? 1.0 : kTwoPi;
    double hb = chart_len / nb;
    for (int j = 0; j < nb; ++j) {
      Point p = s.boundary_point(c, (j + 0.5) * hb);
      bd_term += hb * G(p) * dn_f(p, c);
    }
    (void)len;
  }

  return vol_term - bd_term + (f(x) - mean_f);
}

namespace {

// Distance between two points of a geodesic circle of radius eps at angular
// separation dth (chart-independent, by model).
double circle_chord(const Surface& s, double eps, double dth) {
  if (s.kind() == SurfaceKind::Hemisphere) {
    double ce = std::cos(eps), se = std::sin(eps);
    double cd = ce * ce + se * se * std::cos(dth);
    return std::acos(std::min(1.0, std::max(-1.0, cd)));
  }
  return 2.0 * eps * std::abs(std::sin(0.5 * dth));
}

// (1/2pi) int_0^{2pi} ln d(dth) d dth, using ln d = ln(2 sin(dth/2)) +
// smooth remainder whose first piece integrates to zero.
double circle_log_mean(const Surface& s, double eps, int n) {
  double acc = std::log(eps);
  if (s.kind() == SurfaceKind::Hemisphere) {
    acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double dth = kTwoPi * (j + 0.5) / n;
      double ratio = circle_chord(s, eps, dth) / (2.0 * std::sin(0.5 * dth));
      acc += std::log(ratio) / n;
    }
    // ln(2 sin(dth/2)) integrates to zero, so the smooth-ratio average is the
    // whole integral (ratio -> sin(eps) as dth -> 0, no singularity).
  }
  return acc;
}

}  // namespace

double circle_average_variance(const Surface& s, const Point& x, double eps,
                               int n) {
  if (s.distance_to_boundary(x) <= eps)
    throw std::invalid_argument("circle average variance requires an interior circle");
  CircleSample c = s.geodesic_circle(x, eps, n);
  if (static_cast<int>(c.points.size()) != n)
    throw std::logic_error("unexpected clipping of an interior circle");

  auto GN = [&](const Point& a, const Point& b) {
    return green_bordered(s, BoundaryCondition::Neumann, a, b);
  };

  // Smooth part S = G^N + (1/2pi) ln d over the pair grid; diagonal by limit.
  double smooth = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        smooth += green_regular_part(s, GN, c.points[i]);
      } else {
        double d = s.double_distance(c.points[i], c.points[j]);
        smooth += GN(c.points[i], c.points[j]) + std::log(d) / kTwoPi;
      }
    }
  }
  smooth /= double(n) * n;
  double log_mean = circle_log_mean(s, eps, 4 * n);
  return kTwoPi * smooth - log_mean;
}

double circle_average_covariance(const Surface& s, const Point& x, double ex,
                                 const Point& y, double ey, int n) {
  CircleSample cx = s.geodesic_circle(x, ex, n);
  CircleSample cy = s.geodesic_circle(y, ey, n);
  double acc = 0.0;
  for (std::size_t i = 0; i < cx.points.size(); ++i)
    for (std::size_t j = 0; j < cy.points.size(); ++j)
      acc += cx.weights[i] * cy.weights[j] *
             green_bordered(s, BoundaryCondition::Neumann, cx.points[i], cy.points[j]);
  return kTwoPi * acc;
}

double w_extrapolate(const Surface& s, const Point& x, double eps0, int rungs) {
  if (rungs < 2) throw std::invalid_argument("need at least two rungs");
  double prev = 0.0, cur = 0.0;
  for (int k = 0; k < rungs; ++k) {
    double eps = eps0 * std::pow(0.5, k);
    prev = cur;
    cur = circle_average_variance(s, x, eps) + std::log(eps);
  }
  return cur + (cur - prev) / 3.0;
}

}  // namespace blcft
