#include "blcft/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blcft/green.hpp"
#include "blcft/util.hpp"

namespace blcft {

namespace {

// sum_{k>=1} q^k cos(k theta) / k, |q| < 1 (or q = 1 with theta != 0).
double log_mode_sum(double q, double cos_theta) {
  return -0.5 * std::log(1.0 - 2.0 * q * cos_theta + q * q);
}

struct SphereAngles {
  double theta = 0.0;  // colatitude from the cut-circle axis
  double psi = 0.0;    // azimuth around that axis
  int piece = 1;
};

// Rotated frame with the cut great circle (the doubled meridian v in {0,pi})
// as equator: the new pole is the y-axis of the embedding.
SphereAngles cut_frame(const Point& p) {
  auto v = sphere_vec(p);
  SphereAngles a;
  a.theta = std::acos(std::clamp(v[1], -1.0, 1.0));
  a.psi = std::atan2(v[2], v[0]);
  a.piece = a.theta < kPi / 2.0 ? 1 : 2;
  return a;
}

// antiderivative of sin(t) * ln tan(t/2)
double lntan_primitive(double t) {
  return -std::cos(t) * std::log(std::tan(0.5 * t)) + std::log(std::sin(t));
}

constexpr double kTraceC0 = 0.6931471805599453 - 0.5;  // ln 2 - 1/2

// m_y of the uncentered m=0 sphere kernel (Dirichlet-piece part plus the
// constant extension variance), as a function of the colatitude.
double sphere_slot(double theta) {
  double th = std::min(theta, kPi - theta);
  if (th < 1e-12) return kTraceC0 + 0.5 * std::log(2.0);  // limit at the poles
  double lt = std::log(std::tan(0.5 * th));
  return kTraceC0 + 0.5 * (-(1.0 - std::cos(th)) * lt + lntan_primitive(th));
}

}  // namespace

CutDecomposition::CutDecomposition(const Surface& s, double cut_height)
    : surf_(s), cut_(cut_height) {
  if (s.kind() == SurfaceKind::FlatCylinder) {
    if (!(cut_ > 0.0) || !(cut_ < s.modulus()))
      throw std::invalid_argument("cut height must lie inside the cylinder");
  } else if (s.kind() == SurfaceKind::Hemisphere) {
    // double mean of the uncentered kernel: c0 + int (slot - c0) dm
    mm0_ = kTraceC0 +
           integrate([](double t) { return (sphere_slot(t) - kTraceC0) *
                                           std::sin(t); },
                     1e-9, kPi / 2.0, 1e-12, 40);
  } else {
    throw std::invalid_argument("cut decomposition needs a spectral surface");
  }
}

int CutDecomposition::piece(const Point& p, double tol) const {
  if (surf_.kind() == SurfaceKind::FlatCylinder) {
    if (std::fabs(p.u - cut_) <= tol) return 0;
    return p.u < cut_ ? 1 : 2;
  }
  double sv = std::sin(p.v);
  if (std::fabs(std::sin(p.u) * sv) <= tol) return 0;  // on the meridian plane
  return sv > 0.0 ? 1 : 2;
}

// ---------------------------------------------------------------------------
// Cylinder: per-Fourier-mode 1D kernels in stable exponential form, with the
// slowly decaying four-image parts resummed into logs.
// ---------------------------------------------------------------------------

double CutDecomposition::cylinder_k0(double t, double tp) const {
  double T = surf_.modulus();
  double c = cut_;
  double g0cc = c * c / T - c + T / 3.0;
  auto B = [&](double a, double b) {
    double lo = std::min(a, b), hi = std::max(a, b);
    double v = g0cc;
    if (hi <= c)
      v += c - hi;
    else if (lo >= c)
      v += lo - c;
    return v;
  };
  auto S = [&](double a) {
    double v = g0cc;
    if (a <= c)
      v += (a * (c - a) + 0.5 * (c - a) * (c - a)) / T;
    else
      v += ((a - c) * (T - a) + 0.5 * (a - c) * (a - c)) / T;
    return v;
  };
  double mm = g0cc + (c * c * c + (T - c) * (T - c) * (T - c)) / (3.0 * T * T);
  return kTwoPi * (B(t, tp) - S(t) - S(tp) + mm);
}

double CutDecomposition::cylinder_modes(const Point& x, const Point& y,
                                        bool mixed_only,
                                        bool extension_only) const {
  double T = surf_.modulus();
  double c = cut_;
  double t = x.u, tp = y.u;
  bool in1 = t <= c, in1p = tp <= c;
  bool same = in1 == in1p;
  double dv = x.v - y.v;
  double a1 = std::fabs(t - tp), a2 = t + tp;

  double sum = 0.0;
  for (int k = 1; k <= n_modes_; ++k) {
    double mu = kTwoPi * k;
    auto E = [&](double a) { return std::exp(-mu * a); };
    double mix = 0.0;
    if (same) {
      if (in1)
        mix = (E(a1) + E(a2) - E(2 * c - a2) - E(2 * c - a1)) /
              (2.0 * mu * (1.0 + E(2 * c)));
      else {
        double b1 = a1, b2 = 2 * T - a2, c2 = T - c;
        mix = (E(b1) + E(b2) - E(2 * c2 - b2) - E(2 * c2 - b1)) /
              (2.0 * mu * (1.0 + E(2 * c2)));
      }
    }
    auto prof = [&](double tt) {
      if (tt <= c) return (E(c - tt) + E(c + tt)) / (1.0 + E(2 * c));
      return (E(tt - c) + E(2 * T - tt - c)) / (1.0 + E(2 * (T - c)));
    };
    double tau = (1.0 + E(2 * c) + E(2 * (T - c)) + E(2 * T)) /
                 (2.0 * mu * (1.0 - E(2 * T)));
    double ext = tau * prof(t) * prof(tp);
    double term = mixed_only ? mix : (extension_only ? ext : mix + ext);

    // subtract the image asymptote whose mode sum has a closed form
    double asym = 0.0;
    auto img = [&](double sgn, double a) { asym += sgn * E(a) / (2.0 * mu); };
    if (mixed_only) {
      if (same) {
        double b1 = in1 ? a1 : a1, b2 = in1 ? a2 : 2 * T - a2;
        double cc = in1 ? c : T - c;
        img(1, b1);
        img(1, b2);
        img(-1, 2 * cc - b2);
        img(-1, 2 * cc - b1);
      }
    } else if (extension_only) {
      double r = in1 ? c - t : t - c, rr = in1 ? c + t : 2 * T - t - c;
      double s = in1p ? c - tp : tp - c, ss = in1p ? c + tp : 2 * T - tp - c;
      img(1, r + s);
      img(1, r + ss);
      img(1, rr + s);
      img(1, rr + ss);
    } else {  // assembled: exact Neumann asymptote
      img(1, a1);
      img(1, a2);
      img(1, 2 * T - a2);
      img(1, 2 * T - a1);
    }
    sum += 2.0 * std::cos(kTwoPi * k * dv) * (term - asym);
  }

  // closed-form tails
  double cd = std::cos(kTwoPi * dv);
  double tail = 0.0;
  auto add_tail = [&](double sgn, double a) {
    tail += sgn * log_mode_sum(std::exp(-kTwoPi * a), cd) / kTwoPi;
  };
  if (mixed_only) {
    if (same) {
      double b1 = in1 ? a1 : a1, b2 = in1 ? a2 : 2 * T - a2;
      double cc = in1 ? c : T - c;
      add_tail(1, b1);
      add_tail(1, b2);
      add_tail(-1, 2 * cc - b2);
      add_tail(-1, 2 * cc - b1);
    }
  } else if (extension_only) {
    double r = in1 ? c - t : t - c, rr = in1 ? c + t : 2 * T - t - c;
    double s = in1p ? c - tp : tp - c, ss = in1p ? c + tp : 2 * T - tp - c;
    add_tail(1, r + s);
    add_tail(1, r + ss);
    add_tail(1, rr + s);
    add_tail(1, rr + ss);
  } else {
    add_tail(1, a1);
    add_tail(1, a2);
    add_tail(1, 2 * T - a2);
    add_tail(1, 2 * T - a1);
  }
  return sum + tail;
}

// ---------------------------------------------------------------------------
// Hemisphere through its double: the cut doubles to a great circle through
// the poles; Dirichlet-piece kernels, tan(theta/2)-power extension profiles
// and the 1/m trace coefficients all resum in closed form.
// ---------------------------------------------------------------------------

double CutDecomposition::sphere_kernel(const Point& x, const Point& y) const {
  SphereAngles a = cut_frame(x), b = cut_frame(y);
  double lo = std::min(a.theta, b.theta), hi = std::max(a.theta, b.theta);
  double q = std::tan(0.5 * lo) / std::tan(0.5 * hi);
  double cd = std::cos(a.psi - b.psi);
  double val = kTraceC0 - sphere_slot(a.theta) - sphere_slot(b.theta) + mm0_;
  if (a.piece == b.piece) {
    double p = a.piece == 1
                   ? std::tan(0.5 * a.theta) * std::tan(0.5 * b.theta)
                   : 1.0 / (std::tan(0.5 * a.theta) * std::tan(0.5 * b.theta));
    double mixed = log_mode_sum(q, cd) - log_mode_sum(p, cd);
    double ext = log_mode_sum(p, cd);
    double g0 = a.piece == 1 ? -std::log(std::tan(0.5 * hi))
                             : std::log(std::tan(0.5 * lo));
    val += mixed + ext + g0;
  } else {
    val += log_mode_sum(q, cd);
  }
  return val;
}

// ---------------------------------------------------------------------------

double CutDecomposition::mixed_green(const Point& x, const Point& y) const {
  if (surf_.double_distance(x, y) < 1e-12)
    throw std::invalid_argument("mixed kernel at coincident points");
  int px = piece(x), py = piece(y);
  if (px != 0 && py != 0 && px != py) return 0.0;
  if (px == 0 && py == 0) return 0.0;

  if (surf_.kind() == SurfaceKind::FlatCylinder) {
    // adopt the nonzero piece for a point sitting on the cut
    Point xx = x, yy = y;
    if (px == 0) xx.u = py == 1 ? std::min(xx.u, cut_) : std::max(xx.u, cut_);
    if (py == 0) yy.u = px == 1 ? std::min(yy.u, cut_) : std::max(yy.u, cut_);
    double c = cut_;
    double g0 = 0.0;
    if (xx.u <= c && yy.u <= c)
      g0 = c - std::max(xx.u, yy.u);
    else
      g0 = std::min(xx.u, yy.u) - c;
    return g0 + cylinder_modes(xx, yy, true, false);
  }

  // hemisphere: even reflection of the sphere Dirichlet-piece kernel
  auto sphere_mixed = [&](const Point& u, const Point& v) {
    SphereAngles sa = cut_frame(u), sb = cut_frame(v);
    if (sa.piece != sb.piece) return 0.0;
    double lo = std::min(sa.theta, sb.theta), hi = std::max(sa.theta, sb.theta);
    double q = std::tan(0.5 * lo) / std::tan(0.5 * hi);
    double cd = std::cos(sa.psi - sb.psi);
    double p = sa.piece == 1
                   ? std::tan(0.5 * sa.theta) * std::tan(0.5 * sb.theta)
                   : 1.0 / (std::tan(0.5 * sa.theta) * std::tan(0.5 * sb.theta));
    double g0 = sa.piece == 1 ? -std::log(std::tan(0.5 * hi))
                              : std::log(std::tan(0.5 * lo));
    return log_mode_sum(q, cd) - log_mode_sum(p, cd) + g0;
  };
  return (sphere_mixed(x, y) + sphere_mixed(x, surf_.involution(y))) / kTwoPi;
}

double CutDecomposition::harmonic_extension(const TraceSeries& trace,
                                            const Point& x) const {
  if (surf_.kind() == SurfaceKind::FlatCylinder) {
    double T = surf_.modulus();
    double c = cut_, t = x.u;
    double val = trace.a0;
    std::size_t n = std::max(trace.cosk.size(), trace.sink.size());
    for (std::size_t k1 = 1; k1 <= n; ++k1) {
      double mu = kTwoPi * double(k1);
      double h = t <= c ? std::cosh(mu * t) / std::cosh(mu * c)
                        : std::cosh(mu * (T - t)) / std::cosh(mu * (T - c));
      double ck = k1 <= trace.cosk.size() ? trace.cosk[k1 - 1] : 0.0;
      double sk = k1 <= trace.sink.size() ? trace.sink[k1 - 1] : 0.0;
      val += h * (ck * std::cos(mu * x.v) + sk * std::sin(mu * x.v));
    }
    return val;
  }
  if (!trace.sink.empty())
    throw std::invalid_argument(
        "half-circle traces admit only cosine modes (Neumann endpoints)");
  SphereAngles a = cut_frame(x);
  double tt = std::tan(0.5 * std::min(a.theta, kPi - a.theta));
  double val = trace.a0;
  for (std::size_t m = 1; m <= trace.cosk.size(); ++m)
    val += trace.cosk[m - 1] * std::pow(tt, double(m)) *
           std::cos(double(m) * a.psi);
  return val;
}

double CutDecomposition::extension_covariance(const Point& x,
                                              const Point& y) const {
  if (surf_.kind() == SurfaceKind::FlatCylinder) {
    double T = surf_.modulus();
    double g0cc = cut_ * cut_ / T - cut_ + T / 3.0;
    return kTwoPi * (g0cc + cylinder_modes(x, y, false, true));
  }
  auto sphere_ext = [&](const Point& u, const Point& v) {
    SphereAngles sa = cut_frame(u), sb = cut_frame(v);
    // profile product: tan(theta/2)^m measured from the pole of each piece
    double ta = std::tan(0.5 * std::min(sa.theta, kPi - sa.theta));
    double tb = std::tan(0.5 * std::min(sb.theta, kPi - sb.theta));
    return kTraceC0 + log_mode_sum(ta * tb, std::cos(sa.psi - sb.psi));
  };
  Point sy = surf_.involution(y);
  return 0.5 * (sphere_ext(x, y) + sphere_ext(x, sy) +
                sphere_ext(surf_.involution(x), y) +
                sphere_ext(surf_.involution(x), sy));
}

double CutDecomposition::assembled_covariance(const Point& x,
                                              const Point& y) const {
  if (surf_.kind() == SurfaceKind::FlatCylinder)
    return cylinder_k0(x.u, y.u) + kTwoPi * cylinder_modes(x, y, false, false);
  Point sx = surf_.involution(x), sy = surf_.involution(y);
  return 0.5 * (sphere_kernel(x, y) + sphere_kernel(x, sy) +
                sphere_kernel(sx, y) + sphere_kernel(sx, sy));
}

double CutDecomposition::assembled_covariance(
    const Point& x, const Point& y,
    const std::function<double(double)>& phi) const {
  if (surf_.kind() != SurfaceKind::FlatCylinder)
    throw std::invalid_argument(
        "conformal recentring is implemented for the cylinder cut");
  double T = surf_.modulus();
  double z = integrate([&](double t) { return std::exp(phi(t)); }, 0.0, T,
                       1e-12, 40);
  // The metric mean only sees the v-independent (k=0) part of the kernel.
  auto slot = [&](double t) {
    auto f = [&](double tp) {
      return std::exp(phi(tp)) / z * cylinder_k0(t, tp);
    };
    double lo = std::min(t, cut_), hi = std::max(t, cut_);
    return integrate(f, 0.0, lo, 1e-11, 40) + integrate(f, lo, hi, 1e-11, 40) +
           integrate(f, hi, T, 1e-11, 40);
  };
  double tt = integrate(
      [&](double t) { return std::exp(phi(t)) / z * slot(t); }, 0.0, T, 1e-9,
      30);
  return assembled_covariance(x, y) - slot(x.u) - slot(y.u) + tt;
}

// ---------------------------------------------------------------------------

double markov_covariance_residual(const Surface& s, int grid_n,
                                  double cylinder_cut_height) {
  CutDecomposition cut(s, cylinder_cut_height);
  std::vector<Point> pts;
  if (s.kind() == SurfaceKind::FlatCylinder) {
    double T = s.modulus(), c = cylinder_cut_height;
    for (int i = 0; i < grid_n; ++i) {
      double t = 0.08 + (T - 0.16) * (i + 0.5) / grid_n;
      if (std::fabs(t - c) < 0.06) continue;
      pts.push_back(Point{t, std::fmod(0.618034 * (i + 1), 1.0)});
    }
  } else {
    for (int i = 0; i < grid_n; ++i) {
      double u = 0.35 + 1.15 * (i + 0.5) / grid_n;
      double v = std::fmod(0.618034 * (i + 1), 1.0);
      // keep well away from the meridian cut v in {0, pi}
      v = (v < 0.5 ? 0.15 + 0.7 * v : 1.15 + 0.7 * (v - 0.5)) * kPi;
      pts.push_back(Point{u, v});
    }
  }
  double worst = 0.0;
  for (const auto& x : pts)
    for (const auto& y : pts) {
      if (s.double_distance(x, y) < 0.02) continue;
      double lhs = kTwoPi * green_bordered(s, BoundaryCondition::Neumann, x, y);
      worst = std::max(worst, std::fabs(lhs - cut.assembled_covariance(x, y)));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Sampled twin.
// ---------------------------------------------------------------------------

namespace {

struct ModeTable {
  // value of every sampled mode at every probe point, plus its area mean
  std::vector<std::vector<double>> values;  // [mode][point]
  std::vector<double> mean;                 // [mode]
};

ModeTable cylinder_modes_table(const Surface& s, double c,
                               const std::vector<Point>& pts, double lam_max,
                               int trace_modes) {
  double T = s.modulus();
  ModeTable tab;
  auto add_piece = [&](bool first) {
    double len = first ? c : T - c;
    for (int j = 0;; ++j) {
      double lt = (j + 0.5) * kPi / len;
      if (lt * lt > lam_max) break;
      for (int k = 0;; ++k) {
        double lam = lt * lt + kTwoPi * k * kTwoPi * k;
        if (lam > lam_max) break;
        int reps = k == 0 ? 1 : 2;
        for (int r = 0; r < reps; ++r) {
          std::vector<double> row(pts.size(), 0.0);
          double amp = std::sqrt(kTwoPi / lam) * std::sqrt(2.0 / len);
          for (std::size_t i = 0; i < pts.size(); ++i) {
            double t = pts[i].u;
            bool inside = first ? t < c : t > c;
            if (!inside) continue;
            double tl = first ? t : T - t;
            double vf = k == 0 ? 1.0
                               : std::sqrt(2.0) *
                                     (r == 0 ? std::cos(kTwoPi * k * pts[i].v)
                                             : std::sin(kTwoPi * k * pts[i].v));
            row[i] = amp * std::cos(lt * tl) * vf;
          }
          double mn = 0.0;
          if (k == 0) mn = amp * (j % 2 == 0 ? 1.0 : -1.0) / (lt * T);
          tab.values.push_back(std::move(row));
          tab.mean.push_back(mn);
        }
      }
    }
  };
  add_piece(true);
  add_piece(false);

  // trace + harmonic extension modes
  auto prof = [&](double mu, double t) {
    return t <= c ? std::cosh(mu * t) / std::cosh(mu * c)
                  : std::cosh(mu * (T - t)) / std::cosh(mu * (T - c));
  };
  double g0cc = c * c / T - c + T / 3.0;
  {
    std::vector<double> row(pts.size(), std::sqrt(kTwoPi * g0cc));
    tab.values.push_back(std::move(row));
    tab.mean.push_back(std::sqrt(kTwoPi * g0cc));
  }
  for (int k = 1; k <= trace_modes; ++k) {
    double mu = kTwoPi * k;
    double tau = (1.0 + std::exp(-2 * mu * c) + std::exp(-2 * mu * (T - c)) +
                  std::exp(-2 * mu * T)) /
                 (2.0 * mu * (1.0 - std::exp(-2 * mu * T)));
    double sd = std::sqrt(kTwoPi * tau);
    for (int r = 0; r < 2; ++r) {
      std::vector<double> row(pts.size(), 0.0);
      for (std::size_t i = 0; i < pts.size(); ++i)
        row[i] = sd * prof(mu, pts[i].u) * std::sqrt(2.0) *
                 (r == 0 ? std::cos(mu * pts[i].v) : std::sin(mu * pts[i].v));
      tab.values.push_back(std::move(row));
      tab.mean.push_back(0.0);
    }
  }
  return tab;
}

ModeTable hemisphere_modes_table(const Surface& s,
                                 const std::vector<Point>& pts, int l_max,
                                 int trace_modes) {
  // Probe value of the decomposed double field, already even-projected:
  // row[i] = (W(p_i) + W(sigma p_i)) / sqrt(2) for each unit-variance mode.
  ModeTable tab;
  std::vector<SphereAngles> ang, sang;
  for (const auto& p : pts) {
    ang.push_back(cut_frame(p));
    sang.push_back(cut_frame(s.involution(p)));
  }
  auto push = [&](const std::function<double(const SphereAngles&)>& f,
                  double mn) {
    std::vector<double> row(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      row[i] = (f(ang[i]) + f(sang[i])) / std::sqrt(2.0);
    tab.values.push_back(std::move(row));
    // the even projection carries the centering as sqrt(2) * c^double
    tab.mean.push_back(mn * std::sqrt(2.0));
  };

  for (int half = 1; half <= 2; ++half) {
    for (int l = 1; l <= l_max; ++l) {
      double amp = std::sqrt(2.0) * std::sqrt(kTwoPi / (double(l) * (l + 1)));
      for (int m = 0; m <= l; ++m) {
        if ((l + m) % 2 == 0) continue;  // odd modes vanish on the cut plane
        double mn = 0.0;
        if (m == 0) {
          double integ = integrate(
              [&](double th) {
                return std::sph_legendre(unsigned(l), 0u, th) * std::sin(th);
              },
              0.0, kPi / 2.0, 1e-10, 30);
          mn = amp * 0.5 * integ * (half == 1 ? 1.0 : -1.0);
        }
        for (int r = 0; r < (m == 0 ? 1 : 2); ++r) {
          push(
              [=](const SphereAngles& a) {
                if (a.piece != half) return 0.0;
                double y = std::sph_legendre(unsigned(l), unsigned(m), a.theta);
                if (m == 0) return amp * y;
                return amp * std::sqrt(2.0) * y *
                       (r == 0 ? std::cos(m * a.psi) : std::sin(m * a.psi));
              },
              mn);
        }
      }
    }
  }

  // trace + extension
  push([](const SphereAngles&) { return std::sqrt(kTraceC0); },
       std::sqrt(kTraceC0));
  for (int m = 1; m <= trace_modes; ++m) {
    double sd = std::sqrt(0.5 / m);
    for (int r = 0; r < 2; ++r)
      push(
          [=](const SphereAngles& a) {
            double tt = std::tan(0.5 * std::min(a.theta, kPi - a.theta));
            return sd * std::pow(tt, double(m)) * std::sqrt(2.0) *
                   (r == 0 ? std::cos(m * a.psi) : std::sin(m * a.psi));
          },
          0.0);
  }
  return tab;
}

}  // namespace

TwinResult markov_sampled_twin(const Surface& s, int n_samples,
                               std::uint64_t seed, int workers,
                               double cylinder_cut_height) {
  std::vector<Point> pts;
  if (s.kind() == SurfaceKind::FlatCylinder) {
    double T = s.modulus();
    for (int i = 0; i < 6; ++i) {
      double t = 0.12 + (T - 0.24) * i / 5.0;
      if (std::fabs(t - cylinder_cut_height) < 0.08) t += 0.17;
      pts.push_back(Point{t, std::fmod(0.37 + 0.661 * i, 1.0)});
    }
  } else {
    for (int i = 0; i < 6; ++i) {
      double v = (i % 2 == 0 ? 0.6 + 0.4 * i / 6.0 : 3.8 + 0.4 * i / 6.0);
      pts.push_back(Point{0.45 + 1.0 * i / 5.0, v});
    }
  }
  ModeTable tab = s.kind() == SurfaceKind::FlatCylinder
                      ? cylinder_modes_table(s, cylinder_cut_height, pts,
                                             25000.0, 64)
                      : hemisphere_modes_table(s, pts, 96, 64);

  std::size_t np = pts.size();
  std::vector<double> zvals(std::size_t(n_samples) * np);
  parallel_for(std::size_t(n_samples), workers, [&](std::size_t r) {
    RngStream rng(seed, r);
    std::vector<double> z(np, 0.0);
    double center = 0.0;
    for (std::size_t m = 0; m < tab.values.size(); ++m) {
      double a = rng.normal();
      center += a * tab.mean[m];
      const auto& row = tab.values[m];
      for (std::size_t i = 0; i < np; ++i) z[i] += a * row[i];
    }
    for (std::size_t i = 0; i < np; ++i) zvals[r * np + i] = z[i] - center;
  });

  TwinResult res;
  res.n_samples = n_samples;
  std::vector<double> prod(n_samples);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = i + 1; j < np; ++j) {
      if (s.double_distance(pts[i], pts[j]) < 0.05) continue;
      for (int r = 0; r < n_samples; ++r)
        prod[std::size_t(r)] =
            zvals[std::size_t(r) * np + i] * zvals[std::size_t(r) * np + j];
      MeanErr m = mean_and_stderr(prod);
      double exact =
          kTwoPi * green_bordered(s, BoundaryCondition::Neumann, pts[i], pts[j]);
      double diff = std::fabs(m.mean - exact);
      res.max_abs_diff = std::max(res.max_abs_diff, diff);
      res.max_abs_z = std::max(res.max_abs_z, diff / m.stderr_);
      ++res.n_pairs;
    }
  return res;
}

}  // namespace blcft
