#include "blcft/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blcft {

namespace {

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  return r;
}

// Signed distance reduced to [-period/2, period/2].
double wrap_centered(double x, double period) {
  double r = wrap(x, period);
  if (r > 0.5 * period) r -= period;
  return r;
}

}  // namespace

std::array<double, 3> sphere_vec(const Point& p) {
  double st = std::sin(p.u), ct = std::cos(p.u);
  return {st * std::cos(p.v), st * std::sin(p.v), ct};
}

Point sphere_chart(const std::array<double, 3>& x) {
  double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  double theta = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
  double phi = std::atan2(x[1], x[0]);
  if (phi < 0) phi += kTwoPi;
  return {theta, phi};
}

Surface Surface::flat_cylinder(double modulus) {
  if (!(modulus > 0)) throw std::invalid_argument("cylinder modulus must be positive");
  Surface s;
  s.kind_ = SurfaceKind::FlatCylinder;
  s.modulus_ = modulus;
  return s;
}

Surface Surface::hemisphere() {
  Surface s;
  s.kind_ = SurfaceKind::Hemisphere;
  return s;
}

Surface Surface::half_plane_dozz(double window_radius) {
  if (!(window_radius > 1)) throw std::invalid_argument("window radius must exceed 1");
  Surface s;
  s.kind_ = SurfaceKind::HalfPlaneDozz;
  s.window_ = window_radius;
  return s;
}

Surface Surface::from_name(const std::string& name, double modulus,
                           double window_radius) {
  if (name == "flat_cylinder") return flat_cylinder(modulus);
  if (name == "hemisphere") return hemisphere();
  if (name == "half_plane_dozz") return half_plane_dozz(window_radius);
  throw std::invalid_argument("unknown surface model: " + name);
}

std::string Surface::name() const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder: return "flat_cylinder";
    case SurfaceKind::Hemisphere: return "hemisphere";
    case SurfaceKind::HalfPlaneDozz: return "half_plane_dozz";
  }
  return "?";
}

int Surface::euler_characteristic() const {
  return kind_ == SurfaceKind::FlatCylinder ? 0 : 1;
}

double Surface::volume() const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder: return modulus_;
    case SurfaceKind::Hemisphere: return kTwoPi;
    case SurfaceKind::HalfPlaneDozz: return kPi;  // integral of |x|_+^{-4} over H
  }
  return 0;
}

double Surface::boundary_length() const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder: return 2.0;
    case SurfaceKind::Hemisphere: return kTwoPi;
    case SurfaceKind::HalfPlaneDozz: return 4.0;  // integral of |x|_+^{-2} over R
  }
  return 0;
}

double Surface::double_volume() const { return 2.0 * volume(); }

double Surface::scalar_curvature() const {
  return kind_ == SurfaceKind::Hemisphere ? 2.0 : 0.0;
}

double Surface::boundary_geodesic_curvature() const { return 0.0; }

Point Surface::involution(const Point& p) const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder:
      return {wrap_centered(-p.u, 2.0 * modulus_), p.v};
    case SurfaceKind::Hemisphere:
      return {kPi - p.u, p.v};
    case SurfaceKind::HalfPlaneDozz:
      return {p.u, -p.v};
  }
  return p;
}

double Surface::double_distance(const Point& p, const Point& q) const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder: {
      double dt = wrap_centered(p.u - q.u, 2.0 * modulus_);
      double dy = wrap_centered(p.v - q.v, 1.0);
      return std::sqrt(dt * dt + dy * dy);
    }
    case SurfaceKind::Hemisphere: {
      auto a = sphere_vec(p), b = sphere_vec(q);
      double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      return std::acos(std::clamp(dot, -1.0, 1.0));
    }
    case SurfaceKind::HalfPlaneDozz: {
      double du = p.u - q.u, dv = p.v - q.v;
      return std::sqrt(du * du + dv * dv);
    }
  }
  return 0;
}

bool Surface::contains(const Point& p) const {
  const double tol = 1e-12;
  switch (kind_) {
    case SurfaceKind::FlatCylinder:
      return p.u >= -tol && p.u <= modulus_ + tol;
    case SurfaceKind::Hemisphere:
      return p.u <= 0.5 * kPi + tol;
    case SurfaceKind::HalfPlaneDozz:
      return p.v >= -tol;
  }
  return false;
}

bool Surface::on_boundary(const Point& p, double tol) const {
  return distance_to_boundary(p) <= tol;
}

double Surface::distance_to_boundary(const Point& p) const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder:
      return std::min(p.u, modulus_ - p.u);
    case SurfaceKind::Hemisphere:
      return 0.5 * kPi - p.u;
    case SurfaceKind::HalfPlaneDozz:
      return p.v;  // chart distance
  }
  return 0;
}

double Surface::injectivity_bound() const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder:
      // Embedded in the torus double and clips one end at a time.
      return std::min(0.5, modulus_) * 0.5;
    case SurfaceKind::Hemisphere:
      return 0.5 * kPi * 0.999;
    case SurfaceKind::HalfPlaneDozz:
      return 1e30;  // chart circles; callers bound eps by the mesh
  }
  return 0;
}

CircleSample Surface::geodesic_circle(const Point& center, double eps,
                                      int n) const {
  if (!(eps > 0) || eps > injectivity_bound())
    throw std::invalid_argument("geodesic circle radius outside injectivity bound");
  if (!contains(center))
    throw std::invalid_argument("geodesic circle center outside surface");
  CircleSample out;
  out.points.reserve(n);

  // Analytic retained fraction: cos(psi) <= A on the excluded arc.
  auto fraction_from_A = [](double A) {
    if (A >= 1.0) return 1.0;
    if (A <= -1.0) return 0.0;
    return 1.0 - std::acos(A) / kPi;
  };

  switch (kind_) {
    case SurfaceKind::FlatCylinder: {
      double lo = center.u / eps;              // clip against t = 0
      double hi = (modulus_ - center.u) / eps; // clip against t = T
      if (lo < 1.0 && hi < 1.0)
        throw std::invalid_argument("circle clips both boundary components");
      out.retained_fraction = std::min(fraction_from_A(lo), fraction_from_A(hi));
      for (int m = 0; m < n; ++m) {
        double th = kTwoPi * m / n;
        Point p{center.u + eps * std::cos(th),
                wrap(center.v + eps * std::sin(th), 1.0)};
        if (contains(p)) out.points.push_back(p);
      }
      break;
    }
    case SurfaceKind::Hemisphere: {
      auto x0 = sphere_vec(center);
      double st = std::sin(center.u), ct = std::cos(center.u);
      std::array<double, 3> et{ct * std::cos(center.v), ct * std::sin(center.v), -st};
      std::array<double, 3> ep{-std::sin(center.v), std::cos(center.v), 0.0};
      double se = std::sin(eps), ce = std::cos(eps);
      double denom = se * st;
      double A = denom < 1e-15 ? 2.0 : (ce * ct) / denom;
      out.retained_fraction = fraction_from_A(A);
      for (int m = 0; m < n; ++m) {
        double th = kTwoPi * m / n;
        std::array<double, 3> p3;
        for (int i = 0; i < 3; ++i)
          p3[i] = ce * x0[i] + se * (std::cos(th) * et[i] + std::sin(th) * ep[i]);
        if (p3[2] >= -1e-12) out.points.push_back(sphere_chart(p3));
      }
      break;
    }
    case SurfaceKind::HalfPlaneDozz: {
      out.retained_fraction = fraction_from_A(center.v / eps);
      for (int m = 0; m < n; ++m) {
        double th = kTwoPi * m / n;
        Point p{center.u + eps * std::cos(th), center.v + eps * std::sin(th)};
        if (contains(p)) out.points.push_back(p);
      }
      break;
    }
  }
  if (out.points.empty())
    throw std::runtime_error("geodesic circle entirely clipped away");
  out.weights.assign(out.points.size(), 1.0 / static_cast<double>(out.points.size()));
  return out;
}

int Surface::boundary_components() const {
  return kind_ == SurfaceKind::FlatCylinder ? 2 : 1;
}

double Surface::boundary_component_length(int c) const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder:
      if (c != 0 && c != 1) throw std::out_of_range("boundary component");
      return 1.0;
    case SurfaceKind::Hemisphere:
      if (c != 0) throw std::out_of_range("boundary component");
      return kTwoPi;
    case SurfaceKind::HalfPlaneDozz:
      if (c != 0) throw std::out_of_range("boundary component");
      return 4.0;
  }
  return 0;
}

Point Surface::boundary_point(int c, double s) const {
  switch (kind_) {
    case SurfaceKind::FlatCylinder:
      return {c == 0 ? 0.0 : modulus_, wrap(s, 1.0)};
    case SurfaceKind::Hemisphere:
      return {0.5 * kPi, wrap(s, kTwoPi)};
    case SurfaceKind::HalfPlaneDozz: {
      // Arclength in |x|_+^{-2} dx from x = -inf; total length 4.
      double a = wrap(s, 4.0);
      if (a < 1.0) return {-1.0 / std::max(a, 1e-12), 0.0};  // arclength 1/|x|
      if (a < 3.0) return {a - 2.0, 0.0};
      return {1.0 / (4.0 - a + 1e-300), 0.0};
    }
  }
  return {};
}

Quadrature Surface::bulk_quadrature(int n1, int n2) const {
  Quadrature q;
  switch (kind_) {
    case SurfaceKind::FlatCylinder: {
      double ht = modulus_ / n1, hy = 1.0 / n2;
      q.pts.reserve(static_cast<std::size_t>(n1) * n2);
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
          q.pts.push_back({(i + 0.5) * ht, (j + 0.5) * hy});
          q.w.push_back(ht * hy);
        }
      break;
    }
    case SurfaceKind::Hemisphere: {
      double hth = 0.5 * kPi / n1, hph = kTwoPi / n2;
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
          double th = (i + 0.5) * hth;
          q.pts.push_back({th, (j + 0.5) * hph});
          q.w.push_back(std::sin(th) * hth * hph);
        }
      break;
    }
    case SurfaceKind::HalfPlaneDozz: {
      // Chart mesh on the half disk of radius window_, weights in the DOZZ
      // metric |x|_+^{-4}.
      double h = 2.0 * window_ / n1;
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
          Point p{-window_ + (i + 0.5) * h, (j + 0.5) * h};
          double r2 = p.u * p.u + p.v * p.v;
          if (r2 > window_ * window_) continue;
          double rp = std::max(1.0, std::sqrt(r2));
          q.pts.push_back(p);
          q.w.push_back(h * h / (rp * rp * rp * rp));
        }
      break;
    }
  }
  return q;
}

Quadrature Surface::boundary_quadrature(int n_per_component) const {
  Quadrature q;
  switch (kind_) {
    case SurfaceKind::FlatCylinder: {
      double h = 1.0 / n_per_component;
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < n_per_component; ++j) {
          q.pts.push_back({c == 0 ? 0.0 : modulus_, (j + 0.5) * h});
          q.w.push_back(h);
        }
      break;
    }
    case SurfaceKind::Hemisphere: {
      double h = kTwoPi / n_per_component;
      for (int j = 0; j < n_per_component; ++j) {
        q.pts.push_back({0.5 * kPi, (j + 0.5) * h});
        q.w.push_back(h);
      }
      break;
    }
    case SurfaceKind::HalfPlaneDozz: {
      // Uniform chart mesh on [-window, window]; weights |x|_+^{-2} dx.
      double h = 2.0 * window_ / n_per_component;
      for (int j = 0; j < n_per_component; ++j) {
        double x = -window_ + (j + 0.5) * h;
        double rp = std::max(1.0, std::abs(x));
        q.pts.push_back({x, 0.0});
        q.w.push_back(h / (rp * rp));
      }
      break;
    }
  }
  return q;
}

}  // namespace blcft
