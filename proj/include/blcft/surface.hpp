#pragma once

#include <array>
#include <string>
#include <vector>

#include "blcft/util.hpp"

namespace blcft {

// The three bordered models.
//
//  FlatCylinder(T): [0,T] x (R/Z) with the flat metric; its double is the
//    flat torus (R/2TZ) x (R/Z) and the reflection is t -> -t.
//  Hemisphere: upper half of the round unit sphere, chart (theta, phi);
//    double is the full sphere, reflection theta -> pi - theta.
//  HalfPlaneDozz: upper half plane with metric |x|_+^{-4} |dx|^2,
//    |x|_+ = max(|x|, 1); handled through its exact covariance kernel,
//    restricted to a bounded half-disk window for meshes.
enum class SurfaceKind { FlatCylinder, Hemisphere, HalfPlaneDozz };

// Chart coordinates: (t, y) on the cylinder/torus, (theta, phi) on the
// (hemi)sphere, (Re z, Im z) on the half plane.
struct Point {
  double u = 0.0;
  double v = 0.0;
};

// A geodesic circle of radius eps, clipped to the surface.  `points` are the
// retained quadrature nodes (equally spaced before clipping), `weights` are
// renormalized over the retained arc and sum to one, `retained_fraction` is
// the exact (analytic) fraction of the circle inside the surface.
struct CircleSample {
  std::vector<Point> points;
  std::vector<double> weights;
  double retained_fraction = 1.0;
};

// Bulk / boundary quadrature rules in the base metric.  Weights sum to the
// base volume (resp. boundary length).
struct Quadrature {
  std::vector<Point> pts;
  std::vector<double> w;
};

class Surface {
 public:
  static Surface flat_cylinder(double modulus);
  static Surface hemisphere();
  static Surface half_plane_dozz(double window_radius = 4.0);
  static Surface from_name(const std::string& name, double modulus,
                           double window_radius = 4.0);

  SurfaceKind kind() const { return kind_; }
  std::string name() const;
  double modulus() const { return modulus_; }
  double window_radius() const { return window_; }

  int euler_characteristic() const;
  double volume() const;           // base-metric volume of the surface
  double boundary_length() const;  // base-metric length of the boundary
  double double_volume() const;    // volume of the doubled surface
  double scalar_curvature() const;            // constant R0 of the base metric
  double boundary_geodesic_curvature() const; // constant k0 of the boundary

  bool has_spectral_basis() const { return kind_ != SurfaceKind::HalfPlaneDozz; }

  // The involution of the double; fixes the boundary pointwise.
  Point involution(const Point& p) const;

  // Geodesic distance on the doubled surface (chart Euclidean distance for
  // the half plane, where only the exact covariance is ever used).
  double double_distance(const Point& p, const Point& q) const;

  bool contains(const Point& p) const;
  bool on_boundary(const Point& p, double tol = 1e-12) const;
  double distance_to_boundary(const Point& p) const;

  // Largest radius for which geodesic circles are embedded and clip against
  // at most one boundary component.
  double injectivity_bound() const;

  CircleSample geodesic_circle(const Point& center, double eps,
                               int n = 32) const;

  int boundary_components() const;
  double boundary_component_length(int c) const;
  Point boundary_point(int c, double s) const;  // s = base-metric arclength

  Quadrature bulk_quadrature(int n1, int n2) const;
  Quadrature boundary_quadrature(int n_per_component) const;

 private:
  SurfaceKind kind_ = SurfaceKind::FlatCylinder;
  double modulus_ = 1.0;  // cylinder only
  double window_ = 4.0;   // half plane only
};

// Unit 3-vector of a sphere chart point.
std::array<double, 3> sphere_vec(const Point& p);
Point sphere_chart(const std::array<double, 3>& x);

}  // namespace blcft
