#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "blcft/surface.hpp"

namespace blcft {

// A trace on the cut curve as a truncated Fourier series.  On the cylinder
// the cut is a full circle parametrized by v in [0,1) with modes
// cos(2 pi k v), sin(2 pi k v).  On the hemisphere the cut is the meridian
// half-circle parametrized by arclength s in [0, pi]; only the cosine modes
// cos(m s) are compatible with the Neumann condition at the endpoints, so
// `sink` must be empty there.
struct TraceSeries {
  double a0 = 0.0;
  std::vector<double> cosk;
  std::vector<double> sink;
};

// A separating cut of a bordered surface into two pieces carrying mixed
// boundary conditions (Dirichlet on the cut, Neumann on the inherited outer
// boundary):
//  - flat cylinder: the full circle at height t = cut_height;
//  - hemisphere: the meridian half-circle v in {0, pi} with endpoints on the
//    equator, handled through its double (a great circle through the poles
//    of the sphere, with reflection-symmetrized kernels).
// All kernels are evaluated in closed form: per-Fourier-mode 1D Green
// functions with log-resummed image tails on the cylinder, and exact
// tan(theta/2)-power series sums on the sphere.
class CutDecomposition {
 public:
  explicit CutDecomposition(const Surface& s, double cylinder_cut_height = 0.5);

  const Surface& surface() const { return surf_; }
  double cut_height() const { return cut_; }

  // 1 or 2; 0 when the point lies on the cut (within tol).
  int piece(const Point& p, double tol = 1e-12) const;

  // Green kernel of the mixed problem on the piece containing x (zero when
  // x and y lie in different pieces); same normalization as green_bordered.
  // Throws on coincident points.
  double mixed_green(const Point& x, const Point& y) const;

  // Harmonic extension of a trace series: harmonic in each piece, matches
  // the trace on the cut, zero normal derivative on the outer boundary.
  double harmonic_extension(const TraceSeries& trace, const Point& x) const;

  // Covariance of the harmonic extension of the Gaussian trace (the
  // restriction of the Neumann GFF to the cut).
  double extension_covariance(const Point& x, const Point& y) const;

  // Covariance of X1 + X2 + P phi recentred to zero mean: the fully
  // deterministic right-hand side of the decomposition, to be compared with
  // 2 pi G_Neumann.
  double assembled_covariance(const Point& x, const Point& y) const;

  // Same, recentred with the mean of the metric e^phi g0 where phi depends
  // only on the cut-normal coordinate (cylinder height t, respectively the
  // colatitude of the cut great circle); to be compared with the Neumann
  // covariance of that metric.  Cylinder only.
  double assembled_covariance(const Point& x, const Point& y,
                              const std::function<double(double)>& phi) const;

 private:
  double cylinder_modes(const Point& x, const Point& y, bool mixed_only,
                        bool extension_only) const;
  double cylinder_k0(double t, double tp) const;   // centered, covariance units
  double sphere_kernel(const Point& x, const Point& y) const;  // centered C^d

  Surface surf_;
  double cut_ = 0.5;
  double mm0_ = 0.0;      // double mean of the uncentered k=0 kernel
  int n_modes_ = 64;
};

// Max over an n x n grid of admissible test pairs (kept away from the cut
// and from each other) of |2 pi G_Neumann(x,y) - assembled_covariance(x,y)|.
double markov_covariance_residual(const Surface& s, int grid_n,
                                  double cylinder_cut_height = 0.5);

struct TwinResult {
  double max_abs_z = 0.0;     // worst pair, |emp - exact| / stderr
  double max_abs_diff = 0.0;  // worst pair, |emp - exact|
  int n_samples = 0;
  int n_pairs = 0;
};

// Statistical twin of the deterministic identity: draw the two mixed-GFF
// pieces and the extended trace independently, recentre, and compare the
// empirical covariance on test pairs with the exact Neumann covariance.
TwinResult markov_sampled_twin(const Surface& s, int n_samples,
                               std::uint64_t seed, int workers,
                               double cylinder_cut_height = 0.5);

}  // namespace blcft
