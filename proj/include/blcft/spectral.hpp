#pragma once

#include <vector>

#include "blcft/surface.hpp"

namespace blcft {

enum class BoundaryCondition { Neumann, Dirichlet };

// One Laplacian eigenfunction.  On the cylinder/torus: a and b are the
// longitudinal (j) and angular (k) wavenumbers, ta/tb pick cos (0) or sin (1)
// factors.  On the sphere: a = l, b = m, tb picks cos/sin of m*phi.
struct Mode {
  double lambda = 0.0;
  int a = 0, b = 0;
  int ta = 0, tb = 0;
};

// Truncated eigenbasis, either of the bordered surface with a boundary
// condition (realized through the double: even modes for Neumann, odd for
// Dirichlet, L2-normalized on the surface) or of the closed double itself.
class SpectralBasis {
 public:
  static SpectralBasis bordered(const Surface& s, BoundaryCondition bc, int n);
  static SpectralBasis doubled(const Surface& s, int n);
  // Same, but truncating at a degeneracy-safe eigenvalue cutoff: the basis
  // keeps every mode with lambda <= cutoff (clusters are never split).
  static SpectralBasis bordered_cutoff(const Surface& s, BoundaryCondition bc,
                                       double cutoff);
  static SpectralBasis doubled_cutoff(const Surface& s, double cutoff);

  const Surface& surface() const { return surf_; }
  bool on_double() const { return on_double_; }
  BoundaryCondition condition() const { return bc_; }
  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  double max_lambda() const;

  // Value of the normalized eigenfunction at a chart point.
  double eval(const Mode& m, const Point& p) const;

  // Truncated Green kernel sum_j phi_j(x) phi_j(y) / lambda_j.
  double green_eigensum(const Point& x, const Point& y) const;

  // Least-squares slope of lambda_n vs n over the top half of the spectrum,
  // to compare with the Weyl prediction 4*pi/volume.
  double weyl_slope() const;
  double weyl_predicted_slope() const;

 private:
  Surface surf_ = Surface::flat_cylinder(1.0);
  bool on_double_ = false;
  BoundaryCondition bc_ = BoundaryCondition::Neumann;
  std::vector<Mode> modes_;
};

// A sample of the truncated Gaussian free field
//   X_N = sqrt(2*pi) * sum_j alpha_j phi_j / sqrt(lambda_j),
// stored through its i.i.d. standard normal coefficients.
struct GffSample {
  std::vector<double> coeffs;
};

GffSample sample_gff(const SpectralBasis& basis, std::uint64_t seed,
                     std::uint64_t stream_id);

double eval_gff(const SpectralBasis& basis, const GffSample& sample,
                const Point& p);

// Plug-in pointwise variance of the truncated field,
// 2*pi * sum_j phi_j(x)^2 / lambda_j.
double gff_pointwise_variance(const SpectralBasis& basis, const Point& p);

// Variance of the pairing <X_N, f> (f given by quadrature), used for the
// Cauchy-in-N regularity surrogate.
double gff_pairing_variance(const SpectralBasis& basis, const Quadrature& q,
                            const std::vector<double>& f_values);

}  // namespace blcft
