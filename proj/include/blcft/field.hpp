#pragma once

#include <vector>

#include "blcft/spectral.hpp"
#include "blcft/surface.hpp"

namespace blcft {

// Circle-average regularization X_eps of a sampled field on a uniform chart
// mesh (bulk) and on the boundary components, together with the truncated
// variance table E[X_eps^2] per node.
//
// Interior nodes (distance to the boundary >= eps) use the exact mean-value
// multiplier of Laplacian eigenfunctions over a geodesic circle:
// J_0(sqrt(lambda) eps) on the flat cylinder, P_l(cos eps) on the sphere.
// Boundary nodes use the same multiplier: Neumann modes are even across the
// boundary, so the half-circle average equals the full-circle average in the
// double.  Nodes inside the strip 0 < dist < eps average over the clipped
// circle sample.  By translation invariance along the boundary the variance
// depends only on the transverse row, and on the boundary it is constant per
// component.
class RegularizedField {
 public:
  // basis: Neumann bordered basis whose cos/sin pairs are complete (use the
  // degeneracy-safe cutoff constructors).  Mesh midpoints: n1 x n2 bulk cells
  // in the chart, nb cells per boundary component.  Requires chart cell size
  // <= eps/2 and eps below the injectivity bound.
  RegularizedField(const SpectralBasis& basis, const GffSample& sample,
                   double eps, int n1, int n2, int nb, int circle_n = 32);

  const Surface& surface() const { return surf_; }
  double eps() const { return eps_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int nb() const { return nb_; }

  Point bulk_node(int i, int j) const;
  double cell_area(int i, int j) const;
  double bulk_value(int i, int j) const { return values_[std::size_t(i) * n2_ + j]; }
  double bulk_variance(int i) const { return row_var_[i]; }

  Point boundary_node(int comp, int j) const;
  double boundary_cell_length(int comp) const;
  double boundary_value(int comp, int j) const { return bvals_[comp][j]; }
  double boundary_variance(int comp) const { return bvar_[comp]; }

 private:
  Surface surf_;
  double eps_;
  int n1_, n2_, nb_;
  std::vector<double> values_;             // row-major n1 x n2
  std::vector<double> row_var_;            // per transverse row
  std::vector<std::vector<double>> bvals_; // per boundary component
  std::vector<double> bvar_;
};

}  // namespace blcft
