#pragma once

#include <cstdint>
#include <vector>

#include "blcft/field.hpp"
#include "blcft/gmc.hpp"
#include "blcft/green.hpp"
#include "blcft/surface.hpp"

namespace blcft {

struct BulkInsertion {
  Point z;
  double alpha = 0.0;
};

struct BoundaryInsertion {
  Point s;
  double beta = 0.0;
};

struct InsertionSet {
  std::vector<BulkInsertion> bulk;
  std::vector<BoundaryInsertion> boundary;
};

struct LiouvilleParams {
  double gamma = 1.0;
  double mu = 1.0;
  double mu_boundary = 0.0;

  double q() const { return 2.0 / gamma + 0.5 * gamma; }
  double central_charge() const { return 1.0 + 6.0 * q() * q(); }
  void validate() const;  // gamma in (0,2], mu >= 0, mu_b >= 0, mu+mu_b > 0
};

// Total charge minus the background: sbar = sum alpha + sum beta/2 - Q chi.
double charge_excess(const InsertionSet& ins, const LiouvilleParams& p,
                     double chi);

struct SeibergReport {
  enum class Regime { BothPositive, BulkOnly, BoundaryOnly };
  Regime regime = Regime::BothPositive;
  bool bound1 = false;               // sum alpha + sum beta/2 > Q chi
  std::vector<bool> bound2;          // per bulk insertion: alpha < Q
  std::vector<bool> bound3;          // per boundary insertion: beta < Q
  bool admissible = false;
};

// Admissibility: bound1 always; bound2 required when mu > 0; bound3 required
// when mu_boundary > 0.
SeibergReport seiberg_check(const InsertionSet& ins, const LiouvilleParams& p,
                            double chi);

// Shift produced by the insertions under the Girsanov reduction:
//   H(x) = sum_i 2 pi alpha_i G(z_i, x) + sum_j pi beta_j G(s_j, x)
// with the Neumann kernel.  Throws when x coincides with an insertion point.
double insertion_potential(const Surface& s, const InsertionSet& ins,
                           const Point& x);

struct ZeroModeResult {
  double value = 0.0;
  bool divergent = false;
};

// I(sbar, A, L) = int_R e^{c sbar} exp(-mu e^{gamma c} A - mu_b e^{gamma c/2} L) dc.
// Closed Gamma-function forms when one cosmological constant vanishes;
// adaptive quadrature around the saddle otherwise.  Divergent iff sbar <= 0.
ZeroModeResult zero_mode_integral(double bulk_mass, double boundary_mass,
                                  double sbar, const LiouvilleParams& p);

struct McConfig {
  int n_samples = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  double eps = 1.0 / 16.0;
  int n1 = 64, n2 = 64, nb = 64;   // bulk / boundary meshes
  double basis_cutoff = 3000.0;     // Laplacian eigenvalue truncation
};

struct CorrelationEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  bool diverged = false;
};

// Girsanov-reduced Monte Carlo estimator of the correlation function under
// the metric e^phi g0 (phi null for g0): deterministic insertion prefactor
// times the mean of the zero-mode integral of the H-weighted chaos masses.
// The field-measure normalization constant is treated as 1; metric dependence
// beyond that constant is carried explicitly (Dirichlet-energy prefactor and
// per-insertion conformal terms).
CorrelationEstimate correlation_estimate(const Surface& s,
                                         const LiouvilleParams& p,
                                         const InsertionSet& ins,
                                         const ConformalFactor* phi,
                                         const McConfig& mc);

// exp{ (c_L/96 pi) X_phi - sum Delta_{alpha} phi(z_i) - (1/2) sum
// Delta_{beta} phi(s_j) } with X_phi = int (|dphi|^2 + 2 R0 phi) dv0 +
// 4 int k0 phi dlambda0 and Delta_a = (a/2)(Q - a/2).
double anomaly_factor(const Surface& s, const LiouvilleParams& p,
                      const InsertionSet& ins, const ConformalFactor& phi,
                      int n1, int n2, int nb);

// Free-field normalization ratio between e^phi g0 and g0:
// exp((1/96 pi) X_phi).
double z_gff_ratio(const Surface& s, const ConformalFactor& phi, int n1,
                   int n2, int nb);

// Dirichlet energy int |dphi|^2 dv0 via integration by parts
// (-int phi lap phi dv0 + oint phi dn phi dlambda0).
double dirichlet_energy(const Surface& s, const ConformalFactor& phi, int n1,
                        int n2, int nb);

struct ScalingResult {
  double lhs = 0.0, rhs = 0.0;
  double lhs_stderr = 0.0, rhs_stderr = 0.0;
  double residual_over_stderr = 0.0;
};

// Both sides of the mu-differentiation identity: lhs estimates mu gamma times
// the bulk-integrated (gamma)-insertion correlator plus mu_b (gamma/2) times
// the boundary-integrated (gamma/2)-insertion correlator, each absorbed into
// the chaos masses of the same MC; rhs = charge_excess times the correlator.
ScalingResult scaling_residual(const Surface& s, const LiouvilleParams& p,
                               const InsertionSet& ins, const McConfig& mc);

}  // namespace blcft
