#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "blcft/lcft.hpp"
#include "blcft/surface.hpp"
#include "blcft/util.hpp"

namespace blcft {

// ---------------------------------------------------------------------------
// Collision (fusion) exponents on the half plane with the |x|_+^{-4} metric.
//
// The field is the free boundary field on H whose covariance is
//   C(x, y) = ln 1/(|x-y| |x-ybar|) + 2 ln|x|_+ + 2 ln|y|_+ ,  |.|_+ = max(|.|,1).
// There is no spectral basis here: sampling goes through an exact Cholesky
// factorization of the circle-average-smoothed covariance on a graded mesh.
// ---------------------------------------------------------------------------

enum class FusionKind { BulkBulk, BulkReflection, BoundaryBoundary };

// Colliding weights: (alpha1, alpha2) bulk-bulk; alpha = w1 for a bulk point
// approaching its mirror image; (beta1, beta2) boundary-boundary.
struct FusionCase {
  FusionKind kind = FusionKind::BulkBulk;
  double w1 = 0.0;
  double w2 = 0.0;
};

// Exact covariance above.  Requires x != y, both in the closed upper half
// plane; throws otherwise.
double dozz_covariance(const Point& x, const Point& y);

// Covariance of the fields smoothed over circles of radius eps (full circles
// of the reflected field).  Finite on the diagonal; every log factor is
// averaged exactly (mean value property away from its singular set, adaptive
// quadrature across it), so the smoothed kernel is positive semidefinite.
double dozz_covariance_smoothed(const Point& x, const Point& y, double eps);

// Predicted collision exponent of the correlation bound, with the weight sum
// capped at Q:
//   bulk-bulk:       2 (Delta_{(w1+w2) ^ Q} - Delta_{w1} - Delta_{w2})
//   bulk-reflection: Delta_{(2 w1) ^ Q} - 2 Delta_{w1}
//   bdry-bdry:       Delta_{(w1+w2) ^ Q} - Delta_{w1} - Delta_{w2}
// where Delta_a = (a/2)(Q - a/2).
double fusion_predicted_exponent(const FusionCase& c, const LiouvilleParams& p);

// Graded polar mesh around a collision center: ring radii grow geometrically
// from eps/2 out to the window edge, so the insertion potential is resolved
// at the smoothing scale.  Weights carry the |x|_+^{-4} area (resp.
// |x|_+^{-2} length) element.
struct DozzMesh {
  std::vector<Point> bulk_pts;
  std::vector<double> bulk_w;
  std::vector<Point> bdry_pts;   // empty unless boundary mass is needed
  std::vector<double> bdry_w;
};

DozzMesh dozz_collision_mesh(double window_radius, const Point& center,
                             double eps, int n_rings, int n_angles,
                             bool with_boundary);

// Exact-covariance Gaussian sampler on the mesh nodes (bulk nodes first,
// then boundary nodes).  Replicate r always draws from stream (seed, r), so
// samples are independent of batching and worker count.
class DozzFieldSampler {
 public:
  DozzFieldSampler(const DozzMesh& mesh, double eps);
  ~DozzFieldSampler();

  std::size_t size() const { return n_; }
  std::size_t bulk_size() const { return n_bulk_; }

  // Writes `count` field samples for replicates first..first+count-1 into
  // `out`, column-major (size() x count).
  void sample_batch(std::uint64_t seed, std::uint64_t first, int count,
                    double* out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n_ = 0, n_bulk_ = 0;
};

struct FusionScanConfig {
  std::vector<double> distances;  // strictly decreasing geometric ladder
  double eps = 0.01;              // smoothing scale; all distances > 2 eps
  int n_samples = 20000;
  std::uint64_t seed = 1;
  int workers = 1;
  int n_rings = 44;
  int n_angles = 28;
  double window_radius = 4.0;
  LiouvilleParams params;
  InsertionSet spectators;  // held fixed while the pair collides
};

struct FusionScanPoint {
  double distance = 0.0;
  double statistic = 0.0;
  double stderr_ = 0.0;
};

struct FusionScanResult {
  std::vector<FusionScanPoint> points;
  double slope = 0.0;         // least squares in log-log
  double slope_stderr = 0.0;  // delta method, common random numbers
  double predicted = 0.0;
  double z_score = 0.0;       // (slope - predicted) / slope_stderr
  // The prediction is an upper bound on the statistic, so only a slope
  // significantly below it (faster blow-up as d -> 0) is a violation.
  bool bound_violated = false;
};

// Reduced-correlator statistic as a function of the collision distance, with
// the same field samples reused across the whole ladder.  Throws when the
// ladder is not strictly decreasing geometric, reaches below 2 eps, or the
// combined insertion set fails the admissibility gate.
FusionScanResult fusion_scan(const FusionCase& c, const FusionScanConfig& cfg);

// Monte Carlo estimate of < A^n L^m  prod vertex  e^{-mu A - mu_b L} > for an
// admissible insertion set, through the same reduction as the correlator
// (zero mode shifted to sbar + n gamma + m gamma/2).  Finite for admissible
// sets; cfg.distances is ignored.
MeanErr quantum_moment(int n_area, int m_length, const InsertionSet& ins,
                       const FusionScanConfig& cfg);

// Bulk-boundary collision diagnostic: median boundary quantum length carried
// by the dyadic annulus [r, 2r) around a boundary insertion of weight beta.
// The log-log slope of the median is ~ (gamma/2)(Q - beta): positive (mass
// vanishing near the insertion, statistic integrable) iff beta < Q, negative
// (blow-up) for beta >= Q.
struct CollisionDiagnostic {
  std::vector<double> radii;
  std::vector<double> median_annulus_mass;
  double slope = 0.0;
};

CollisionDiagnostic boundary_collision_diagnostic(double beta,
                                                  const LiouvilleParams& p,
                                                  double eps, int n_samples,
                                                  std::uint64_t seed,
                                                  int workers);

}  // namespace blcft
