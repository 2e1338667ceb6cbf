#pragma once

#include <functional>

#include "blcft/spectral.hpp"
#include "blcft/surface.hpp"

namespace blcft {

// Exact Green function of the Laplacian on the closed double, normalized by
//   (positive spectrum)  sum_j phi_j(x) phi_j(y) / lambda_j,
// i.e. -div grad G = delta - 1/Vol with zero mean.  Exponentially convergent
// closed forms: 1D-Fourier split on the torus, log closed form on the sphere.
double green_double(const Surface& s, const Point& x, const Point& y);

// Green function of the bordered surface via the doubling identity:
// Neumann  G(x,y) = G_d(x,y) + G_d(x, sigma(y)),
// Dirichlet G(x,y) = G_d(x,y) - G_d(x, sigma(y)).
double green_bordered(const Surface& s, BoundaryCondition bc, const Point& x,
                      const Point& y);

// Regular part of a kernel with a -(1/2pi) log d singularity:
//   lim_{y->x} [ K(x,y) + (1/2pi) ln d(x,y) ]
// evaluated by a small tangential offset.  `kernel` must be the double or
// bordered kernel above; d is the double-distance.
double green_regular_part(const Surface& s,
                          const std::function<double(const Point&, const Point&)>& kernel,
                          const Point& x);

// Scalar field on the surface together with the data needed for the
// conformal-change and anomaly formulas.
struct ConformalFactor {
  std::function<double(const Point&)> phi;
  std::function<double(const Point&)> laplacian_phi;  // analyst sign, div grad
  std::function<double(const Point&, int)> normal_derivative;  // outward, per component
};

// m_g average of f over the surface under the metric e^phi g0 (phi may be
// null for g0 itself), by midpoint quadrature with analytic handling of a
// -(1/2pi) log d singularity of f at `sing` (pass nullptr when smooth).
double mg_average(const Surface& s,
                  const std::function<double(const Point&)>& phi,
                  const std::function<double(const Point&)>& f,
                  const Point* sing, int n1, int n2);

// Green kernel of the metric e^phi g0 through the conformal-change rule
//   G_g(x,y) = G0(x,y) - m_g(G0(x,.)) - m_g(G0(.,y)) + m_g m_g(G0).
// The slot averages m_g(G0(x,.)) = sum_j (c_j / lambda_j) phi_j(x) with
// c_j = <rho, phi_j>, rho = e^phi / int e^phi, converge rapidly for smooth
// phi and avoid any singular quadrature; the double average is sum c_j^2 /
// lambda_j.  Construction precomputes the c_j once; evaluation is cheap.
class ConformalGreen {
 public:
  ConformalGreen(const Surface& s, BoundaryCondition bc,
                 std::function<double(const Point&)> phi, int n_modes = 512,
                 int nq1 = 256, int nq2 = 256);

  double operator()(const Point& x, const Point& y) const;
  // m_g(G0(x, .)), the correction subtracted from each slot.
  double slot_average(const Point& x) const;
  double double_average() const { return mm_; }

 private:
  Surface surf_;
  BoundaryCondition bc_;
  SpectralBasis basis_;
  std::vector<double> coef_;  // c_j / lambda_j
  double mm_ = 0.0;
};

// Residual of the integration-by-parts identity
//   \int G(x,.) lap f dv - \oint G(x,.) dn f dl + (f(x) - m(f))
// for the Neumann kernel (analyst Laplacian, outward normal).
double green_identity_residual(const Surface& s,
                               const std::function<double(const Point&)>& f,
                               const std::function<double(const Point&)>& lap_f,
                               const std::function<double(const Point&, int)>& dn_f,
                               const Point& x, int n1, int n2, int nb);

// Exact-kernel variance of the circle average of the Neumann GFF at an
// interior point (full circle; requires dist to boundary > eps).  Computed as
// 2*pi times the pair average of the Neumann kernel over the circle, with the
// log singularity integrated in closed form.
double circle_average_variance(const Surface& s, const Point& x, double eps,
                               int n = 64);

// Circle-average covariance 2*pi * avg avg G^N between two distinct circles.
double circle_average_covariance(const Surface& s, const Point& x, double ex,
                                 const Point& y, double ey, int n = 32);

// Richardson extrapolation of W(x) = lim_{eps->0} (E[X_eps(x)^2] + ln eps)
// over a dyadic ladder (error model C eps^2).
double w_extrapolate(const Surface& s, const Point& x, double eps0, int rungs);

}  // namespace blcft
