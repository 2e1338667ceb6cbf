#include "blcft/field.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace blcft {

namespace {

double wrap_centered(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r > 0.5 * period) r -= period;
  return r;
}

}  // namespace

RegularizedField::RegularizedField(const SpectralBasis& basis,
                                   const GffSample& sample, double eps, int n1,
                                   int n2, int nb, int circle_n)
    : surf_(basis.surface()), eps_(eps), n1_(n1), n2_(n2), nb_(nb) {
  if (basis.on_double() || basis.condition() != BoundaryCondition::Neumann)
    throw std::invalid_argument("regularized field needs a Neumann bordered basis");
  if (sample.coeffs.size() != basis.size())
    throw std::invalid_argument("sample size does not match basis");
  const bool cyl = surf_.kind() == SurfaceKind::FlatCylinder;
  const double uspan = cyl ? surf_.modulus() : 0.5 * kPi;
  const double vper = cyl ? 1.0 : kTwoPi;
  const double omega = cyl ? kTwoPi : 1.0;
  const double h1 = uspan / n1, h2 = vper / n2;
  if (h1 > 0.5 * eps || h2 > 0.5 * eps)
    throw std::invalid_argument("mesh too coarse for eps (cell size must be <= eps/2)");
  if (!(eps > 0) || eps > surf_.injectivity_bound())
    throw std::invalid_argument("eps outside the injectivity bound");

  const auto& modes = basis.modes();
  const std::size_t N = modes.size();
  // Completeness of cos/sin pairs in v (the variance table folds each pair).
  for (std::size_t j = 0; j < N; ++j) {
    if (modes[j].b > 0 && modes[j].tb == 0 &&
        (j + 1 >= N || modes[j + 1].b != modes[j].b ||
         modes[j + 1].a != modes[j].a || modes[j + 1].tb != 1))
      throw std::invalid_argument(
          "basis truncation splits a cos/sin pair; use a cutoff-based basis");
  }

  // Per-mode field coefficients and interior circle-average multipliers.
  std::vector<double> w(N), mult(N);
  int bmax = 0;
  for (std::size_t j = 0; j < N; ++j) {
    w[j] = std::sqrt(kTwoPi / modes[j].lambda) * sample.coeffs[j];
    mult[j] = cyl ? std::cyl_bessel_j(0.0, std::sqrt(modes[j].lambda) * eps)
                  : std::legendre(unsigned(modes[j].a), std::cos(eps));
    bmax = std::max(bmax, modes[j].b);
  }

  // uval(u) per mode such that eval = uval(u) * {cos,sin}(b * omega * v).
  std::vector<std::vector<double>> Q;  // hemisphere Legendre table, per u
  auto uvals_at = [&](double u, std::vector<double>& out) {
    out.resize(N);
    if (cyl) {
      double T = uspan;
      for (std::size_t j = 0; j < N; ++j) {
        double tnorm = modes[j].a == 0 ? T : 0.5 * T;
        double ynorm = modes[j].b == 0 ? 1.0 : 0.5;
        out[j] = std::cos(kPi * modes[j].a * u / T) / std::sqrt(tnorm * ynorm);
      }
    } else {
      // Fully normalized associated Legendre recurrence, shared by all modes
      // at this colatitude.
      int lmax = modes.empty() ? 0 : modes.back().a;
      double x = std::cos(u);
      double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
      Q.assign(lmax + 1, {});
      for (int l = 0; l <= lmax; ++l) Q[l].assign(l + 1, 0.0);
      Q[0][0] = std::sqrt(1.0 / (4.0 * kPi));
      for (int m = 1; m <= lmax; ++m)
        Q[m][m] = Q[m - 1][m - 1] * sx * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      for (int m = 0; m < lmax; ++m) {
        Q[m + 1][m] = std::sqrt(2.0 * m + 3.0) * x * Q[m][m];
        for (int l = m + 2; l <= lmax; ++l) {
          double a = std::sqrt((4.0 * l * l - 1.0) /
                               (double(l) * l - double(m) * m));
          double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                               (4.0 * double(l - 1) * (l - 1) - 1.0));
          Q[l][m] = a * (x * Q[l - 1][m] - b * Q[l - 2][m]);
        }
      }
      for (std::size_t j = 0; j < N; ++j) {
        double f = std::sqrt(2.0) * Q[modes[j].a][modes[j].b];
        if (modes[j].b > 0) f *= std::sqrt(2.0);
        out[j] = f;
      }
    }
  };

  // Frequency-space row representation: X(u, v) = sum_b Re[H_b e^{i b omega v}].
  using cd = std::complex<double>;
  std::vector<cd> Etab(std::size_t(bmax + 1) * n2);
  for (int b = 0; b <= bmax; ++b)
    for (int m = 0; m < n2; ++m)
      Etab[std::size_t(b) * n2 + m] =
          std::polar(1.0, b * omega * (m + 0.5) * h2);

  auto build_H = [&](const std::vector<double>& uv, const double* fac,
                     std::vector<cd>& H) {
    H.assign(bmax + 1, cd(0.0, 0.0));
    for (std::size_t j = 0; j < N; ++j) {
      double c = w[j] * uv[j] * (fac ? fac[j] : 1.0);
      if (modes[j].tb == 0)
        H[modes[j].b] += cd(c, 0.0);
      else
        H[modes[j].b] += cd(0.0, -c);
    }
  };
  auto add_row = [&](const std::vector<cd>& H, double delta, double wgt,
                     double* out) {
    for (int b = 0; b <= bmax; ++b) {
      cd hb = H[b] * std::polar(1.0, b * omega * delta);
      const cd* e = &Etab[std::size_t(b) * n2];
      for (int m = 0; m < n2; ++m)
        out[m] += wgt * (hb.real() * e[m].real() - hb.imag() * e[m].imag());
    }
  };

  values_.assign(std::size_t(n1) * n2, 0.0);
  row_var_.assign(n1, 0.0);
  std::vector<double> uv;
  std::vector<cd> H;

  for (int i = 0; i < n1; ++i) {
    double u = (i + 0.5) * h1;
    double dist = surf_.distance_to_boundary({u, 0.0});
    double* row = &values_[std::size_t(i) * n2];
    if (dist >= eps) {
      uvals_at(u, uv);
      build_H(uv, mult.data(), H);
      add_row(H, 0.0, 1.0, row);
      double var = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        double v = mult[j] * uv[j];
        var += v * v * (modes[j].b > 0 ? 0.5 : 1.0) / modes[j].lambda;
      }
      row_var_[i] = kTwoPi * var;
    } else {
      CircleSample c = surf_.geodesic_circle({u, 0.0}, eps, circle_n);
      std::size_t S = c.points.size();
      std::vector<std::vector<double>> suv(S);
      std::vector<double> sdelta(S);
      for (std::size_t s = 0; s < S; ++s) {
        uvals_at(c.points[s].u, suv[s]);
        sdelta[s] = wrap_centered(c.points[s].v, vper);
        build_H(suv[s], nullptr, H);
        add_row(H, sdelta[s], c.weights[s], row);
      }
      // Variance: each cos mode and its sin partner combine into |zeta|^2,
      // independent of the position along the boundary.
      double var = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        if (modes[j].tb != 0) continue;
        cd zeta(0.0, 0.0);
        for (std::size_t s = 0; s < S; ++s)
          zeta += c.weights[s] * suv[s][j] *
                  std::polar(1.0, modes[j].b * omega * sdelta[s]);
        var += std::norm(zeta) / modes[j].lambda;
      }
      row_var_[i] = kTwoPi * var;
    }
  }

  // Boundary components: exact multiplier (even extension makes the clipped
  // half-circle average equal the full-circle average in the double).
  int ncomp = surf_.boundary_components();
  bvals_.assign(ncomp, std::vector<double>(nb, 0.0));
  bvar_.assign(ncomp, 0.0);
  for (int comp = 0; comp < ncomp; ++comp) {
    double ub = cyl ? (comp == 0 ? 0.0 : uspan) : 0.5 * kPi;
    uvals_at(ub, uv);
    build_H(uv, mult.data(), H);
    // boundary mesh has its own node count; reuse the frequency rep directly
    std::vector<double>& out = bvals_[comp];
    double hb2 = vper / nb;
    for (int b = 0; b <= bmax; ++b) {
      cd hb = H[b];
      for (int m = 0; m < nb; ++m) {
        double ang = b * omega * (m + 0.5) * hb2;
        out[m] += hb.real() * std::cos(ang) - hb.imag() * std::sin(ang);
      }
    }
    double var = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      double v = mult[j] * uv[j];
      var += v * v * (modes[j].b > 0 ? 0.5 : 1.0) / modes[j].lambda;
    }
    bvar_[comp] = kTwoPi * var;
  }
}

Point RegularizedField::bulk_node(int i, int j) const {
  const bool cyl = surf_.kind() == SurfaceKind::FlatCylinder;
  double uspan = cyl ? surf_.modulus() : 0.5 * kPi;
  double vper = cyl ? 1.0 : kTwoPi;
  return {(i + 0.5) * uspan / n1_, (j + 0.5) * vper / n2_};
}

double RegularizedField::cell_area(int i, int) const {
  if (surf_.kind() == SurfaceKind::FlatCylinder)
    return (surf_.modulus() / n1_) * (1.0 / n2_);
  double h = 0.5 * kPi / n1_;
  double u = (i + 0.5) * h;
  return (std::cos(u - 0.5 * h) - std::cos(u + 0.5 * h)) * (kTwoPi / n2_);
}

Point RegularizedField::boundary_node(int comp, int j) const {
  const bool cyl = surf_.kind() == SurfaceKind::FlatCylinder;
  double ub = cyl ? (comp == 0 ? 0.0 : surf_.modulus()) : 0.5 * kPi;
  double vper = cyl ? 1.0 : kTwoPi;
  return {ub, (j + 0.5) * vper / nb_};
}

double RegularizedField::boundary_cell_length(int comp) const {
  return surf_.boundary_component_length(comp) / nb_;
}

}  // namespace blcft
