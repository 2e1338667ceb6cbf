#include "blcft/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace blcft {

namespace {

// Estimate an eigenvalue cutoff that yields at least n modes (Weyl count with
// a safety margin), for count-based construction.
double cutoff_for_count(double area, int n) {
  return 4.0 * kPi * (n + 64) / area * 1.6 + 64.0;
}

bool mode_less(const Mode& x, const Mode& y) {
  return std::tie(x.lambda, x.a, x.b, x.ta, x.tb) <
         std::tie(y.lambda, y.a, y.b, y.ta, y.tb);
}

// Fully normalized associated Legendre values Q_{l m}(cos theta) for all
// l <= lmax, m <= l; Y_{l0} = Q_{l0}, Y_{lm} = sqrt(2) Q_{lm} {cos,sin}(m phi).
void legendre_table(int lmax, double x, std::vector<std::vector<double>>& Q) {
  double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
  Q.assign(lmax + 1, {});
  for (int l = 0; l <= lmax; ++l) Q[l].assign(l + 1, 0.0);
  Q[0][0] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= lmax; ++m)
    Q[m][m] = Q[m - 1][m - 1] * sx * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  for (int m = 0; m < lmax; ++m) {
    Q[m + 1][m] = std::sqrt(2.0 * m + 3.0) * x * Q[m][m];
    for (int l = m + 2; l <= lmax; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                           (4.0 * double(l - 1) * (l - 1) - 1.0));
      Q[l][m] = a * (x * Q[l - 1][m] - b * Q[l - 2][m]);
    }
  }
}

double legendre_q(int l, int m, double x) {
  static thread_local std::vector<std::vector<double>> table;
  static thread_local double cached_x = 2.0;
  static thread_local int cached_lmax = -1;
  if (x != cached_x || l > cached_lmax) {
    legendre_table(std::max(l, cached_lmax), x, table);
    cached_x = x;
    cached_lmax = std::max(l, cached_lmax);
  }
  return table[l][m];
}

}  // namespace

SpectralBasis SpectralBasis::bordered(const Surface& s, BoundaryCondition bc,
                                      int n) {
  double cut = cutoff_for_count(s.volume(), n);
  SpectralBasis b = bordered_cutoff(s, bc, cut);
  if (static_cast<int>(b.modes_.size()) < n)
    throw std::runtime_error("cutoff estimate too small for requested basis size");
  b.modes_.resize(n);
  return b;
}

SpectralBasis SpectralBasis::doubled(const Surface& s, int n) {
  double cut = cutoff_for_count(s.double_volume(), n);
  SpectralBasis b = doubled_cutoff(s, cut);
  if (static_cast<int>(b.modes_.size()) < n)
    throw std::runtime_error("cutoff estimate too small for requested basis size");
  b.modes_.resize(n);
  return b;
}

SpectralBasis SpectralBasis::bordered_cutoff(const Surface& s,
                                             BoundaryCondition bc,
                                             double cutoff) {
  if (!s.has_spectral_basis())
    throw std::invalid_argument("no spectral basis for this model");
  SpectralBasis basis;
  basis.surf_ = s;
  basis.on_double_ = false;
  basis.bc_ = bc;
  auto& out = basis.modes_;

  if (s.kind() == SurfaceKind::FlatCylinder) {
    double T = s.modulus();
    bool neu = bc == BoundaryCondition::Neumann;
    for (int j = neu ? 0 : 1;; ++j) {
      double lj = kPi * j / T * (kPi * j / T);
      if (lj > cutoff) break;
      for (int k = 0;; ++k) {
        double lam = lj + kTwoPi * k * (kTwoPi * k);
        if (lam > cutoff) break;
        if (neu && j == 0 && k == 0) continue;  // constant mode removed
        Mode m{lam, j, k, neu ? 0 : 1, 0};
        out.push_back(m);
        if (k > 0) out.push_back(Mode{lam, j, k, neu ? 0 : 1, 1});
      }
    }
  } else {
    // Hemisphere: spherical harmonics with l+m even (Neumann) / odd
    // (Dirichlet), scaled by sqrt(2) for unit norm on the half sphere.
    bool neu = bc == BoundaryCondition::Neumann;
    for (int l = 1;; ++l) {
      double lam = double(l) * (l + 1);
      if (lam > cutoff) break;
      for (int m = 0; m <= l; ++m) {
        if (((l + m) % 2 == 0) != neu) continue;
        out.push_back(Mode{lam, l, m, 0, 0});
        if (m > 0) out.push_back(Mode{lam, l, m, 0, 1});
      }
    }
  }
  std::sort(out.begin(), out.end(), mode_less);
  return basis;
}

SpectralBasis SpectralBasis::doubled_cutoff(const Surface& s, double cutoff) {
  if (!s.has_spectral_basis())
    throw std::invalid_argument("no spectral basis for this model");
  SpectralBasis basis;
  basis.surf_ = s;
  basis.on_double_ = true;
  auto& out = basis.modes_;

  if (s.kind() == SurfaceKind::FlatCylinder) {
    double T = s.modulus();
    for (int j = 0;; ++j) {
      double lj = kPi * j / T * (kPi * j / T);
      if (lj > cutoff) break;
      for (int k = 0;; ++k) {
        double lam = lj + kTwoPi * k * (kTwoPi * k);
        if (lam > cutoff) break;
        for (int ta = 0; ta < (j > 0 ? 2 : 1); ++ta)
          for (int tb = 0; tb < (k > 0 ? 2 : 1); ++tb) {
            if (j == 0 && k == 0) continue;
            out.push_back(Mode{lam, j, k, ta, tb});
          }
      }
    }
  } else {
    for (int l = 1;; ++l) {
      double lam = double(l) * (l + 1);
      if (lam > cutoff) break;
      for (int m = 0; m <= l; ++m) {
        out.push_back(Mode{lam, l, m, 0, 0});
        if (m > 0) out.push_back(Mode{lam, l, m, 0, 1});
      }
    }
  }
  std::sort(out.begin(), out.end(), mode_less);
  return basis;
}

double SpectralBasis::max_lambda() const {
  return modes_.empty() ? 0.0 : modes_.back().lambda;
}

double SpectralBasis::eval(const Mode& m, const Point& p) const {
  if (surf_.kind() == SurfaceKind::FlatCylinder) {
    double T = surf_.modulus();
    double tf, tnorm;
    if (on_double_) {
      double arg = kPi * m.a * p.u / T;
      tf = m.ta == 0 ? std::cos(arg) : std::sin(arg);
      tnorm = m.a == 0 ? 2.0 * T : T;  // integral of factor^2 over period 2T
    } else if (bc_ == BoundaryCondition::Neumann) {
      tf = std::cos(kPi * m.a * p.u / T);
      tnorm = m.a == 0 ? T : 0.5 * T;
    } else {
      tf = std::sin(kPi * m.a * p.u / T);
      tnorm = 0.5 * T;
    }
    double arg = kTwoPi * m.b * p.v;
    double yf = m.tb == 0 ? std::cos(arg) : std::sin(arg);
    double ynorm = m.b == 0 ? 1.0 : 0.5;
    return tf * yf / std::sqrt(tnorm * ynorm);
  }
  // Sphere harmonics.
  double q = legendre_q(m.a, m.b, std::cos(p.u));
  double f = m.b == 0 ? q
                      : std::sqrt(2.0) * q *
                            (m.tb == 0 ? std::cos(m.b * p.v) : std::sin(m.b * p.v));
  return on_double_ ? f : std::sqrt(2.0) * f;
}

double SpectralBasis::green_eigensum(const Point& x, const Point& y) const {
  // Evaluate in one pass; on the sphere share the Legendre tables.
  double s = 0.0;
  if (surf_.kind() == SurfaceKind::Hemisphere) {
    int lmax = modes_.empty() ? 0 : modes_.back().a;
    std::vector<std::vector<double>> Qx, Qy;
    legendre_table(lmax, std::cos(x.u), Qx);
    legendre_table(lmax, std::cos(y.u), Qy);
    double scale = on_double_ ? 1.0 : 2.0;
    for (const Mode& m : modes_) {
      double fx = Qx[m.a][m.b], fy = Qy[m.a][m.b];
      if (m.b > 0) {
        double trig = m.tb == 0 ? std::cos(m.b * x.v) * std::cos(m.b * y.v)
                                : std::sin(m.b * x.v) * std::sin(m.b * y.v);
        fx *= 2.0 * trig;  // sqrt(2)^2
        fy *= 1.0;
      }
      s += scale * fx * fy / m.lambda;
    }
    return s;
  }
  for (const Mode& m : modes_) s += eval(m, x) * eval(m, y) / m.lambda;
  return s;
}

double SpectralBasis::weyl_slope() const {
  std::size_t n = modes_.size();
  std::size_t lo = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = lo; i < n; ++i) {
    double xi = static_cast<double>(i + 1);
    double yi = modes_[i].lambda;
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    sxy += xi * yi;
    ++cnt;
  }
  double c = static_cast<double>(cnt);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

double SpectralBasis::weyl_predicted_slope() const {
  double area = on_double_ ? surf_.double_volume() : surf_.volume();
  return 4.0 * kPi / area;
}

GffSample sample_gff(const SpectralBasis& basis, std::uint64_t seed,
                     std::uint64_t stream_id) {
  RngStream rng(seed, stream_id);
  GffSample s;
  s.coeffs.resize(basis.size());
  for (auto& c : s.coeffs) c = rng.normal();
  return s;
}

double eval_gff(const SpectralBasis& basis, const GffSample& sample,
                const Point& p) {
  const auto& modes = basis.modes();
  double acc = 0.0;
  for (std::size_t j = 0; j < modes.size(); ++j)
    acc += sample.coeffs[j] * basis.eval(modes[j], p) / std::sqrt(modes[j].lambda);
  return std::sqrt(kTwoPi) * acc;
}

double gff_pointwise_variance(const SpectralBasis& basis, const Point& p) {
  double acc = 0.0;
  for (const Mode& m : basis.modes()) {
    double v = basis.eval(m, p);
    acc += v * v / m.lambda;
  }
  return kTwoPi * acc;
}

double gff_pairing_variance(const SpectralBasis& basis, const Quadrature& q,
                            const std::vector<double>& f_values) {
  double acc = 0.0;
  for (const Mode& m : basis.modes()) {
    double inner = 0.0;
    for (std::size_t i = 0; i < q.pts.size(); ++i)
      inner += q.w[i] * f_values[i] * basis.eval(m, q.pts[i]);
    acc += inner * inner / m.lambda;
  }
  return kTwoPi * acc;
}

}  // namespace blcft
