#include <doctest.h>

#include <cmath>
#include <vector>

#include "blcft/green.hpp"
#include "blcft/markov.hpp"
#include "blcft/surface.hpp"
#include "blcft/util.hpp"

using namespace blcft;

TEST_CASE("mixed kernel: Dirichlet on the cut, Neumann outside, positive") {
  Surface cyl = Surface::flat_cylinder(1.0);
  CutDecomposition cut(cyl, 0.5);

  Point x{0.2, 0.3};
  CHECK(cut.mixed_green(x, Point{0.5, 0.8}) == doctest::Approx(0.0));
  CHECK(cut.mixed_green(x, Point{0.7, 0.3}) == 0.0);  // other piece
  CHECK_THROWS(cut.mixed_green(x, x));

  // third-order one-sided normal derivative at the outer boundary t = 0
  auto f = [&](double t) { return cut.mixed_green(Point{t, 0.55}, x); };
  double h = 1e-3;
  double dn =
      (-11 * f(0.0) + 18 * f(h) - 9 * f(2 * h) + 2 * f(3 * h)) / (6 * h);
  CHECK(std::fabs(dn) < 1e-5);

  // positivity of the mixed quadratic form (no zero mode survives the
  // Dirichlet side): smeared variances are strictly positive
  for (double vshift : {0.0, 0.37}) {
    int n = 24;
    double quad = 0.0, hx = 0.45 / n, hv = 1.0 / n;
    auto g = [&](int i, int j) {
      return Point{0.02 + (i + 0.5) * hx, std::fmod((j + 0.5) * hv + vshift, 1.0)};
    };
    auto w = [&](const Point& p) {
      return std::sin(kTwoPi * p.v) + 0.3 * std::cos(2 * kTwoPi * p.u);
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            if (i == k && j == l) continue;
            Point p = g(i, j), q = g(k, l);
            quad += w(p) * w(q) * cut.mixed_green(p, q) * hx * hv * hx * hv;
          }
    CHECK(quad > 0.0);
  }
}

TEST_CASE("mixed kernel on the hemisphere half-circle cut") {
  Surface hemi = Surface::hemisphere();
  CutDecomposition cut(hemi);

  Point x{0.8, 1.5};
  // the cut is the meridian v in {0, pi}; Dirichlet there
  CHECK(cut.mixed_green(x, Point{0.5, 0.0}) == doctest::Approx(0.0));
  CHECK(cut.mixed_green(x, Point{0.9, kPi}) == doctest::Approx(0.0));
  CHECK(cut.mixed_green(x, Point{0.8, 4.0}) == 0.0);  // other piece

  // Neumann on the inherited outer boundary (the equator u = pi/2)
  auto f = [&](double u) { return cut.mixed_green(Point{u, 1.1}, x); };
  double h = 1e-3, u0 = kPi / 2.0;
  double dn = (-11 * f(u0) + 18 * f(u0 - h) - 9 * f(u0 - 2 * h) +
               2 * f(u0 - 3 * h)) /
              (6 * h);
  CHECK(std::fabs(dn) < 1e-5);
  CHECK(cut.mixed_green(x, Point{0.9, 1.2}) > 0.0);
}

TEST_CASE("harmonic extension: traces extend harmonically with Neumann data") {
  Surface cyl = Surface::flat_cylinder(1.0);
  CutDecomposition cut(cyl, 0.5);

  TraceSeries c;
  c.a0 = 1.7;
  CHECK(cut.harmonic_extension(c, Point{0.1, 0.9}) == doctest::Approx(1.7));
  CHECK(cut.harmonic_extension(c, Point{0.8, 0.2}) == doctest::Approx(1.7));

  // separation-of-variables profile for a pure mode
  TraceSeries m2;
  m2.cosk = {0.0, 1.0};
  double mu = 2 * kTwoPi;
  Point p{0.3, 0.15};
  CHECK(cut.harmonic_extension(m2, p) ==
        doctest::Approx(std::cosh(mu * p.u) / std::cosh(mu * 0.5) *
                        std::cos(mu * p.v)));

  // flat-chart Laplacian residual away from the cut
  TraceSeries tr;
  tr.a0 = 0.4;
  tr.cosk = {1.0, -0.6};
  tr.sink = {0.3, 0.8};
  auto val = [&](double t, double v) {
    return cut.harmonic_extension(tr, Point{t, v});
  };
  double h = 2e-3;
  auto d2 = [&](bool along_u, double t, double v) {
    auto g = [&](double s) { return along_u ? val(t + s, v) : val(t, v + s); };
    return (-g(2 * h) + 16 * g(h) - 30 * g(0) + 16 * g(-h) - g(-2 * h)) /
           (12 * h * h);
  };
  for (auto pt : {Point{0.22, 0.6}, Point{0.74, 0.05}})
    CHECK(std::fabs(d2(true, pt.u, pt.v) + d2(false, pt.u, pt.v)) < 1e-6);

  // derivative vanishes on the outer boundaries
  double dn = (-11 * val(0, 0.3) + 18 * val(h, 0.3) - 9 * val(2 * h, 0.3) +
               2 * val(3 * h, 0.3)) /
              (6 * h);
  CHECK(std::fabs(dn) < 1e-6);
}

TEST_CASE("harmonic extension on the hemisphere") {
  Surface hemi = Surface::hemisphere();
  CutDecomposition cut(hemi);

  TraceSeries c;
  c.a0 = -0.9;
  CHECK(cut.harmonic_extension(c, Point{0.5, 2.0}) == doctest::Approx(-0.9));
  TraceSeries bad;
  bad.sink = {1.0};
  CHECK_THROWS(cut.harmonic_extension(bad, Point{0.5, 2.0}));

  // chart Laplacian (with metric terms) of a mixed trace vanishes
  TraceSeries tr;
  tr.a0 = 0.2;
  tr.cosk = {0.7, -0.4, 0.5};
  auto val = [&](double u, double v) {
    return cut.harmonic_extension(tr, Point{u, v});
  };
  double h = 2e-3;
  auto d1u = [&](double u, double v) {
    return (val(u - 2 * h, v) - 8 * val(u - h, v) + 8 * val(u + h, v) -
            val(u + 2 * h, v)) /
           (12 * h);
  };
  auto d2f = [&](bool along_u, double u, double v) {
    auto g = [&](double s) {
      return along_u ? val(u + s, v) : val(u, v + s);
    };
    return (-g(2 * h) + 16 * g(h) - 30 * g(0) + 16 * g(-h) - g(-2 * h)) /
           (12 * h * h);
  };
  for (auto pt : {Point{0.8, 2.0}, Point{1.1, 4.2}}) {
    double lap = d2f(true, pt.u, pt.v) + std::cos(pt.u) / std::sin(pt.u) *
                                             d1u(pt.u, pt.v) +
                 d2f(false, pt.u, pt.v) / (std::sin(pt.u) * std::sin(pt.u));
    CHECK(std::fabs(lap) < 1e-6);
  }
}

TEST_CASE("extension covariance restricted to the cut is the trace covariance") {
  Surface cyl = Surface::flat_cylinder(1.0);
  CutDecomposition cut(cyl, 0.5);
  Point a{0.5, 0.1}, b{0.5, 0.42};
  CHECK(cut.extension_covariance(a, b) ==
        doctest::Approx(kTwoPi *
                        green_bordered(cyl, BoundaryCondition::Neumann, a, b))
            .epsilon(1e-10));

  Surface hemi = Surface::hemisphere();
  CutDecomposition hcut(hemi);
  Point c{0.4, 0.0}, d{1.1, kPi};
  CHECK(hcut.extension_covariance(c, d) ==
        doctest::Approx(kTwoPi *
                        green_bordered(hemi, BoundaryCondition::Neumann, c, d))
            .epsilon(1e-10));
}

TEST_CASE("decomposed covariance reassembles the Neumann kernel") {
  CHECK(markov_covariance_residual(Surface::flat_cylinder(1.0), 20) < 1e-6);
  CHECK(markov_covariance_residual(Surface::hemisphere(), 20) < 1e-6);
  // off-center cut
  CHECK(markov_covariance_residual(Surface::flat_cylinder(1.0), 12, 0.35) <
        1e-6);
  CHECK_THROWS(CutDecomposition(Surface::flat_cylinder(1.0), 1.5));
}

TEST_CASE("sampled decomposition is a statistical twin of the identity") {
  TwinResult t = markov_sampled_twin(Surface::flat_cylinder(1.0), 2000, 11, 2);
  CHECK(t.n_pairs > 10);
  CHECK(t.max_abs_z < 3.0);
  TwinResult h = markov_sampled_twin(Surface::hemisphere(), 2000, 11, 2);
  CHECK(h.n_pairs > 10);
  CHECK(h.max_abs_z < 3.0);
}

TEST_CASE("recentring under a conformal metric preserves the identity") {
  Surface cyl = Surface::flat_cylinder(1.0);
  CutDecomposition cut(cyl, 0.5);
  auto phi1 = [](double t) { return 0.3 * std::cos(kPi * t); };
  ConformalGreen cg(cyl, BoundaryCondition::Neumann,
                    [&](const Point& p) { return phi1(p.u); }, 1024, 512, 64);
  double worst = 0.0;
  std::vector<Point> pts{{0.2, 0.1}, {0.7, 0.55}, {0.35, 0.8}, {0.62, 0.33}};
  for (const auto& a : pts)
    for (const auto& b : pts) {
      if (cyl.double_distance(a, b) < 1e-9) continue;
      double lhs = kTwoPi * cg(a, b);
      double rhs = cut.assembled_covariance(a, b, phi1);
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  CHECK(worst < 1e-6);
}
