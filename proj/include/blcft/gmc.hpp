#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "blcft/field.hpp"
#include "blcft/util.hpp"

namespace blcft {

// Regularized multiplicative-chaos measure: nonnegative cell weights
// approximating eps^{gamma^2/2} e^{gamma X_eps} dv (bulk) or
// eps^{gamma^2/4} e^{gamma X_eps / 2} dlambda (boundary).  At the critical
// coupling gamma = 2 the weights carry the extra factor sqrt(ln(1/eps)).
struct GmcMeasure {
  enum class Kind { Bulk, Boundary };
  Kind kind = Kind::Bulk;
  double gamma = 1.0;
  double eps = 0.125;
  bool critical = false;
  std::vector<Point> centers;
  std::vector<double> base;     // cell area (bulk) or cell length (boundary)
  std::vector<double> weights;  // nonnegative

  double total() const;  // fixed-order pairwise sum
};

GmcMeasure bulk_measure(const RegularizedField& f, double gamma);
GmcMeasure boundary_measure(const RegularizedField& f, double gamma);

// Expected total mass from the truncated variance table (Gaussian moment of
// each node value): bulk E[w] = base * eps^{g^2/2} e^{(g^2/2) Var}, boundary
// E[w] = base * eps^{g^2/4} e^{(g^2/8) Var}.
double expected_bulk_mass(const RegularizedField& f, double gamma);
double expected_boundary_mass(const RegularizedField& f, double gamma);

// Metric change e^phi g0: bulk weights gain e^{gamma (Q phi/2 - m_g(X))},
// boundary weights e^{(gamma/2) (Q phi/2 - m_g(X))}, with Q = 2/gamma +
// gamma/2 and m_g(X) the field average under the new metric.
GmcMeasure measure_change(const GmcMeasure& m,
                          const std::function<double(const Point&)>& phi,
                          double field_mean_g);

// Average of the regularized field under the metric e^phi g0 (phi may be null
// for g0), over the bulk mesh.
double field_mean(const RegularizedField& f,
                  const std::function<double(const Point&)>& phi);

// Sample estimate of E[M^{-p}] from a list of sampled total masses.
MeanErr negative_moment(const std::vector<double>& masses, double p);

// CSV rows "cell,u,v,weight" with a header line.
void write_measure_csv(const GmcMeasure& m, std::ostream& os);

}  // namespace blcft
