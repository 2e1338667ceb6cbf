#include "blcft/gmc.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace blcft {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || gamma > 2.0)
    throw std::invalid_argument("gamma must lie in (0, 2]");
}

double critical_factor(double gamma, double eps) {
  return gamma == 2.0 ? std::sqrt(std::log(1.0 / eps)) : 1.0;
}

}  // namespace

double GmcMeasure::total() const { return pairwise_sum(weights); }

GmcMeasure bulk_measure(const RegularizedField& f, double gamma) {
  check_gamma(gamma);
  GmcMeasure m;
  m.kind = GmcMeasure::Kind::Bulk;
  m.gamma = gamma;
  m.eps = f.eps();
  m.critical = gamma == 2.0;
  double pre = std::pow(f.eps(), 0.5 * gamma * gamma) *
               critical_factor(gamma, f.eps());
  m.centers.reserve(std::size_t(f.n1()) * f.n2());
  m.base.reserve(m.centers.capacity());
  m.weights.reserve(m.centers.capacity());
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) {
      m.centers.push_back(f.bulk_node(i, j));
      m.base.push_back(f.cell_area(i, j));
      m.weights.push_back(m.base.back() * pre *
                          std::exp(gamma * f.bulk_value(i, j)));
    }
  return m;
}

GmcMeasure boundary_measure(const RegularizedField& f, double gamma) {
  check_gamma(gamma);
  GmcMeasure m;
  m.kind = GmcMeasure::Kind::Boundary;
  m.gamma = gamma;
  m.eps = f.eps();
  m.critical = gamma == 2.0;
  double pre = std::pow(f.eps(), 0.25 * gamma * gamma) *
               critical_factor(gamma, f.eps());
  for (int c = 0; c < f.surface().boundary_components(); ++c)
    for (int j = 0; j < f.nb(); ++j) {
      m.centers.push_back(f.boundary_node(c, j));
      m.base.push_back(f.boundary_cell_length(c));
      m.weights.push_back(m.base.back() * pre *
                          std::exp(0.5 * gamma * f.boundary_value(c, j)));
    }
  return m;
}

double expected_bulk_mass(const RegularizedField& f, double gamma) {
  check_gamma(gamma);
  double pre = std::pow(f.eps(), 0.5 * gamma * gamma) *
               critical_factor(gamma, f.eps());
  double acc = 0.0;
  for (int i = 0; i < f.n1(); ++i) {
    double rowmoment = std::exp(0.5 * gamma * gamma * f.bulk_variance(i));
    for (int j = 0; j < f.n2(); ++j) acc += f.cell_area(i, j) * rowmoment;
  }
  return pre * acc;
}

double expected_boundary_mass(const RegularizedField& f, double gamma) {
  check_gamma(gamma);
  double pre = std::pow(f.eps(), 0.25 * gamma * gamma) *
               critical_factor(gamma, f.eps());
  double acc = 0.0;
  for (int c = 0; c < f.surface().boundary_components(); ++c)
    acc += f.surface().boundary_component_length(c) *
           std::exp(0.125 * gamma * gamma * f.boundary_variance(c));
  return pre * acc;
}

GmcMeasure measure_change(const GmcMeasure& m,
                          const std::function<double(const Point&)>& phi,
                          double field_mean_g) {
  double q = 2.0 / m.gamma + 0.5 * m.gamma;
  double rate = m.kind == GmcMeasure::Kind::Bulk ? m.gamma : 0.5 * m.gamma;
  GmcMeasure out = m;
  for (std::size_t i = 0; i < out.weights.size(); ++i) {
    double ph = phi ? phi(out.centers[i]) : 0.0;
    out.weights[i] *= std::exp(rate * (0.5 * q * ph - field_mean_g));
  }
  return out;
}

double field_mean(const RegularizedField& f,
                  const std::function<double(const Point&)>& phi) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) {
      double w = f.cell_area(i, j) * (phi ? std::exp(phi(f.bulk_node(i, j))) : 1.0);
      num += w * f.bulk_value(i, j);
      den += w;
    }
  return num / den;
}

MeanErr negative_moment(const std::vector<double>& masses, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  std::vector<double> v(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0.0))
      throw std::invalid_argument("zero mass encountered; eps under-resolved");
    v[i] = std::pow(masses[i], -p);
  }
  return mean_and_stderr(v);
}

void write_measure_csv(const GmcMeasure& m, std::ostream& os) {
  os << "cell,u,v,weight\n";
  for (std::size_t i = 0; i < m.weights.size(); ++i)
    os << i << ',' << m.centers[i].u << ',' << m.centers[i].v << ','
       << m.weights[i] << '\n';
}

}  // namespace blcft
