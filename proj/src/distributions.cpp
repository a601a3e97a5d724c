#include "treefire/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace treefire {

namespace {

double log_factorial(std::uint64_t k) {
  return std::lgamma(static_cast<double>(k) + 1.0);
}

void require(bool condition, const char* what) {
  if (!condition) throw std::domain_error(what);
}

}  // namespace

double borel_log_pmf(std::uint64_t k) {
  require(k >= 1, "borel_pmf: k must be >= 1");
  const double kd = static_cast<double>(k);
  return -kd + (kd - 1.0) * std::log(kd) - log_factorial(k);
}

double borel_pmf(std::uint64_t k) { return std::exp(borel_log_pmf(k)); }

double borel_tanner_log_pmf(std::uint64_t k, std::uint64_t n) {
  require(k >= 1, "borel_tanner_pmf: k must be >= 1");
  require(k <= n, "borel_tanner_pmf: k must not exceed n");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return std::log(kd) - log_factorial(n - k) - nd +
         (nd - kd - 1.0) * std::log(nd);
}

double borel_tanner_pmf(std::uint64_t k, std::uint64_t n) {
  return std::exp(borel_tanner_log_pmf(k, n));
}

double borel_tail_asymptotic(std::uint64_t support_max) {
  return std::sqrt(2.0 / std::numbers::pi / static_cast<double>(support_max));
}

BorelTable::BorelTable(std::uint64_t support_max) {
  require(support_max >= 1, "BorelTable: support_max must be >= 1");
  cumulative_.resize(support_max);
  // Neumaier-compensated running sum.
  double sum = 0.0;
  double compensation = 0.0;
  for (std::uint64_t k = 1; k <= support_max; ++k) {
    const double term = borel_pmf(k);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
    cumulative_[k - 1] = sum + compensation;
  }
  tail_mass_ = std::max(0.0, 1.0 - cumulative_.back());
}

double BorelTable::mass(std::uint64_t k) const {
  if (k == 0 || k > support_max()) return 0.0;
  return borel_pmf(k);
}

double BorelTable::cdf(std::uint64_t k) const {
  if (k == 0) return 0.0;
  return cumulative_[std::min<std::uint64_t>(k, support_max()) - 1];
}

std::uint64_t BorelTable::quantile(double u) const {
  const double target = u * cumulative_.back();
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) return support_max();
  return static_cast<std::uint64_t>(it - cumulative_.begin()) + 1;
}

std::uint64_t borel_sample(Rng& rng, const BorelTable& table) {
  return table.quantile(rng.uniform());
}

double rayleigh_pdf(double s) {
  require(s >= 0.0, "rayleigh_pdf: s must be >= 0");
  return s * std::exp(-0.5 * s * s);
}

double rayleigh_cdf(double s) {
  require(s >= 0.0, "rayleigh_cdf: s must be >= 0");
  return -std::expm1(-0.5 * s * s);
}

double rayleigh_sample(Rng& rng) {
  return std::sqrt(-2.0 * std::log(rng.uniform_open()));
}

double chi_pdf(unsigned k, double x) {
  require(k >= 1, "chi_pdf: k must be >= 1");
  require(x >= 0.0, "chi_pdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double kd = static_cast<double>(k);
  const double log_density = (1.0 - kd) * std::numbers::ln2 -
                             std::lgamma(kd) + (2.0 * kd - 1.0) * std::log(x) -
                             0.5 * x * x;
  return std::exp(log_density);
}

double chi_cdf(unsigned k, double x) {
  require(k >= 1, "chi_cdf: k must be >= 1");
  require(x >= 0.0, "chi_cdf: x must be >= 0");
  return boost::math::gamma_p(static_cast<double>(k), 0.5 * x * x);
}

double chi_sample(unsigned k, Rng& rng) {
  require(k >= 1, "chi_sample: k must be >= 1");
  double log_product = 0.0;
  for (unsigned i = 0; i < k; ++i) log_product += std::log(rng.uniform_open());
  return std::sqrt(-2.0 * log_product);
}

double spine_pmf(std::uint64_t n, std::uint64_t k) {
  require(n >= 1, "spine_pmf: n must be >= 1");
  require(k <= n - 1, "spine_pmf: k must lie in [0, n-1]");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::exp(std::log(kd + 1.0) + log_factorial(n - 1) -
                  (kd + 1.0) * std::log(nd) - log_factorial(n - k - 1));
}

namespace {

// q_n(m) for n/2 < m < n.
double strict_first_cut_pmf(std::uint64_t n, std::uint64_t m) {
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double rest = nd - md;
  return std::exp((md - 1.0) * std::log(md) + (rest - 1.0) * std::log(rest) +
                  log_factorial(n - 2) - log_factorial(m) -
                  log_factorial(n - m) - (nd - 3.0) * std::log(nd));
}

}  // namespace

double first_cut_pmf(std::uint64_t n, std::uint64_t m) {
  require(n >= 2, "first_cut_pmf: n must be >= 2");
  require(2 * m >= n && m < n, "first_cut_pmf: m must lie in [n/2, n-1]");
  if (2 * m > n) return strict_first_cut_pmf(n, m);
  double rest = 0.0;
  for (std::uint64_t larger = m + 1; larger < n; ++larger) {
    rest += strict_first_cut_pmf(n, larger);
  }
  return std::max(0.0, 1.0 - rest);
}

double dinf_pdf(const DinfLaw& law, double x) {
  require(law.a > 0.0, "dinf_pdf: a must be > 0");
  require(x > 0.0 && x < 1.0, "dinf_pdf: x must lie in (0,1)");
  const double rest = 1.0 - x;
  return law.a / std::sqrt(2.0 * std::numbers::pi * x * rest * rest * rest) *
         std::exp(-law.a * law.a * x / (2.0 * rest));
}

double dinf_cdf(const DinfLaw& law, double x) {
  require(law.a > 0.0, "dinf_cdf: a must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return std::erf(law.a * std::sqrt(x / (2.0 * (1.0 - x))));
}

double dinf_sample(const DinfLaw& law, Rng& rng) {
  // Z^2 is chi-square with one degree of freedom (Box-Muller radius/angle).
  const double radius2 = -2.0 * std::log(rng.uniform_open());
  const double c = std::cos(2.0 * std::numbers::pi * rng.uniform());
  const double z2 = radius2 * c * c;
  return z2 / (law.a * law.a + z2);
}

double dinf_moment(unsigned k, double a) {
  require(k >= 1, "dinf_moment: k must be >= 1");
  require(a > 0.0, "dinf_moment: a must be > 0");
  boost::math::quadrature::exp_sinh<double> integrator;
  auto integrand = [k, a](double x) {
    return x <= 0.0 ? 0.0 : std::exp(-a * x) * chi_pdf(k, x);
  };
  return integrator.integrate(integrand, 0.0,
                              std::numeric_limits<double>::infinity());
}

}  // namespace treefire
