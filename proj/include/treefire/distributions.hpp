#pragma once

// Closed-form laws used as simulation targets: Borel(1), Borel-Tanner,
// Rayleigh, chi with an even number of degrees of freedom, the spine length of
// a uniform Cayley tree, the first-cut split law and the limiting density of
// fireproof vertices at criticality.
//
// Every factorial/power ratio is evaluated in log space with lgamma and
// exponentiated last, so arguments up to 10^6 and beyond stay finite.

#include <cstdint>
#include <vector>

#include "treefire/random.hpp"

namespace treefire {

/// P(beta = k) = e^{-k} k^{k-1} / k!,  k >= 1.
double borel_pmf(std::uint64_t k);
double borel_log_pmf(std::uint64_t k);

/// P(beta_1 + ... + beta_k = n) = k/(n-k)! e^{-n} n^{n-k-1},  1 <= k <= n.
double borel_tanner_pmf(std::uint64_t k, std::uint64_t n);
double borel_tanner_log_pmf(std::uint64_t k, std::uint64_t n);

/// Asymptotic tail P(beta > N) ~ sqrt(2/pi) N^{-1/2}.
double borel_tail_asymptotic(std::uint64_t support_max);

inline constexpr std::uint64_t kDefaultBorelSupport = 10'000'000;

/// Borel(1) pmf truncated to 1..support_max for inverse-CDF sampling.
///
/// Mass beyond support_max is reported as tail_mass(); draws are taken from
/// the law conditioned on beta <= support_max.
class BorelTable {
 public:
  explicit BorelTable(std::uint64_t support_max = kDefaultBorelSupport);

  std::uint64_t support_max() const { return cumulative_.size(); }
  double tail_mass() const { return tail_mass_; }
  /// Unconditioned probability of k (0 outside 1..support_max).
  double mass(std::uint64_t k) const;
  /// Unconditioned P(beta <= k), clamped to the table.
  double cdf(std::uint64_t k) const;
  /// Smallest k with P(beta <= k | beta <= support_max) > u, for u in [0,1).
  std::uint64_t quantile(double u) const;

 private:
  std::vector<double> cumulative_;  // cumulative_[k-1] = P(beta <= k)
  double tail_mass_ = 0.0;
};

std::uint64_t borel_sample(Rng& rng, const BorelTable& table);

double rayleigh_pdf(double s);
double rayleigh_cdf(double s);
double rayleigh_sample(Rng& rng);

/// Chi law with 2k degrees of freedom:
/// density 2^{1-k}/(k-1)! x^{2k-1} e^{-x^2/2} on x >= 0.
double chi_pdf(unsigned k, double x);
double chi_cdf(unsigned k, double x);
/// sqrt of twice a sum of k unit exponentials (chi-square with 2k d.o.f.).
double chi_sample(unsigned k, Rng& rng);

/// P(lambda_n = k) = (k+1)(n-1)! / (n^{k+1} (n-k-1)!),  0 <= k <= n-1.
double spine_pmf(std::uint64_t n, std::uint64_t k);

/// Probability that one uniform edge removal splits a uniform tree on n
/// vertices into parts of sizes {m, n-m}, reported by the larger side
/// m in [n/2, n-1]. The even-n, m = n/2 mass is the complement of the rest.
double first_cut_pmf(std::uint64_t n, std::uint64_t m);

/// Limit law of the fireproof density at firing rate a/sqrt(n):
/// density a / sqrt(2 pi x (1-x)^3) exp(-a^2 x / (2(1-x))) on (0,1).
/// a = 1 is the rate n^{-1/2}.
struct DinfLaw {
  double a = 1.0;
};

double dinf_pdf(const DinfLaw& law, double x);
/// Closed form: with t = x/(1-x) the law is that of Z^2/a^2 for standard
/// normal Z, so the cdf is erf(a sqrt(t/2)).
double dinf_cdf(const DinfLaw& law, double x);
double dinf_sample(const DinfLaw& law, Rng& rng);

/// E[exp(-a chi(2k))] by quadrature; equals the k-th moment of D_inf(a).
double dinf_moment(unsigned k, double a = 1.0);

}  // namespace treefire
