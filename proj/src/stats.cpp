#include "treefire/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace treefire {

Ecdf::Ecdf(std::span<const double> samples)
    : sorted_(samples.begin(), samples.end()) {
  if (sorted_.empty()) throw std::domain_error("Ecdf: no samples");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

std::string_view to_string(GofKind kind) {
  return kind == GofKind::KS ? "KS" : "ChiSquare";
}

double kolmogorov_threshold(std::size_t sample_size, double significance) {
  if (sample_size == 0) throw std::domain_error("kolmogorov_threshold: N = 0");
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::domain_error("kolmogorov_threshold: significance in (0,1)");
  }
  return std::sqrt(-0.5 * std::log(0.5 * significance)) /
         std::sqrt(static_cast<double>(sample_size));
}

GofResult ks_statistic(std::span<const double> samples,
                       const std::function<double(double)>& cdf,
                       double significance) {
  if (samples.empty()) throw std::domain_error("ks_statistic: no samples");
  const Ecdf ecdf(samples);
  const auto sorted = ecdf.sorted_samples();
  const double size = static_cast<double>(sorted.size());
  double distance = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    distance = std::max({distance, static_cast<double>(i + 1) / size - f,
                         f - static_cast<double>(i) / size});
  }
  GofResult result;
  result.kind = GofKind::KS;
  result.statistic = distance;
  result.sample_size = sorted.size();
  result.significance = significance;
  result.threshold = kolmogorov_threshold(sorted.size(), significance);
  result.pass = result.statistic <= result.threshold;
  return result;
}

GofResult ks_two_sample(std::span<const double> first,
                        std::span<const double> second, double significance) {
  if (first.empty() || second.empty()) {
    throw std::domain_error("ks_two_sample: no samples");
  }
  const Ecdf a(first);
  const Ecdf b(second);
  double distance = 0.0;
  // The sup is attained at a sample point of either set.
  for (double x : a.sorted_samples()) distance = std::max(distance, std::abs(a(x) - b(x)));
  for (double x : b.sorted_samples()) distance = std::max(distance, std::abs(a(x) - b(x)));
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  GofResult result;
  result.kind = GofKind::KS;
  result.statistic = distance;
  result.sample_size = a.size() + b.size();
  result.significance = significance;
  result.threshold =
      kolmogorov_threshold(1, significance) * std::sqrt((n + m) / (n * m));
  result.pass = result.statistic <= result.threshold;
  return result;
}

GofResult chi_square_gof(std::span<const std::uint64_t> counts,
                         std::span<const double> pmf, double significance) {
  if (counts.size() != pmf.size()) {
    throw std::domain_error("chi_square_gof: bin count mismatch");
  }
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::domain_error("chi_square_gof: significance in (0,1)");
  }
  const double mass = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  if (std::abs(mass - 1.0) > 1e-6) {
    throw std::domain_error("chi_square_gof: pmf does not sum to 1");
  }
  const std::uint64_t total =
      std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw std::domain_error("chi_square_gof: no observations");

  struct Bin {
    double expected;
    double observed;
  };
  std::vector<Bin> bins;
  Bin pooled{0.0, 0.0};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const Bin bin{pmf[i] * static_cast<double>(total),
                  static_cast<double>(counts[i])};
    if (bin.expected >= 5.0) {
      bins.push_back(bin);
    } else {
      pooled.expected += bin.expected;
      pooled.observed += bin.observed;
    }
  }
  if (pooled.expected >= 5.0) {
    bins.push_back(pooled);
  } else if (pooled.expected > 0.0 || pooled.observed > 0.0) {
    if (bins.empty()) {
      throw std::domain_error("chi_square_gof: degenerate after pooling");
    }
    auto smallest = std::min_element(
        bins.begin(), bins.end(),
        [](const Bin& x, const Bin& y) { return x.expected < y.expected; });
    smallest->expected += pooled.expected;
    smallest->observed += pooled.observed;
  }
  if (bins.size() < 2) {
    throw std::domain_error("chi_square_gof: degenerate after pooling");
  }

  double statistic = 0.0;
  for (const Bin& bin : bins) {
    const double diff = bin.observed - bin.expected;
    statistic += diff * diff / bin.expected;
  }
  GofResult result;
  result.kind = GofKind::ChiSquare;
  result.statistic = statistic;
  result.sample_size = total;
  result.significance = significance;
  result.dof = bins.size() - 1;
  result.threshold = boost::math::quantile(
      boost::math::chi_squared(static_cast<double>(result.dof)),
      1.0 - significance);
  result.pass = result.statistic <= result.threshold;
  return result;
}

SampleSummary summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::domain_error("summarize: no samples");
  // Sorting first makes the floating-point sums independent of input order.
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  SampleSummary s;
  s.count = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  const double n = static_cast<double>(s.count);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (s.count > 1) {
    double squares = 0.0;
    for (double x : sorted) squares += (x - s.mean) * (x - s.mean);
    s.std_error = std::sqrt(squares / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

}  // namespace treefire
