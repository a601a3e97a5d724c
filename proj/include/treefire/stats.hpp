#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace treefire {

inline constexpr double kDefaultSignificance = 0.01;

class Ecdf {
 public:
  explicit Ecdf(std::span<const double> samples);

  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted_samples() const { return sorted_; }
  /// Fraction of samples <= x.
  double operator()(double x) const;

 private:
  std::vector<double> sorted_;
};

enum class GofKind { KS, ChiSquare };

std::string_view to_string(GofKind kind);

struct GofResult {
  GofKind kind = GofKind::KS;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t sample_size = 0;
  double significance = kDefaultSignificance;
  /// Degrees of freedom (chi-square only).
  std::size_t dof = 0;
};

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Asymptotic Kolmogorov critical value sqrt(-ln(significance/2)/2)/sqrt(N);
/// about 1.63/sqrt(N) at the 1% level.
double kolmogorov_threshold(std::size_t sample_size, double significance);

/// One-sample Kolmogorov-Smirnov sup-distance against `cdf`.
GofResult ks_statistic(std::span<const double> samples,
                       const std::function<double(double)>& cdf,
                       double significance = kDefaultSignificance);

/// Two-sample Kolmogorov-Smirnov distance with the asymptotic critical value
/// scaled by sqrt((n+m)/(nm)).
GofResult ks_two_sample(std::span<const double> first,
                        std::span<const double> second,
                        double significance = kDefaultSignificance);

/// Pearson chi-square against `pmf` (same length as `counts`, summing to 1).
/// Bins with expected count below 5 are pooled; fewer than two bins after
/// pooling is rejected as degenerate.
GofResult chi_square_gof(std::span<const std::uint64_t> counts,
                         std::span<const double> pmf,
                         double significance = kDefaultSignificance);

SampleSummary summarize(std::span<const double> samples);

}  // namespace treefire
