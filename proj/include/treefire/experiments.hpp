#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treefire/distributions.hpp"
#include "treefire/stats.hpp"

namespace treefire {

enum class ExperimentKind {
  Density,
  Cuts,
  Spine,
  Split,
  Fragment,
  Connect,
  Giant,
  /// Cut counts on Borel-sized trees ("lemma4" is accepted as an alias).
  BorelCuts,
  /// Second-largest conditioned Borel fragment ("lemma6" is accepted as an alias).
  SecondFragment,
  Oracle,
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Density;
  std::vector<std::uint64_t> n_list;
  /// Firing rate n^{-alpha}.
  std::optional<double> alpha;
  /// Firing rate a/sqrt(n).
  std::optional<double> a;
  /// Target count (cuts) or fragment count (fragment).
  std::optional<unsigned> k;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 42;
  /// 0 selects the hardware concurrency.
  unsigned threads = 0;
  std::string out_path;
  /// Exponent for the near-giant and second-fragment experiments.
  double eps = 0.25;
  double significance = kDefaultSignificance;
  std::uint64_t borel_support = kDefaultBorelSupport;
  std::vector<double> q_grid{1e-1, 0.031622776601683794, 1e-2,
                             0.0031622776601683794};
  bool dump_tree = false;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// Parses a JSON object mirroring ExperimentConfig ("kind", "n_list",
/// "alpha", "a", "k", "trials", "seed", "threads", "out_path", "eps",
/// "significance", "borel_support", "q_grid", "dump_tree"). Missing fields
/// keep the values of `base`.
ExperimentConfig config_from_json(std::string_view text,
                                  ExperimentConfig base = {});

struct SummaryRow {
  std::uint64_t n = 0;
  std::string metric;
  SampleSummary summary;
};

struct GofRow {
  std::uint64_t n = 0;
  std::string metric;
  GofResult result;
};

struct ExperimentReport {
  std::vector<SummaryRow> summaries;
  std::vector<GofRow> gof;
  std::vector<std::pair<std::string, std::string>> meta;

  bool all_pass() const;
  const SummaryRow* find_summary(std::uint64_t n, std::string_view metric) const;
  const GofRow* find_gof(std::uint64_t n, std::string_view metric) const;
};

/// Runs every trial for every n, writing the trial CSV followed by #META and
/// #SUMMARY lines. Output is byte-identical for a given config and seed
/// regardless of thread count.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                std::ostream& csv);

/// Same, writing to config.out_path.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Shortest round-trip decimal form used in every CSV cell.
std::string format_number(double value);

}  // namespace treefire
