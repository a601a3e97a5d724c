#include "treefire/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "treefire/cayley.hpp"
#include "treefire/cutting.hpp"
#include "treefire/exact.hpp"
#include "treefire/fire.hpp"
#include "treefire/random.hpp"

namespace treefire {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::Density, "density"}, {ExperimentKind::Cuts, "cuts"},
    {ExperimentKind::Spine, "spine"},     {ExperimentKind::Split, "split"},
    {ExperimentKind::Fragment, "fragment"}, {ExperimentKind::Connect, "connect"},
    {ExperimentKind::Giant, "giant"},     {ExperimentKind::BorelCuts, "borel_cuts"},
    {ExperimentKind::SecondFragment, "second_fragment"},
    {ExperimentKind::Oracle, "oracle"},
};

// Alternative spellings accepted on input.
constexpr std::pair<ExperimentKind, std::string_view> kKindAliases[] = {
    {ExperimentKind::BorelCuts, "lemma4"},
    {ExperimentKind::SecondFragment, "lemma6"},
};

// Trials are executed and flushed in blocks of this many.
constexpr std::uint64_t kChunk = 1 << 15;

bool is_fire_kind(ExperimentKind kind) {
  return kind == ExperimentKind::Density || kind == ExperimentKind::Connect ||
         kind == ExperimentKind::Giant;
}

std::string format_int(std::uint64_t value) { return std::to_string(value); }

class Row {
 public:
  Row& add(std::string_view cell) {
    if (!text_.empty()) text_ += ',';
    text_ += cell;
    return *this;
  }
  Row& add(double value) { return add(std::string_view(format_number(value))); }
  Row& add(std::uint64_t value) { return add(std::string_view(format_int(value))); }
  Row& add(unsigned value) { return add(static_cast<std::uint64_t>(value)); }
  Row& add(bool value) { return add(std::string_view(value ? "1" : "0")); }
  std::string str() && { return std::move(text_); }

 private:
  std::string text_;
};

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    } catch (...) {
      const std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = count;
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned extra = std::min<std::size_t>(threads, count) - 1;
    for (unsigned t = 0; t < extra; ++t) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
}

struct TrialOutput {
  std::string row;
  std::vector<double> values;
};

using MetricColumns = std::vector<std::vector<double>>;

class Driver {
 public:
  explicit Driver(const ExperimentConfig& config) : config_(config) {}
  virtual ~Driver() = default;

  virtual std::string header() const = 0;
  virtual std::vector<std::string> metrics() const = 0;
  virtual TrialOutput run(std::uint64_t n, std::uint64_t trial,
                          Rng& rng) const = 0;
  /// Adds summaries (and GOF verdicts) once all trials for n are done.
  virtual void finish(std::uint64_t n, const MetricColumns& columns,
                      ExperimentReport& report) const {
    summarize_all(n, columns, report);
  }
  virtual bool samples_tree() const { return true; }

 protected:
  void summarize_all(std::uint64_t n, const MetricColumns& columns,
                     ExperimentReport& report) const {
    const auto names = metrics();
    for (std::size_t i = 0; i < names.size(); ++i) {
      report.summaries.push_back({n, names[i], summarize(columns[i])});
    }
  }

  void add_chi_square(std::uint64_t n, std::string metric,
                      std::span<const double> values,
                      const std::vector<double>& pmf, std::size_t offset,
                      ExperimentReport& report) const {
    std::vector<std::uint64_t> counts(pmf.size(), 0);
    for (double v : values) {
      const auto index = static_cast<std::size_t>(v) - offset;
      if (index < counts.size()) ++counts[index];
    }
    try {
      report.gof.push_back(
          {n, std::move(metric), chi_square_gof(counts, pmf, config_.significance)});
    } catch (const std::domain_error& e) {
      report.meta.emplace_back("gof_skipped_n" + format_int(n), e.what());
    }
  }

  const ExperimentConfig& config_;
};

class FireDriver : public Driver {
 public:
  using Driver::Driver;

  FireConfig fire_config(std::uint64_t n) const {
    return config_.alpha ? FireConfig::from_alpha(n, *config_.alpha)
                         : FireConfig::from_scale(n, *config_.a);
  }

  std::optional<DinfLaw> critical_law() const {
    if (config_.a) return DinfLaw{*config_.a};
    if (config_.alpha && *config_.alpha == 0.5) return DinfLaw{1.0};
    return std::nullopt;
  }
};

class DensityDriver final : public FireDriver {
 public:
  using FireDriver::FireDriver;

  std::string header() const override {
    return "n,trial,density,fireproof_vertices,components,largest_fraction";
  }
  std::vector<std::string> metrics() const override {
    return {"density", "largest_fraction"};
  }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    const LabeledTree tree = sample_uniform_tree(n, rng);
    const FireOutcome outcome = run_fire(tree, fire_config(n), rng);
    Row row;
    row.add(n).add(trial).add(outcome.density())
        .add(static_cast<std::uint64_t>(outcome.fireproof_count))
        .add(static_cast<std::uint64_t>(outcome.component_size.size()))
        .add(outcome.largest_fraction());
    return {std::move(row).str(), {outcome.density(), outcome.largest_fraction()}};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    report.meta.emplace_back("q_n" + format_int(n), format_number(fire_config(n).q));
    if (const auto law = critical_law()) {
      report.gof.push_back(
          {n, "density",
           ks_statistic(columns[0], [law](double x) { return dinf_cdf(*law, x); },
                        config_.significance)});
    }
  }
};

class CutsDriver final : public Driver {
 public:
  using Driver::Driver;

  unsigned k() const { return config_.k.value_or(1); }
  std::string header() const override {
    return "n,trial,k,cuts,scaled_cuts,first_split_larger";
  }
  std::vector<std::string> metrics() const override { return {"scaled_cuts"}; }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    const LabeledTree tree = sample_uniform_tree(n, rng);
    std::vector<Vertex> targets(k());
    for (Vertex& t : targets) t = static_cast<Vertex>(rng.below(n));
    const CutResult result = isolate(tree, targets, rng);
    const double scaled =
        static_cast<double>(result.cuts) / std::sqrt(static_cast<double>(n));
    Row row;
    row.add(n).add(trial).add(k()).add(result.cuts).add(scaled).add(
        static_cast<std::uint64_t>(result.first_split ? result.first_split->first : 0));
    return {std::move(row).str(), {scaled}};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    const unsigned degrees = k();
    report.gof.push_back(
        {n, "scaled_cuts",
         ks_statistic(columns[0],
                      [degrees](double x) { return chi_cdf(degrees, std::max(x, 0.0)); },
                      config_.significance)});
  }
};

class SpineDriver final : public Driver {
 public:
  using Driver::Driver;

  std::string header() const override {
    return "n,trial,u,v,lambda,largest_bush";
  }
  std::vector<std::string> metrics() const override { return {"lambda"}; }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    const LabeledTree tree = sample_uniform_tree(n, rng);
    const auto u = static_cast<Vertex>(rng.below(n));
    const auto v = static_cast<Vertex>(rng.below(n));
    const SpinalDecomposition spinal = spinal_decompose(tree, u, v);
    const auto sizes = spinal.bush_sizes();
    Row row;
    row.add(n).add(trial).add(std::uint64_t{u} + 1).add(std::uint64_t{v} + 1)
        .add(static_cast<std::uint64_t>(spinal.length()))
        .add(static_cast<std::uint64_t>(*std::max_element(sizes.begin(), sizes.end())));
    return {std::move(row).str(), {static_cast<double>(spinal.length())}};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    std::vector<double> pmf(n);
    for (std::uint64_t k = 0; k < n; ++k) pmf[k] = spine_pmf(n, k);
    add_chi_square(n, "lambda", columns[0], pmf, 0, report);
  }
};

class SplitDriver final : public Driver {
 public:
  using Driver::Driver;

  std::string header() const override { return "n,trial,larger,smaller"; }
  std::vector<std::string> metrics() const override { return {"larger"}; }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    const LabeledTree tree = sample_uniform_tree(n, rng);
    const SplitSizes split = first_cut_split(tree, rng);
    Row row;
    row.add(n).add(trial).add(static_cast<std::uint64_t>(split.first))
        .add(static_cast<std::uint64_t>(split.second));
    return {std::move(row).str(), {static_cast<double>(split.first)}};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    const std::uint64_t low = (n + 1) / 2;
    std::vector<double> pmf;
    for (std::uint64_t m = low; m < n; ++m) pmf.push_back(first_cut_pmf(n, m));
    add_chi_square(n, "larger", columns[0], pmf, low, report);
  }
};

class FragmentDriver final : public Driver {
 public:
  using Driver::Driver;

  unsigned k() const { return config_.k.value_or(2); }
  std::string header() const override {
    return "n,trial,k,first_part,largest_part,sizes";
  }
  std::vector<std::string> metrics() const override {
    return {"first_part", "largest_part"};
  }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    const auto sizes = conditioned_borel_sample(k(), n, rng);
    std::string joined;
    for (std::size_t s : sizes) {
      if (!joined.empty()) joined += ';';
      joined += format_int(s);
    }
    const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
    Row row;
    row.add(n).add(trial).add(k()).add(static_cast<std::uint64_t>(sizes[0]))
        .add(static_cast<std::uint64_t>(largest)).add(std::string_view(joined));
    return {std::move(row).str(),
            {static_cast<double>(sizes[0]), static_cast<double>(largest)}};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    const unsigned parts = k();
    if (parts < 2) return;
    // Marginal of one exchangeable coordinate of k Borel(1) variables
    // conditioned on their sum being n.
    const double log_norm = borel_tanner_log_pmf(parts, n);
    std::vector<double> pmf;
    for (std::uint64_t m = 1; m + parts - 1 <= n; ++m) {
      pmf.push_back(std::exp(borel_log_pmf(m) +
                             borel_tanner_log_pmf(parts - 1, n - m) - log_norm));
    }
    add_chi_square(n, "first_part", columns[0], pmf, 1, report);
  }
};

class ConnectDriver final : public FireDriver {
 public:
  using FireDriver::FireDriver;

  std::string header() const override {
    return "n,trial,u,v,connected,pair_probability";
  }
  std::vector<std::string> metrics() const override {
    return {"connected", "pair_probability"};
  }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    const LabeledTree tree = sample_uniform_tree(n, rng);
    const FireOutcome outcome = run_fire(tree, fire_config(n), rng);
    const auto u = static_cast<Vertex>(rng.below(n));
    const auto v = static_cast<Vertex>(rng.below(n));
    const bool connected = are_connected(outcome, u, v);
    // P(two uniform vertices connected | forest) = sum of squared sizes / n^2.
    double squares = 0.0;
    for (std::size_t s : outcome.component_size) {
      squares += static_cast<double>(s) * static_cast<double>(s);
    }
    const double pair = squares / (static_cast<double>(n) * static_cast<double>(n));
    Row row;
    row.add(n).add(trial).add(std::uint64_t{u} + 1).add(std::uint64_t{v} + 1)
        .add(connected).add(pair);
    return {std::move(row).str(), {connected ? 1.0 : 0.0, pair}};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    report.meta.emplace_back("q_n" + format_int(n), format_number(fire_config(n).q));
  }
};

class GiantDriver final : public FireDriver {
 public:
  using FireDriver::FireDriver;

  std::string header() const override {
    return "n,trial,fireproof_vertices,components,largest,second,"
           "largest_fraction,exceed_n0.6,exceed_n0.7,exceed_n0.8,"
           "exceed_half,exceed_0.9,exceed_n1-eps";
  }
  std::vector<std::string> metrics() const override {
    return {"largest_fraction", "exceed_n0.6", "exceed_n0.7", "exceed_n0.8",
            "exceed_half", "exceed_0.9", "exceed_n1-eps"};
  }
  std::vector<double> thresholds(std::uint64_t n) const {
    const double nd = static_cast<double>(n);
    return {std::pow(nd, 0.6), std::pow(nd, 0.7), std::pow(nd, 0.8),
            0.5 * nd, 0.9 * nd, std::pow(nd, 1.0 - config_.eps)};
  }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    const LabeledTree tree = sample_uniform_tree(n, rng);
    const FireOutcome outcome = run_fire(tree, fire_config(n), rng);
    const auto sizes = component_sizes(outcome);
    const std::size_t largest = sizes.empty() ? 0 : sizes[0];
    const std::size_t second = sizes.size() < 2 ? 0 : sizes[1];
    Row row;
    row.add(n).add(trial).add(static_cast<std::uint64_t>(outcome.fireproof_count))
        .add(static_cast<std::uint64_t>(sizes.size()))
        .add(static_cast<std::uint64_t>(largest))
        .add(static_cast<std::uint64_t>(second))
        .add(outcome.largest_fraction());
    std::vector<double> values{outcome.largest_fraction()};
    for (double t : thresholds(n)) {
      const bool exceeds = static_cast<double>(largest) >= t;
      row.add(exceeds);
      values.push_back(exceeds ? 1.0 : 0.0);
    }
    return {std::move(row).str(), std::move(values)};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    report.meta.emplace_back("q_n" + format_int(n), format_number(fire_config(n).q));
  }
};

class BorelCutsDriver final : public Driver {
 public:
  explicit BorelCutsDriver(const ExperimentConfig& config)
      : Driver(config), table_(config.borel_support) {}

  std::string header() const override { return "trial,beta,cuts"; }
  std::vector<std::string> metrics() const override { return {"beta", "cuts"}; }
  bool samples_tree() const override { return false; }
  TrialOutput run(std::uint64_t, std::uint64_t trial, Rng& rng) const override {
    const std::uint64_t beta = borel_sample(rng, table_);
    const LabeledTree tree = sample_uniform_tree(beta, rng);
    const Vertex root = 0;
    const std::uint64_t cuts = isolate(tree, std::span(&root, 1), rng).cuts;
    Row row;
    row.add(trial).add(beta).add(cuts);
    return {std::move(row).str(),
            {static_cast<double>(beta), static_cast<double>(cuts)}};
  }
  void finish(std::uint64_t n, const MetricColumns& columns,
              ExperimentReport& report) const override {
    summarize_all(n, columns, report);
    for (double q : config_.q_grid) {
      const double scale = q * std::log(1.0 / q);
      std::vector<double> ratio(columns[1].size());
      std::transform(columns[1].begin(), columns[1].end(), ratio.begin(),
                     [q, scale](double x) { return -std::expm1(-q * x) / scale; });
      report.summaries.push_back({n, "ratio_q=" + format_number(q), summarize(ratio)});
    }
    report.meta.emplace_back("borel_support", format_int(table_.support_max()));
    report.meta.emplace_back("borel_tail_mass", format_number(table_.tail_mass()));
    report.meta.emplace_back("borel_tail_asymptotic",
                             format_number(borel_tail_asymptotic(table_.support_max())));
  }

 private:
  BorelTable table_;
};

class SecondFragmentDriver final : public Driver {
 public:
  using Driver::Driver;

  std::uint64_t parts(std::uint64_t n) const {
    const auto k = static_cast<std::uint64_t>(
        std::floor(std::pow(static_cast<double>(n), 0.5 * (1.0 - config_.eps))));
    return std::clamp<std::uint64_t>(k, 1, n);
  }
  std::string header() const override {
    return "n,trial,k,largest,second,in_window";
  }
  std::vector<std::string> metrics() const override {
    return {"second_fraction", "in_window"};
  }
  TrialOutput run(std::uint64_t n, std::uint64_t trial, Rng& rng) const override {
    auto sizes = conditioned_borel_sample(parts(n), n, rng);
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    const std::size_t second = sizes.size() < 2 ? 0 : sizes[1];
    const double nd = static_cast<double>(n);
    const double s = static_cast<double>(second);
    const bool inside = s >= std::pow(nd, 1.0 - 2.0 * config_.eps) &&
                        s <= std::pow(nd, 1.0 - 0.5 * config_.eps);
    Row row;
    row.add(n).add(trial).add(parts(n)).add(static_cast<std::uint64_t>(sizes[0]))
        .add(static_cast<std::uint64_t>(second)).add(inside);
    return {std::move(row).str(), {s / nd, inside ? 1.0 : 0.0}};
  }
};

std::unique_ptr<Driver> make_driver(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::Density: return std::make_unique<DensityDriver>(config);
    case ExperimentKind::Cuts: return std::make_unique<CutsDriver>(config);
    case ExperimentKind::Spine: return std::make_unique<SpineDriver>(config);
    case ExperimentKind::Split: return std::make_unique<SplitDriver>(config);
    case ExperimentKind::Fragment: return std::make_unique<FragmentDriver>(config);
    case ExperimentKind::Connect: return std::make_unique<ConnectDriver>(config);
    case ExperimentKind::Giant: return std::make_unique<GiantDriver>(config);
    case ExperimentKind::BorelCuts: return std::make_unique<BorelCutsDriver>(config);
    case ExperimentKind::SecondFragment: return std::make_unique<SecondFragmentDriver>(config);
    case ExperimentKind::Oracle: break;
  }
  throw std::invalid_argument("no trial driver for this experiment kind");
}

std::uint64_t power(std::uint64_t base, unsigned exponent) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

void write_oracle(const ExperimentConfig& config, std::ostream& csv) {
  const std::uint64_t max_n =
      config.n_list.empty()
          ? 4
          : *std::max_element(config.n_list.begin(), config.n_list.end());
  const auto n_max = static_cast<unsigned>(max_n);
  csv << "table,n,key,numerator,denominator,value,closed_form\n";
  auto emit = [&csv](std::string_view table, unsigned n, const std::string& key,
                     std::uint64_t num, std::uint64_t den,
                     std::optional<double> closed) {
    Row row;
    row.add(table).add(n).add(std::string_view(key)).add(num).add(den)
        .add(static_cast<double>(num) / static_cast<double>(den));
    row.add(std::string_view(closed ? format_number(*closed) : std::string()));
    csv << std::move(row).str() << '\n';
  };

  for (unsigned n = 2; n <= n_max; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      const ExactMean mean = exhaustive_isolation_mean(n, k);
      emit("isolation_mean", n, "k=" + format_int(k), mean.numerator,
           mean.denominator, std::nullopt);
    }
  }
  for (unsigned n = 2; n <= n_max; ++n) {
    const auto counts = exact_first_cut_counts(n);
    const std::uint64_t total = power(n, n - 2) * (n - 1);
    for (unsigned m = (n + 1) / 2; m < n; ++m) {
      emit("first_cut", n, "m=" + format_int(m), counts[m], total,
           first_cut_pmf(n, m));
    }
  }
  for (unsigned n = 1; n <= n_max; ++n) {
    const auto counts = exact_spine_counts(n);
    const std::uint64_t total = (n >= 2 ? power(n, n - 2) : 1) * n * n;
    for (unsigned k = 0; k < n; ++k) {
      emit("spine", n, "k=" + format_int(k), counts[k], total, spine_pmf(n, k));
    }
  }
  for (unsigned n = 1; n <= n_max; ++n) {
    // Law of the number of fireproof vertices, as coefficients of
    // q^i (1-q)^{n-1-i} over all trees, orders and coin patterns.
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> law;
    std::uint64_t denominator = n >= 2 ? power(n, n - 2) : 1;
    for (unsigned i = 2; i < n; ++i) denominator *= i;
    for (const LabeledTree& tree : all_labeled_trees(n)) {
      for (const auto& [states, coefficients] : exact_fire_law(tree)) {
        std::vector<std::uint8_t> fireproof(n, 1);
        for (EdgeId e = 0; e < tree.num_edges(); ++e) {
          if (states[e] != EdgeState::Fireproof) {
            fireproof[tree.edge(e).u] = 0;
            fireproof[tree.edge(e).v] = 0;
          }
        }
        const auto count = static_cast<std::size_t>(
            std::count(fireproof.begin(), fireproof.end(), std::uint8_t{1}));
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
          if (coefficients[i] != 0) law[{count, i}] += coefficients[i];
        }
      }
    }
    for (const auto& [key, count] : law) {
      emit("fire_fireproof_count", n,
           "fireproof=" + format_int(key.first) + ";ignitions=" + format_int(key.second),
           count, denominator, std::nullopt);
    }
  }
}

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& [k, text] : kKindNames) {
    if (text == name) return k;
  }
  for (const auto& [k, text] : kKindAliases) {
    if (text == name) return k;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid config: " + what);
  };
  if (!(significance > 0.0 && significance < 1.0)) fail("significance must lie in (0,1)");
  if (kind == ExperimentKind::Oracle) {
    for (std::uint64_t n : n_list) {
      if (n < 1 || n > 5) fail("oracle sizes must lie in [1,5]");
    }
    return;
  }
  if (trials < 1) fail("trials must be >= 1");
  if (kind != ExperimentKind::BorelCuts) {
    if (n_list.empty()) fail("n_list is empty");
    for (std::uint64_t n : n_list) {
      if (n < 1 || n > 0xffffffffULL) fail("each n must lie in [1, 2^32)");
    }
  }
  if (is_fire_kind(kind)) {
    if (alpha.has_value() == a.has_value()) fail("set exactly one of alpha and a");
    if (alpha && !(*alpha > 0.0)) fail("alpha must be > 0");
    if (a && !(*a > 0.0)) fail("a must be > 0");
  }
  if (k && *k < 1) fail("k must be >= 1");
  switch (kind) {
    case ExperimentKind::Split:
      for (std::uint64_t n : n_list) {
        if (n < 2) fail("split needs n >= 2");
      }
      break;
    case ExperimentKind::Fragment:
      for (std::uint64_t n : n_list) {
        if (k.value_or(2) > n) fail("fragment needs k <= n");
      }
      break;
    case ExperimentKind::BorelCuts:
      if (q_grid.empty()) fail("q_grid is empty");
      for (double q : q_grid) {
        if (!(q > 0.0 && q < 1.0)) fail("q_grid entries must lie in (0,1)");
      }
      if (borel_support < 1) fail("borel_support must be >= 1");
      break;
    case ExperimentKind::Giant:
    case ExperimentKind::SecondFragment:
      if (!(eps > 0.0 && eps < 1.0)) fail("eps must lie in (0,1)");
      break;
    default:
      break;
  }
}

ExperimentConfig config_from_json(std::string_view text, ExperimentConfig base) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig c = std::move(base);
  if (j.contains("kind")) {
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown experiment kind");
    c.kind = *kind;
  }
  for (const char* key : {"n_list", "n"}) {
    if (!j.contains(key)) continue;
    const auto& value = j.at(key);
    c.n_list = value.is_array() ? value.get<std::vector<std::uint64_t>>()
                                : std::vector<std::uint64_t>{value.get<std::uint64_t>()};
  }
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("a")) c.a = j.at("a").get<double>();
  if (j.contains("k")) c.k = j.at("k").get<unsigned>();
  if (j.contains("trials")) c.trials = j.at("trials").get<std::uint64_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  if (j.contains("out_path")) c.out_path = j.at("out_path").get<std::string>();
  if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
  if (j.contains("eps")) c.eps = j.at("eps").get<double>();
  if (j.contains("significance")) c.significance = j.at("significance").get<double>();
  if (j.contains("borel_support")) c.borel_support = j.at("borel_support").get<std::uint64_t>();
  if (j.contains("q_grid")) c.q_grid = j.at("q_grid").get<std::vector<double>>();
  if (j.contains("dump_tree")) c.dump_tree = j.at("dump_tree").get<bool>();
  return c;
}

bool ExperimentReport::all_pass() const {
  return std::all_of(gof.begin(), gof.end(),
                     [](const GofRow& row) { return row.result.pass; });
}

const SummaryRow* ExperimentReport::find_summary(std::uint64_t n,
                                                 std::string_view metric) const {
  for (const SummaryRow& row : summaries) {
    if (row.n == n && row.metric == metric) return &row;
  }
  return nullptr;
}

const GofRow* ExperimentReport::find_gof(std::uint64_t n,
                                         std::string_view metric) const {
  for (const GofRow& row : gof) {
    if (row.n == n && row.metric == metric) return &row;
  }
  return nullptr;
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  ExperimentReport report;
  if (config.kind == ExperimentKind::Oracle) {
    write_oracle(config, csv);
    return report;
  }
  const auto driver = make_driver(config);
  const std::string_view kind_name = to_string(config.kind);
  const unsigned threads =
      config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t metric_count = driver->metrics().size();

  csv << driver->header() << '\n';
  const std::vector<std::uint64_t> sizes =
      config.kind == ExperimentKind::BorelCuts ? std::vector<std::uint64_t>{0}
                                            : config.n_list;
  for (std::uint64_t n : sizes) {
    MetricColumns columns(metric_count);
    for (auto& column : columns) column.reserve(config.trials);
    std::vector<TrialOutput> outputs;
    for (std::uint64_t start = 0; start < config.trials; start += kChunk) {
      const std::uint64_t count = std::min(kChunk, config.trials - start);
      outputs.assign(count, {});
      parallel_for(count, threads, [&](std::size_t i) {
        Rng rng = trial_stream(config.seed, kind_name, n, start + i);
        outputs[i] = driver->run(n, start + i, rng);
      });
      for (const TrialOutput& out : outputs) {
        csv << out.row << '\n';
        for (std::size_t m = 0; m < metric_count; ++m) {
          columns[m].push_back(out.values[m]);
        }
      }
    }
    driver->finish(n, columns, report);

    if (config.dump_tree && driver->samples_tree() && !config.out_path.empty()) {
      // Trial 0 draws its tree first from its own stream.
      Rng rng = trial_stream(config.seed, kind_name, n, 0);
      std::ofstream dump(config.out_path + ".n" + format_int(n) + ".tree");
      write_tree(dump, sample_uniform_tree(n, rng));
    }
  }

  for (const auto& [key, value] : report.meta) {
    csv << "#META," << key << ',' << value << '\n';
  }
  csv << "#SUMMARY,record,n,metric,count,mean,std_error,min,max\n";
  for (const SummaryRow& row : report.summaries) {
    Row line;
    line.add(std::string_view("#SUMMARY")).add(std::string_view("summary")).add(row.n)
        .add(std::string_view(row.metric))
        .add(static_cast<std::uint64_t>(row.summary.count)).add(row.summary.mean)
        .add(row.summary.std_error).add(row.summary.min).add(row.summary.max);
    csv << std::move(line).str() << '\n';
  }
  if (!report.gof.empty()) {
    csv << "#SUMMARY,record,n,metric,test,statistic,threshold,significance,"
           "sample_size,dof,pass\n";
  }
  for (const GofRow& row : report.gof) {
    Row line;
    line.add(std::string_view("#SUMMARY")).add(std::string_view("gof")).add(row.n)
        .add(std::string_view(row.metric)).add(to_string(row.result.kind))
        .add(row.result.statistic).add(row.result.threshold)
        .add(row.result.significance)
        .add(static_cast<std::uint64_t>(row.result.sample_size))
        .add(static_cast<std::uint64_t>(row.result.dof)).add(row.result.pass);
    csv << std::move(line).str() << '\n';
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.out_path.empty()) throw std::invalid_argument("out_path is empty");
  std::ofstream out(config.out_path);
  if (!out) throw std::runtime_error("cannot open " + config.out_path + " for writing");
  ExperimentReport report = run_experiment(config, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + config.out_path);
  return report;
}

}  // namespace treefire
