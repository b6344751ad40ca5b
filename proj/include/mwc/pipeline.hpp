#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mwc/aggregation.hpp"
#include "mwc/covering.hpp"
#include "mwc/norms.hpp"
#include "mwc/uncrossing.hpp"
#include "mwc/utc.hpp"

namespace mwc {

enum class Variant { lp, norm_min, norm_ordering };

inline Variant parse_variant(std::string_view tag) {
  if (tag == "lp") return Variant::lp;
  if (tag == "norm-min") return Variant::norm_min;
  if (tag == "norm-ordering") return Variant::norm_ordering;
  throw std::invalid_argument("unknown variant '" + std::string(tag) + "'");
}

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::lp: return "lp";
    case Variant::norm_min: return "norm-min";
    case Variant::norm_ordering: return "norm-ordering";
  }
  return "?";
}

struct PipelineConfig {
  std::uint64_t seed = 1;
  int trials = 7;  // ⌈log2(1/0.01)⌉
  std::string utc = "auto";
  double eps = 0.01;
  std::optional<double> alpha_mult;
  Variant variant = Variant::lp;
  bool timings = false;
};

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  bool accepted = false;
  double objective = kInfinite;
  int repair_iterations = 0;
  int parts = 0;  // non-empty uncrossed parts, residual included
  int sequence = -1;  // b-sequence index for the ordering variant
};

struct CoverSummary {
  int sets = 0;
  double measure_budget = 0.0;
  int min_frequency = 0;
  double sum_cost = 0.0;
};

struct SolveResult {
  Partition partition;
  CutVector cuts;
  double objective = kInfinite;
  std::vector<TrialRecord> trials;
  CoverSummary cover;
  UtcBackend backend = UtcBackend::exact;
  double p_effective = 1.0;  // lp variant: exponent the pipeline ran with
  double opt_guess = 0.0;    // norm variants
  int weight_scales = 0;     // preprocessing passes, 0 when not needed
  std::map<std::string, int> checks;  // runtime checks passed, by name
  std::map<std::string, double> seconds;
};

namespace detail {

class PhaseTimer {
 public:
  PhaseTimer(SolveResult& r, const char* name, bool on) : r_(r), name_(name), on_(on), start_(std::chrono::steady_clock::now()) {}
  ~PhaseTimer() {
    if (on_) r_.seconds[name_] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  PhaseTimer(const PhaseTimer&) = delete;
  PhaseTimer& operator=(const PhaseTimer&) = delete;

 private:
  SolveResult& r_;
  const char* name_;
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

inline std::vector<std::uint64_t> trial_seeds(std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::vector<std::uint32_t> words(static_cast<std::size_t>(trials) * 2);
  seq.generate(words.begin(), words.end());
  std::vector<std::uint64_t> out;
  for (int i = 0; i < trials; ++i)
    out.push_back(static_cast<std::uint64_t>(words[2 * static_cast<std::size_t>(i)]) << 32 | words[2 * static_cast<std::size_t>(i) + 1]);
  return out;
}

inline CoverSummary summarize(const Cover& cover, int n) {
  CoverSummary s;
  s.sets = static_cast<int>(cover.sets.size());
  s.measure_budget = cover.measure_budget;
  const auto f = cover_frequencies(cover, n);
  s.min_frequency = f.empty() ? 0 : *std::min_element(f.begin(), f.end());
  for (const auto& c : cover.sets) s.sum_cost += c.cost;
  return s;
}

inline bool improves(double candidate, double best) { return candidate < best - kTolerance * std::max(1.0, std::abs(best)); }

inline void check_terminal_labeled(const SolveResult& r, const TerminalSet& terminals) {
  require(r.partition.is_terminal_labeled(terminals), "result is not a terminal-labeled partition");
}

// Covering plus trials on one (possibly preprocessed) graph; objective measured on `original`.
inline SolveResult lp_core(const WeightedGraph& g, const WeightedGraph& original, const TerminalSet& terminals, const NormSpec& objective,
                           const PipelineConfig& cfg) {
  SolveResult r;
  r.backend = utc_backend(cfg.utc, g.num_vertices());
  Cover cover;
  {
    PhaseTimer t(r, "cover", cfg.timings);
    cover = cover_lp(g, terminals, r.backend);
  }
  r.checks["cover"] += 1;
  r.cover = summarize(cover, g.num_vertices());
  const auto seeds = trial_seeds(cfg.seed, cfg.trials);
  for (int i = 0; i < cfg.trials; ++i) {
    TrialRecord rec{i, seeds[static_cast<std::size_t>(i)]};
    std::mt19937_64 rng(rec.seed);
    std::optional<Aggregation> agg;
    {
      PhaseTimer t(r, "uncross", cfg.timings);
      const auto up = uncross_lp(cover, g, terminals, rng);
      r.checks["uncrossing"] += 1;
      rec.repair_iterations = up.repair_iterations;
      rec.parts = static_cast<int>(std::count_if(up.parts.begin(), up.parts.end(), [](const UncrossedPart& p) { return !p.set.empty(); }));
      PhaseTimer a(r, "aggregate", cfg.timings);
      agg = aggregate_lp(up, g, terminals);
    }
    if (agg) {
      r.checks["bucket"] += 1;
      rec.accepted = true;
      const CutVector cuts = cut_vector(original, agg->assignment, terminals.size());
      rec.objective = objective.eval(cuts);
      if (r.partition.parts.empty() || improves(rec.objective, r.objective)) {
        r.partition = std::move(agg->partition);
        r.cuts = cuts;
        r.objective = rec.objective;
      }
    }
    r.trials.push_back(rec);
  }
  return r;
}

}  // namespace detail

/// Lp multiway cut: one covering, `cfg.trials` uncrossing/aggregation trials, best
/// accepted trial by the true objective. p = infinity runs as p = log2 k.
inline SolveResult solve_lp_multiway(const WeightedGraph& g, const TerminalSet& terminals, double p, const PipelineConfig& cfg) {
  const int n = g.num_vertices();
  const int k = terminals.size();
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  const NormSpec objective = NormSpec::lp(k, p);
  const double p_run = std::isinf(p) ? std::max(1.0, std::log2(static_cast<double>(k))) : p;

  std::vector<WeightedGraph> variants;
  const double ratio_cap = static_cast<double>(n) * n / cfg.eps;
  if (weight_ratio(g) > ratio_cap) {
    for (double w : guess_weight_scales(g)) variants.push_back(preprocess_weights(g, w, cfg.eps));
  }
  if (variants.empty()) {
    SolveResult r = detail::lp_core(g, g, terminals, objective, cfg);
    r.p_effective = p_run;
    if (r.partition.parts.empty()) throw AllTrialsRejected("every trial left a terminal uncovered");
    detail::check_terminal_labeled(r, terminals);
    return r;
  }
  SolveResult best;
  std::vector<TrialRecord> all;
  for (const auto& gv : variants) {
    SolveResult r = detail::lp_core(gv, g, terminals, objective, cfg);
    all.insert(all.end(), r.trials.begin(), r.trials.end());
    if (!r.partition.parts.empty() && (best.partition.parts.empty() || detail::improves(r.objective, best.objective))) best = std::move(r);
  }
  if (best.partition.parts.empty()) throw AllTrialsRejected("every trial left a terminal uncovered");
  best.trials = std::move(all);
  best.p_effective = p_run;
  best.weight_scales = static_cast<int>(variants.size());
  detail::check_terminal_labeled(best, terminals);
  return best;
}

/// Sizes of the ordering buckets B'_i = {2^i, ..., min(k, 2^{i+1}-1)}.
inline std::vector<int> ordering_bucket_sizes(int k) {
  std::vector<int> out;
  for (int i = 0; i <= floor_log2(k); ++i) out.push_back(std::min(k, (1 << (i + 1)) - 1) - (1 << i) + 1);
  return out;
}

/// Smallest ‖e_j‖ over coordinates: the largest single cut a guess can afford is guess / this.
inline double min_singleton_norm(const NormSpec& spec) {
  double best = kInfinite;
  for (int j = 0; j < spec.dimension(); ++j) best = std::min(best, spec.indicator_norm({j}));
  return best;
}

namespace detail {

inline CutVector isolating_vector(const Cover& cover) {
  CutVector c;
  for (const auto& cut : cover.isolating) c.push_back(cut.cost);
  return c;
}

// Runs the norm trials on a finished cover; updates r with any better partition.
template <typename Aggregate>
void norm_trials(SolveResult& r, const Cover& cover, const WeightedGraph& g, const TerminalSet& terminals, const NormSpec& spec,
                 const PipelineConfig& cfg, int sequence, Aggregate&& aggregate) {
  const double isolating = spec.eval(isolating_vector(cover));
  const auto seeds = trial_seeds(cfg.seed, cfg.trials);
  for (int i = 0; i < cfg.trials; ++i) {
    TrialRecord rec{i, seeds[static_cast<std::size_t>(i)]};
    rec.sequence = sequence;
    std::mt19937_64 rng(rec.seed);
    PhaseTimer t(r, "uncross", cfg.timings);
    const auto up = uncross_norm(cover, g, terminals, rng);
    r.checks["uncrossing"] += 1;
    CutVector first;
    for (int j = 0; j < terminals.size(); ++j) first.push_back(up.parts[static_cast<std::size_t>(j)].cut);
    require(spec.eval(first) <= 2.0 * isolating + slack(isolating), "first k uncrossed parts exceed twice the isolating-cut norm");
    r.checks["first-k"] += 1;
    rec.repair_iterations = up.repair_iterations;
    rec.parts = static_cast<int>(std::count_if(up.parts.begin(), up.parts.end(), [](const UncrossedPart& p) { return !p.set.empty(); }));
    Aggregation agg = aggregate(up);
    rec.accepted = true;
    rec.objective = spec.eval(agg.cuts);
    if (r.partition.parts.empty() || improves(rec.objective, r.objective)) {
      r.partition = std::move(agg.partition);
      r.cuts = agg.cuts;
      r.objective = rec.objective;
    }
    r.trials.push_back(rec);
  }
}

}  // namespace detail

/// General monotonic norm multiway cut, minimization-oracle or ordering-oracle variant.
inline SolveResult solve_norm_multiway(const WeightedGraph& g, const TerminalSet& terminals, const NormSpec& spec, const PipelineConfig& cfg) {
  const int n = g.num_vertices();
  const int k = terminals.size();
  if (spec.dimension() != k) throw std::invalid_argument("norm dimension must equal the number of terminals");
  SolveResult r;
  r.backend = utc_backend(cfg.utc, n);
  const double alpha = cfg.alpha_mult.value_or(default_alpha(r.backend, n, k));

  if (cfg.variant == Variant::norm_min) {
    if (!spec.has_minimization_oracle()) throw CapabilityError("norm-min variant needs a minimization oracle");
    OptSearch search;
    {
      detail::PhaseTimer t(r, "cover", cfg.timings);
      search = binary_search_opt(g, terminals, spec, alpha, r.backend);
    }
    r.checks["cover"] += 1;
    r.opt_guess = search.guess;
    r.cover = detail::summarize(search.cover, n);
    const auto index_sets = compute_index_sets(spec);
    std::vector<double> thresholds;
    for (const auto& s : index_sets) thresholds.push_back(s.empty() ? kInfinite : search.guess / spec.indicator_norm(s));
    detail::norm_trials(r, search.cover, g, terminals, spec, cfg, -1, [&](const UncrossedPartition& up) {
      return aggregate_norm_min(up, g, terminals, index_sets, thresholds);
    });
    detail::check_terminal_labeled(r, terminals);
    return r;
  }

  if (cfg.variant != Variant::norm_ordering) throw std::invalid_argument("solve_norm_multiway needs a norm variant");
  if (!spec.has_ordering_oracle()) throw CapabilityError("norm-ordering variant needs an ordering oracle");
  const auto buckets = ordering_bucket_sizes(k);
  const auto cuts = isolating_cuts(g, terminals);
  CutVector c;
  for (const auto& cut : cuts) c.push_back(cut.cost);
  double guess = spec.eval(c);
  bool zero_tried = false;
  const double singleton = min_singleton_norm(spec);
  for (int step = 0; step < 256; ++step) {
    const double r_max = singleton > 0.0 ? guess / singleton : kInfinite;
    const auto sequences = enumerate_b_sequences(r_max, k);
    bool any = false;
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      const auto& b = sequences[s];
      std::vector<GroupSpec> groups;
      for (std::size_t i = 0; i < b.size(); ++i)
        groups.push_back({static_cast<int>(i), 1.0 / (2.0 * log2_terminals(k) * buckets[i]), b[i], buckets[i]});
      std::optional<Cover> cover;
      {
        detail::PhaseTimer t(r, "cover", cfg.timings);
        cover = cover_by_groups(g, terminals, groups, alpha, r.backend);
      }
      if (!cover) continue;
      r.checks["cover"] += 1;
      const auto assignment = ordering_assignment(spec, b);
      r.checks["ordering"] += 1;
      if (!any) r.cover = detail::summarize(*cover, n);
      any = true;
      detail::norm_trials(r, *cover, g, terminals, spec, cfg, static_cast<int>(s), [&](const UncrossedPartition& up) {
        return aggregate_by_slots(up, g, terminals, assignment.slots, assignment.first);
      });
    }
    if (any) {
      r.opt_guess = guess;
      detail::check_terminal_labeled(r, terminals);
      return r;
    }
    if (guess == 0.0) {
      if (zero_tried) break;
      zero_tried = true;
      guess = min_positive_weight(g);
      if (guess == 0.0) break;
    } else {
      guess *= 2.0;
    }
  }
  throw InfeasibleError("no OPT guess let the ordering covering finish");
}

}  // namespace mwc
