#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mwc/exact_oracle.hpp"
#include "mwc/generators.hpp"
#include "mwc/io.hpp"
#include "mwc/max_flow.hpp"
#include "mwc/pipeline.hpp"

namespace mwc {

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Digest of the canonical text form, so it is stable across parse/write.
inline std::string instance_digest(const Instance& inst) { return fnv1a_hex(write_instance(inst)); }

enum class RunMode { solve, oracle_only };

/// Everything that determines a run besides the instance.
struct RunConfig {
  PipelineConfig pipeline;
  std::optional<double> p = 1.0;    // lp variant
  std::optional<std::string> norm;  // norm variants: "lp:..", "wlp:..", "nmax:.."
  bool oracle = false;              // also run the brute-force oracle
  RunMode mode = RunMode::solve;
  OracleBudget budget;
};

inline std::string norm_tag(const RunConfig& cfg) {
  if (cfg.norm) return *cfg.norm;
  const double p = cfg.p.value_or(1.0);
  return "lp:" + detail::format_double(p);
}

inline NormSpec objective_norm(const RunConfig& cfg, int k) {
  if (cfg.norm) return parse_norm(*cfg.norm, k);
  return NormSpec::lp(k, cfg.p.value_or(1.0));
}

/// Runs the configured solver. The lp variant needs an lp objective.
inline SolveResult run_solver(const Instance& inst, const RunConfig& cfg) {
  if (cfg.pipeline.variant == Variant::lp) {
    const NormSpec spec = objective_norm(cfg, inst.terminals.size());
    const auto* lp = std::get_if<LpNorm>(&spec.variant());
    if (!lp) throw std::invalid_argument("the lp variant needs an lp:<p> objective");
    return solve_lp_multiway(inst.graph, inst.terminals, lp->p, cfg.pipeline);
  }
  return solve_norm_multiway(inst.graph, inst.terminals, objective_norm(cfg, inst.terminals.size()), cfg.pipeline);
}

namespace detail {

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

inline Json config_json(const RunConfig& cfg) {
  Json c;
  c["variant"] = std::string(to_string(cfg.pipeline.variant));
  c["norm"] = norm_tag(cfg);
  c["utc"] = cfg.pipeline.utc;
  c["seed"] = cfg.pipeline.seed;
  c["trials"] = cfg.pipeline.trials;
  c["eps"] = cfg.pipeline.eps;
  c["alpha_mult"] = cfg.pipeline.alpha_mult ? Json(*cfg.pipeline.alpha_mult) : Json(nullptr);
  c["mode"] = cfg.mode == RunMode::solve ? "solve" : "oracle-only";
  c["oracle"] = cfg.oracle;
  return c;
}

inline Json partition_json(const Partition& p) {
  Json a = Json::array();
  for (const auto& s : p.parts) a.push_back(s.members());
  return a;
}

}  // namespace detail

/// One record of the report stream. `status` is "ok", "rejected", "infeasible",
/// "budget", "capability", "invalid" or "invariant".
inline Json run_instance(const std::string& id, const Instance& inst, const RunConfig& cfg) {
  Json r;
  r["type"] = "instance";
  r["id"] = id;
  r["digest"] = instance_digest(inst);
  r["n"] = inst.graph.num_vertices();
  r["m"] = inst.graph.num_edges();
  r["k"] = inst.terminals.size();
  r["config"] = detail::config_json(cfg);
  std::optional<double> objective;
  try {
    std::optional<OracleResult> oracle;
    if (cfg.oracle || cfg.mode == RunMode::oracle_only) {
      const auto start = std::chrono::steady_clock::now();
      oracle = brute_force_multiway(inst.graph, inst.terminals, objective_norm(cfg, inst.terminals.size()), cfg.budget);
      r["oracle_objective"] = detail::number_or_null(oracle->objective);
      if (cfg.pipeline.timings) r["oracle_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (cfg.mode == RunMode::oracle_only) {
      objective = oracle->objective;
      r["status"] = "ok";
      r["objective"] = detail::number_or_null(oracle->objective);
      r["cuts"] = detail::vector_json(oracle->cuts);
      r["partition"] = detail::partition_json(oracle->partition);
    } else {
      const SolveResult s = run_solver(inst, cfg);
      objective = s.objective;
      r["status"] = "ok";
      r["backend"] = std::string(to_string(s.backend));
      r["objective"] = detail::number_or_null(s.objective);
      r["cuts"] = detail::vector_json(s.cuts);
      r["partition"] = detail::partition_json(s.partition);
      if (cfg.pipeline.variant == Variant::lp)
        r["p_effective"] = s.p_effective;
      else
        r["opt_guess"] = s.opt_guess;
      r["weight_scales"] = s.weight_scales;
      r["cover"] = {{"sets", s.cover.sets}, {"measure_budget", s.cover.measure_budget}, {"min_frequency", s.cover.min_frequency}, {"sum_cost", s.cover.sum_cost}};
      Json trials = Json::array();
      for (const auto& t : s.trials)
        trials.push_back({{"index", t.index}, {"seed", t.seed}, {"accepted", t.accepted}, {"objective", detail::number_or_null(t.objective)},
                          {"repair_iterations", t.repair_iterations}, {"parts", t.parts}, {"sequence", t.sequence}});
      r["trials"] = std::move(trials);
      r["checks"] = s.checks;
      if (cfg.pipeline.timings) r["seconds"] = s.seconds;
    }
    if (oracle) {
      if (oracle->objective > 0.0)
        r["ratio"] = *objective / oracle->objective;
      else
        r["ratio"] = *objective <= kTolerance ? Json(1.0) : Json(nullptr);
    }
  } catch (const AllTrialsRejected& e) {
    r["status"] = "rejected";
    r["error"] = e.what();
  } catch (const InfeasibleError& e) {
    r["status"] = "infeasible";
    r["error"] = e.what();
  } catch (const BudgetExceeded& e) {
    r["status"] = "budget";
    r["error"] = e.what();
  } catch (const CapabilityError& e) {
    r["status"] = "capability";
    r["error"] = e.what();
  } catch (const InvariantViolation& e) {
    r["status"] = "invariant";
    r["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    r["status"] = "invalid";
    r["error"] = e.what();
  }
  return r;
}

struct BenchSummary {
  int instances = 0;
  int ok = 0;
  int rejected = 0;
  int invariant_failures = 0;
  int other_failures = 0;
  std::vector<double> ratios;

  Json to_json() const {
    Json s;
    s["type"] = "summary";
    s["instances"] = instances;
    s["ok"] = ok;
    s["rejected"] = rejected;
    s["rejection_rate"] = instances ? static_cast<double>(rejected) / instances : 0.0;
    s["invariant_failures"] = invariant_failures;
    s["other_failures"] = other_failures;
    if (!ratios.empty()) {
      auto sorted = ratios;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      s["median_ratio"] = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
      s["max_ratio"] = sorted.back();
      s["min_ratio"] = sorted.front();
    } else {
      s["median_ratio"] = nullptr;
      s["max_ratio"] = nullptr;
      s["min_ratio"] = nullptr;
    }
    return s;
  }
};

/// A named instance feeding the benchmark.
struct BenchItem {
  std::string id;
  Instance instance;
};

/// `count` instances from one generator with seeds derived from `seed`.
inline std::vector<BenchItem> generated_items(std::string_view kind, const GeneratorParams& params, int count, std::uint64_t seed) {
  std::vector<BenchItem> out;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = rng();
    out.push_back({std::string(kind) + "-" + std::to_string(i), generate_instance(kind, params, s)});
  }
  return out;
}

/// Writes one JSON line per instance, then the summary line.
inline BenchSummary run_benchmark(const std::vector<BenchItem>& items, const RunConfig& cfg, std::ostream& out) {
  BenchSummary sum;
  for (const auto& item : items) {
    const Json r = run_instance(item.id, item.instance, cfg);
    out << r.dump() << '\n';
    ++sum.instances;
    const std::string status = r["status"];
    if (status == "ok") {
      ++sum.ok;
      if (r.contains("ratio") && r["ratio"].is_number()) sum.ratios.push_back(r["ratio"].get<double>());
    } else if (status == "rejected") {
      ++sum.rejected;
    } else if (status == "invariant") {
      ++sum.invariant_failures;
    } else {
      ++sum.other_failures;
    }
  }
  out << sum.to_json().dump() << '\n';
  out.flush();
  return sum;
}

/// Property checks on one instance, each recorded by name with pass/fail.
inline Json run_instance_checks(const Instance& inst, const RunConfig& cfg) {
  const auto& g = inst.graph;
  const auto& terminals = inst.terminals;
  const int n = g.num_vertices();
  Json checks = Json::array();
  auto record = [&](const std::string& name, const std::function<std::string()>& body) {
    Json c;
    c["name"] = name;
    try {
      const std::string detail = body();
      c["passed"] = detail.empty();
      if (!detail.empty()) c["detail"] = detail;
    } catch (const BudgetExceeded& e) {
      c["passed"] = nullptr;
      c["detail"] = std::string("skipped: ") + e.what();
    } catch (const std::exception& e) {
      c["passed"] = false;
      c["detail"] = e.what();
    }
    checks.push_back(std::move(c));
  };

  std::mt19937_64 rng(cfg.pipeline.seed);
  std::vector<VertexSet> samples;
  for (int i = 0; i < 32; ++i) {
    VertexSet s(n);
    for (Vertex v = 1; v <= n; ++v)
      if (rng() & 1) s.insert(v);
    samples.push_back(std::move(s));
  }

  record("boundary-symmetry", [&]() -> std::string {
    for (const auto& s : samples)
      if (std::abs(boundary_weight(g, s) - boundary_weight(g, s.complement())) > kTolerance) return "delta(S) != delta(V \\ S)";
    return "";
  });
  record("crossing-identity", [&]() -> std::string {
    if (g.has_infinite()) throw BudgetExceeded("identity needs finite weights");
    for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
      const VertexSet a = samples[i];
      const VertexSet b = samples[i + 1] - a;
      const double lhs = boundary_weight(g, a | b);
      const double rhs = boundary_weight(g, a) + boundary_weight(g, b) - 2.0 * cross_weight(g, a, b);
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, lhs)) return "delta(A u B) != delta(A) + delta(B) - 2 w(A, B)";
    }
    return "";
  });
  record("isolating-cuts", [&]() -> std::string {
    const auto cuts = isolating_cuts(g, terminals);
    for (int i = 0; i < terminals.size(); ++i) {
      const auto& c = cuts[static_cast<std::size_t>(i)];
      if (terminals.count_in(c.set) != 1 || !c.set.contains(terminals[static_cast<std::size_t>(i)])) return "isolating cut holds the wrong terminals";
    }
    if (n > 16) return "";
    for (int i = 0; i < terminals.size(); ++i) {
      double best = kInfinite;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        VertexSet s(n);
        for (int v = 0; v < n; ++v)
          if (mask >> v & 1) s.insert(v + 1);
        if (terminals.count_in(s) == 1 && s.contains(terminals[static_cast<std::size_t>(i)])) best = std::min(best, boundary_weight(g, s));
      }
      if (std::abs(best - cuts[static_cast<std::size_t>(i)].cost) > 1e-9 * std::max(1.0, best)) return "isolating cut is not minimum";
    }
    return "";
  });
  record("utc-exact-vs-brute", [&]() -> std::string {
    if (n > 12) throw BudgetExceeded("n > 12");
    std::vector<double> mu(static_cast<std::size_t>(n), 1.0);
    for (double rho : {0.1, 0.25, 0.5}) {
      const UtcInstance u{g, terminals, mu, rho};
      std::optional<double> brute;
      try {
        brute = brute_force_utc(u, cfg.budget).cost;
      } catch (const InfeasibleError&) {
      }
      const auto fast = solve_utc_exact_batch(g, terminals, mu, std::vector<double>{rho})[0];
      if (brute.has_value() != fast.has_value()) return "feasibility disagrees";
      if (brute && std::abs(*brute - fast->cost) > 1e-9 * std::max(1.0, *brute)) return "UTC costs disagree";
    }
    return "";
  });
  record("pipeline", [&]() -> std::string {
    const SolveResult s = run_solver(inst, cfg);
    if (!s.partition.is_terminal_labeled(terminals) || !s.partition.covers(n)) return "output is not a terminal-labeled partition";
    return "";
  });
  record("oracle-lower-bound", [&]() -> std::string {
    const auto oracle = brute_force_multiway(g, terminals, objective_norm(cfg, terminals.size()), cfg.budget);
    const SolveResult s = run_solver(inst, cfg);
    if (s.objective < oracle.objective * (1.0 - 1e-9) - 1e-12) return "pipeline beat the exact optimum";
    return "";
  });

  Json out;
  out["type"] = "checks";
  out["digest"] = instance_digest(inst);
  out["config"] = detail::config_json(cfg);
  out["checks"] = std::move(checks);
  bool all = true;
  for (const auto& c : out["checks"])
    if (c["passed"].is_boolean() && !c["passed"].get<bool>()) all = false;
  out["passed"] = all;
  return out;
}

}  // namespace mwc
