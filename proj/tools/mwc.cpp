#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mwc/mwc.hpp"

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kInfeasible = 3, kInvariant = 4 };

struct SolverFlags {
  std::string p = "1";
  std::string norm;
  std::string utc = "auto";
  std::uint64_t seed = 1;
  int trials = 7;
  double eps = 0.01;
  double alpha_mult = 0.0;
  std::string variant = "lp";
  std::uint64_t oracle_budget = mwc::OracleBudget{}.max_assignments;
  bool timings = false;

  void attach(CLI::App* app) {
    app->add_option("--p", p, "lp exponent, a number >= 1 or inf")->capture_default_str();
    app->add_option("--norm", norm, "objective norm: lp:<p>, wlp:<p>:<c1,..,ck> or nmax:<bipartite-file>");
    app->add_option("--utc", utc, "UTC backend")->check(CLI::IsMember({"auto", "exact", "heuristic"}))->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--trials", trials, "uncrossing trials")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--eps", eps, "weight-preprocessing epsilon")->check(CLI::Range(1e-12, 0.999999))->capture_default_str();
    app->add_option("--alpha-mult", alpha_mult, "UTC cost multiplier for norm coverings (default depends on backend)");
    app->add_option("--variant", variant, "pipeline variant")->check(CLI::IsMember({"lp", "norm-min", "norm-ordering"}))->capture_default_str();
    app->add_option("--oracle-budget", oracle_budget, "largest assignment count the brute-force oracle may enumerate")->capture_default_str();
    app->add_flag("--timings", timings, "report wall time per phase (makes output non-reproducible)");
  }

  mwc::RunConfig config() const {
    mwc::RunConfig cfg;
    cfg.pipeline.seed = seed;
    cfg.pipeline.trials = trials;
    cfg.pipeline.utc = utc;
    cfg.pipeline.eps = eps;
    if (alpha_mult > 0.0) cfg.pipeline.alpha_mult = alpha_mult;
    cfg.pipeline.variant = mwc::parse_variant(variant);
    cfg.pipeline.timings = timings;
    cfg.budget.max_assignments = oracle_budget;
    if (!norm.empty()) {
      cfg.norm = norm;
      cfg.p.reset();
    } else {
      cfg.norm = "lp:" + p;
    }
    return cfg;
  }
};

struct GenFlags {
  std::string kind = "gnp";
  int n = 10;
  int k = 3;
  double prob = 0.3;
  double p_out = 0.05;
  std::string weights = "unit";

  void attach(CLI::App* app, bool positional_kind) {
    if (positional_kind)
      app->add_option("kind", kind, "generator")->check(CLI::IsMember({"gnp", "planted-k-part", "star-chain"}))->required();
    else
      app->add_option("--gen", kind, "generator")->check(CLI::IsMember({"gnp", "planted-k-part", "star-chain"}))->capture_default_str();
    app->add_option("--n", n, "vertex count")->capture_default_str();
    app->add_option("--k", k, "terminal count")->capture_default_str();
    app->add_option("--prob", prob, "edge probability (gnp) or intra-cluster probability (planted)")->capture_default_str();
    app->add_option("--p-out", p_out, "cross-cluster probability (planted)")->capture_default_str();
    app->add_option("--weights", weights, "unit or int (uniform 1..10)")->check(CLI::IsMember({"unit", "int"}))->capture_default_str();
  }

  mwc::GeneratorParams params() const { return {n, k, prob, p_out, mwc::parse_weight_mode(weights)}; }
};

mwc::Instance load_instance(const std::string& path) {
  if (path == "-") return mwc::parse_instance(std::cin);
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open '" + path + "'");
  return mwc::parse_instance(f);
}

int exit_for_status(const std::string& status) {
  if (status == "ok") return kOk;
  if (status == "invariant") return kInvariant;
  if (status == "rejected" || status == "infeasible" || status == "budget") return kInfeasible;
  return kUsage;
}

mwc::MultiwaySolver reduction_solver(const std::string& name, const mwc::RunConfig& cfg) {
  if (name == "oracle") return mwc::brute_force_solver(cfg.budget);
  auto pc = cfg.pipeline;
  if (pc.variant == mwc::Variant::lp) pc.variant = mwc::Variant::norm_min;
  return [pc](const mwc::WeightedGraph& g, const mwc::TerminalSet& t, const mwc::NormSpec& n) { return mwc::solve_norm_multiway(g, t, n, pc).partition; };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiway cut under lp and monotonic-norm objectives"};
  app.require_subcommand(1);

  SolverFlags sf;
  GenFlags gf;
  std::string input;
  std::string output;
  bool with_oracle = false;
  bool oracle_only = false;
  int count = 10;
  std::vector<std::string> files;
  std::string reduce_mode = "extract";
  std::string reduce_solver = "oracle";

  auto* solve = app.add_subcommand("solve", "run the pipeline on one instance and print a JSON record");
  solve->add_option("instance", input, "instance file, or - for stdin")->required();
  solve->add_flag("--oracle", with_oracle, "also run the brute-force oracle and report the ratio");
  sf.attach(solve);

  auto* oracle = app.add_subcommand("oracle", "solve one instance exactly by enumeration");
  oracle->add_option("instance", input, "instance file, or - for stdin")->required();
  sf.attach(oracle);

  auto* bench = app.add_subcommand("bench", "stream one JSON line per instance plus a summary line");
  bench->add_option("files", files, "instance files; when absent, instances are generated");
  bench->add_option("--count", count, "generated instance count")->capture_default_str();
  bench->add_flag("--oracle", with_oracle, "also run the brute-force oracle");
  bench->add_flag("--oracle-only", oracle_only, "run only the oracle");
  sf.attach(bench);
  gf.attach(bench, false);

  auto* gen = app.add_subcommand("gen", "write a random instance");
  std::uint64_t gen_seed = 1;
  gf.attach(gen, true);
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("-o,--output", output, "output file (default stdout)");

  auto* reduce = app.add_subcommand("reduce", "SSBVE tools on a bipartite instance");
  reduce->add_option("instance", input, "bipartite file, or - for stdin")->required();
  reduce->add_option("--mode", reduce_mode, "build: print H; extract: one round; iterate: full extraction")
      ->check(CLI::IsMember({"build", "extract", "iterate"}))
      ->capture_default_str();
  reduce->add_option("--solver", reduce_solver, "multiway solver for the reduced instance")->check(CLI::IsMember({"oracle", "pipeline"}))->capture_default_str();
  sf.attach(reduce);

  auto* check = app.add_subcommand("check", "run invariant checks on one instance");
  check->add_option("instance", input, "instance file, or - for stdin")->required();
  sf.attach(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      const auto inst = mwc::generate_instance(gf.kind, gf.params(), gen_seed);
      const auto text = mwc::write_instance(inst);
      if (output.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(output);
        if (!f) throw std::invalid_argument("cannot write '" + output + "'");
        f << text;
      }
      return kOk;
    }

    auto cfg = sf.config();
    if (*solve || *oracle) {
      const auto inst = load_instance(input);
      cfg.oracle = with_oracle;
      if (*oracle) cfg.mode = mwc::RunMode::oracle_only;
      const auto r = mwc::run_instance(input, inst, cfg);
      std::cout << r.dump() << '\n';
      if (r.contains("error")) std::cerr << "mwc: " << r["error"].get<std::string>() << '\n';
      return exit_for_status(r["status"]);
    }
    if (*bench) {
      std::vector<mwc::BenchItem> items;
      if (files.empty()) {
        items = mwc::generated_items(gf.kind, gf.params(), count, sf.seed);
      } else {
        for (const auto& f : files) items.push_back({f, load_instance(f)});
      }
      cfg.oracle = with_oracle;
      if (oracle_only) cfg.mode = mwc::RunMode::oracle_only;
      const auto sum = mwc::run_benchmark(items, cfg, std::cout);
      return sum.invariant_failures > 0 ? kInvariant : kOk;
    }
    if (*check) {
      const auto inst = load_instance(input);
      const auto r = mwc::run_instance_checks(inst, cfg);
      std::cout << r.dump() << '\n';
      return r["passed"].get<bool>() ? kOk : kInvariant;
    }
    if (*reduce) {
      std::string text;
      if (input == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        text = os.str();
      } else {
        text = mwc::read_file(input);
      }
      const auto ssbve = mwc::parse_bipartite(text);
      ssbve.validate();
      if (reduce_mode == "build") {
        const auto red = mwc::build_reduction(ssbve);
        std::cout << mwc::write_instance(red.graph, red.terminals);
        return kOk;
      }
      const auto solver = reduction_solver(reduce_solver, cfg);
      mwc::Json r;
      r["type"] = "reduction";
      r["mode"] = reduce_mode;
      r["k"] = ssbve.k();
      r["n_R"] = ssbve.graph.right_size();
      r["t"] = ssbve.t;
      std::vector<int> set;
      if (reduce_mode == "extract") {
        const auto e = mwc::extract_small_set(ssbve, solver);
        set = e.set;
        r["j"] = e.j;
        r["norm_y"] = e.norm_y;
        r["exhaustive"] = e.exhaustive;
      } else {
        const auto e = mwc::iterate_extraction(ssbve, solver);
        set = e.set;
        r["rounds"] = e.rounds.size();
      }
      std::vector<int> one_based;
      for (int i : set) one_based.push_back(i + 1);
      r["set"] = one_based;
      r["neighborhood"] = ssbve.graph.neighborhood_size(set);
      try {
        const auto best = mwc::brute_force_ssbve(ssbve.graph, ssbve.t, cfg.budget);
        r["optimum"] = best.value;
      } catch (const mwc::BudgetExceeded&) {
        r["optimum"] = nullptr;
      }
      std::cout << r.dump() << '\n';
      return kOk;
    }
  } catch (const mwc::ParseError& e) {
    std::cerr << "mwc: parse error: " << e.what() << '\n';
    return kParse;
  } catch (const mwc::InvariantViolation& e) {
    std::cerr << "mwc: internal invariant violated: " << e.what() << '\n';
    return kInvariant;
  } catch (const mwc::InfeasibleError& e) {
    std::cerr << "mwc: " << e.what() << '\n';
    return kInfeasible;
  } catch (const mwc::AllTrialsRejected& e) {
    std::cerr << "mwc: " << e.what() << '\n';
    return kInfeasible;
  } catch (const mwc::BudgetExceeded& e) {
    std::cerr << "mwc: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "mwc: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
