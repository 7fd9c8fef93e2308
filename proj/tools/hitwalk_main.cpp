// Command-line driver: seeded graph generation plus the verification
// suites, each emitting machine-readable CSV/JSON.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hitwalk/edge_list.hpp"
#include "hitwalk/experiment.hpp"
#include "hitwalk/formulas.hpp"
#include "hitwalk/gnp.hpp"
#include "hitwalk/hitting.hpp"
#include "hitwalk/markov.hpp"
#include "hitwalk/montecarlo.hpp"
#include "hitwalk/spectral.hpp"
#include "hitwalk/structure.hpp"
#include "hitwalk/version.hpp"

using namespace hitwalk;

namespace {

/// Accepts either a path to an edge-list file or an inline generator spec of
/// the form "gnp:n=1000,p=0.2,k=2,seed=7[,c=1]".
struct GraphArg {
  std::string value;
  double p_override = -1.0;  // --p for file-backed graphs
  int k_override = 0;
  std::uint64_t seed_fallback = 1;

  bool is_spec() const { return value.rfind("gnp:", 0) == 0; }

  GnpSpec parse_spec() const {
    GnpSpec spec;
    spec.seed = seed_fallback;
    std::stringstream ss(value.substr(4));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--graph", "expected key=value in gnp spec: " + item);
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      if (key == "n") spec.n = std::stoull(val);
      else if (key == "p") spec.p = std::stod(val);
      else if (key == "k") spec.k = std::stoi(val);
      else if (key == "seed") spec.seed = std::stoull(val);
      else if (key == "c") spec.regime_c = std::stod(val);
      else throw CLI::ValidationError("--graph", "unknown gnp key: " + key);
    }
    if (spec.n < 2) throw CLI::ValidationError("--graph", "gnp spec needs n >= 2");
    return spec;
  }

  std::pair<Graph, GnpSpec> load() const {
    if (is_spec()) {
      GnpSpec spec = parse_spec();
      if (spec.k == 0) spec.k = GnpSpec::fitting_k(spec.n, spec.p);
      return {sample_gnp(spec), spec};
    }
    Graph g = load_edge_list(value);
    GnpSpec spec;
    spec.n = g.vertex_count();
    spec.p = p_override > 0.0
                 ? p_override
                 : 2.0 * static_cast<double>(g.edge_count()) /
                       (static_cast<double>(g.vertex_count()) * (g.vertex_count() - 1.0));
    spec.k = k_override > 0 ? k_override : GnpSpec::fitting_k(spec.n, spec.p);
    spec.seed = seed_fallback;
    return {g, spec};
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::string fmt(double x) { return hitwalk::detail::fmt(x); }

std::string banner(std::uint64_t seed) {
  return std::string("# hitwalk ") + hitwalk::kVersion + " seed=" + std::to_string(seed) + "\n";
}

std::vector<Edge> parse_pairs(const std::string& arg, std::size_t n, std::uint64_t seed) {
  if (arg.rfind("random:", 0) == 0) {
    const std::size_t count = std::stoull(arg.substr(7));
    return hitwalk::detail::sample_pairs(n, count, seed);
  }
  std::ifstream in(arg);
  if (!in) throw std::runtime_error("cannot open pair file " + arg);
  std::vector<Edge> pairs;
  std::uint64_t w, v;
  while (in >> w >> v) pairs.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
  return pairs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("hitwalk ") + kVersion +
               " - random-walk hitting times on sampled graphs"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  app.add_option("--seed", seed, "base seed for sampling and trials")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for simulations")->capture_default_str();
  app.add_option("--out", out, "output path or directory ('-' for stdout)");
  app.fallthrough();

  GraphArg garg;
  auto add_graph_opts = [&](CLI::App* cmd, bool need_graph = true) {
    auto* opt = cmd->add_option("--graph", garg.value,
                                "edge-list file or gnp:n=..,p=..,k=..,seed=..");
    if (need_graph) opt->required();
    cmd->add_option("--p", garg.p_override, "edge probability for file-backed graphs");
    cmd->add_option("--k", garg.k_override, "diameter exponent override");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "sample a graph and write its edge list");
  GnpSpec gen_spec;
  gen->add_option("--n", gen_spec.n, "vertex count")->required();
  gen->add_option("--p", gen_spec.p, "edge probability")->required();
  gen->add_option("--k", gen_spec.k, "diameter exponent")->capture_default_str();
  gen->add_option("--regime-c", gen_spec.regime_c, "upper cutoff constant")
      ->capture_default_str();
  gen->callback([&] {
    gen_spec.seed = seed;
    auto g = sample_gnp(gen_spec);
    std::ostringstream text;
    save_edge_list(g, text);
    emit(out, text.str());
    std::fprintf(stderr, "sampled n=%zu m=%llu in_range=%d\n", g.vertex_count(),
                 static_cast<unsigned long long>(g.edge_count()),
                 gen_spec.in_theorem_range() ? 1 : 0);
  });

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "extreme adjacency eigenvalues as JSON");
  double eig_tol = 1e-8;
  int mz_trials = 50;
  add_graph_opts(spectrum);
  spectrum->add_option("--tol", eig_tol, "relative residual tolerance")->capture_default_str();
  spectrum->add_option("--trials", mz_trials, "mean-zero operator trials")
      ->capture_default_str();
  spectrum->callback([&] {
    garg.seed_fallback = seed;
    auto [g, spec] = garg.load();
    auto summary = spectral_summary(g, eig_tol);
    const double pn = spec.p * static_cast<double>(g.vertex_count());
    json j{{"lambda1", summary.lambda1},
           {"lambda2", summary.lambda2},
           {"lambda_min", summary.lambda_min},
           {"residual1", summary.residual1},
           {"residual2", summary.residual2},
           {"residual_min", summary.residual_min},
           {"phi", summary.phi},
           {"phi_deviation", summary.phi_deviation},
           {"lambda1_over_pn", summary.lambda1 / pn},
           {"extreme_over_sqrt_pn",
            std::max(std::abs(summary.lambda2), std::abs(summary.lambda_min)) / std::sqrt(pn)},
           {"mean_zero_max_ratio",
            mean_zero_operator_check(g, spec.p, mz_trials, seed)},
           {"version", kVersion},
           {"seed", seed}};
    emit(out, j.dump(2) + "\n");
  });

  // mix
  auto* mix = app.add_subcommand("mix", "distribution gap to stationarity per step");
  std::uint64_t mix_from = 0;
  int mix_steps = 8;
  add_graph_opts(mix);
  mix->add_option("--from", mix_from, "start vertex")->capture_default_str();
  mix->add_option("--steps", mix_steps, "maximum step count")->capture_default_str();
  mix->callback([&] {
    garg.seed_fallback = seed;
    auto [g, spec] = garg.load();
    auto rows = mixing_rows(g, spec.p, static_cast<Vertex>(mix_from), mix_steps);
    emit(out, mixing_rows_csv(rows, banner(seed)));
  });

  // hit
  auto* hit = app.add_subcommand("hit", "exact hitting times toward a target");
  std::uint64_t hit_target = 0;
  bool all_sources = false;
  double solve_tol = 1e-10;
  add_graph_opts(hit);
  hit->add_option("--target", hit_target, "target vertex")->required();
  hit->add_flag("--all-sources", all_sources, "emit one row per source vertex");
  hit->add_option("--tol", solve_tol, "solver residual tolerance")->capture_default_str();
  hit->callback([&] {
    garg.seed_fallback = seed;
    auto [g, spec] = garg.load();
    HittingOptions opts;
    opts.tol = solve_tol;
    auto h = hitting_vector(g, static_cast<Vertex>(hit_target), opts);
    std::string text = "u,H_uv\n";
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
      if (!all_sources && u == hit_target) continue;
      text += std::to_string(u) + ',' + fmt(h.values[u]) + '\n';
    }
    emit(out, text);
    std::fprintf(stderr, "solve residual %.3e (%s)\n", h.solve_residual,
                 h.method == HittingVector::Method::dense ? "dense" : "iterative");
  });

  // verify-lemmas
  auto* verify = app.add_subcommand("verify-lemmas", "identity and bound checks as CSV");
  int verify_ell = 5;
  add_graph_opts(verify);
  verify->add_option("--ell", verify_ell, "step parameter for the identities")
      ->capture_default_str();
  verify->callback([&] {
    garg.seed_fallback = seed;
    auto [g, spec] = garg.load();
    auto rows = verify_lemma_checks(g, spec, seed, verify_ell);
    emit(out, check_rows_csv(rows, banner(seed)));
    for (const auto& r : rows)
      if (!r.pass) throw std::runtime_error("check failed: " + r.check);
  });

  // compare
  auto* compare = app.add_subcommand("compare", "exact vs predicted hitting times as CSV");
  std::string pairs_arg = "random:100";
  add_graph_opts(compare);
  compare->add_option("--pairs", pairs_arg, "pair file or random:N")->capture_default_str();
  compare->callback([&] {
    garg.seed_fallback = seed;
    auto [g, spec] = garg.load();
    auto pairs = parse_pairs(pairs_arg, g.vertex_count(), seed);
    CompareOptions copts;
    if (garg.k_override > 0) copts.k = garg.k_override;
    auto records = compare_suite(g, spec, pairs, copts);
    emit(out, predictions_csv(records, banner(seed)));
  });

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo hitting-time estimate as JSON");
  std::uint64_t mc_from = 0, mc_to = 1;
  std::int64_t mc_trials = 100000, mc_cap = 0;
  add_graph_opts(mc);
  mc->add_option("--from", mc_from, "start vertex")->required();
  mc->add_option("--to", mc_to, "target vertex")->required();
  mc->add_option("--trials", mc_trials, "number of walks")->capture_default_str();
  mc->add_option("--cap", mc_cap, "step cap per walk (default 100 n)");
  mc->callback([&] {
    garg.seed_fallback = seed;
    auto [g, spec] = garg.load();
    auto est = simulate_hitting(g, static_cast<Vertex>(mc_from), static_cast<Vertex>(mc_to),
                                mc_trials, seed, mc_cap, threads);
    json j{{"mean", est.mean},
           {"std_error", est.std_error},
           {"trials", est.trials},
           {"capped_trials", est.capped_trials},
           {"cap", est.cap},
           {"version", kVersion},
           {"seed", seed}};
    emit(out, j.dump(2) + "\n");
  });

  // run
  auto* run_cmd = app.add_subcommand("run", "execute the suites from a JSON config");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "ExperimentConfig JSON file")->required();
  run_cmd->callback([&] {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    json j;
    in >> j;
    ExperimentConfig config = j.get<ExperimentConfig>();
    if (!out.empty()) config.output_dir = out;
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--threads")) config.threads = threads;
    auto result = run(config);
    for (const auto& [suite, pass] : result.suite_pass)
      std::fprintf(stderr, "%-12s %s\n", suite.c_str(), pass ? "pass" : "FAIL");
    if (!result.pass) throw std::runtime_error("one or more suites failed");
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a list of configs, aggregate to CSV");
  std::string configs_path;
  sweep_cmd->add_option("--configs", configs_path, "JSON array of ExperimentConfig")
      ->required();
  sweep_cmd->callback([&] {
    std::ifstream in(configs_path);
    if (!in) throw std::runtime_error("cannot open configs " + configs_path);
    json j;
    in >> j;
    std::vector<ExperimentConfig> configs;
    for (const auto& item : j) configs.push_back(item.get<ExperimentConfig>());
    const std::string target = out.empty() ? "sweep.csv" : out;
    auto results = sweep(configs, target);
    int failures = 0;
    for (const auto& r : results)
      if (!r.pass) ++failures;
    std::fprintf(stderr, "%zu configs, %d failing\n", results.size(), failures);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
