#pragma once

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hitwalk/edge_list.hpp"
#include "hitwalk/formulas.hpp"
#include "hitwalk/gnp.hpp"
#include "hitwalk/graph.hpp"
#include "hitwalk/hitting.hpp"
#include "hitwalk/markov.hpp"
#include "hitwalk/montecarlo.hpp"
#include "hitwalk/spectral.hpp"
#include "hitwalk/structure.hpp"
#include "hitwalk/version.hpp"

namespace hitwalk {

using nlohmann::json;

/// Pass/fail thresholds live here, not in code paths, so a config can widen
/// or tighten a run without a rebuild.
struct Tolerances {
  double solve_tol = 1e-10;
  double eig_tol = 1e-6;
  double identity_tol = 1e-6;
  double fit_max = 10.0;
  double lambda1_band = 0.1;        // lambda1/(pn) within 1 +- band
  double lambda2_ratio_max = 3.0;   // max(|l2|,|lmin|)/sqrt(pn)
  double mean_zero_ratio_max = 3.0;
  double mc_sigma = 4.0;
};

inline void to_json(json& j, const Tolerances& t) {
  j = json{{"solve_tol", t.solve_tol},
           {"eig_tol", t.eig_tol},
           {"identity_tol", t.identity_tol},
           {"fit_max", t.fit_max},
           {"lambda1_band", t.lambda1_band},
           {"lambda2_ratio_max", t.lambda2_ratio_max},
           {"mean_zero_ratio_max", t.mean_zero_ratio_max},
           {"mc_sigma", t.mc_sigma}};
}

inline void from_json(const json& j, Tolerances& t) {
  t = Tolerances{};
  if (j.contains("solve_tol")) j.at("solve_tol").get_to(t.solve_tol);
  if (j.contains("eig_tol")) j.at("eig_tol").get_to(t.eig_tol);
  if (j.contains("identity_tol")) j.at("identity_tol").get_to(t.identity_tol);
  if (j.contains("fit_max")) j.at("fit_max").get_to(t.fit_max);
  if (j.contains("lambda1_band")) j.at("lambda1_band").get_to(t.lambda1_band);
  if (j.contains("lambda2_ratio_max")) j.at("lambda2_ratio_max").get_to(t.lambda2_ratio_max);
  if (j.contains("mean_zero_ratio_max"))
    j.at("mean_zero_ratio_max").get_to(t.mean_zero_ratio_max);
  if (j.contains("mc_sigma")) j.at("mc_sigma").get_to(t.mc_sigma);
}

inline void to_json(json& j, const GnpSpec& s) {
  j = json{{"n", s.n}, {"p", s.p}, {"k", s.k}, {"seed", s.seed}, {"regime_c", s.regime_c}};
}

inline void from_json(const json& j, GnpSpec& s) {
  s = GnpSpec{};
  j.at("n").get_to(s.n);
  j.at("p").get_to(s.p);
  if (j.contains("k")) j.at("k").get_to(s.k);
  if (j.contains("seed")) j.at("seed").get_to(s.seed);
  if (j.contains("regime_c")) j.at("regime_c").get_to(s.regime_c);
}

struct ExperimentConfig {
  GnpSpec gnp;                  // sampling parameters; p and k also drive envelopes
  std::string graph_file;      // when set, the graph is loaded instead of sampled
  std::set<std::string> suites;
  std::size_t pair_count = 100;
  std::string output_dir = "out";
  double envelope_constant = 4.0;
  std::uint64_t seed = 1;      // drives pair/source/trial sampling
  int threads = 1;
  int mixing_max_steps = 8;
  int lemma_ell = 5;
  std::int64_t mc_trials = 100000;
  std::size_t mc_pairs = 5;
  int spectrum_trials = 50;
  Tolerances tol;

  static const std::set<std::string>& known_suites() {
    static const std::set<std::string> s{"structure", "spectrum", "mixing",
                                         "lemmas",    "formulas", "montecarlo"};
    return s;
  }

  void validate() const {
    for (const auto& suite : suites)
      if (!known_suites().contains(suite))
        throw std::invalid_argument("unknown suite: " + suite);
    if (graph_file.empty() && gnp.n < 2)
      throw std::invalid_argument("config needs a gnp spec or a graph file");
  }
};

inline void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"gnp", c.gnp},
           {"graph_file", c.graph_file},
           {"suites", c.suites},
           {"pair_count", c.pair_count},
           {"output_dir", c.output_dir},
           {"envelope_constant", c.envelope_constant},
           {"seed", c.seed},
           {"threads", c.threads},
           {"mixing_max_steps", c.mixing_max_steps},
           {"lemma_ell", c.lemma_ell},
           {"mc_trials", c.mc_trials},
           {"mc_pairs", c.mc_pairs},
           {"spectrum_trials", c.spectrum_trials},
           {"tolerances", c.tol},
           {"version", kVersion}};
}

inline void from_json(const json& j, ExperimentConfig& c) {
  c = ExperimentConfig{};
  if (j.contains("gnp")) j.at("gnp").get_to(c.gnp);
  if (j.contains("graph_file")) j.at("graph_file").get_to(c.graph_file);
  if (j.contains("suites")) {
    c.suites.clear();
    for (const auto& s : j.at("suites")) c.suites.insert(s.get<std::string>());
  }
  if (j.contains("pair_count")) j.at("pair_count").get_to(c.pair_count);
  if (j.contains("output_dir")) j.at("output_dir").get_to(c.output_dir);
  if (j.contains("envelope_constant")) j.at("envelope_constant").get_to(c.envelope_constant);
  if (j.contains("seed")) j.at("seed").get_to(c.seed);
  if (j.contains("threads")) j.at("threads").get_to(c.threads);
  if (j.contains("mixing_max_steps")) j.at("mixing_max_steps").get_to(c.mixing_max_steps);
  if (j.contains("lemma_ell")) j.at("lemma_ell").get_to(c.lemma_ell);
  if (j.contains("mc_trials")) j.at("mc_trials").get_to(c.mc_trials);
  if (j.contains("mc_pairs")) j.at("mc_pairs").get_to(c.mc_pairs);
  if (j.contains("spectrum_trials")) j.at("spectrum_trials").get_to(c.spectrum_trials);
  if (j.contains("tolerances")) j.at("tolerances").get_to(c.tol);
}

namespace detail {

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline std::string file_banner(const ExperimentConfig& c) {
  return std::string("# hitwalk ") + kVersion + " seed=" + std::to_string(c.seed) +
         " graph_seed=" + std::to_string(c.gnp.seed) + "\n";
}

inline std::vector<Edge> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  RngStream rng(seed ^ 0x9a1c5ULL);
  std::vector<Edge> pairs;
  pairs.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    const Vertex v = static_cast<Vertex>(rng.next_below(n));
    Vertex w = static_cast<Vertex>(rng.next_below(n - 1));
    if (w >= v) ++w;
    pairs.emplace_back(w, v);
  }
  return pairs;
}

inline json to_json_report(const StructuralReport& rep) {
  auto check = [](const PropertyCheck& c) {
    return json{{"pass", c.pass}, {"deviation", c.deviation}, {"envelope", c.envelope}};
  };
  json j{{"connected", rep.connected},
         {"bipartite", rep.bipartite},
         {"degree_min", rep.degree_min},
         {"degree_max", rep.degree_max},
         {"edge_count", rep.edge_count},
         {"codegree_min", rep.codegree_min},
         {"codegree_max", rep.codegree_max},
         {"codegree_pairs", rep.codegree_pairs},
         {"envelope_constant", rep.envelope_constant},
         {"in_good_class", rep.in_good_class},
         {"checks",
          {{"non_bipartite", check(rep.non_bipartite_check)},
           {"diameter", check(rep.diameter_check)},
           {"degrees", check(rep.degree_check)},
           {"edge_total", check(rep.edge_count_check)},
           {"codegrees", check(rep.codegree_check)}}}};
  if (rep.diameter) j["diameter"] = *rep.diameter;
  else j["diameter"] = "disconnected";
  return j;
}

}  // namespace detail

/// One lemma-style verification row: what was compared, at which step
/// parameter, and whether the residual cleared its threshold.
struct CheckRow {
  std::string check;
  double param = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

inline std::string check_rows_csv(const std::vector<CheckRow>& rows,
                                  const std::string& banner) {
  std::string out = banner + "check,param,lhs,rhs,residual,threshold,pass\n";
  for (const auto& r : rows) {
    out += r.check + ',' + detail::fmt(r.param) + ',' + detail::fmt(r.lhs) + ',' +
           detail::fmt(r.rhs) + ',' + detail::fmt(r.residual) + ',' +
           detail::fmt(r.threshold) + ',' + (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

/// The lemma verification suite on one graph: exact identities, the
/// first-passage/position comparison, walk-ratio agreement, start-averaging
/// stability and the step-sum expansion of the hitting time.
inline std::vector<CheckRow> verify_lemma_checks(const Graph& g, const GnpSpec& spec,
                                                 std::uint64_t seed, int ell,
                                                 const Tolerances& tol = {}) {
  std::vector<CheckRow> rows;
  const std::size_t n = g.vertex_count();
  const double nd = static_cast<double>(n);
  const double p = spec.p;
  const int k = spec.k;
  RngStream rng(seed ^ 0x1e44a5ULL);
  auto pick = [&](Vertex avoid) {
    Vertex x = static_cast<Vertex>(rng.next_below(n - 1));
    if (x >= avoid) ++x;
    return x;
  };

  const Vertex v = static_cast<Vertex>(rng.next_below(n));
  const Vertex w = pick(v);
  Vertex w2 = pick(v);
  if (w2 == w) w2 = pick(v);
  auto h = hitting_vector(g, v, {tol.solve_tol, 2000});
  auto pi = stationary(g);

  {
    auto c = neighborhood_identity_check(g, v, h);
    rows.push_back({"neighbor_average", 0, c.lhs, c.rhs, c.abs_error, tol.identity_tol,
                    c.abs_error <= tol.identity_tol});
    const double lhs = 1.0 + c.lhs;
    const double rhs = 1.0 / pi.dist.values[v];
    rows.push_back({"mean_return_time", 0, lhs, rhs, std::abs(lhs - rhs), tol.identity_tol,
                    std::abs(lhs - rhs) <= tol.identity_tol});
  }

  {
    auto c = first_return_check(g, v, ell);
    rows.push_back({"first_return_decomposition", static_cast<double>(ell), c.lhs, c.rhs,
                    c.abs_error, 1e-10, c.abs_error <= 1e-10});
  }

  const int horizon = std::min<int>(20 * static_cast<int>(n), 4000);
  auto fp = first_passage_dist(g, w, v, horizon, k);
  {
    const double resid = shifted_expectation_check(fp, ell, h.values[w]);
    const double threshold = 1e-10 + fp.tail_expectation_bound;
    rows.push_back({"shifted_expectation", static_cast<double>(ell),
                    fp.truncated_expectation(), h.values[w], resid, threshold,
                    resid <= threshold});
  }

  {
    // P[T = i] against the plain position probability, i <= 3k+1.
    auto mu = delta_at(n, w);
    double worst = 0.0;
    for (int i = 1; i <= 3 * k + 1; ++i) {
      mu = step(g, mu);
      worst = std::max(worst, std::abs(fp.prob_at(i) - mu.values[v]));
    }
    const double threshold = tol.fit_max / (p * p * nd * nd);
    rows.push_back({"first_passage_vs_position", 3.0 * k + 1, worst, 0.0, worst, threshold,
                    worst <= threshold});
  }

  {
    // Walk-count ratios against position probabilities, i <= 3k+1.
    auto mu = delta_at(n, w);
    double worst = 0.0;
    for (int i = 1; i <= 3 * k + 1; ++i) {
      mu = step(g, mu);
      worst = std::max(worst, std::abs(mu.values[v] - walk_count_ratio(g, w, v, i)));
    }
    const double threshold = tol.fit_max * error_envelope(n, p, k, Envelope::ratio_gap);
    rows.push_back({"position_vs_walk_ratio", 3.0 * k + 1, worst, 0.0, worst, threshold,
                    worst <= threshold});
  }

  {
    // Hitting averaged over evolved starts barely remembers the start.
    const int mix_ell = 3 * k + 2;
    const double lhs = averaged_hitting(distribution_at(g, w, mix_ell), h);
    const double rhs = averaged_hitting(distribution_at(g, w2, mix_ell), h);
    const double resid = std::abs(lhs - rhs);
    const double threshold = tol.fit_max * error_envelope(n, p, k, Envelope::prob);
    rows.push_back({"averaged_start_difference", static_cast<double>(mix_ell), lhs, rhs,
                    resid, threshold, resid <= threshold});
  }

  {
    // H_wv = ell + H_{mu_ell v} - (2m/d(v)) sum_{i<ell} mu_{i,w}(v), up to
    // an O(1/pn) scale error.
    double mu_sum = 0.0;
    auto mu = delta_at(n, w);
    for (int i = 1; i <= ell - 1; ++i) {
      mu = step(g, mu);
      mu_sum += mu.values[v];
    }
    mu = step(g, mu);  // now at ell steps
    const double lhs = h.values[w];
    const double rhs = ell + averaged_hitting(mu, h) -
                       2.0 * static_cast<double>(g.edge_count()) / g.degree(v) * mu_sum;
    const double resid = std::abs(lhs - rhs);
    const double threshold = tol.fit_max * error_envelope(n, p, k, Envelope::inv_pn);
    rows.push_back({"step_sum_expansion", static_cast<double>(ell), lhs, rhs, resid,
                    threshold, resid <= threshold});
  }

  {
    // Pairwise difference against its step expansion.
    auto c = mixed_difference_check(g, w2, v, w, k, {tol.solve_tol, 2000});
    const double threshold = tol.fit_max * error_envelope(n, p, k, Envelope::prob);
    rows.push_back({"pairwise_difference_expansion", 3.0 * k + 1, c.lhs, c.rhs, c.residual,
                    threshold, c.residual <= threshold});
  }

  if (!is_bipartite(g)) {
    // Entrywise uniformity of the walk law at 3k+2 steps.
    const int mix_ell = 3 * k + 2;
    auto mu = distribution_at(g, w, mix_ell);
    double worst = 0.0;
    for (double x : mu.values) worst = std::max(worst, std::abs(x - 1.0 / nd));
    const double threshold =
        tol.fit_max * std::sqrt(std::log(nd)) / (std::sqrt(p) * std::pow(nd, 1.5));
    rows.push_back({"position_uniformity", static_cast<double>(mix_ell), worst, 0.0, worst,
                    threshold, worst <= threshold});
  }

  if (p >= std::log(nd) / std::sqrt(nd)) {
    // Two-step return mass sits near 1/(pn); the law away from the start is
    // near 1/n from two steps on (three at the start vertex).
    auto mu2 = distribution_at(g, w, 2);
    {
      const double lhs = mu2.values[w];
      const double rhs = 1.0 / (p * nd);
      const double resid = std::abs(lhs - rhs);
      const double threshold = tol.fit_max * error_envelope(n, p, k, Envelope::ratio_gap);
      rows.push_back({"two_step_return_mass", 2.0, lhs, rhs, resid, threshold,
                      resid <= threshold});
    }
    {
      double worst = 0.0;
      for (Vertex x = 0; x < n; ++x)
        if (x != w) worst = std::max(worst, std::abs(mu2.values[x] - 1.0 / nd));
      auto mu3 = step(g, mu2);
      for (double x : mu3.values) worst = std::max(worst, std::abs(x - 1.0 / nd));
      const double threshold =
          tol.fit_max * std::sqrt(std::log(nd)) / (p * std::pow(nd, 1.5));
      rows.push_back({"short_step_uniformity", 3.0, worst, 0.0, worst, threshold,
                      worst <= threshold});
    }
  }

  {
    auto bound = hitting_time_bound_check(g, spec, 50, seed ^ 0xb0cUL, {tol.solve_tol, 2000});
    const double scale_threshold = tol.fit_max;
    rows.push_back({"hitting_scale_ratio", static_cast<double>(k), bound.max_h_ratio,
                    bound.max_dev_ratio, std::max(bound.max_h_ratio, bound.max_dev_ratio),
                    scale_threshold,
                    std::max(bound.max_h_ratio, bound.max_dev_ratio) <= scale_threshold});
  }

  return rows;
}

struct MixRow {
  std::size_t n;
  double p;
  int ell;
  Vertex w;
  double gap;
  double envelope;
  double ratio;
};

inline std::vector<MixRow> mixing_rows(const Graph& g, double p, Vertex w, int max_ell) {
  std::vector<MixRow> rows;
  auto st = stationary(g);
  if (!st.aperiodic) throw std::invalid_argument("mixing_rows: bipartite graph");
  auto mu = delta_at(g.vertex_count(), w);
  for (int ell = 1; ell <= max_ell; ++ell) {
    mu = step(g, mu);
    const double gap = l1_gap(mu.values, st.dist.values);
    const double env = mixing_envelope(g.vertex_count(), p, ell);
    rows.push_back({g.vertex_count(), p, ell, w, gap, env, gap / env});
  }
  return rows;
}

inline std::string mixing_rows_csv(const std::vector<MixRow>& rows, const std::string& banner) {
  std::string out = banner + "n,p,ell,w,gap,envelope,ratio\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + detail::fmt(r.p) + ',' + std::to_string(r.ell) + ',' +
           std::to_string(r.w) + ',' + detail::fmt(r.gap) + ',' + detail::fmt(r.envelope) +
           ',' + detail::fmt(r.ratio) + '\n';
  }
  return out;
}

inline std::string predictions_csv(const std::vector<PredictionRecord>& records,
                                   const std::string& banner) {
  std::string out = banner +
      "w,v,dist,exact,pred_prob,pred_walks,pred_diam2,env_prob,env_walks,"
      "residual_prob,residual_walks,residual_diam2,in_regime,in_good_class\n";
  for (const auto& r : records) {
    out += std::to_string(r.w) + ',' + std::to_string(r.v) + ',';
    if (r.error.empty()) {
      out += std::to_string(r.dist_wv) + ',' + detail::fmt(r.exact) + ',' +
             detail::fmt(r.pred_prob) + ',' + detail::fmt(r.pred_walks) + ',';
      out += r.pred_diam2 ? detail::fmt(*r.pred_diam2) : std::string();
      out += ',' + detail::fmt(r.env_prob) + ',' + detail::fmt(r.env_walks) + ',' +
             detail::fmt(r.residual_prob) + ',' + detail::fmt(r.residual_walks) + ',';
      out += r.residual_diam2 ? detail::fmt(*r.residual_diam2) : std::string();
      out += ',';
      out += r.in_regime ? "true" : "false";
      out += ',';
      out += r.in_good_class ? "true" : "false";
    } else {
      out += ",,,,,,,,,,,";
    }
    out += '\n';
  }
  return out;
}

struct RunResult {
  bool pass = true;
  std::map<std::string, bool> suite_pass;

  // Aggregates for sweep rows.
  bool in_good_class = false;
  double c_prob = 0.0;
  double c_walks = 0.0;
  double c_diam2_d1 = 0.0;
  double c_diam2_d2 = 0.0;
  double c_mix = 0.0;
  double max_identity_residual = 0.0;
  double lambda1_over_pn = 0.0;
  double extreme_over_sqrt_pn = 0.0;
  double mean_zero_ratio = 0.0;
  std::string error;
};

/// Run the selected verification suites against one graph and write the
/// machine-readable reports. Returns pass/fail per suite; pass overall iff
/// every enabled suite passed.
inline RunResult run(const ExperimentConfig& config) {
  config.validate();
  RunResult result;
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);

  {
    json j = config;
    detail::write_text(dir / "config.json", j.dump(2) + "\n");
  }

  Graph g = config.graph_file.empty() ? sample_gnp(config.gnp)
                                      : load_edge_list(config.graph_file);
  const GnpSpec& spec = config.gnp;
  const std::size_t n = g.vertex_count();
  const double pn = spec.p * static_cast<double>(n);
  const std::string banner = detail::file_banner(config);

  auto record_suite = [&](const std::string& name, bool pass) {
    result.suite_pass[name] = pass;
    if (!pass) result.pass = false;
  };

  if (config.suites.contains("structure")) {
    auto rep = structural_report(g, spec, 0, config.envelope_constant);
    result.in_good_class = rep.in_good_class;
    json j = detail::to_json_report(rep);
    j["version"] = kVersion;
    j["seed"] = config.seed;
    detail::write_text(dir / "structure.json", j.dump(2) + "\n");
    record_suite("structure", rep.in_good_class);
  }

  if (config.suites.contains("spectrum")) {
    bool pass = true;
    json j;
    try {
      auto summary = spectral_summary(g, config.tol.eig_tol);
      const double l1_ratio = summary.lambda1 / pn;
      const double extreme =
          std::max(std::abs(summary.lambda2), std::abs(summary.lambda_min)) / std::sqrt(pn);
      const double mz = mean_zero_operator_check(g, spec.p, config.spectrum_trials,
                                                 config.seed ^ 0x3c0ffeeULL);
      result.lambda1_over_pn = l1_ratio;
      result.extreme_over_sqrt_pn = extreme;
      result.mean_zero_ratio = mz;
      pass = std::abs(l1_ratio - 1.0) <= config.tol.lambda1_band &&
             extreme <= config.tol.lambda2_ratio_max &&
             mz <= config.tol.mean_zero_ratio_max;
      j = json{{"lambda1", summary.lambda1},
               {"lambda2", summary.lambda2},
               {"lambda_min", summary.lambda_min},
               {"residual1", summary.residual1},
               {"residual2", summary.residual2},
               {"residual_min", summary.residual_min},
               {"phi", summary.phi},
               {"phi_deviation", summary.phi_deviation},
               {"lambda1_over_pn", l1_ratio},
               {"extreme_over_sqrt_pn", extreme},
               {"mean_zero_max_ratio", mz},
               {"trials", config.spectrum_trials},
               {"pass", pass}};
    } catch (const std::exception& e) {
      pass = false;
      j = json{{"error", e.what()}, {"pass", false}};
    }
    j["version"] = kVersion;
    j["seed"] = config.seed;
    detail::write_text(dir / "spectrum.json", j.dump(2) + "\n");
    record_suite("spectrum", pass);
  }

  if (config.suites.contains("mixing")) {
    bool pass = true;
    std::vector<MixRow> rows;
    try {
      RngStream rng(config.seed ^ 0x31337ULL);
      for (int s = 0; s < 3; ++s) {
        const Vertex w = static_cast<Vertex>(rng.next_below(n));
        auto part = mixing_rows(g, spec.p, w, config.mixing_max_steps);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      for (const auto& r : rows) result.c_mix = std::max(result.c_mix, r.ratio);
      pass = result.c_mix <= config.tol.fit_max;
    } catch (const std::exception&) {
      pass = false;
    }
    detail::write_text(dir / "mixing.csv", mixing_rows_csv(rows, banner));
    record_suite("mixing", pass);
  }

  if (config.suites.contains("lemmas")) {
    bool pass = true;
    std::vector<CheckRow> rows;
    try {
      rows = verify_lemma_checks(g, spec, config.seed, config.lemma_ell, config.tol);
      for (const auto& r : rows) {
        if (!r.pass) pass = false;
        if (r.check == "neighbor_average" || r.check == "mean_return_time")
          result.max_identity_residual = std::max(result.max_identity_residual, r.residual);
      }
    } catch (const std::exception&) {
      pass = false;
    }
    detail::write_text(dir / "lemmas.csv", check_rows_csv(rows, banner));
    record_suite("lemmas", pass);
  }

  if (config.suites.contains("formulas")) {
    bool pass = true;
    std::vector<PredictionRecord> records;
    try {
      auto pairs = detail::sample_pairs(n, config.pair_count, config.seed);
      CompareOptions opts;
      opts.envelope_c = config.envelope_constant;
      opts.hitting.tol = config.tol.solve_tol;
      records = compare_suite(g, spec, pairs, opts);
      for (const auto& r : records) {
        if (!r.error.empty()) { pass = false; continue; }
        result.c_prob = std::max(result.c_prob, r.residual_prob / r.env_prob);
        result.c_walks = std::max(result.c_walks, r.residual_walks / r.env_walks);
        if (r.residual_diam2) {
          auto& slot = r.dist_wv == 1 ? result.c_diam2_d1 : result.c_diam2_d2;
          slot = std::max(slot, *r.residual_diam2 / r.env_walks);
        }
      }
      pass = pass && result.c_prob <= config.tol.fit_max &&
             result.c_walks <= config.tol.fit_max &&
             result.c_diam2_d1 <= config.tol.fit_max &&
             result.c_diam2_d2 <= config.tol.fit_max;
    } catch (const std::exception&) {
      pass = false;
    }
    detail::write_text(dir / "predictions.csv", predictions_csv(records, banner));
    record_suite("formulas", pass);
  }

  if (config.suites.contains("montecarlo")) {
    bool pass = true;
    json pairs_json = json::array();
    try {
      auto pairs = detail::sample_pairs(n, config.mc_pairs, config.seed ^ 0x6dc0deULL);
      std::map<Vertex, HittingVector> cache;
      for (const auto& [w, v] : pairs) {
        auto it = cache.find(v);
        if (it == cache.end())
          it = cache.emplace(v, hitting_vector(g, v, {config.tol.solve_tol, 2000})).first;
        auto est = simulate_hitting(g, w, v, config.mc_trials, config.seed, 0, config.threads);
        const double exact = it->second.values[w];
        const double sigmas =
            est.std_error > 0 ? std::abs(est.mean - exact) / est.std_error : 0.0;
        const bool ok = sigmas <= config.tol.mc_sigma;
        pass = pass && ok;
        pairs_json.push_back(json{{"w", w},
                                  {"v", v},
                                  {"exact", exact},
                                  {"mean", est.mean},
                                  {"std_error", est.std_error},
                                  {"trials", est.trials},
                                  {"capped_trials", est.capped_trials},
                                  {"cap", est.cap},
                                  {"sigmas", sigmas},
                                  {"pass", ok}});
      }
    } catch (const std::exception& e) {
      pass = false;
      pairs_json.push_back(json{{"error", e.what()}});
    }
    json j{{"pairs", pairs_json}, {"pass", pass}, {"version", kVersion}, {"seed", config.seed}};
    detail::write_text(dir / "mc.json", j.dump(2) + "\n");
    record_suite("montecarlo", pass);
  }

  return result;
}

/// Run a list of configs; one aggregate CSV row per config, failures
/// recorded in-row and the sweep continues.
inline std::vector<RunResult> sweep(const std::vector<ExperimentConfig>& configs,
                                    const std::string& out_csv) {
  if (configs.empty()) throw std::invalid_argument("sweep: empty config list");
  std::string csv =
      "n,p,k,seed,status,in_good_class,c_prob,c_walks,c_diam2_d1,c_diam2_d2,c_mix,"
      "max_identity_residual,lambda1_over_pn,extreme_over_sqrt_pn,mean_zero_ratio\n";
  std::vector<RunResult> results;
  for (const auto& config : configs) {
    RunResult r;
    std::string status = "pass";
    try {
      r = run(config);
      if (!r.pass) status = "fail";
    } catch (const std::exception& e) {
      r.pass = false;
      r.error = e.what();
      status = "error";
    }
    results.push_back(r);
    csv += std::to_string(config.gnp.n) + ',' + detail::fmt(config.gnp.p) + ',' +
           std::to_string(config.gnp.k) + ',' + std::to_string(config.gnp.seed) + ',' +
           status + ',' + (r.in_good_class ? "true" : "false") + ',' +
           detail::fmt(r.c_prob) + ',' + detail::fmt(r.c_walks) + ',' +
           detail::fmt(r.c_diam2_d1) + ',' + detail::fmt(r.c_diam2_d2) + ',' +
           detail::fmt(r.c_mix) + ',' + detail::fmt(r.max_identity_residual) + ',' +
           detail::fmt(r.lambda1_over_pn) + ',' + detail::fmt(r.extreme_over_sqrt_pn) + ',' +
           detail::fmt(r.mean_zero_ratio) + '\n';
  }
  if (!out_csv.empty()) detail::write_text(out_csv, csv);
  return results;
}

}  // namespace hitwalk
