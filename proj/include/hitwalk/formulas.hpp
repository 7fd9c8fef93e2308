#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hitwalk/gnp.hpp"
#include "hitwalk/graph.hpp"
#include "hitwalk/hitting.hpp"
#include "hitwalk/markov.hpp"
#include "hitwalk/structure.hpp"

namespace hitwalk {

/// Theoretical error scales, evaluated with constant 1; sweeps fit the
/// constant empirically.
enum class Envelope {
  prob,       // sqrt(log n) / sqrt(pn)
  walks,      // sqrt(log n) / (p^{3/2} sqrt(n))
  inv_pn,     // 1 / (pn)
  ratio_gap,  // sqrt(log n) / (p^{3/2} n^{3/2})
};

inline double error_envelope(std::size_t n, double p, int /*k*/, Envelope form) {
  if (n < 2 || p <= 0.0 || p > 1.0)
    throw std::invalid_argument("error_envelope: need n >= 2 and 0 < p <= 1");
  const double nd = static_cast<double>(n);
  const double root_log = std::sqrt(std::log(nd));
  switch (form) {
    case Envelope::prob: return root_log / std::sqrt(p * nd);
    case Envelope::walks: return root_log / (std::pow(p, 1.5) * std::sqrt(nd));
    case Envelope::inv_pn: return 1.0 / (p * nd);
    case Envelope::ratio_gap: return root_log / (std::pow(p, 1.5) * std::pow(nd, 1.5));
  }
  throw std::invalid_argument("error_envelope: unknown form");
}

namespace detail {

/// Per-step probabilities of being at v, from the neighborhood-uniform start
/// and from w: sums[i-1] = mu_{i,start}(v) for i = 1..imax. The neighborhood
/// average over u of mu_{i,u}(v) equals the evolution of the uniform start
/// over N(v) by linearity, so one evolution covers the whole inner sum.
inline std::vector<double> at_target_series(const Graph& g, DenseDistribution d, Vertex v,
                                            int imax) {
  std::vector<double> out;
  out.reserve(imax);
  for (int i = 1; i <= imax; ++i) {
    d = step(g, d);
    out.push_back(d.values[v]);
  }
  return out;
}

}  // namespace detail

/// Hitting-time predictor in step-probability form:
///   2m/d(v) - 1 + (2m/d(v)) * (1/|N(v)|) * sum_{u in N(v)} sum_{i<=3k+1}
///       (mu_{i,u}(v) - mu_{i,w}(v)).
inline double predict_prob_form(const Graph& g, Vertex w, Vertex v, int k) {
  if (w == v) throw std::invalid_argument("predict_prob_form: w == v");
  if (!is_connected(g)) throw std::invalid_argument("predict_prob_form: graph disconnected");
  const int imax = 3 * k + 1;
  const double base = 2.0 * static_cast<double>(g.edge_count()) / g.degree(v) - 1.0;
  auto nbr = detail::at_target_series(
      g, uniform_over(g.vertex_count(), g.neighbors(v)), v, imax);
  auto from_w = detail::at_target_series(g, delta_at(g.vertex_count(), w), v, imax);
  double corr = 0.0;
  for (int i = 0; i < imax; ++i) corr += nbr[i] - from_w[i];
  return base + (base + 1.0) * corr;
}

/// Same structure with walk-count ratios W_i(u,v)/W_i(u) in place of the
/// step probabilities.
inline double predict_walks_form(const Graph& g, Vertex w, Vertex v, int k) {
  if (w == v) throw std::invalid_argument("predict_walks_form: w == v");
  if (!is_connected(g)) throw std::invalid_argument("predict_walks_form: graph disconnected");
  const int imax = 3 * k + 1;
  const double base = 2.0 * static_cast<double>(g.edge_count()) / g.degree(v) - 1.0;
  auto table = walk_ratio_table(g, v, imax);
  auto nb = g.neighbors(v);
  double corr = 0.0;
  for (int i = 0; i < imax; ++i) {
    double mean_u = 0.0;
    for (Vertex u : nb) mean_u += table[i][u];
    mean_u /= static_cast<double>(nb.size());
    corr += mean_u - table[i][w];
  }
  return base + (base + 1.0) * corr;
}

/// Diameter-2 closed form: 2m/d(v) - 1 + (1/p) when dist(w,v) = 2.
inline double predict_diam2_form(const Graph& g, Vertex w, Vertex v, double p) {
  if (w == v) throw std::invalid_argument("predict_diam2_form: w == v");
  if (p <= 0.0) throw std::invalid_argument("predict_diam2_form: p must be positive");
  auto dist = bfs_distances(g, v);
  if (dist[w] != 1 && dist[w] != 2)
    throw std::invalid_argument("predict_diam2_form: formula out of scope, dist(w,v) > 2");
  const double base = 2.0 * static_cast<double>(g.edge_count()) / g.degree(v) - 1.0;
  return base + (dist[w] == 2 ? 1.0 / p : 0.0);
}

struct MixedDifference {
  double lhs = 0.0;  // H_wv - H_uv from the exact solve
  double rhs = 0.0;  // (2m/d(v)) sum_i (mu_{i,u}(v) - mu_{i,w}(v))
  double residual = 0.0;
};

/// Difference of hitting times toward v from two starts against its
/// step-probability expansion over i <= 3k+1.
inline MixedDifference mixed_difference_check(const Graph& g, Vertex u, Vertex v, Vertex w,
                                              int k, const HittingOptions& opts = {}) {
  if (u == v || w == v) throw std::invalid_argument("mixed_difference_check: start equals target");
  const int imax = 3 * k + 1;
  auto h = hitting_vector(g, v, opts);
  MixedDifference out;
  out.lhs = h.values[w] - h.values[u];
  auto from_u = detail::at_target_series(g, delta_at(g.vertex_count(), u), v, imax);
  auto from_w = detail::at_target_series(g, delta_at(g.vertex_count(), w), v, imax);
  double s = 0.0;
  for (int i = 0; i < imax; ++i) s += from_u[i] - from_w[i];
  out.rhs = 2.0 * static_cast<double>(g.edge_count()) / g.degree(v) * s;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

struct PredictionRecord {
  Vertex w = 0;
  Vertex v = 0;
  std::int32_t dist_wv = 0;
  double exact = 0.0;
  double pred_prob = 0.0;
  double pred_walks = 0.0;
  std::optional<double> pred_diam2;
  double env_prob = 0.0;
  double env_walks = 0.0;
  double residual_prob = 0.0;
  double residual_walks = 0.0;
  std::optional<double> residual_diam2;
  bool in_regime = false;
  bool in_good_class = false;
  std::string error;

  // Route-consistency data: the identity
  //   pred_walks - pred_prob = (2m/d) sum_i (term_walks_i - term_prob_i)
  // bounds |pred_walks - pred_prob| by walks_prob_gap_bound termwise.
  double walks_prob_gap = 0.0;
  double walks_prob_gap_bound = 0.0;
  double term_gap_max = 0.0;  // max_i |ratio_i(w) - mu_{i,w}(v)|
};

struct CompareOptions {
  std::optional<int> k;          // default: smallest k admitted by (n, p)
  std::size_t codegree_pairs = 0;
  double envelope_c = 4.0;
  HittingOptions hitting;
  std::size_t* solves_out = nullptr;  // observed linear-solve count (caching contract)
};

/// Batch driver over the predictors. Hitting vectors, walk tables and
/// neighborhood series are cached per target, so pair lists sharing targets
/// cost one solve per distinct target. Per-pair errors are recorded in the
/// record and the batch continues.
inline std::vector<PredictionRecord> compare_suite(const Graph& g, const GnpSpec& spec,
                                                   const std::vector<Edge>& pairs,
                                                   const CompareOptions& opts = {}) {
  const std::size_t n = g.vertex_count();
  const int k = opts.k.value_or(GnpSpec::fitting_k(n, spec.p));
  const int imax = 3 * k + 1;
  GnpSpec flagged = spec;
  flagged.k = k;
  const bool in_regime = flagged.in_theorem_range();
  const auto report = structural_report(g, flagged, opts.codegree_pairs, opts.envelope_c);
  const double env_prob = error_envelope(n, spec.p, k, Envelope::prob);
  const double env_walks = error_envelope(n, spec.p, k, Envelope::walks);
  const double base_factor = 2.0 * static_cast<double>(g.edge_count());

  struct TargetCache {
    HittingVector h;
    std::vector<std::int32_t> dist;
    std::vector<double> nbr_prob_series;      // mean over N(v) of mu_{i,u}(v)
    std::vector<double> nbr_ratio_series;     // mean over N(v) of ratio_i(u)
    std::vector<std::vector<double>> ratios;  // walk_ratio_table toward v
    double base = 0.0;
    std::string error;
  };
  std::map<Vertex, TargetCache> cache;

  std::vector<PredictionRecord> records;
  records.reserve(pairs.size());
  for (const auto& [w, v] : pairs) {
    PredictionRecord rec;
    rec.w = w;
    rec.v = v;
    rec.in_regime = in_regime;
    rec.in_good_class = report.in_good_class;
    rec.env_prob = env_prob;
    rec.env_walks = env_walks;
    if (w == v || w >= n || v >= n) {
      rec.error = "invalid pair";
      records.push_back(rec);
      continue;
    }
    try {
      auto it = cache.find(v);
      if (it == cache.end()) {
        TargetCache tc;
        tc.h = hitting_vector(g, v, opts.hitting);
        if (opts.solves_out) ++*opts.solves_out;
        tc.dist = bfs_distances(g, v);
        tc.nbr_prob_series = detail::at_target_series(
            g, uniform_over(n, g.neighbors(v)), v, imax);
        tc.ratios = walk_ratio_table(g, v, imax);
        tc.nbr_ratio_series.resize(imax);
        for (int i = 0; i < imax; ++i) {
          double acc = 0.0;
          for (Vertex u : g.neighbors(v)) acc += tc.ratios[i][u];
          tc.nbr_ratio_series[i] = acc / g.degree(v);
        }
        tc.base = base_factor / g.degree(v) - 1.0;
        it = cache.emplace(v, std::move(tc)).first;
      }
      const TargetCache& tc = it->second;
      rec.dist_wv = tc.dist[w];
      rec.exact = tc.h.values[w];

      auto from_w = detail::at_target_series(g, delta_at(n, w), v, imax);
      double corr_prob = 0.0, corr_walks = 0.0, gap_bound = 0.0;
      for (int i = 0; i < imax; ++i) {
        const double term_prob = tc.nbr_prob_series[i] - from_w[i];
        const double term_walks = tc.nbr_ratio_series[i] - tc.ratios[i][w];
        corr_prob += term_prob;
        corr_walks += term_walks;
        gap_bound += std::abs(term_walks - term_prob);
        rec.term_gap_max = std::max(rec.term_gap_max, std::abs(tc.ratios[i][w] - from_w[i]));
      }
      rec.pred_prob = tc.base + (tc.base + 1.0) * corr_prob;
      rec.pred_walks = tc.base + (tc.base + 1.0) * corr_walks;
      rec.residual_prob = std::abs(rec.exact - rec.pred_prob);
      rec.residual_walks = std::abs(rec.exact - rec.pred_walks);
      rec.walks_prob_gap = std::abs(rec.pred_walks - rec.pred_prob);
      rec.walks_prob_gap_bound = (tc.base + 1.0) * gap_bound;
      if (rec.dist_wv == 1 || rec.dist_wv == 2) {
        rec.pred_diam2 = tc.base + (rec.dist_wv == 2 ? 1.0 / spec.p : 0.0);
        rec.residual_diam2 = std::abs(rec.exact - *rec.pred_diam2);
      }
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    records.push_back(rec);
  }
  return records;
}

/// Largest residual/envelope quotient over usable records: the empirically
/// fitted constant for one prediction form.
inline double fitted_constant(const std::vector<PredictionRecord>& records,
                              double PredictionRecord::*residual, double envelope) {
  double c = 0.0;
  for (const auto& r : records)
    if (r.error.empty()) c = std::max(c, r.*residual / envelope);
  return c;
}

}  // namespace hitwalk
