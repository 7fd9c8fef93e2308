#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hitwalk/graph.hpp"

namespace hitwalk {

/// Law of the walk's position. origin is the start vertex when the
/// distribution arose from a single-vertex start; empty for the stationary
/// distribution or mixed starts.
struct DenseDistribution {
  std::vector<double> values;
  int step_index = 0;
  std::optional<Vertex> origin;

  double mass() const { return std::accumulate(values.begin(), values.end(), 0.0); }

  void validate() const {
    const double n = static_cast<double>(values.size());
    if (std::abs(mass() - 1.0) > 1e-12 * std::max(1.0, n))
      throw std::logic_error("distribution mass drifted from 1");
    for (double x : values)
      if (x < 0.0) throw std::logic_error("negative probability entry");
  }
};

inline DenseDistribution delta_at(std::size_t n, Vertex w) {
  DenseDistribution d;
  d.values.assign(n, 0.0);
  d.values[w] = 1.0;
  d.origin = w;
  return d;
}

inline DenseDistribution uniform_over(std::size_t n, std::span<const Vertex> support) {
  if (support.empty()) throw std::invalid_argument("uniform_over: empty support");
  DenseDistribution d;
  d.values.assign(n, 0.0);
  const double w = 1.0 / static_cast<double>(support.size());
  for (Vertex v : support) d.values[v] = w;
  return d;
}

/// One application of the degree-normalized transition operator:
/// out(x) = sum over u in N(x) of d(u)'s share of its mass.
inline DenseDistribution step(const Graph& g, const DenseDistribution& d) {
  const std::size_t n = g.vertex_count();
  if (d.values.size() != n) throw std::invalid_argument("step: dimension mismatch");
  DenseDistribution out;
  out.values.assign(n, 0.0);
  std::vector<double> share(n);
  for (Vertex u = 0; u < n; ++u) {
    const auto deg = g.degree(u);
    if (deg == 0 && d.values[u] != 0.0)
      throw std::invalid_argument("step: mass on zero-degree vertex");
    share[u] = deg ? d.values[u] / deg : 0.0;
  }
  for (Vertex x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Vertex u : g.neighbors(x)) acc += share[u];
    out.values[x] = acc;
  }
  out.step_index = d.step_index + 1;
  out.origin = d.origin;
  if (std::abs(out.mass() - d.mass()) > 1e-12 * std::max<double>(1.0, n))
    throw std::logic_error("step: mass not conserved");
  return out;
}

struct Stationary {
  DenseDistribution dist;
  bool aperiodic = false;  // false on bipartite graphs: pi exists but mu_l does not converge
};

/// pi(v) = d(v) / 2m. Requires a connected graph; on bipartite inputs the
/// vector is still returned with aperiodic = false.
inline Stationary stationary(const Graph& g) {
  if (!is_connected(g)) throw std::invalid_argument("stationary: graph disconnected");
  Stationary s;
  s.dist.values.resize(g.vertex_count());
  const double twom = 2.0 * static_cast<double>(g.edge_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    s.dist.values[v] = static_cast<double>(g.degree(v)) / twom;
  s.aperiodic = !is_bipartite(g);
  return s;
}

inline DenseDistribution evolve(const Graph& g, DenseDistribution d, int steps) {
  for (int i = 0; i < steps; ++i) d = step(g, d);
  return d;
}

/// mu_{ell,w}: law of the walk after ell steps from w.
inline DenseDistribution distribution_at(const Graph& g, Vertex w, int ell) {
  if (!is_connected(g)) throw std::invalid_argument("distribution_at: graph disconnected");
  return evolve(g, delta_at(g.vertex_count(), w), ell);
}

/// Entrywise absolute sum ||x - y||; twice the classical TV distance.
inline double l1_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

/// Mixing envelope (log n)^{(ell-1)/2} sqrt(n) / (pn)^{ell/2}, constant 1.
inline double mixing_envelope(std::size_t n, double p, int ell) {
  const double nd = static_cast<double>(n);
  const double logn = std::log(nd);
  return std::pow(logn, (ell - 1) / 2.0) * std::sqrt(nd) / std::pow(p * nd, ell / 2.0);
}

struct TvGap {
  double gap = 0.0;
  double envelope = 0.0;
  double bound_ratio = 0.0;
};

/// ||mu_{ell,w} - pi|| against the mixing envelope at (n, p, ell). Refused on
/// bipartite graphs, where the walk's law does not converge.
inline TvGap tv_gap(const Graph& g, Vertex w, int ell, double p) {
  auto st = stationary(g);
  if (!st.aperiodic) throw std::invalid_argument("tv_gap: bipartite graph, no limit");
  auto mu = distribution_at(g, w, ell);
  TvGap out;
  out.gap = l1_gap(mu.values, st.dist.values);
  out.envelope = mixing_envelope(g.vertex_count(), p, ell);
  out.bound_ratio = out.gap / out.envelope;
  return out;
}

/// Non-negative vector with max mantissa entry kept near 1 by power-of-two
/// rescaling; entry i represents mantissa[i] * exp(log_scale). Ratios of
/// entries are scale-free, which is all walk counts are used for.
struct LogScaledVector {
  std::vector<double> mantissa;
  double log_scale = 0.0;

  void renormalize() {
    double mx = 0.0;
    for (double x : mantissa) mx = std::max(mx, x);
    if (mx == 0.0) return;
    if (mx >= 0.5 && mx <= 2.0) return;
    // Exact power-of-two scaling: mantissa ratios are untouched.
    const double scale = std::exp2(std::floor(std::log2(mx)));
    for (double& x : mantissa) x /= scale;
    log_scale += std::log(scale);
  }

  double log_entry(std::size_t i) const {
    return std::log(mantissa[i]) + log_scale;
  }
};

inline LogScaledVector scaled_unit(std::size_t n, Vertex w) {
  LogScaledVector v;
  v.mantissa.assign(n, 0.0);
  v.mantissa[w] = 1.0;
  return v;
}

inline LogScaledVector scaled_ones(std::size_t n) {
  LogScaledVector v;
  v.mantissa.assign(n, 1.0);
  return v;
}

/// One adjacency matvec with renormalization: counts walks one step longer.
inline void walk_step(const Graph& g, LogScaledVector& v) {
  const std::size_t n = g.vertex_count();
  std::vector<double> out(n, 0.0);
  for (Vertex x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Vertex u : g.neighbors(x)) acc += v.mantissa[u];
    out[x] = acc;
  }
  v.mantissa = std::move(out);
  v.renormalize();
}

/// W_i(w, v) / W_i(w): the share of length-i walks from w that end at v.
/// Exact up to floating renormalization; never overflows.
inline double walk_count_ratio(const Graph& g, Vertex w, Vertex v, int i) {
  if (g.vertex_count() == 0) throw std::invalid_argument("walk_count_ratio: empty graph");
  if (i < 0) throw std::invalid_argument("walk_count_ratio: negative length");
  if (i == 0) return w == v ? 1.0 : 0.0;
  LogScaledVector vec = scaled_unit(g.vertex_count(), w);
  for (int s = 0; s < i; ++s) walk_step(g, vec);
  double total = 0.0;
  for (double x : vec.mantissa) total += x;
  if (total == 0.0) throw std::invalid_argument("walk_count_ratio: no walks (isolated start)");
  return vec.mantissa[v] / total;
}

/// Walk-count ratio tables toward a fixed target v, for all sources at once:
/// ratios[i-1][u] = W_i(u, v) / W_i(u) for i = 1..imax. Uses the symmetry
/// W_i(u, v) = W_i(v, u), so two scaled evolutions (from e_v and from the
/// all-ones vector) cover every source.
inline std::vector<std::vector<double>> walk_ratio_table(const Graph& g, Vertex v, int imax) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<double>> ratios;
  ratios.reserve(imax);
  LogScaledVector to_v = scaled_unit(n, v);
  LogScaledVector totals = scaled_ones(n);
  for (int i = 1; i <= imax; ++i) {
    walk_step(g, to_v);
    walk_step(g, totals);
    std::vector<double> row(n, 0.0);
    const double ls = to_v.log_scale - totals.log_scale;
    for (Vertex u = 0; u < n; ++u) {
      if (totals.mantissa[u] == 0.0) continue;  // isolated vertex: no walks
      row[u] = to_v.mantissa[u] / totals.mantissa[u] * std::exp(ls);
    }
    ratios.push_back(std::move(row));
  }
  return ratios;
}

}  // namespace hitwalk
