#pragma once

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hitwalk/gnp.hpp"
#include "hitwalk/graph.hpp"
#include "hitwalk/markov.hpp"
#include "hitwalk/rng.hpp"

namespace hitwalk {

struct HittingVector {
  Vertex target = 0;
  std::vector<double> values;  // values[target] == 0
  double solve_residual = 0.0;
  enum class Method { dense, iterative } method = Method::dense;
};

struct HittingOptions {
  double tol = 1e-10;          // max-norm residual of (I - Q)h = 1
  std::size_t dense_limit = 2000;
  int max_iterations = 20000;  // iterative path
};

namespace detail {

/// Max-norm residual of the absorbing system, recomputed straight from the
/// adjacency so it does not depend on how h was obtained:
/// r(u) = h(u) - 1 - mean over N(u)\{v} of h.
inline double absorbing_residual(const Graph& g, Vertex v, const std::vector<double>& h) {
  double worst = 0.0;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (u == v) continue;
    double acc = 0.0;
    for (Vertex x : g.neighbors(u))
      if (x != v) acc += h[x];
    const double r = h[u] - 1.0 - acc / g.degree(u);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace detail

/// Expected hitting times of v from every start, by solving (I - Q)h = 1 on
/// V \ {v}, where Q is the walk's transition matrix with row and column v
/// removed. Dense LU up to dense_limit vertices, diagonally preconditioned
/// BiCGSTAB above; either way the reported residual is recomputed from the
/// graph and checked against tol.
inline HittingVector hitting_vector(const Graph& g, Vertex v,
                                    const HittingOptions& opts = {}) {
  const std::size_t n = g.vertex_count();
  if (v >= n) throw std::invalid_argument("hitting_vector: target out of range");
  if (!is_connected(g)) throw std::invalid_argument("hitting_vector: graph disconnected");

  HittingVector out;
  out.target = v;
  out.values.assign(n, 0.0);
  if (n == 1) return out;

  // Index map skipping v.
  std::vector<Vertex> verts;
  verts.reserve(n - 1);
  std::vector<std::int64_t> pos(n, -1);
  for (Vertex u = 0; u < n; ++u) {
    if (u == v) continue;
    pos[u] = static_cast<std::int64_t>(verts.size());
    verts.push_back(u);
  }
  const std::size_t nn = verts.size();

  Eigen::VectorXd h(nn);
  if (n <= opts.dense_limit) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(nn),
                                                  static_cast<Eigen::Index>(nn));
    for (std::size_t a = 0; a < nn; ++a) {
      const Vertex u = verts[a];
      const double inv_deg = 1.0 / g.degree(u);
      for (Vertex x : g.neighbors(u))
        if (x != v) m(static_cast<Eigen::Index>(a), pos[x]) -= inv_deg;
    }
    h = m.partialPivLu().solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(nn)));
    out.method = HittingVector::Method::dense;
  } else {
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> trip;
    trip.reserve(2 * g.edge_count() + nn);
    for (std::size_t a = 0; a < nn; ++a) {
      const Vertex u = verts[a];
      const double inv_deg = 1.0 / g.degree(u);
      trip.emplace_back(static_cast<int>(a), static_cast<int>(a), 1.0);
      for (Vertex x : g.neighbors(u))
        if (x != v)
          trip.emplace_back(static_cast<int>(a), static_cast<int>(pos[x]), -inv_deg);
    }
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(nn),
                                  static_cast<Eigen::Index>(nn));
    m.setFromTriplets(trip.begin(), trip.end());
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> solver;
    solver.setTolerance(opts.tol * 1e-2);
    solver.setMaxIterations(opts.max_iterations);
    solver.compute(m);
    h = solver.solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(nn)));
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("hitting_vector: iterative solve did not converge, error=" +
                               std::to_string(solver.error()));
    out.method = HittingVector::Method::iterative;
  }

  for (std::size_t a = 0; a < nn; ++a) out.values[verts[a]] = h(static_cast<Eigen::Index>(a));
  out.solve_residual = detail::absorbing_residual(g, v, out.values);
  if (out.solve_residual > opts.tol)
    throw std::runtime_error("hitting_vector: residual " + std::to_string(out.solve_residual) +
                             " above tolerance");
  return out;
}

struct HittingMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // row-major, values[w*n + v] = H_{wv}
  double max_residual = 0.0;

  double at(Vertex w, Vertex v) const { return values[static_cast<std::size_t>(w) * n + v]; }
  std::vector<double> column(Vertex v) const {
    std::vector<double> col(n);
    for (Vertex w = 0; w < n; ++w) col[w] = at(w, v);
    return col;
  }
};

/// All-pairs hitting times from one factorization: with P the transition
/// matrix and pi the stationary row, Z = (I - P + 1 pi)^{-1} gives
/// H_{wv} = (Z_vv - Z_wv) / pi(v). Every column is residual-checked against
/// the per-target absorbing system, same contract as hitting_vector.
inline HittingMatrix hitting_all_targets(const Graph& g, double tol = 1e-8) {
  const std::size_t n = g.vertex_count();
  if (!is_connected(g)) throw std::invalid_argument("hitting_all_targets: graph disconnected");
  auto pi = stationary(g).dist.values;

  Eigen::MatrixXd b(n, n);
  for (Vertex w = 0; w < n; ++w) {
    for (Vertex v = 0; v < n; ++v) b(w, v) = pi[v];
    b(w, w) += 1.0;
    const double inv_deg = 1.0 / g.degree(w);
    for (Vertex v : g.neighbors(w)) b(w, v) -= inv_deg;
  }
  Eigen::MatrixXd z = b.partialPivLu().inverse();

  HittingMatrix out;
  out.n = n;
  out.values.assign(n * n, 0.0);
  for (Vertex v = 0; v < n; ++v) {
    const double zvv = z(v, v);
    for (Vertex w = 0; w < n; ++w)
      out.values[static_cast<std::size_t>(w) * n + v] = (zvv - z(w, v)) / pi[v];
  }
  for (Vertex v = 0; v < n; ++v) {
    auto col = out.column(v);
    out.max_residual = std::max(out.max_residual, detail::absorbing_residual(g, v, col));
  }
  if (out.max_residual > tol)
    throw std::runtime_error("hitting_all_targets: residual " +
                             std::to_string(out.max_residual) + " above tolerance");
  return out;
}

/// H_{delta v} = sum_u delta(u) H_{uv}.
inline double averaged_hitting(const DenseDistribution& d, const HittingVector& h) {
  if (d.values.size() != h.values.size())
    throw std::invalid_argument("averaged_hitting: dimension mismatch");
  double acc = 0.0;
  for (std::size_t u = 0; u < d.values.size(); ++u) acc += d.values[u] * h.values[u];
  return acc;
}

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
};

/// Average hitting time over N(v) against 2m/d(v) - 1. This is an exact
/// identity on every connected graph, so abs_error measures solver quality.
inline IdentityCheck neighborhood_identity_check(const Graph& g, Vertex v,
                                                 const HittingVector& h) {
  if (h.target != v) throw std::invalid_argument("neighborhood_identity_check: wrong target");
  double acc = 0.0;
  for (Vertex u : g.neighbors(v)) acc += h.values[u];
  IdentityCheck c;
  c.lhs = acc / g.degree(v);
  c.rhs = 2.0 * static_cast<double>(g.edge_count()) / g.degree(v) - 1.0;
  c.abs_error = std::abs(c.lhs - c.rhs);
  return c;
}

/// Truncated law of the first-passage time T_{wv} with a certified geometric
/// tail. probs[i-1] = P[T = i] for i = 1..horizon, computed by evolving the
/// walk with v absorbing. The tail is bounded in blocks: q is the measured
/// minimum probability of hitting v within block_len steps from any start,
/// giving P[T > horizon + j*block_len] <= tail_mass * (1-q)^j.
struct FirstPassageDist {
  Vertex start = 0;
  Vertex target = 0;
  int horizon = 0;
  std::vector<double> probs;
  double tail_mass = 0.0;              // exact P[T > horizon] from the DP
  double tail_expectation_bound = 0.0; // upper bound on sum_{m>horizon} m P[T=m]
  int block_len = 0;
  double block_hit_prob = 0.0;         // the measured q

  double prob_at(int i) const {  // P[T = i], 1-based
    return (i >= 1 && i <= horizon) ? probs[static_cast<std::size_t>(i - 1)] : 0.0;
  }

  double truncated_expectation() const {
    double acc = 0.0;
    for (int i = 1; i <= horizon; ++i) acc += i * prob_at(i);
    return acc;
  }

  double expectation_lower() const {
    return truncated_expectation() + (horizon + 1) * tail_mass;
  }

  double expectation_upper() const {
    return truncated_expectation() + tail_expectation_bound;
  }
};

namespace detail {

/// P[hit v within t steps | start u] for all u, by backward DP.
inline std::vector<double> hit_within(const Graph& g, Vertex v, int t) {
  const std::size_t n = g.vertex_count();
  std::vector<double> f(n, 0.0);
  f[v] = 1.0;
  std::vector<double> next(n);
  for (int s = 0; s < t; ++s) {
    for (Vertex u = 0; u < n; ++u) {
      if (u == v) { next[u] = 1.0; continue; }
      double acc = 0.0;
      for (Vertex x : g.neighbors(u)) acc += f[x];
      next[u] = acc / g.degree(u);
    }
    f.swap(next);
  }
  return f;
}

/// Smallest block length (grown from `start`) whose minimum hit probability
/// is positive, together with that probability. Connectivity guarantees
/// termination at the eccentricity of v.
inline std::pair<int, double> measured_block(const Graph& g, Vertex v, int start) {
  int block = std::max(1, start);
  for (;;) {
    auto f = hit_within(g, v, block);
    double q = 1.0;
    for (Vertex u = 0; u < g.vertex_count(); ++u)
      if (u != v) q = std::min(q, f[u]);
    if (q > 0.0) return {block, q};
    block *= 2;
    if (block > static_cast<int>(4 * g.vertex_count()))
      throw std::runtime_error("first_passage_dist: no positive hit probability (disconnected?)");
  }
}

}  // namespace detail

inline FirstPassageDist first_passage_dist(const Graph& g, Vertex w, Vertex v, int horizon,
                                           int block_hint = 0) {
  const std::size_t n = g.vertex_count();
  if (w == v) throw std::invalid_argument("first_passage_dist: start equals target");
  if (horizon < 1) throw std::invalid_argument("first_passage_dist: horizon must be >= 1");
  if (!is_connected(g)) throw std::invalid_argument("first_passage_dist: graph disconnected");

  FirstPassageDist fp;
  fp.start = w;
  fp.target = v;
  fp.horizon = horizon;
  fp.probs.reserve(horizon);

  // Substochastic forward DP; mass flowing into v at step i is P[T = i].
  // q[v] stays zero throughout, so absorbed mass never moves again.
  std::vector<double> q(n, 0.0), share(n), next(n);
  q[w] = 1.0;
  for (int i = 1; i <= horizon; ++i) {
    for (Vertex u = 0; u < n; ++u) share[u] = q[u] / g.degree(u);
    for (Vertex x = 0; x < n; ++x) {
      double acc = 0.0;
      for (Vertex u : g.neighbors(x)) acc += share[u];
      next[x] = acc;
    }
    fp.probs.push_back(next[v]);
    next[v] = 0.0;
    q.swap(next);
  }
  double remaining = 0.0;
  for (double x : q) remaining += x;
  fp.tail_mass = remaining;

  auto [block, hit_prob] = detail::measured_block(g, v, block_hint);
  fp.block_len = block;
  fp.block_hit_prob = hit_prob;
  // sum_{m > L} m P[T=m] <= R * ((L + k)/q + k (1-q)/q^2) with R = P[T > L],
  // k the block length and q the minimum per-block hit probability.
  fp.tail_expectation_bound =
      remaining * ((static_cast<double>(horizon) + block) / hit_prob +
                   block * (1.0 - hit_prob) / (hit_prob * hit_prob));
  return fp;
}

/// First-return decomposition: the probability of returning to v for the
/// first time at step ell equals the degree-averaged first-passage mass of
/// the neighbors one step earlier. Both sides are computed by independent
/// DPs, so this is an exact identity up to rounding.
inline IdentityCheck first_return_check(const Graph& g, Vertex v, int ell) {
  if (ell < 1) throw std::invalid_argument("first_return_check: ell must be >= 1");
  if (!is_connected(g)) throw std::invalid_argument("first_return_check: graph disconnected");
  const std::size_t n = g.vertex_count();

  // lhs: the start mass at v flows out on step 1, after which v absorbs.
  double lhs = 0.0;
  {
    std::vector<double> q(n, 0.0), share(n), next(n);
    q[v] = 1.0;
    for (int i = 1; i <= ell; ++i) {
      for (Vertex u = 0; u < n; ++u) share[u] = q[u] / g.degree(u);
      for (Vertex x = 0; x < n; ++x) {
        double acc = 0.0;
        for (Vertex u : g.neighbors(x)) acc += share[u];
        next[x] = acc;
      }
      if (i == ell) lhs = next[v];
      next[v] = 0.0;  // returned mass is absorbed, not propagated
      q.swap(next);
    }
  }

  // rhs: average the per-neighbor first-passage laws.
  double rhs = 0.0;
  if (ell == 1) {
    rhs = 0.0;
  } else {
    for (Vertex u : g.neighbors(v))
      rhs += first_passage_dist(g, u, v, ell - 1).prob_at(ell - 1);
    rhs /= g.degree(v);
  }

  return {lhs, rhs, std::abs(lhs - rhs)};
}

/// Shifted-expectation identity: the truncated left side
/// sum_m m P[T = m + ell] must match H - ell - sum_{m=1}^{ell-1} (m-ell) P[T=m]
/// to within the first-passage tail bound. Returns the residual.
inline double shifted_expectation_check(const FirstPassageDist& fp, int ell, double h_value) {
  if (ell < 0) throw std::invalid_argument("shifted_expectation_check: negative ell");
  if (fp.start == fp.target)
    throw std::invalid_argument("shifted_expectation_check: start equals target");
  double lhs = 0.0;
  for (int i = ell; i <= fp.horizon; ++i) lhs += (i - ell) * fp.prob_at(i);
  double correction = 0.0;
  for (int m = 1; m <= ell - 1; ++m) correction += (m - ell) * fp.prob_at(m);
  const double rhs = h_value - ell - correction;
  return std::abs(lhs - rhs);
}

struct HittingBoundCheck {
  double max_h_ratio = 0.0;    // max H_{wv} / (pn)^k
  double max_dev_ratio = 0.0;  // max |H_{wv} - n| / (pn)^k
};

/// Measures how H compares to the (pn)^k scale over sampled pairs.
inline HittingBoundCheck hitting_time_bound_check(const Graph& g, const GnpSpec& spec,
                                                  std::size_t pair_count = 50,
                                                  std::uint64_t seed = 1,
                                                  const HittingOptions& opts = {}) {
  const std::size_t n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("hitting_time_bound_check: need >= 2 vertices");
  const double scale = std::pow(spec.p * static_cast<double>(n), spec.k);
  RngStream rng(seed);
  HittingBoundCheck out;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (std::size_t t = 0; t < pair_count; ++t) {
    const Vertex v = static_cast<Vertex>(rng.next_below(n));
    Vertex w = static_cast<Vertex>(rng.next_below(n - 1));
    if (w >= v) ++w;
    pairs.emplace_back(w, v);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  HittingVector h;
  bool have = false;
  for (const auto& [w, v] : pairs) {
    if (!have || h.target != v) {
      h = hitting_vector(g, v, opts);
      have = true;
    }
    const double hv = h.values[w];
    out.max_h_ratio = std::max(out.max_h_ratio, hv / scale);
    out.max_dev_ratio =
        std::max(out.max_dev_ratio, std::abs(hv - static_cast<double>(n)) / scale);
  }
  return out;
}

}  // namespace hitwalk
