#pragma once

// Independent reference computations for the test suites. Everything here
// deliberately avoids the implementation paths it is used to check: hitting
// times come from exact rational elimination or truncated enumeration, walk
// counts from 64-bit integer matrix powers, spectra from a dense eigensolve.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hitwalk/graph.hpp"

namespace hitwalk::testing {

using BigRational = boost::rational<boost::multiprecision::cpp_int>;

/// Hitting times toward v by Gaussian elimination over exact rationals.
/// O(n^3) big-number arithmetic; intended for n <= 12.
inline std::vector<double> rational_hitting_times(const Graph& g, Vertex v) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> verts;
  std::vector<std::int64_t> pos(n, -1);
  for (Vertex u = 0; u < n; ++u) {
    if (u == v) continue;
    pos[u] = static_cast<std::int64_t>(verts.size());
    verts.push_back(u);
  }
  const std::size_t m = verts.size();
  // Rows of (I - Q) h = 1, scaled by d(u) to keep entries integral:
  // d(u) h(u) - sum_{x in N(u), x != v} h(x) = d(u).
  std::vector<std::vector<BigRational>> a(m, std::vector<BigRational>(m + 1, BigRational(0)));
  for (std::size_t r = 0; r < m; ++r) {
    const Vertex u = verts[r];
    a[r][r] = BigRational(g.degree(u));
    for (Vertex x : g.neighbors(u))
      if (x != v) a[r][pos[x]] -= BigRational(1);
    a[r][m] = BigRational(g.degree(u));
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == BigRational(0)) ++piv;
    if (piv == m) throw std::runtime_error("rational_hitting_times: singular system");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == BigRational(0)) continue;
      const BigRational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> h(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const BigRational val = a[r][m] / a[r][r];
    h[verts[r]] = boost::rational_cast<double>(val);
  }
  return h;
}

/// E[min(T_{wv}, horizon)] by direct enumeration of the absorbed-walk law;
/// also returns the unabsorbed mass. Brute-force double DP kept deliberately
/// plain.
struct TruncatedHitting {
  double expectation = 0.0;
  double tail = 0.0;
};

inline TruncatedHitting brute_force_truncated_hitting(const Graph& g, Vertex w, Vertex v,
                                                      int horizon) {
  const std::size_t n = g.vertex_count();
  std::vector<double> q(n, 0.0);
  q[w] = 1.0;
  double expectation = 0.0;
  for (int i = 1; i <= horizon; ++i) {
    std::vector<double> next(n, 0.0);
    for (Vertex u = 0; u < n; ++u) {
      if (u == v || q[u] == 0.0) continue;
      const double share = q[u] / g.degree(u);
      for (Vertex x : g.neighbors(u)) next[x] += share;
    }
    expectation += i * next[v];
    next[v] = 0.0;
    q = next;
  }
  double tail = 0.0;
  for (double x : q) tail += x;
  return {expectation, tail};
}

/// Exact walk counts (A^i e_w) in 64-bit integers; valid while counts stay
/// below 2^63 (n <= 50, i <= 8 comfortably).
inline std::vector<std::uint64_t> exact_walk_counts(const Graph& g, Vertex w, int i) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint64_t> cur(n, 0), next(n);
  cur[w] = 1;
  for (int s = 0; s < i; ++s) {
    for (Vertex x = 0; x < n; ++x) {
      std::uint64_t acc = 0;
      for (Vertex u : g.neighbors(x)) acc += cur[u];
      next[x] = acc;
    }
    cur.swap(next);
  }
  return cur;
}

/// Full adjacency spectrum, ascending, via Eigen's dense symmetric solver.
inline std::vector<double> dense_spectrum(const Graph& g) {
  const std::size_t n = g.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex w : g.neighbors(u)) a(u, w) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  return ev;
}

}  // namespace hitwalk::testing
