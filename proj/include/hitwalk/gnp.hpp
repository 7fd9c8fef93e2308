#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hitwalk/graph.hpp"
#include "hitwalk/rng.hpp"

namespace hitwalk {

/// Parameters of a G(n,p) sample. k is the diameter exponent the theory is
/// instantiated with; regime_c scales the upper p cutoff 1 - c*log^4(n)/n.
struct GnpSpec {
  std::size_t n = 0;
  double p = 0.0;
  int k = 2;
  std::uint64_t seed = 0;
  double regime_c = 1.0;

  double lower_p_bound() const {
    const double ln = std::log(static_cast<double>(n));
    return ln / std::pow(static_cast<double>(n), (k - 1.0) / k);
  }

  double upper_p_bound() const {
    const double ln = std::log(static_cast<double>(n));
    return 1.0 - regime_c * std::pow(ln, 4.0) / static_cast<double>(n);
  }

  /// True iff (n, p, k) lies in the range the closed-form predictors are
  /// stated for. At small n the upper cutoff is vacuous (negative), so desk
  /// scale runs are reported as out of range even though the formulas are
  /// still evaluated.
  bool in_theorem_range() const {
    return k >= 2 && p >= lower_p_bound() && p <= upper_p_bound();
  }

  /// Smallest k >= 2 whose lower bound admits p, if any.
  static int fitting_k(std::size_t n, double p, int k_max = 8) {
    for (int k = 2; k <= k_max; ++k) {
      GnpSpec s{n, p, k, 0};
      if (p >= s.lower_p_bound()) return k;
    }
    return k_max;
  }
};

namespace detail {

/// Emit the ordered pairs (w, v) with w < v selected by i.i.d. coin flips of
/// probability q, walking the pair sequence with geometric skips.
inline std::vector<Edge> sample_pairs_skipping(std::size_t n, double q, RngStream& rng) {
  std::vector<Edge> edges;
  if (q <= 0.0) return edges;
  const double log1mq = std::log1p(-q);
  std::int64_t v = 1;
  std::int64_t w = -1;
  while (v < static_cast<std::int64_t>(n)) {
    const double u = rng.next_open01();
    w += 1 + static_cast<std::int64_t>(std::floor(std::log(u) / log1mq));
    while (w >= v && v < static_cast<std::int64_t>(n)) {
      w -= v;
      ++v;
    }
    if (v < static_cast<std::int64_t>(n))
      edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
  }
  return edges;
}

inline std::vector<Edge> all_pairs(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (Vertex v = 1; v < n; ++v)
    for (Vertex w = 0; w < v; ++w) edges.emplace_back(w, v);
  return edges;
}

}  // namespace detail

/// Sample G(n,p). Expected O(n + m) time for p <= 1/2; for larger p the
/// complement is sampled with the same skipping walk, so the draw stays
/// seed-deterministic across the whole range of p.
inline Graph sample_gnp(const GnpSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("gnp: n must be positive");
  if (spec.p < 0.0 || spec.p > 1.0) throw std::invalid_argument("gnp: p outside [0,1]");
  RngStream rng(spec.seed);
  std::vector<Edge> edges;
  if (spec.p >= 1.0) {
    edges = detail::all_pairs(spec.n);
  } else if (spec.p > 0.5) {
    std::vector<Edge> holes = detail::sample_pairs_skipping(spec.n, 1.0 - spec.p, rng);
    std::size_t next = 0;
    for (Vertex v = 1; v < spec.n; ++v)
      for (Vertex w = 0; w < v; ++w) {
        if (next < holes.size() && holes[next].first == w && holes[next].second == v) {
          ++next;
          continue;
        }
        edges.emplace_back(w, v);
      }
  } else {
    edges = detail::sample_pairs_skipping(spec.n, spec.p, rng);
  }
  return Graph::from_edges(spec.n, edges);
}

}  // namespace hitwalk
