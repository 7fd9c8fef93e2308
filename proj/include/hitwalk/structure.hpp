#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hitwalk/gnp.hpp"
#include "hitwalk/graph.hpp"
#include "hitwalk/rng.hpp"

namespace hitwalk {

/// One measured property: the worst observed deviation against the envelope
/// it was allowed.
struct PropertyCheck {
  bool pass = false;
  double deviation = 0.0;
  double envelope = 0.0;
};

struct StructuralReport {
  bool connected = false;
  bool bipartite = true;
  std::optional<std::int32_t> diameter;
  std::uint32_t degree_min = 0;
  std::uint32_t degree_max = 0;
  std::uint64_t edge_count = 0;
  std::uint32_t codegree_min = 0;
  std::uint32_t codegree_max = 0;
  std::size_t codegree_pairs = 0;

  PropertyCheck non_bipartite_check;   // (boolean; deviation 0/1)
  PropertyCheck diameter_check;        // diam <= k
  PropertyCheck degree_check;          // every d(v) in pn +- C*sqrt(pn log n)
  PropertyCheck edge_count_check;      // 2m in pn^2 +- C*sqrt(pn^2 log n)
  PropertyCheck codegree_check;        // sampled |N(v)^N(w)| in p^2 n +- envelope

  double envelope_constant = 0.0;
  bool in_good_class = false;
};

/// Measure the sampled-graph properties the hitting-time theory relies on.
/// Codegrees are checked over pair_sample random pairs (seeded from the
/// spec), not all Theta(n^2) of them. Nothing is rejected here: disconnected
/// or bipartite inputs are reported and left to downstream ops to refuse.
inline StructuralReport structural_report(const Graph& g, const GnpSpec& spec,
                                          std::size_t pair_sample = 0,
                                          double envelope_c = 4.0) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw std::invalid_argument("structural_report: empty graph");
  if (pair_sample == 0) pair_sample = 10 * n;
  const double nd = static_cast<double>(n);
  const double p = spec.p;
  const double logn = std::log(nd);

  StructuralReport rep;
  rep.envelope_constant = envelope_c;
  rep.connected = is_connected(g);
  rep.bipartite = is_bipartite(g);
  rep.diameter = diameter(g);
  rep.edge_count = g.edge_count();
  rep.degree_min = g.min_degree();
  rep.degree_max = g.max_degree();

  rep.non_bipartite_check = {!rep.bipartite, rep.bipartite ? 1.0 : 0.0, 0.0};

  {
    const double diam = rep.diameter ? static_cast<double>(*rep.diameter)
                                     : std::numeric_limits<double>::infinity();
    rep.diameter_check = {diam <= spec.k, diam, static_cast<double>(spec.k)};
  }

  {
    double worst = 0.0;
    for (Vertex v = 0; v < n; ++v)
      worst = std::max(worst, std::abs(static_cast<double>(g.degree(v)) - p * nd));
    const double env = envelope_c * std::sqrt(std::max(0.0, p * nd * logn));
    rep.degree_check = {worst <= env, worst, env};
  }

  {
    const double dev = std::abs(2.0 * static_cast<double>(g.edge_count()) - p * nd * nd);
    const double env = envelope_c * std::sqrt(std::max(0.0, p * nd * nd * logn));
    rep.edge_count_check = {dev <= env, dev, env};
  }

  if (n >= 2) {
    RngStream rng(spec.seed ^ 0xc0de9ee5ULL);
    double worst = 0.0;
    std::uint32_t lo = ~0u, hi = 0;
    for (std::size_t t = 0; t < pair_sample; ++t) {
      const Vertex v = static_cast<Vertex>(rng.next_below(n));
      Vertex w = static_cast<Vertex>(rng.next_below(n - 1));
      if (w >= v) ++w;
      const std::uint32_t c = codegree(g, v, w);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      worst = std::max(worst, std::abs(static_cast<double>(c) - p * p * nd));
    }
    const double env = envelope_c *
        std::max(std::sqrt(std::max(0.0, p * p * nd * logn)), logn);
    rep.codegree_check = {worst <= env, worst, env};
    rep.codegree_min = lo;
    rep.codegree_max = hi;
    rep.codegree_pairs = pair_sample;
  } else {
    rep.codegree_check = {true, 0.0, 0.0};
  }

  rep.in_good_class = rep.connected && !rep.bipartite &&
                      rep.non_bipartite_check.pass && rep.diameter_check.pass &&
                      rep.degree_check.pass && rep.edge_count_check.pass &&
                      rep.codegree_check.pass;
  return rep;
}

}  // namespace hitwalk
