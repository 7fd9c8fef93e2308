#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hitwalk/graph.hpp"
#include "hitwalk/markov.hpp"
#include "hitwalk/rng.hpp"

namespace hitwalk {

/// Simulation estimate of a hitting time. Walks truncated at the step cap
/// contribute cap steps, so with capped_trials > 0 the mean is a certified
/// lower-bound estimate.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::int64_t capped_trials = 0;
  std::int64_t cap = 0;
};

namespace detail {

/// Static chunking over [0, count). Per-item results must combine through
/// integer sums so the outcome is identical for every thread count.
template <typename Body>
inline void parallel_chunks(std::int64_t count, int threads, const Body& body) {
  if (threads <= 1 || count < 2) {
    body(0, count, 0);
    return;
  }
  const int t = std::min<std::int64_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int c = 0; c < t; ++c) {
    const std::int64_t lo = count * c / t;
    const std::int64_t hi = count * (c + 1) / t;
    pool.emplace_back([&body, lo, hi, c] { body(lo, hi, c); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Estimate H_{wv} by independent walks. Each trial draws from its own
/// (seed, trial-index) substream and accumulates integer step counts, so the
/// result is reproducible for any thread count.
inline McEstimate simulate_hitting(const Graph& g, Vertex w, Vertex v, std::int64_t trials,
                                   std::uint64_t seed, std::int64_t cap = 0, int threads = 1) {
  if (w == v) throw std::invalid_argument("simulate_hitting: start equals target");
  if (!is_connected(g)) throw std::invalid_argument("simulate_hitting: graph disconnected");
  if (trials < 1) throw std::invalid_argument("simulate_hitting: trials must be >= 1");
  if (cap <= 0) cap = 100 * static_cast<std::int64_t>(g.vertex_count());

  const int nthreads = std::max(1, threads);
  std::vector<std::uint64_t> sum(nthreads, 0), sum_sq(nthreads, 0), capped(nthreads, 0);

  detail::parallel_chunks(trials, nthreads, [&](std::int64_t lo, std::int64_t hi, int chunk) {
    std::uint64_t s = 0, sq = 0, nc = 0;
    for (std::int64_t t = lo; t < hi; ++t) {
      RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(t));
      Vertex x = w;
      std::int64_t steps = 0;
      while (steps < cap) {
        const auto nb = g.neighbors(x);
        x = nb[rng.next_below(nb.size())];
        ++steps;
        if (x == v) break;
      }
      if (x != v) ++nc;
      s += static_cast<std::uint64_t>(steps);
      sq += static_cast<std::uint64_t>(steps) * static_cast<std::uint64_t>(steps);
    }
    sum[chunk] = s;
    sum_sq[chunk] = sq;
    capped[chunk] = nc;
  });

  std::uint64_t s = 0, sq = 0, nc = 0;
  for (int c = 0; c < nthreads; ++c) {
    s += sum[c];
    sq += sum_sq[c];
    nc += capped[c];
  }

  McEstimate est;
  est.trials = trials;
  est.capped_trials = static_cast<std::int64_t>(nc);
  est.cap = cap;
  est.mean = static_cast<double>(s) / static_cast<double>(trials);
  if (trials > 1) {
    const double var =
        (static_cast<double>(sq) - static_cast<double>(trials) * est.mean * est.mean) /
        static_cast<double>(trials - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
  }
  return est;
}

/// Empirical law of the walk's position after ell steps.
struct McDistribution {
  std::vector<std::int64_t> counts;  // counts sum to trials exactly
  DenseDistribution values;
  std::int64_t trials = 0;
};

inline McDistribution simulate_distribution(const Graph& g, Vertex w, int ell,
                                            std::int64_t trials, std::uint64_t seed,
                                            int threads = 1) {
  if (!is_connected(g)) throw std::invalid_argument("simulate_distribution: graph disconnected");
  if (trials < 1) throw std::invalid_argument("simulate_distribution: trials must be >= 1");
  if (ell < 0) throw std::invalid_argument("simulate_distribution: negative step count");

  const std::size_t n = g.vertex_count();
  const int nthreads = std::max(1, threads);
  std::vector<std::vector<std::int64_t>> counts(nthreads,
                                                std::vector<std::int64_t>(n, 0));

  detail::parallel_chunks(trials, nthreads, [&](std::int64_t lo, std::int64_t hi, int chunk) {
    auto& local = counts[chunk];
    for (std::int64_t t = lo; t < hi; ++t) {
      RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(t));
      Vertex x = w;
      for (int s = 0; s < ell; ++s) {
        const auto nb = g.neighbors(x);
        x = nb[rng.next_below(nb.size())];
      }
      ++local[x];
    }
  });

  McDistribution out;
  out.trials = trials;
  out.counts.assign(n, 0);
  for (int c = 0; c < nthreads; ++c)
    for (std::size_t i = 0; i < n; ++i) out.counts[i] += counts[c][i];
  out.values.values.resize(n);
  out.values.step_index = ell;
  out.values.origin = w;
  for (std::size_t i = 0; i < n; ++i)
    out.values.values[i] = static_cast<double>(out.counts[i]) / static_cast<double>(trials);
  return out;
}

}  // namespace hitwalk
