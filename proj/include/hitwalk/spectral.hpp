#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hitwalk/graph.hpp"
#include "hitwalk/rng.hpp"

namespace hitwalk {

struct EigenPair {
  double value = 0.0;
  std::vector<double> vec;
  double residual = 0.0;  // ||A x - value x||_2 after convergence
  int iterations = 0;
};

struct ExtremeEigenvalues {
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  double residual2 = 0.0;
  double residual_min = 0.0;
};

struct SpectralSummary {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  std::vector<double> phi;
  double residual1 = 0.0;
  double residual2 = 0.0;
  double residual_min = 0.0;
  double phi_deviation = 0.0;  // max_i |phi_i - 1/sqrt(n)|
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what + " (last residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double last_residual() const { return residual_; }

 private:
  double residual_;
};

namespace detail {

inline void adjacency_matvec(const Graph& g, const std::vector<double>& x,
                             std::vector<double>& y) {
  const std::size_t n = g.vertex_count();
  for (Vertex u = 0; u < n; ++u) {
    double acc = 0.0;
    for (Vertex w : g.neighbors(u)) acc += x[w];
    y[u] = acc;
  }
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void normalize(std::vector<double>& a) {
  const double nrm = norm2(a);
  if (nrm == 0.0) throw std::logic_error("cannot normalize zero vector");
  for (double& x : a) x /= nrm;
}

/// Power iteration on a caller-supplied operator. Converges when
/// ||Op x - rho x||_2 <= tol_for(rho); restarts from a seeded random vector
/// when the residual stagnates, fails explicitly at the iteration cap.
inline EigenPair power_iteration(std::size_t n,
                                 const std::function<void(const std::vector<double>&,
                                                          std::vector<double>&)>& op,
                                 std::vector<double> x,
                                 const std::function<double(double)>& tol_for,
                                 int cap = 100000, std::uint64_t restart_seed = 0x5eedULL) {
  normalize(x);
  std::vector<double> y(n);
  double best_residual = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  RngStream rng(restart_seed);
  EigenPair out;
  for (int it = 1; it <= cap; ++it) {
    op(x, y);
    const double rho = dot(x, y);
    double res_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - rho * x[i];
      res_sq += r * r;
    }
    const double res = std::sqrt(res_sq);
    out.value = rho;
    out.residual = res;
    out.iterations = it;
    if (res <= tol_for(rho)) {
      out.vec = x;
      return out;
    }
    if (res < 0.95 * best_residual) {
      best_residual = res;
      since_improvement = 0;
    } else if (++since_improvement > 2000) {
      for (double& e : x) e = rng.next_normal();
      normalize(x);
      since_improvement = 0;
      continue;
    }
    x = y;
    normalize(x);
  }
  throw NonConvergence("power iteration hit the iteration cap", out.residual);
}

}  // namespace detail

/// Perron eigenpair of the adjacency matrix: lambda1 with a unit-norm,
/// entrywise non-negative eigenvector.
inline EigenPair leading_eigenpair(const Graph& g, double tol = 1e-8) {
  const std::size_t n = g.vertex_count();
  if (!is_connected(g)) throw std::invalid_argument("leading_eigenpair: graph disconnected");
  if (n == 1) return {0.0, {1.0}, 0.0, 0};

  std::vector<double> start(n, 1.0);
  auto op = [&g](const std::vector<double>& x, std::vector<double>& y) {
    detail::adjacency_matvec(g, x, y);
  };
  auto pair = detail::power_iteration(
      n, op, start, [tol](double rho) { return tol * std::max(1.0, std::abs(rho)); });

  // Perron sign convention; rounding may leave tiny negative entries.
  double sum = 0.0;
  for (double e : pair.vec) sum += e;
  if (sum < 0.0)
    for (double& e : pair.vec) e = -e;
  for (double& e : pair.vec) e = std::max(e, 0.0);
  detail::normalize(pair.vec);
  std::vector<double> y(n);
  detail::adjacency_matvec(g, pair.vec, y);
  pair.value = detail::dot(pair.vec, y);
  double res_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - pair.value * pair.vec[i];
    res_sq += r * r;
  }
  pair.residual = std::sqrt(res_sq);
  return pair;
}

/// Second-largest and smallest adjacency eigenvalues. lambda2 comes from
/// power iteration on the phi-deflated operator shifted to keep the spectrum
/// non-negative (A - 2 lambda1 phi phi^T + lambda1 I); lambda_min from
/// iteration on lambda1 I - A. Residuals are recomputed against A itself.
inline ExtremeEigenvalues extreme_eigenvalues(const Graph& g, double tol = 1e-8) {
  const std::size_t n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("extreme_eigenvalues: need >= 2 vertices");
  auto lead = leading_eigenpair(g, std::min(tol, 1e-10));
  const double lambda1 = lead.value;
  const std::vector<double>& phi = lead.vec;

  ExtremeEigenvalues out;

  {
    auto op = [&](const std::vector<double>& x, std::vector<double>& y) {
      detail::adjacency_matvec(g, x, y);
      const double c = detail::dot(phi, x);
      for (std::size_t i = 0; i < n; ++i) y[i] += lambda1 * x[i] - 2.0 * lambda1 * c * phi[i];
    };
    std::vector<double> start(n);
    RngStream rng(0xabcdULL);
    for (double& e : start) e = rng.next_normal();
    const double c = detail::dot(phi, start);
    for (std::size_t i = 0; i < n; ++i) start[i] -= c * phi[i];
    auto pair = detail::power_iteration(
        n, op, start,
        [tol, lambda1](double rho) { return tol * std::max(1.0, std::abs(rho - lambda1)); });
    out.lambda2 = pair.value - lambda1;
    std::vector<double> y(n);
    detail::adjacency_matvec(g, pair.vec, y);
    double res_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - out.lambda2 * pair.vec[i];
      res_sq += r * r;
    }
    out.residual2 = std::sqrt(res_sq);
    if (out.residual2 > tol * std::max(1.0, std::abs(out.lambda2)) * 4.0)
      throw NonConvergence("second eigenvalue drifted on deflation", out.residual2);
  }

  {
    auto op = [&](const std::vector<double>& x, std::vector<double>& y) {
      detail::adjacency_matvec(g, x, y);
      for (std::size_t i = 0; i < n; ++i) y[i] = lambda1 * x[i] - y[i];
    };
    std::vector<double> start(n);
    RngStream rng(0xbcdeULL);
    for (double& e : start) e = rng.next_normal();
    auto pair = detail::power_iteration(
        n, op, start,
        [tol, lambda1](double rho) { return tol * std::max(1.0, std::abs(lambda1 - rho)); });
    out.lambda_min = lambda1 - pair.value;
    std::vector<double> y(n);
    detail::adjacency_matvec(g, pair.vec, y);
    double res_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - out.lambda_min * pair.vec[i];
      res_sq += r * r;
    }
    out.residual_min = std::sqrt(res_sq);
  }

  return out;
}

inline SpectralSummary spectral_summary(const Graph& g, double tol = 1e-8) {
  SpectralSummary s;
  auto lead = leading_eigenpair(g, tol);
  s.lambda1 = lead.value;
  s.phi = lead.vec;
  s.residual1 = lead.residual;
  auto ext = extreme_eigenvalues(g, tol);
  s.lambda2 = ext.lambda2;
  s.lambda_min = ext.lambda_min;
  s.residual2 = ext.residual2;
  s.residual_min = ext.residual_min;
  const double uniform = 1.0 / std::sqrt(static_cast<double>(g.vertex_count()));
  for (double e : s.phi) s.phi_deviation = std::max(s.phi_deviation, std::abs(e - uniform));
  return s;
}

/// Measures ||v D^{-1} A||_2 over random unit vectors whose entries average
/// to zero, as a multiple of sqrt(log n)/sqrt(pn). Returns the worst ratio;
/// this is a measurement, not an assertion.
inline double mean_zero_operator_check(const Graph& g, double p, int trials,
                                       std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  if (!is_connected(g) || g.min_degree() == 0)
    throw std::invalid_argument("mean_zero_operator_check: graph must be connected");
  if (trials < 1) throw std::invalid_argument("mean_zero_operator_check: trials must be >= 1");
  const double envelope =
      std::sqrt(std::log(static_cast<double>(n))) / std::sqrt(p * static_cast<double>(n));
  double worst = 0.0;
  std::vector<double> v(n), share(n), z(n);
  for (int t = 0; t < trials; ++t) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(t));
    double mean = 0.0;
    for (double& e : v) mean += (e = rng.next_normal());
    mean /= static_cast<double>(n);
    for (double& e : v) e -= mean;
    detail::normalize(v);
    for (Vertex u = 0; u < n; ++u) share[u] = v[u] / g.degree(u);
    // (v D^{-1} A)_j = sum over u in N(j) of v_u / d(u)
    detail::adjacency_matvec(g, share, z);
    worst = std::max(worst, detail::norm2(z) / envelope);
  }
  return worst;
}

}  // namespace hitwalk
