#pragma once

// Shared helpers for the unit and acceptance suites: small statistics
// utilities and an independent brute-force CTMC transient oracle for tiny
// graphs (enumerates all 2^n states and integrates the Kolmogorov forward
// equations; shares no code with the simulation engines).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace testsup {

struct MeanStats {
  double mean = 0;
  double sd = 0;
  double stderr_mean = 0;
};

inline MeanStats mean_stats(const std::vector<double>& xs) {
  MeanStats m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double ss = 0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / (n - 1));
  m.stderr_mean = m.sd / std::sqrt(n);
  return m;
}

// Exact transient distribution of the SI/SIS contact process on a tiny
// graph: classic RK4 on p' = pQ with a step fine enough that integration
// error is negligible next to the Monte-Carlo tolerances it is used with.
class TinyCtmcOracle {
 public:
  // edges as (u,v) pairs over nodes 0..n-1; n <= 20
  TinyCtmcOracle(std::uint32_t n,
                 std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                 double beta, double mu)
      : n_(n), edges_(std::move(edges)), beta_(beta), mu_(mu) {
    if (n > 20) throw std::invalid_argument("oracle: too many nodes");
  }

  // distribution over all 2^n states at time t, starting from state mask x0
  std::vector<double> state_distribution(std::uint32_t x0_mask, double t) const {
    const std::size_t states = 1ull << n_;
    std::vector<double> p(states, 0.0);
    p[x0_mask] = 1.0;
    const int steps = std::max(1000, static_cast<int>(t * 20000));
    const double dt = t / steps;
    std::vector<double> k1(states), k2(states), k3(states), k4(states),
        tmp(states);
    for (int s = 0; s < steps; ++s) {
      derivative(p, k1);
      axpy(p, k1, dt / 2, tmp);
      derivative(tmp, k2);
      axpy(p, k2, dt / 2, tmp);
      derivative(tmp, k3);
      axpy(p, k3, dt, tmp);
      derivative(tmp, k4);
      for (std::size_t i = 0; i < states; ++i)
        p[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return p;
  }

  // distribution of |X(t)| (0..n) from an initial state mask
  std::vector<double> count_distribution(std::uint32_t x0_mask, double t) const {
    const std::vector<double> p = state_distribution(x0_mask, t);
    std::vector<double> out(n_ + 1, 0.0);
    for (std::size_t mask = 0; mask < p.size(); ++mask)
      out[std::popcount(static_cast<std::uint32_t>(mask))] += p[mask];
    return out;
  }

 private:
  static void axpy(const std::vector<double>& p, const std::vector<double>& k,
                   double a, std::vector<double>& out) {
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + a * k[i];
  }

  // dp/dt(y) = sum_x p(x) q(x,y) - p(y) q(y,.)
  void derivative(const std::vector<double>& p, std::vector<double>& dp) const {
    std::fill(dp.begin(), dp.end(), 0.0);
    // Iterates over source states; a zero-mass source contributes no flow.
    for (std::uint32_t mask = 0; mask < p.size(); ++mask) {
      if (p[mask] == 0.0) continue;
      // infections: susceptible j with c infected neighbors at rate beta*c
      for (std::uint32_t j = 0; j < n_; ++j) {
        if (mask & (1u << j)) continue;
        std::uint32_t c = 0;
        for (const auto& [u, v] : edges_) {
          if (u == j && (mask & (1u << v))) ++c;
          if (v == j && (mask & (1u << u))) ++c;
        }
        if (c == 0) continue;
        const double rate = beta_ * c * p[mask];
        dp[mask] -= rate;
        dp[mask | (1u << j)] += rate;
      }
      // recoveries: infected j at rate mu
      if (mu_ > 0) {
        for (std::uint32_t j = 0; j < n_; ++j) {
          if (!(mask & (1u << j))) continue;
          const double rate = mu_ * p[mask];
          dp[mask] -= rate;
          dp[mask & ~(1u << j)] += rate;
        }
      }
    }
  }

  std::uint32_t n_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  double beta_;
  double mu_;
};

// 3-sigma multinomial comparison of an empirical histogram against exact
// category probabilities. Returns the worst z-score over categories with
// expected count >= 5.
inline double worst_multinomial_z(const std::vector<std::uint64_t>& counts,
                                  const std::vector<double>& probs,
                                  std::uint64_t total) {
  double worst = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double expected = probs[i] * static_cast<double>(total);
    if (expected < 5.0) continue;
    const double sd = std::sqrt(expected * (1.0 - probs[i]));
    const double observed = i < counts.size() ? static_cast<double>(counts[i]) : 0.0;
    worst = std::max(worst, std::abs(observed - expected) / sd);
  }
  return worst;
}

}  // namespace testsup
