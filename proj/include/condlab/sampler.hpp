#pragma once

// Random instance generators.
//
// All samplers draw edges as uniform k-subsets (or from a restricted pool),
// reject what the model forbids, and deduplicate so the result is a simple
// hypergraph. Rejection loops carry a draw budget of 10^6 attempts per
// requested edge; exhausting it raises resource_cap_error rather than
// spinning forever on infeasible parameters.

#include <cstdint>
#include <vector>

#include "condlab/common.hpp"
#include "condlab/hypergraph.hpp"

namespace condlab {

inline long double count_k_subsets(long n, int k) { return choose_ld(n, k); }

inline long double count_monochromatic(long n0, long n1, int k) {
  return choose_ld(n0, k) + choose_ld(n1, k);
}

// Edges with exactly one vertex on the minority side of its color class.
inline long double count_critical(long n0, long n1, int k) {
  return static_cast<long double>(n0) * choose_ld(n1, k - 1) +
         static_cast<long double>(n1) * choose_ld(n0, k - 1);
}

inline long double count_bichromatic(long n0, long n1, int k) {
  return choose_ld(n0 + n1, k) - count_monochromatic(n0, n1, k);
}

inline long double count_bichromatic_noncritical(long n0, long n1, int k) {
  return count_bichromatic(n0, n1, k) - count_critical(n0, n1, k);
}

namespace detail {

class DrawBudget {
 public:
  explicit DrawBudget(long edges) : left_(1000000.0L * static_cast<long double>(edges < 1 ? 1 : edges)) {}
  void spend() {
    if (--left_ < 0) throw resource_cap_error("sampler: draw budget exhausted (10^6 attempts per edge)");
  }

 private:
  long double left_;
};

// k distinct vertex ids from [0,n), written sorted into out[0..k).
inline void draw_k_distinct(Rng& rng, long n, int k, std::int32_t* out) {
  for (int j = 0; j < k; ++j) {
    long guard = 0;
    for (;;) {
      if (++guard > 100000) throw resource_cap_error("sampler: vertex rejection loop stuck");
      const auto v = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(n)));
      bool seen = false;
      for (int i = 0; i < j; ++i) seen |= out[i] == v;
      if (!seen) {
        out[j] = v;
        break;
      }
    }
  }
  std::sort(out, out + k);
}

// j distinct ids from a class given as (start, size) plus one fixed supporter
// from the other class; result sorted into out[0..j+1).
inline void draw_from_class(Rng& rng, long start, long size, int j, std::int32_t* out) {
  for (int t = 0; t < j; ++t) {
    long guard = 0;
    for (;;) {
      if (++guard > 100000) throw resource_cap_error("sampler: vertex rejection loop stuck");
      const auto v = static_cast<std::int32_t>(start + static_cast<long>(rng.below(static_cast<std::uint64_t>(size))));
      bool seen = false;
      for (int i = 0; i < t; ++i) seen |= out[i] == v;
      if (!seen) {
        out[t] = v;
        break;
      }
    }
  }
}

// Binomial(n,p) by CDF inversion, exact for integer n. Chunked so each walk
// stays short; chunks are independent binomials summing to the total.
inline long draw_binomial(Rng& rng, long double n, double p) {
  if (n <= 0 || p <= 0) return 0;
  if (p >= 1) return static_cast<long>(n);
  const long chunk = std::max<long>(1, static_cast<long>(30.0 / p));
  long double left = n;
  long total = 0;
  while (left > 0) {
    const long nc = left > chunk ? chunk : static_cast<long>(left);
    left -= nc;
    const double u = rng.uniform01();
    double pr = std::exp(nc * std::log1p(-p));
    double cum = pr;
    long c = 0;
    while (u > cum && c < nc) {
      pr *= static_cast<double>(nc - c) / static_cast<double>(c + 1) * (p / (1 - p));
      ++c;
      cum += pr;
    }
    total += c;
  }
  return total;
}

// Poisson(lambda) by chunked CDF inversion. Used as the edge-count law when
// the pool is too large for exact binomial arithmetic.
inline long draw_poisson(Rng& rng, double lambda) {
  if (lambda <= 0) return 0;
  const long parts = std::max<long>(1, static_cast<long>(lambda / 30.0) + 1);
  const double lp = lambda / static_cast<double>(parts);
  const double q0 = std::exp(-lp);
  long total = 0;
  for (long i = 0; i < parts; ++i) {
    const double u = rng.uniform01();
    double pr = q0;
    double cum = pr;
    long c = 0;
    while (u > cum && c < 100000) {
      pr *= lp / static_cast<double>(++c);
      cum += pr;
    }
    total += c;
  }
  return total;
}

inline int edge_ones(const std::int32_t* e, int k, const Coloring& sigma) {
  int ones = 0;
  for (int j = 0; j < k; ++j) ones += sigma[e[j]];
  return ones;
}

}  // namespace detail

// m distinct uniform k-subsets.
inline Hypergraph sample_uniform(long n, long m, int k, Rng& rng) {
  require_k(k);
  if (n < k) throw parameter_error("sample_uniform: need n >= k");
  if (m < 0) throw parameter_error("sample_uniform: need m >= 0");
  if (static_cast<long double>(m) > count_k_subsets(n, k))
    throw parameter_error("sample_uniform: more edges than distinct k-subsets");
  Hypergraph h;
  h.n = static_cast<int>(n);
  h.k = k;
  h.flat.reserve(static_cast<std::size_t>(m) * k);
  EdgeKeySet seen(h.n);
  detail::DrawBudget budget(m);
  std::int32_t tmp[64];
  for (long got = 0; got < m;) {
    budget.spend();
    detail::draw_k_distinct(rng, n, k, tmp);
    if (!seen.insert(tmp, k)) continue;
    h.flat.insert(h.flat.end(), tmp, tmp + k);
    ++got;
  }
  h.canonicalize();
  return h;
}

// m distinct k-subsets uniform over the edges sigma leaves bichromatic.
inline Hypergraph sample_planted(long n, long m, int k, const Coloring& sigma, Rng& rng) {
  require_k(k);
  if (n < k) throw parameter_error("sample_planted: need n >= k");
  if (static_cast<long>(sigma.size()) != n) throw parameter_error("sample_planted: coloring length != n");
  if (m < 0) throw parameter_error("sample_planted: need m >= 0");
  long n1 = 0;
  for (auto c : sigma) n1 += c;
  if (static_cast<long double>(m) > count_bichromatic(n - n1, n1, k))
    throw parameter_error("sample_planted: more edges than the bichromatic pool holds");
  Hypergraph h;
  h.n = static_cast<int>(n);
  h.k = k;
  h.flat.reserve(static_cast<std::size_t>(m) * k);
  EdgeKeySet seen(h.n);
  detail::DrawBudget budget(m);
  std::int32_t tmp[64];
  for (long got = 0; got < m;) {
    budget.spend();
    detail::draw_k_distinct(rng, n, k, tmp);
    const int ones = detail::edge_ones(tmp, k, sigma);
    if (ones == 0 || ones == k) continue;
    if (!seen.insert(tmp, k)) continue;
    h.flat.insert(h.flat.end(), tmp, tmp + k);
    ++got;
  }
  h.canonicalize();
  return h;
}

// m1 critical edges (single supporter on its own color side) plus m2
// bichromatic non-critical edges, all distinct, uniform within their pools.
inline Hypergraph sample_planted_critical(long n, long m1, long m2, int k, const Coloring& sigma,
                                          Rng& rng) {
  require_k(k);
  if (n < k) throw parameter_error("sample_planted_critical: need n >= k");
  if (static_cast<long>(sigma.size()) != n)
    throw parameter_error("sample_planted_critical: coloring length != n");
  if (m1 < 0 || m2 < 0) throw parameter_error("sample_planted_critical: edge counts must be >= 0");
  long n1 = 0;
  for (auto c : sigma) n1 += c;
  const long n0 = n - n1;
  if (static_cast<long double>(m1) > count_critical(n0, n1, k))
    throw parameter_error("sample_planted_critical: m1 exceeds the critical pool");
  if (static_cast<long double>(m2) > count_bichromatic_noncritical(n0, n1, k))
    throw parameter_error("sample_planted_critical: m2 exceeds the non-critical bichromatic pool");

  // Vertex ids per class, so class-restricted draws are O(1) per attempt.
  std::vector<std::int32_t> cls[2];
  cls[0].reserve(n0);
  cls[1].reserve(n1);
  for (long v = 0; v < n; ++v) cls[sigma[v]].push_back(static_cast<std::int32_t>(v));

  Hypergraph h;
  h.n = static_cast<int>(n);
  h.k = k;
  h.flat.reserve(static_cast<std::size_t>(m1 + m2) * k);
  EdgeKeySet seen(h.n);
  detail::DrawBudget budget(m1 + m2);
  std::int32_t tmp[64];

  // Critical pool: pick the supporter side with probability proportional to
  // its share of the pool, then the supporter and k-1 partners uniformly.
  const long double w0 = static_cast<long double>(n0) * choose_ld(n1, k - 1);
  const long double w1 = static_cast<long double>(n1) * choose_ld(n0, k - 1);
  const double p0 = static_cast<double>(w0 / (w0 + w1 > 0 ? w0 + w1 : 1));
  for (long got = 0; got < m1;) {
    budget.spend();
    const int side = rng.uniform01() < p0 ? 0 : 1;
    const auto& mine = cls[side];
    const auto& other = cls[1 - side];
    std::int32_t picks[64];
    detail::draw_from_class(rng, 0, static_cast<long>(other.size()), k - 1, picks);
    tmp[0] = mine[rng.below(mine.size())];
    for (int j = 0; j < k - 1; ++j) tmp[j + 1] = other[picks[j]];
    std::sort(tmp, tmp + k);
    if (!seen.insert(tmp, k)) continue;
    h.flat.insert(h.flat.end(), tmp, tmp + k);
    ++got;
  }

  // Non-critical bichromatic pool: plain rejection from all k-subsets.
  for (long got = 0; got < m2;) {
    budget.spend();
    detail::draw_k_distinct(rng, n, k, tmp);
    const int ones = detail::edge_ones(tmp, k, sigma);
    if (ones <= 1 || ones >= k - 1) continue;
    if (!seen.insert(tmp, k)) continue;
    h.flat.insert(h.flat.end(), tmp, tmp + k);
    ++got;
  }

  h.canonicalize();
  return h;
}

enum class BinomialMode {
  enumerate,     // walk every k-subset, keep bichromatic ones with prob. p
  count_sample,  // draw the edge count first, then that many distinct edges
};

// Each bichromatic k-subset present independently with probability p.
// enumerate mode is exact but only viable while C(n,k) stays small;
// count_sample draws the count from the matching law (exact binomial while
// the pool size is below 2^53, Poisson limit beyond) and then picks uniform
// distinct bichromatic edges, which is the same distribution.
inline Hypergraph sample_binomial_planted(long n, double p, int k, const Coloring& sigma, Rng& rng,
                                          BinomialMode mode = BinomialMode::count_sample) {
  require_k(k);
  if (n < k) throw parameter_error("sample_binomial_planted: need n >= k");
  if (static_cast<long>(sigma.size()) != n)
    throw parameter_error("sample_binomial_planted: coloring length != n");
  if (!(p >= 0 && p <= 1)) throw parameter_error("sample_binomial_planted: need p in [0,1]");
  long n1 = 0;
  for (auto c : sigma) n1 += c;
  const long n0 = n - n1;

  Hypergraph h;
  h.n = static_cast<int>(n);
  h.k = k;

  if (mode == BinomialMode::enumerate) {
    const long double total = count_k_subsets(n, k);
    if (total > 2e7) throw resource_cap_error("sample_binomial_planted: enumerate mode capped at 2e7 subsets");
    std::int32_t idx[64];
    for (int j = 0; j < k; ++j) idx[j] = j;
    for (;;) {
      const int ones = detail::edge_ones(idx, k, sigma);
      if (ones != 0 && ones != k && rng.uniform01() < p) h.flat.insert(h.flat.end(), idx, idx + k);
      int j = k - 1;
      while (j >= 0 && idx[j] == n - k + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int t = j + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
    h.canonicalize();
    return h;
  }

  const long double pool = count_bichromatic(n0, n1, k);
  long m;
  if (pool < 9.0e15L) {
    m = detail::draw_binomial(rng, pool, p);
  } else {
    const double lambda = static_cast<double>(pool) * p;
    if (lambda > 1e9) throw resource_cap_error("sample_binomial_planted: expected edge count above 1e9");
    m = detail::draw_poisson(rng, lambda);
  }

  h.flat.reserve(static_cast<std::size_t>(m) * k);
  EdgeKeySet seen(h.n);
  detail::DrawBudget budget(m);
  std::int32_t tmp[64];
  for (long got = 0; got < m;) {
    budget.spend();
    detail::draw_k_distinct(rng, n, k, tmp);
    const int ones = detail::edge_ones(tmp, k, sigma);
    if (ones == 0 || ones == k) continue;
    if (!seen.insert(tmp, k)) continue;
    h.flat.insert(h.flat.end(), tmp, tmp + k);
    ++got;
  }
  h.canonicalize();
  return h;
}

}  // namespace condlab
