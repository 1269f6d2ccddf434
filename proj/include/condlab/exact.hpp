#pragma once

// Exhaustive small-instance computations: solution counts, monochromatic-edge
// histograms, partition functions, distance profiles, cluster geometry,
// criticality counts.
//
// The sweep fixes vertex bit 0 at color 0 and walks the remaining 2^{n-1}
// colorings in Gray-code order, so consecutive colorings differ in one vertex
// and each step only touches that vertex's incident edges. Each visited
// coloring stands for itself and its complement (which has the same
// monochromatic count, the mirrored distance n-d, and the mirrored class
// sizes), so visitors double their counts. Vertices are assigned to mask bits
// by ascending degree: bit b flips 2^{n-1-b} times, so the cheap vertices
// absorb almost all flips and the amortized cost per coloring is far below
// one edge-update on sparse instances.

#include <bit>
#include <cstdint>
#include <thread>
#include <vector>

#include "condlab/common.hpp"
#include "condlab/hypergraph.hpp"
#include "condlab/sampler.hpp"

namespace condlab {

inline constexpr int kEnumerationCap = 30;

namespace detail {

inline void check_enumeration_cap(const char* op, int n) {
  if (n > kEnumerationCap)
    throw resource_cap_error(std::string(op) +
                             ": n exceeds the enumeration cap of 30 vertices; "
                             "use the sampling operations (scans, moment checks) instead");
}

struct SweepPrep {
  int n = 0, k = 0;
  long m = 0;
  std::vector<int> perm;      // mask bit -> original vertex id
  std::vector<int> bit_of;    // original vertex id -> mask bit
  std::vector<std::uint64_t> edge_mask;
  std::vector<std::int32_t> inc_off, inc;  // CSR: mask bit -> incident edge ids
  std::int8_t mono_up[64] = {0}, mono_down[64] = {0};
  std::int8_t crit_up[64] = {0}, crit_down[64] = {0};

  std::uint64_t permute_mask(const Coloring& sigma) const {
    std::uint64_t mask = 0;
    for (int v = 0; v < n; ++v)
      if (sigma[v]) mask |= std::uint64_t{1} << bit_of[v];
    return mask;
  }
};

inline SweepPrep prepare_sweep(const Hypergraph& h) {
  SweepPrep p;
  p.n = h.n;
  p.k = h.k;
  p.m = h.m();
  std::vector<long> deg(h.n, 0);
  for (long e = 0; e < p.m; ++e)
    for (int j = 0; j < h.k; ++j) ++deg[h.edge(e)[j]];

  // Ascending degree onto bits 1..n-1 (descending flip frequency); the
  // highest-degree vertex takes the fixed bit 0.
  std::vector<int> by_deg(h.n);
  for (int v = 0; v < h.n; ++v) by_deg[v] = v;
  std::sort(by_deg.begin(), by_deg.end(),
            [&](int a, int b) { return deg[a] != deg[b] ? deg[a] < deg[b] : a < b; });
  p.perm.resize(h.n);
  p.bit_of.resize(h.n);
  p.perm[0] = by_deg[h.n - 1];
  for (int b = 1; b < h.n; ++b) p.perm[b] = by_deg[b - 1];
  for (int b = 0; b < h.n; ++b) p.bit_of[p.perm[b]] = b;

  p.edge_mask.resize(p.m);
  std::vector<std::int32_t> cnt(h.n, 0);
  for (long e = 0; e < p.m; ++e) {
    std::uint64_t mask = 0;
    for (int j = 0; j < h.k; ++j) {
      const int b = p.bit_of[h.edge(e)[j]];
      mask |= std::uint64_t{1} << b;
      ++cnt[b];
    }
    p.edge_mask[e] = mask;
  }
  p.inc_off.assign(h.n + 1, 0);
  for (int b = 0; b < h.n; ++b) p.inc_off[b + 1] = p.inc_off[b] + cnt[b];
  p.inc.resize(p.inc_off[h.n]);
  std::vector<std::int32_t> fill(p.inc_off.begin(), p.inc_off.end() - 1);
  for (long e = 0; e < p.m; ++e)
    for (int j = 0; j < h.k; ++j) p.inc[fill[p.bit_of[h.edge(e)[j]]]++] = static_cast<std::int32_t>(e);

  const int k = h.k;
  auto is_mono = [k](int c) { return c == 0 || c == k; };
  auto is_crit = [k](int c) { return c == 1 || c == k - 1; };
  for (int c = 0; c < k; ++c) {
    p.mono_up[c] = static_cast<std::int8_t>(is_mono(c + 1) - is_mono(c));
    p.crit_up[c] = static_cast<std::int8_t>(is_crit(c + 1) - is_crit(c));
  }
  for (int c = 1; c <= k; ++c) {
    p.mono_down[c] = static_cast<std::int8_t>(is_mono(c - 1) - is_mono(c));
    p.crit_down[c] = static_cast<std::int8_t>(is_crit(c - 1) - is_crit(c));
  }
  return p;
}

// Visitors declare needs_crit/needs_dist so untracked statistics cost nothing.
template <class V>
void sweep_range(const SweepPrep& p, std::uint64_t lo, std::uint64_t hi, V& vis) {
  if (lo >= hi) return;
  const std::uint64_t g = lo ^ (lo >> 1);
  std::uint64_t x = g << 1;
  std::vector<std::uint8_t> cnt(static_cast<std::size_t>(p.m));
  int mono = 0, crit = 0;
  for (long e = 0; e < p.m; ++e) {
    const int c = std::popcount(x & p.edge_mask[e]);
    cnt[e] = static_cast<std::uint8_t>(c);
    mono += c == 0 || c == p.k;
    crit += c == 1 || c == p.k - 1;
  }
  int ones = std::popcount(x);
  int dist = 0;
  if constexpr (V::needs_dist) dist = std::popcount(x ^ vis.ref_mask);
  for (std::uint64_t c = lo;;) {
    vis.visit(x, mono, crit, ones, dist);
    if (++c == hi) break;
    const int v = std::countr_zero(c) + 1;
    const std::uint64_t bit = std::uint64_t{1} << v;
    x ^= bit;
    const bool up = (x & bit) != 0;
    const int delta = up ? 1 : -1;
    ones += delta;
    if constexpr (V::needs_dist) dist += ((x ^ vis.ref_mask) & bit) ? 1 : -1;
    const std::int8_t* mt = up ? p.mono_up : p.mono_down;
    const std::int8_t* ct = up ? p.crit_up : p.crit_down;
    const std::int32_t* ids = p.inc.data();
    for (std::int32_t i = p.inc_off[v], end = p.inc_off[v + 1]; i < end; ++i) {
      const std::int32_t e = ids[i];
      const std::uint8_t c0 = cnt[e];
      mono += mt[c0];
      if constexpr (V::needs_crit) crit += ct[c0];
      cnt[e] = static_cast<std::uint8_t>(c0 + delta);
    }
  }
}

// Runs the sweep over [0, 2^{n-1}) split across workers; each worker fills
// its own copy of the visitor, merged left to right (deterministic).
template <class V>
void sweep_all(const SweepPrep& p, V& vis, int workers) {
  const std::uint64_t total = std::uint64_t{1} << (p.n - 1);
  if (workers <= 1 || total < 4096) {
    sweep_range(p, std::uint64_t{0}, total, vis);
    return;
  }
  const int t = std::min<int>(workers, 64);
  std::vector<V> parts(t, vis);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int i = 0; i < t; ++i) {
    const std::uint64_t lo = total / t * i + std::min<std::uint64_t>(i, total % t);
    const std::uint64_t hi = total / t * (i + 1) + std::min<std::uint64_t>(i + 1, total % t);
    pool.emplace_back([&p, lo, hi, &part = parts[i]] { sweep_range(p, lo, hi, part); });
  }
  for (auto& th : pool) th.join();
  for (auto& part : parts) vis.merge(part);
}

struct ZVisitor {
  static constexpr bool needs_crit = false;
  static constexpr bool needs_dist = false;
  std::uint64_t z = 0;
  void visit(std::uint64_t, int mono, int, int, int) { z += 2 * (mono == 0); }
  void merge(const ZVisitor& o) { z += o.z; }
};

struct CensusVisitor {
  static constexpr bool needs_crit = false;
  static constexpr bool needs_dist = false;
  int half_n = 0;
  std::uint64_t z = 0, z_e = 0;
  std::vector<std::uint64_t> s_mu;  // index: monochromatic edge count
  void visit(std::uint64_t, int mono, int, int ones, int) {
    s_mu[mono] += 2;
    if (mono == 0) {
      z += 2;
      z_e += 2 * (ones == half_n && 2 * half_n > 0);
    }
  }
  void merge(const CensusVisitor& o) {
    z += o.z;
    z_e += o.z_e;
    for (std::size_t i = 0; i < s_mu.size(); ++i) s_mu[i] += o.s_mu[i];
  }
};

struct ProfileVisitor {
  static constexpr bool needs_crit = false;
  static constexpr bool needs_dist = true;
  std::uint64_t ref_mask = 0;
  int n = 0, half_n = 0;
  bool equitable_only = false;
  std::vector<std::uint64_t> z_d;
  void visit(std::uint64_t, int mono, int, int ones, int dist) {
    if (mono != 0) return;
    if (equitable_only && ones != half_n) return;
    ++z_d[dist];
    ++z_d[n - dist];
  }
  void merge(const ProfileVisitor& o) {
    for (std::size_t i = 0; i < z_d.size(); ++i) z_d[i] += o.z_d[i];
  }
};

struct CritCountVisitor {
  static constexpr bool needs_crit = true;
  static constexpr bool needs_dist = false;
  int half_n = 0;
  long target = 0;
  std::uint64_t count = 0;
  void visit(std::uint64_t, int mono, int crit, int ones, int) {
    count += 2 * (mono == 0 && ones == half_n && crit == target);
  }
  void merge(const CritCountVisitor& o) { count += o.count; }
};

struct RigidVisitor {
  static constexpr bool needs_crit = false;
  static constexpr bool needs_dist = false;
  std::uint64_t sigma_mask = 0, r_mask = 0;
  int r_size = 0, theta = 0;
  bool violated = false;
  void visit(std::uint64_t x, int mono, int, int, int) {
    if (mono != 0) return;
    const int fr = std::popcount((x ^ sigma_mask) & r_mask);
    const int fr_c = r_size - fr;  // the complement coloring's flip count in R
    violated |= (fr >= 1 && fr < theta) || (fr_c >= 1 && fr_c < theta);
  }
  void merge(const RigidVisitor& o) { violated |= o.violated; }
};

}  // namespace detail

struct SolutionCensus {
  long n = 0, m = 0;
  std::uint64_t z = 0;    // proper 2-colorings
  std::uint64_t z_e = 0;  // equitable proper 2-colorings
  std::vector<std::uint64_t> s_mu;              // mu -> #colorings with mu monochromatic edges
  std::vector<std::pair<double, double>> z_b;   // (b, sum_sigma exp(-b * mu(sigma)))
};

inline SolutionCensus solution_census(const Hypergraph& h, const std::vector<double>& b_list,
                                      int workers = 1) {
  detail::check_enumeration_cap("solution_census", h.n);
  const auto prep = detail::prepare_sweep(h);
  detail::CensusVisitor vis;
  vis.half_n = h.n % 2 == 0 ? h.n / 2 : 0;
  vis.s_mu.assign(static_cast<std::size_t>(prep.m) + 1, 0);
  detail::sweep_all(prep, vis, workers);
  SolutionCensus out;
  out.n = h.n;
  out.m = prep.m;
  out.z = vis.z;
  out.z_e = h.n % 2 == 0 ? vis.z_e : 0;
  out.s_mu = std::move(vis.s_mu);
  for (const double b : b_list) {
    KahanSum acc;
    for (std::size_t mu = 0; mu < out.s_mu.size(); ++mu)
      if (out.s_mu[mu]) acc.add(static_cast<double>(out.s_mu[mu]) * std::exp(-b * static_cast<double>(mu)));
    out.z_b.emplace_back(b, acc.value());
  }
  return out;
}

inline std::uint64_t count_solutions(const Hypergraph& h, int workers = 1) {
  detail::check_enumeration_cap("count_solutions", h.n);
  const auto prep = detail::prepare_sweep(h);
  detail::ZVisitor vis;
  detail::sweep_all(prep, vis, workers);
  return vis.z;
}

struct DistanceProfile {
  long n = 0;
  bool sigma_proper = false;
  std::uint64_t z = 0;
  std::vector<std::uint64_t> z_d;  // index: Hamming distance from the reference
};

inline DistanceProfile distance_profile(const Hypergraph& h, const Coloring& sigma,
                                        bool equitable_only = false, int workers = 1) {
  detail::check_enumeration_cap("distance_profile", h.n);
  if (static_cast<long>(sigma.size()) != h.n)
    throw parameter_error("distance_profile: coloring length != n");
  const auto prep = detail::prepare_sweep(h);
  detail::ProfileVisitor vis;
  vis.ref_mask = prep.permute_mask(sigma);
  vis.n = h.n;
  vis.half_n = h.n / 2;
  vis.equitable_only = equitable_only && h.n % 2 == 0;
  vis.z_d.assign(h.n + 1, 0);
  detail::sweep_all(prep, vis, workers);
  DistanceProfile out;
  out.n = h.n;
  out.sigma_proper = violations(h, sigma) == 0;
  out.z_d = std::move(vis.z_d);
  for (const auto c : out.z_d) out.z += c;
  return out;
}

inline std::uint64_t local_cluster_size(const DistanceProfile& p, double alpha) {
  std::uint64_t total = 0;
  for (long d = 0; d <= p.n; ++d)
    if (static_cast<double>(d) <= alpha * static_cast<double>(p.n)) total += p.z_d[d];
  return total;
}

enum class Verdict { shattered, condensed, neither, tie };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::shattered: return "shattered";
    case Verdict::condensed: return "condensed";
    case Verdict::neither: return "neither";
    default: return "tie";
  }
}

struct ClusterReport {
  Coloring reference;
  DistanceProfile profile;
  double alpha = 0, beta = 0, gamma = 0;
  std::uint64_t local_cluster_size = 0;
  bool gap_found = false;  // no solution at distance d with alpha*n < d < beta*n
  Verdict verdict = Verdict::neither;
};

inline ClusterReport geometry_verdict(const Hypergraph& h, const Coloring& sigma, double alpha,
                                      double beta, double gamma, int workers = 1) {
  if (!(0 < alpha && alpha < beta && beta <= 0.5))
    throw parameter_error("geometry_verdict: need 0 < alpha < beta <= 1/2");
  if (gamma < 0) throw parameter_error("geometry_verdict: need gamma >= 0");
  ClusterReport rep;
  rep.reference = sigma;
  rep.profile = distance_profile(h, sigma, false, workers);
  rep.alpha = alpha;
  rep.beta = beta;
  rep.gamma = gamma;
  rep.local_cluster_size = local_cluster_size(rep.profile, alpha);
  const double n = static_cast<double>(h.n);
  bool empty = true;
  for (long d = 0; d <= h.n; ++d)
    if (static_cast<double>(d) > alpha * n && static_cast<double>(d) < beta * n && rep.profile.z_d[d] > 0)
      empty = false;
  rep.gap_found = empty;
  const double threshold = std::exp(-gamma * n) * static_cast<double>(rep.profile.z);
  const double cluster = static_cast<double>(rep.local_cluster_size);
  if (!rep.gap_found)
    rep.verdict = Verdict::neither;
  else if (cluster == threshold)
    rep.verdict = Verdict::tie;
  else
    rep.verdict = cluster < threshold ? Verdict::shattered : Verdict::condensed;
  return rep;
}

struct CriticalCount {
  long target = 0;
  std::uint64_t count = 0;  // equitable proper colorings with exactly `target` critical edges
};

// Target rounding: nearest integer, ties upward.
inline CriticalCount count_critical_colorings(const Hypergraph& h, double beta, int workers = 1) {
  detail::check_enumeration_cap("count_critical_colorings", h.n);
  if (h.n % 2 != 0) throw parameter_error("count_critical_colorings: n must be even");
  const auto prep = detail::prepare_sweep(h);
  const double raw =
      (1.0 + beta) * h.k * static_cast<double>(prep.m) / (std::ldexp(1.0, h.k - 1) - 1.0);
  detail::CritCountVisitor vis;
  vis.half_n = h.n / 2;
  vis.target = static_cast<long>(std::floor(raw + 0.5));
  detail::sweep_all(prep, vis, workers);
  return CriticalCount{vis.target, vis.count};
}

// True iff every proper coloring that flips at least one vertex of R (or whose
// complement does) flips at least theta of them.
inline bool rigid_check(const Hypergraph& h, const Coloring& sigma,
                        const std::vector<std::int32_t>& r, int theta, int workers = 1) {
  detail::check_enumeration_cap("rigid_check", h.n);
  if (static_cast<long>(sigma.size()) != h.n) throw parameter_error("rigid_check: coloring length != n");
  if (theta < 0) throw parameter_error("rigid_check: theta must be >= 0");
  const auto prep = detail::prepare_sweep(h);
  detail::RigidVisitor vis;
  vis.sigma_mask = prep.permute_mask(sigma);
  vis.theta = theta;
  for (const auto v : r) {
    if (v < 0 || v >= h.n) throw parameter_error("rigid_check: R vertex out of range");
    vis.r_mask |= std::uint64_t{1} << prep.bit_of[v];
  }
  vis.r_size = std::popcount(vis.r_mask);
  detail::sweep_all(prep, vis, workers);
  return !vis.violated;
}

struct MomentEstimate {
  double mean = 0, stderr_of_mean = 0, mean_sq = 0;
  long trials = 0;
};

// Averages the exact solution count over i.i.d. uniform instances; trial t
// uses the seed stream hash64(seed, t).
inline MomentEstimate mean_Z_over_trials(long n, long m, int k, long trials, std::uint64_t seed,
                                         int workers = 1) {
  detail::check_enumeration_cap("mean_Z_over_trials", static_cast<int>(n));
  if (trials < 1) throw parameter_error("mean_Z_over_trials: need trials >= 1");
  std::vector<double> zs(trials);
  const auto run = [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      Rng rng(hash64(seed, static_cast<std::uint64_t>(t)));
      const Hypergraph h = sample_uniform(n, m, k, rng);
      const auto prep = detail::prepare_sweep(h);
      detail::ZVisitor vis;
      detail::sweep_range(prep, std::uint64_t{0}, std::uint64_t{1} << (h.n - 1), vis);
      zs[t] = static_cast<double>(vis.z);
    }
  };
  if (workers <= 1 || trials < 2 * workers) {
    run(0, trials);
  } else {
    const int t = std::min<long>(workers, trials);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int i = 0; i < t; ++i)
      pool.emplace_back(run, trials / t * i + std::min<long>(i, trials % t),
                        trials / t * (i + 1) + std::min<long>(i + 1, trials % t));
    for (auto& th : pool) th.join();
  }
  MomentEstimate out;
  out.trials = trials;
  KahanSum sum, sum_sq;
  for (const double z : zs) {
    sum.add(z);
    sum_sq.add(z * z);
  }
  out.mean = sum.value() / static_cast<double>(trials);
  out.mean_sq = sum_sq.value() / static_cast<double>(trials);
  if (trials > 1) {
    KahanSum dev;
    for (const double z : zs) dev.add((z - out.mean) * (z - out.mean));
    out.stderr_of_mean = std::sqrt(dev.value() / (static_cast<double>(trials - 1) * static_cast<double>(trials)));
  }
  return out;
}

}  // namespace condlab
