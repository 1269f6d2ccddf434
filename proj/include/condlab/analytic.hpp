#pragma once

// Rate functions and thresholds for random k-uniform hypergraph 2-coloring.
//
// Everything here is an exponential-scale (per-vertex) quantity: a coloring
// count N at size n enters as (1/n) ln N. The central objects are
//
//   first_moment_rate(k,r) = ln 2 + r ln(1 - 2^(1-k)),
//       the growth rate of the expected number of proper 2-colorings at edge
//       density r = m/n;
//   psi(k,r,x), the rate of the expected number of proper colorings at block
//       overlap x with a fixed proper coloring, whose global maximum leaving
//       x = 1/2 marks the failure of the plain second moment method;
//   pair_rate(k,r,beta,alpha), the planted-pair analogue for colorings with
//       a prescribed surplus of critical edges;
//   local_cluster_rate(k,lambda), the entropy density of the local cluster
//       around a planted coloring when critical edges arrive at rate lambda.
//
// Threshold locations (first-moment zero, second-moment breakdown,
// condensation, and the cluster/first-moment crossing) are derived from these
// by closed form or bisection, never hard-coded.

#include <optional>
#include <string>
#include <vector>

#include "condlab/common.hpp"

namespace condlab {

struct Params {
  int k = 3;        // edge size
  double r = 0.0;   // edge density m/n
  double beta = 0.0;     // critical-edge surplus, m1 = (1+beta)*k*m/(2^(k-1)-1)
  double lambda = 0.0;   // critical-edge density m1/n
};

inline void validate(const Params& p) {
  if (p.k < 3) throw parameter_error("Params: k must be >= 3");
  if (!(p.r >= 0.0)) throw parameter_error("Params: r must be >= 0");
  if (!(p.lambda >= 0.0)) throw parameter_error("Params: lambda must be >= 0");
  if (!(p.beta > -1.0)) throw parameter_error("Params: beta must be > -1");
}

// h(x) = -x ln x - (1-x) ln(1-x), with the boundary limits h(0) = h(1) = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary_entropy: x outside [0,1]");
  double s = 0.0;
  if (x > 0.0) s -= x * std::log(x);
  if (x < 1.0) s -= (1.0 - x) * std::log(1.0 - x);
  return s;
}

namespace detail {
// phi extended continuously to x = -1 (value 1); used where a binomial rate
// is evaluated at the closed end of its feasible range.
inline double phi_ext(double x) {
  if (x == -1.0) return 1.0;
  if (std::abs(x) < 1e-4) {
    // series keeps relative accuracy where (1+x)log1p(x)-x cancels
    return x * x * (0.5 - x / 6.0 + x * x / 12.0);
  }
  return (1.0 + x) * std::log1p(x) - x;
}
}  // namespace detail

// phi(x) = (1+x) ln(1+x) - x on x > -1; the Chernoff exponent of a unit
// Poisson/binomial cell.
inline double chernoff_phi(double x) {
  if (!(x > -1.0)) throw std::domain_error("chernoff_phi: x must be > -1");
  return detail::phi_ext(x);
}

// Point log-probability rate for Bin(n, p) at mu + t, mu = n*p:
// -mu*phi(t/mu) - (n-mu)*phi(t/(n-mu)). n is a real scale (callers pass
// per-vertex edge counts), not necessarily an integer.
inline double binomial_point_rate(double n, double p, double t) {
  if (!(n > 0.0)) throw parameter_error("binomial_point_rate: n must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw parameter_error("binomial_point_rate: p must be in (0,1)");
  const double mu = n * p;
  if (!(mu + t > 0.0 && mu + t < n)) throw std::domain_error("binomial_point_rate: mu + t outside (0,n)");
  return -mu * chernoff_phi(t / mu) - (n - mu) * chernoff_phi(t / (n - mu));
}

// (1/n) ln E[Z] for H_k(n, rn): ln 2 + r ln(1 - 2^(1-k)).
inline double first_moment_rate(int k, double r) {
  require_k(k);
  if (!(r >= 0.0)) throw parameter_error("first_moment_rate: r must be >= 0");
  return std::log(2.0) + r * std::log1p(-std::ldexp(1.0, 1 - k));
}

// ln E[Z] for the finite model H_k(n,m): colorings with j ones survive m
// uniformly chosen distinct edges with probability
// C(C(n,k)-C(j,k)-C(n-j,k), m) / C(C(n,k), m).  Each log-ratio is summed as
// log1p(-bad/(A-i)) so nothing overflows and nothing cancels; when the edge
// universe dwarfs m^2 the i-sum collapses to its midpoint evaluation.
inline double exact_first_moment_log(long n, long m, int k) {
  if (n < 1 || k < 2 || k > n) throw parameter_error("exact_first_moment: need 1 <= k <= n (k >= 2)");
  if (m < 0) throw parameter_error("exact_first_moment: m must be >= 0");
  const long double A = choose_ld(n, k);
  if ((long double)m > A) throw parameter_error("exact_first_moment: m exceeds C(n,k)");
  std::vector<double> terms;
  terms.reserve(n + 1);
  const bool small = (static_cast<long double>(n + 1) * m <= 2e8L);
  for (long j = 0; j <= n; ++j) {
    const long double bad = choose_ld(j, k) + choose_ld(n - j, k);
    const long double allowed = A - bad;
    if (allowed < (long double)m) continue;
    double corr = 0.0;
    if (bad > 0.0L) {
      if (small) {
        KahanSum cs;
        for (long i = 0; i < m; ++i) cs.add(std::log1p(static_cast<double>(-bad / (A - i))));
        corr = cs.value();
      } else {
        corr = m * std::log1p(static_cast<double>(-bad / (A - 0.5L * (m - 1))));
      }
    }
    terms.push_back(lchoose(n, j) + corr);
  }
  return log_sum_exp(terms);
}

inline double exact_first_moment(long n, long m, int k) {
  return std::exp(exact_first_moment_log(n, m, k));
}

// Overlap-transition frequencies for an edge between a planted coloring and a
// second coloring agreeing on a (1-alpha)-fraction of vertices:
//   u1/v1: P[critical under tau | critical under sigma] and P[mono | critical];
//   u2/v2: same conditioned on bichromatic-non-critical under sigma, obtained
//   by summing the per-pattern probabilities over the 2^k - 2k - 2 patterns.
// For k = 3 that pattern class is empty, so u2 = v2 = 0 with the degenerate
// flag set. v2_closed_discrepancy reports how far the frequently quoted
// closed form of v2 sits from the pattern sum (the closed form is wrong; the
// sum is what the flip oracle in the tests validates).
struct OverlapParams {
  double u1 = 0.0, v1 = 0.0, u2 = 0.0, v2 = 0.0;
  bool degenerate = false;
  double v2_closed_discrepancy = 0.0;
};

inline OverlapParams overlap_params(int k, double alpha) {
  require_k(k);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("overlap_params: alpha outside [0,1]");
  const double a = alpha, b = 1.0 - alpha;
  OverlapParams out;
  out.u1 = std::pow(b, k) + std::pow(a, k) + (k - 1) * a * a * std::pow(b, k - 2) +
           (k - 1) * std::pow(a, k - 2) * b * b;
  out.v1 = a * std::pow(b, k - 1) + b * std::pow(a, k - 1);
  const double d2 = std::ldexp(1.0, k) - 2.0 * k - 2.0;
  if (d2 <= 0.0) {
    out.degenerate = true;
    return out;
  }
  double su = 0.0, sv = 0.0;
  for (int l = 2; l <= k - 2; ++l) {
    const double c = static_cast<double>(choose_ld(k, l));
    sv += c * (std::pow(a, l) * std::pow(b, k - l) + std::pow(b, l) * std::pow(a, k - l));
    su += c * (l * std::pow(a, l - 1) * std::pow(b, k - l + 1) +
               l * std::pow(b, l - 1) * std::pow(a, k - l + 1) +
               (k - l) * std::pow(b, l + 1) * std::pow(a, k - l - 1) +
               (k - l) * std::pow(a, l + 1) * std::pow(b, k - l - 1));
  }
  out.u2 = su / d2;
  out.v2 = sv / d2;
  const double v2_closed =
      (1.0 - 2.0 * (std::pow(a, k) + std::pow(b, k) + 2.0 * k * a * std::pow(b, k - 1) +
                    2.0 * k * std::pow(a, k - 1) * b)) /
      d2;
  out.v2_closed_discrepancy = std::abs(out.v2 - v2_closed);
  return out;
}

// psi(k,r,x) = h(x) + r ln(1 - (1 - x^k - (1-x)^k)/(2^(k-1)-1)).
// The log goes through log1p of the small ratio so that psi(1/2) reproduces
// first_moment_rate bit-for-bit even when r is of order 2^k.
inline double psi(int k, double r, double x) {
  require_k(k);
  if (!(r >= 0.0)) throw parameter_error("psi: r must be >= 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("psi: x outside [0,1]");
  const double d = std::ldexp(1.0, k - 1) - 1.0;
  const double u = (1.0 - std::pow(x, k) - std::pow(1.0 - x, k)) / d;
  if (!(u < 1.0)) throw std::domain_error("psi: log argument not positive");
  return binary_entropy(x) + r * std::log1p(-u);
}

struct MaximizeResult {
  double x_star = 0.0;
  double psi_star = 0.0;
};

// Grid scan at 1e-4 resolution of [lo, hi], then golden-section refinement of
// the best three-point bracket to |x| tolerance 1e-10. Ties go to smaller x.
inline MaximizeResult maximize_psi(int k, double r, double lo, double hi) {
  require_k(k);
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw parameter_error("maximize_psi: need 0 <= lo < hi <= 1");
  constexpr int kGrid = 10000;
  const double step = (hi - lo) / kGrid;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double x = (i == kGrid) ? hi : lo + i * step;
    const double v = psi(k, r, x);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double bl = (best == 0) ? lo : lo + (best - 1) * step;
  const double bh = (best == kGrid) ? hi : lo + (best + 1) * step;
  const GoldenResult g = golden_max([&](double x) { return psi(k, r, x); }, bl, bh, 1e-10);
  MaximizeResult out{(best == kGrid) ? hi : lo + best * step, best_val};
  if (g.value > best_val) {
    out.x_star = g.x;
    out.psi_star = g.value;
  }
  return out;
}

// Entropy density of the local cluster when critical edges arrive at rate
// lambda: exp(-lambda) * (1 - C(k,2) exp(-lambda) ln 2) * ln 2 - 7^(-k).
inline double local_cluster_rate(int k, double lambda) {
  require_k(k);
  if (!(lambda >= 0.0)) throw parameter_error("local_cluster_rate: lambda must be >= 0");
  const double e = std::exp(-lambda);
  const double c2 = 0.5 * k * (k - 1);
  return e * (1.0 - c2 * e * std::log(2.0)) * std::log(2.0) - std::pow(7.0, -k);
}

struct ThresholdReport {
  int k = 0;
  double r_first_exact = 0.0;       // root of first_moment_rate
  double r_first_asymptotic = 0.0;  // 2^(k-1) ln 2 - (ln 2)/2
  double r_second = 0.0;            // last r where 1/2 is the global max of psi
  double r_second_asymptotic = 0.0; // 2^(k-1) ln 2 - (1 + ln 2)/2
  double r_cond = 0.0;              // 2^(k-1) ln 2 - ln 2
  double r_conjectured = 0.0;       // 2^(k-1) ln 2 - ((ln 2)/2 + 1/4)
  std::optional<double> r_crit;     // cluster/first-moment matching density
  std::string r_crit_diagnostic;
};

namespace detail {

// True while 1/2 is the global maximizer of psi over (0,1).  Only the window
// (0, 2^(-k/2)) can produce a competing maximum below the first-moment
// threshold, and scanning it as its own interval resolves the 2^(-k)-scale
// spike that a uniform grid over (0,1) would step over.
inline bool second_moment_holds(int k, double r) {
  const double f = first_moment_rate(k, r);
  const double slack = 1e-13 + 1e-12 * std::abs(f);
  const double alpha = std::pow(2.0, -0.5 * k);
  const MaximizeResult left = maximize_psi(k, r, 0.0, alpha);
  if (left.psi_star > f + slack) return false;
  const MaximizeResult mid = maximize_psi(k, r, alpha, 1.0 - alpha);
  return mid.psi_star <= f + slack;
}

}  // namespace detail

inline ThresholdReport thresholds(int k) {
  require_k(k);
  if (k > 40) throw parameter_error("thresholds: k above 40 not supported");
  ThresholdReport rep;
  rep.k = k;
  const double ln2 = std::log(2.0);
  const double p2 = std::ldexp(1.0, k - 1);
  rep.r_first_exact = -ln2 / std::log1p(-std::ldexp(1.0, 1 - k));
  rep.r_first_asymptotic = p2 * ln2 - 0.5 * ln2;
  rep.r_second_asymptotic = p2 * ln2 - 0.5 * (1.0 + ln2);
  rep.r_cond = p2 * ln2 - ln2;
  rep.r_conjectured = p2 * ln2 - (0.5 * ln2 + 0.25);
  double hi = rep.r_first_exact + 1.0;
  if (detail::second_moment_holds(k, hi)) hi = 4.0 * rep.r_first_exact;  // defensive; unreachable in theory
  rep.r_second = bisect_predicate([&](double r) { return detail::second_moment_holds(k, r); }, 0.0, hi, 1e-8);
  // Cluster entropy matches the first-moment rate: bisection over
  // [r_cond - 2, r_cond + 2] (clamped to r >= 0 for very small k).
  const double lam_of = k / (p2 - 1.0);
  auto gap = [&](double r) {
    return local_cluster_rate(k, lam_of * r) - first_moment_rate(k, r) - std::pow(16.0, -k);
  };
  const double lo_r = std::max(0.0, rep.r_cond - 2.0);
  const double hi_r = rep.r_cond + 2.0;
  const double glo = gap(lo_r), ghi = gap(hi_r);
  if ((glo < 0.0) == (ghi < 0.0)) {
    rep.r_crit_diagnostic = "no sign change of cluster/first-moment gap over [r_cond-2, r_cond+2]";
  } else {
    rep.r_crit = bisect_root(gap, lo_r, hi_r, 1e-8);
  }
  return rep;
}

// Planted-pair rate g(alpha) at critical-edge surplus beta: the expected
// number of equitable colorings at overlap distance alpha*n from the planted
// one that carry the same critical-edge budget, per vertex.  The convolution
// probability P[Bin(m1,q1) + Bin(m2,q2) = m1] enters through its largest-term
// split: maximize over the fraction s of the budget carried by pool 1.
inline double pair_rate(int k, double r, double beta, double alpha) {
  if (k < 4) throw parameter_error("pair_rate: k must be >= 4 (k = 3 has no non-critical bichromatic pool)");
  require_k(k);
  if (!(r > 0.0)) throw parameter_error("pair_rate: r must be > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("pair_rate: alpha outside [0,1]");
  const double d = std::ldexp(1.0, k - 1) - 1.0;
  const double mu1 = (1.0 + beta) * k * r / d;
  if (!(mu1 > 0.0 && mu1 < r)) throw parameter_error("pair_rate: mu1 = (1+beta)kr/(2^(k-1)-1) must lie in (0, r)");
  if (alpha == 0.0 || alpha == 1.0) return 0.0;  // boundary limit
  const OverlapParams ov = overlap_params(k, alpha);
  const double a = mu1, b = r - mu1;
  const double q1 = ov.u1 / (1.0 - ov.v1);
  const double q2 = ov.u2 / (1.0 - ov.v2);
  if (!(q1 > 0.0 && q1 < 1.0 && q2 > 0.0 && q2 < 1.0))
    throw std::domain_error("pair_rate: conditional frequencies collapse at this alpha");
  auto rate_at = [](double scale, double p, double target) {
    const double mu = scale * p;
    const double t = target - mu;
    return -mu * detail::phi_ext(t / mu) - (scale - mu) * detail::phi_ext(t / (scale - mu));
  };
  auto split_rate = [&](double s) {
    return rate_at(a, q1, s * a) + rate_at(b, q2, (1.0 - s) * a);
  };
  const double s_lo = std::max(0.0, 1.0 - b / a);
  const double s_hi = 1.0;
  constexpr int kGrid = 1000;
  const double step = (s_hi - s_lo) / kGrid;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double s = (i == kGrid) ? s_hi : s_lo + i * step;
    const double v = split_rate(s);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double bl = (best == 0) ? s_lo : s_lo + (best - 1) * step;
  const double bh = (best == kGrid) ? s_hi : s_lo + (best + 1) * step;
  const GoldenResult g = golden_max(split_rate, bl, bh, 1e-10);
  const double conv = std::max(best_val, g.value);
  return binary_entropy(alpha) + a * std::log1p(-ov.v1) + b * std::log1p(-ov.v2) + conv;
}

struct LaplaceResult {
  double log_sum = 0.0;  // ln sum_{d=1}^{n-1} exp(n * rate(d/n))
  double ratio = 0.0;    // that sum divided by exp(n * max term)
};

// Log-sum-exp over the lattice d = 1..n-1 of exp(n * rate(d/n)); the ratio
// records how much of the sum the largest term carries.
template <class F>
LaplaceResult laplace_sum(F&& rate, long n) {
  if (n < 2) throw parameter_error("laplace_sum: n must be >= 2");
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> t;
  t.reserve(n - 1);
  for (long d = 1; d < n; ++d) {
    const double v = static_cast<double>(n) * rate(static_cast<double>(d) / n);
    t.push_back(v);
    if (v > mx) mx = v;
  }
  KahanSum s;
  for (double v : t) s.add(std::exp(v - mx));
  LaplaceResult out;
  out.ratio = s.value();
  out.log_sum = mx + std::log(out.ratio);
  return out;
}

struct CrossingResult {
  bool found = false;
  double lambda_star = 0.0;
  double lo = 0.0, hi = 0.0;  // final bisection bracket
};

// Crossing of the local-cluster entropy curve with the first-moment rate,
// both viewed as functions of the critical-edge density lambda (the total
// density follows as r = lambda * (2^(k-1)-1)/k). Lands near k ln 2.
inline CrossingResult cluster_vs_first_moment_crossing(int k, double lo = 0.0, double hi = 0.0) {
  require_k(k);
  const double center = k * std::log(2.0);
  if (hi <= lo) {
    lo = 0.5 * center;
    hi = 1.5 * center;
  }
  const double scale = (std::ldexp(1.0, k - 1) - 1.0) / k;
  auto gap = [&](double lam) { return local_cluster_rate(k, lam) - first_moment_rate(k, lam * scale); };
  CrossingResult out;
  double glo = gap(lo), ghi = gap(hi);
  if ((glo < 0.0) == (ghi < 0.0)) return out;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const double gm = gap(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  out.found = true;
  out.lo = lo;
  out.hi = hi;
  out.lambda_star = 0.5 * (lo + hi);
  return out;
}

}  // namespace condlab
