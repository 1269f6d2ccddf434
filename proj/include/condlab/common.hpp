#pragma once

// Shared plumbing: error types, deterministic RNG seeding, compensated
// summation, log-space binomial helpers, and the two 1-d solvers (golden
// section, bisection) every numeric routine in the library is built on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace condlab {

// Bad arguments (CLI exit code 2).
class parameter_error : public std::invalid_argument {
 public:
  explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

// Work refused because it would blow an enumeration or draw cap (CLI exit code 3).
class resource_cap_error : public std::runtime_error {
 public:
  explicit resource_cap_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EEDBA5Eu;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Per-stream seed derivation: both words go through the finalizer so adjacent
// stream indices land far apart. This mapping is part of the reproducibility
// contract; changing it changes every published number.
inline std::uint64_t hash64(std::uint64_t master_seed, std::uint64_t stream) {
  return mix64(mix64(master_seed) ^ mix64(stream ^ 0xA5A5A5A55A5A5A5Aull));
}

// mt19937_64 wrapped with distribution code of our own, so draws depend only
// on the engine's standardized output stream (std::uniform_* helpers are
// implementation-defined and would not be portable across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection; unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw parameter_error("Rng::below: n must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 eng_;
};

// Kahan-Babuska compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(sum exp(v)) without overflow; -inf for an empty list.
inline double log_sum_exp(const std::vector<double>& v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (x > mx) mx = x;
  if (!std::isfinite(mx)) return mx;
  KahanSum s;
  for (double x : v) s.add(std::exp(x - mx));
  return mx + std::log(s.value());
}

// log C(n, k) via lgamma; n need not be integral (used with real upper args).
inline double lchoose(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// C(n, k) as long double by stepwise products; exact to ~1e-18 relative for
// desk-scale n and safe far beyond uint64 range.
inline long double choose_ld(long double n, long double k) {
  if (k < 0 || k > n) return 0.0L;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (long double i = 0; i < k; i += 1.0L) r = r * (n - i) / (i + 1.0L);
  return r;
}

// ln(1 + exp(x)), stable for large |x|.
inline double log1p_exp(double x) {
  if (x > 36.0) return x + std::exp(-x);
  return std::log1p(std::exp(x));
}

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section maximization on [lo, hi] to absolute x tolerance xtol.
// Ties keep the left subinterval, biasing plateaus toward smaller x.
template <class F>
GoldenResult golden_max(F&& f, double lo, double hi, double xtol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

// Bisection on a monotone boolean predicate: returns the crossing point of
// pred over [lo, hi] where pred(lo) is expected true and pred(hi) false.
template <class P>
double bisect_predicate(P&& pred, double lo, double hi, double xtol) {
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Bisection for a root of f over [lo, hi]; requires a sign change.
template <class F>
double bisect_root(F&& f, double lo, double hi, double xtol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw parameter_error("bisect_root: no sign change over bracket");
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All floating-point output funnels through this: 17 significant digits keeps
// golden files bit-stable across runs of the same build.
inline void require_k(int k) {
  if (k < 3) throw parameter_error("k must be >= 3");
  if (k > 62) throw parameter_error("k above 62 exceeds the 2^k double-exactness range");
}

inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

}  // namespace condlab
