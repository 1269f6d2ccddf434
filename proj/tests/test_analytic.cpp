#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstdlib>

#include "condlab/analytic.hpp"

using namespace condlab;

namespace {

// Independent enumeration of the overlap parameters. A vertex pattern is the
// 0/1 colors an edge's vertices take under the reference coloring; a flip
// mask marks which vertices change color in the compared coloring, each
// vertex independently with probability alpha. Critical patterns are uniform
// over their 2k possibilities, non-critical bichromatic ones over 2^k-2k-2.
struct OracleOverlap {
  double u1, v1, u2, v2;
};

OracleOverlap overlap_oracle(int k, double alpha) {
  const int full = 1 << k;
  std::vector<double> pa(k + 1), pb(k + 1);
  pa[0] = pb[0] = 1;
  for (int i = 1; i <= k; ++i) {
    pa[i] = pa[i - 1] * alpha;
    pb[i] = pb[i - 1] * (1 - alpha);
  }
  auto cls = [k](int ones) {
    if (ones == 0 || ones == k) return 0;           // monochromatic
    if (ones == 1 || ones == k - 1) return 1;       // critical
    return 2;                                       // bichromatic non-critical
  };
  double u1 = 0, v1 = 0, u2 = 0, v2 = 0;
  for (int s = 0; s < full; ++s) {
    const int cs = cls(std::popcount(static_cast<unsigned>(s)));
    if (cs == 0) continue;
    for (int f = 0; f < full; ++f) {
      const int of = std::popcount(static_cast<unsigned>(f));
      const double w = pa[of] * pb[k - of];
      const int ct = cls(std::popcount(static_cast<unsigned>(s ^ f)));
      if (cs == 1) {
        u1 += w * (ct == 1);
        v1 += w * (ct == 0);
      } else {
        u2 += w * (ct == 1);
        v2 += w * (ct == 0);
      }
    }
  }
  const double ncrit = 2.0 * k;
  const double nother = std::ldexp(1.0, k) - 2.0 * k - 2.0;
  return {u1 / ncrit, v1 / ncrit, u2 / nother, v2 / nother};
}

}  // namespace

TEST_CASE("binary entropy boundary values are exact") {
  REQUIRE(binary_entropy(0.0) == 0.0);
  REQUIRE(binary_entropy(1.0) == 0.0);
  REQUIRE(binary_entropy(0.5) == 0x1.62e42fefa39efp-1);  // ln 2, exactly
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    REQUIRE(binary_entropy(x) == Catch::Approx(binary_entropy(1 - x)).margin(1e-15));
  }
  REQUIRE_THROWS_AS(binary_entropy(-0.01), std::domain_error);
  REQUIRE_THROWS_AS(binary_entropy(1.01), std::domain_error);
}

TEST_CASE("chernoff phi matches the direct formula and is exact at zero") {
  REQUIRE(chernoff_phi(0.0) == 0.0);
  for (const double x : {1e-6, -1e-6, 1e-5, -1e-5, 1e-3, 0.5, 3.0, -0.9}) {
    const long double direct = (1.0L + static_cast<long double>(x)) * std::log1p(static_cast<long double>(x)) -
                               static_cast<long double>(x);
    REQUIRE(chernoff_phi(x) == Catch::Approx(static_cast<double>(direct)).margin(1e-18).epsilon(1e-12));
  }
  REQUIRE_THROWS_AS(chernoff_phi(-1.0), std::domain_error);
  REQUIRE(chernoff_phi(1e-9) > 0);
  REQUIRE(chernoff_phi(-1e-9) > 0);
}

TEST_CASE("binomial point rate tracks the exact log-pmf up to the polynomial factor") {
  const double n = 1000, p = 0.3;
  for (const double t : {50.0, -50.0}) {
    const double mu = n * p;
    const double c = mu + t;
    const double log_pmf = lchoose(n, c) + c * std::log(p) + (n - c) * std::log1p(-p);
    const double rate = binomial_point_rate(n, p, t);
    REQUIRE(std::fabs(rate - log_pmf) <= 6.0);
    REQUIRE(rate < 0);
  }
  REQUIRE(binomial_point_rate(1000, 0.3, 0.0) == 0.0);
  REQUIRE_THROWS_AS(binomial_point_rate(1000, 0.3, 800.0), std::domain_error);
  REQUIRE_THROWS_AS(binomial_point_rate(1000, 0.3, -300.0), std::domain_error);
  REQUIRE_THROWS_AS(binomial_point_rate(-5, 0.3, 0.0), parameter_error);
  REQUIRE_THROWS_AS(binomial_point_rate(10, 1.5, 0.0), parameter_error);
}

TEST_CASE("overlap parameters match the exhaustive flip-pattern oracle") {
  for (int k = 5; k <= 8; ++k) {
    for (int i = 0; i < 100; ++i) {
      const double alpha = (i + 0.5) / 100.0;
      const auto got = overlap_params(k, alpha);
      const auto want = overlap_oracle(k, alpha);
      CAPTURE(k, alpha);
      REQUIRE(got.u1 == Catch::Approx(want.u1).margin(1e-12));
      REQUIRE(got.v1 == Catch::Approx(want.v1).margin(1e-12));
      REQUIRE(got.u2 == Catch::Approx(want.u2).margin(1e-12));
      REQUIRE(got.v2 == Catch::Approx(want.v2).margin(1e-12));
    }
  }
}

TEST_CASE("conditional criticality odds at half overlap") {
  for (int k = 4; k <= 12; ++k) {
    const auto o = overlap_params(k, 0.5);
    const double ref = k / (std::ldexp(1.0, k - 1) - 1.0);
    REQUIRE(o.u1 / (1 - o.v1) == Catch::Approx(ref).margin(1e-12));
    REQUIRE(o.u2 / (1 - o.v2) == Catch::Approx(ref).margin(1e-12));
  }
}

TEST_CASE("the displayed pair-monochromatic closed form disagrees and is reported") {
  // The summation form is authoritative (it matches the oracle above); the
  // discrepancy field documents how far the rival closed form drifts.
  const auto o = overlap_params(5, 0.3);
  REQUIRE(o.v2_closed_discrepancy > 1e-3);
  const auto mid = overlap_params(6, 0.5);
  REQUIRE(mid.v2_closed_discrepancy > 1e-4);
}

TEST_CASE("k=3 has no non-critical bichromatic pool") {
  const auto o = overlap_params(3, 0.4);
  REQUIRE(o.degenerate);
  REQUIRE_THROWS_AS(pair_rate(3, 2.0, 0.0, 0.4), parameter_error);
}

TEST_CASE("rate function at the balanced point equals the first-moment rate") {
  double worst = 0;
  for (int k = 3; k <= 25; ++k) {
    Rng rng(hash64(42, static_cast<std::uint64_t>(k)));
    for (int i = 0; i < 20; ++i) {
      const double r = rng.uniform01() * std::ldexp(1.0, k);
      const double d = std::fabs(psi(k, r, 0.5) - first_moment_rate(k, r));
      worst = std::max(worst, d);
    }
  }
  REQUIRE(worst <= 1e-12);
}

TEST_CASE("rate function is symmetric about one half") {
  for (int k : {3, 7, 12}) {
    const double r = 0.8 * std::ldexp(1.0, k - 1) * M_LN2;
    for (int i = 1; i < 1000; ++i) {
      const double x = i / 1000.0;
      REQUIRE(psi(k, r, x) == Catch::Approx(psi(k, r, 1 - x)).margin(1e-12));
    }
  }
}

TEST_CASE("rate function curvature at the balanced point") {
  const int k = 25;
  const double r = (std::ldexp(1.0, k - 1) - 1) * M_LN2;
  const double h = 1e-3;
  const double d1 = (psi(k, r, 0.5 + h) - psi(k, r, 0.5 - h)) / (2 * h);
  const double d2 = (psi(k, r, 0.5 + h) - 2 * psi(k, r, 0.5) + psi(k, r, 0.5 - h)) / (h * h);
  REQUIRE(std::fabs(d1) <= 1e-6);
  REQUIRE(d2 == Catch::Approx(-4.0).margin(0.1));
}

TEST_CASE("finite-size first moment fixtures") {
  REQUIRE(exact_first_moment(4, 2, 3) == Catch::Approx(10.0).epsilon(1e-10));
  REQUIRE(exact_first_moment(6, 1, 3) == Catch::Approx(48.0).epsilon(1e-10));
  REQUIRE(exact_first_moment(5, 0, 3) == Catch::Approx(32.0).epsilon(1e-12));
}

TEST_CASE("finite-size first moment matches a per-coloring oracle") {
  // E[Z] = sum over colorings of P[all m edges avoid the monochromatic sets],
  // evaluated here directly in long double as a hypergeometric product.
  for (const auto& [n, m, k] : std::vector<std::array<long, 3>>{{6, 3, 3}, {8, 5, 3}, {9, 4, 4}, {10, 7, 3}}) {
    long double expect = 0;
    const long double a = choose_ld(n, k);
    for (long mask = 0; mask < (1L << n); ++mask) {
      const int ones = std::popcount(static_cast<unsigned long>(mask));
      const long double bad = choose_ld(ones, k) + choose_ld(n - ones, k);
      long double p = 1;
      for (long i = 0; i < m; ++i) p *= (a - bad - i) / (a - i);
      if (p > 0) expect += p;
    }
    CAPTURE(n, m, k);
    REQUIRE(exact_first_moment(n, m, static_cast<int>(k)) ==
            Catch::Approx(static_cast<double>(expect)).epsilon(1e-9));
  }
}

TEST_CASE("finite-size first moment rejects impossible edge counts") {
  REQUIRE_THROWS_AS(exact_first_moment(4, 5, 3), parameter_error);  // C(4,3)=4 < 5
}

TEST_CASE("grid-plus-golden maximization agrees with a fine reference grid") {
  const int k = 7;
  const double r = 30;
  const auto got = maximize_psi(k, r, 0.02, 0.98);
  double best_x = 0.02, best_v = -1e300;
  for (int i = 0; i <= 2000000; ++i) {
    const double x = 0.02 + (0.98 - 0.02) * i / 2000000.0;
    const double v = psi(k, r, x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  REQUIRE(got.psi_star >= best_v - 1e-12);
  REQUIRE(std::fabs(got.x_star - best_x) <= 1e-3);
  REQUIRE_THROWS_AS(maximize_psi(k, r, 0.5, 0.4), parameter_error);
}

TEST_CASE("dense regime grows a competing maximum near the boundary") {
  const int k = 20;
  const double r_cond = (std::ldexp(1.0, k - 1) - 1) * M_LN2;
  const auto left = maximize_psi(k, r_cond, 0.0, std::ldexp(1.0, -k / 2));
  REQUIRE(left.psi_star > psi(k, r_cond, 0.5));
  // At a much lower density the balanced point dominates again.
  const auto low = maximize_psi(k, 0.5 * r_cond, 0.0, std::ldexp(1.0, -k / 2));
  REQUIRE(low.psi_star < psi(k, 0.5 * r_cond, 0.5));
}

TEST_CASE("threshold report closed forms and ordering") {
  const auto t = thresholds(10);
  REQUIRE(t.r_cond == Catch::Approx(511.0 * M_LN2).epsilon(1e-12));
  REQUIRE(t.r_first_exact == Catch::Approx(-M_LN2 / std::log1p(-std::ldexp(1.0, -9))).epsilon(1e-12));
  for (int k = 6; k <= 25; ++k) {
    const auto tk = thresholds(k);
    CAPTURE(k);
    REQUIRE(tk.r_second < tk.r_cond);
    REQUIRE(tk.r_cond < tk.r_conjectured);
    REQUIRE(tk.r_conjectured < tk.r_first_exact);
    // Expanding -ln2/ln(1-x) at x=2^{1-k}: the exact value sits ln2*x/12+O(x^2)
    // below the two-term asymptotic form.
    REQUIRE(tk.r_first_exact < tk.r_first_asymptotic);
    REQUIRE(tk.r_first_asymptotic - tk.r_first_exact <= 1.5 * M_LN2 * std::ldexp(1.0, 1 - k) / 12.0);
  }
  REQUIRE_THROWS_AS(thresholds(2), parameter_error);
  REQUIRE_THROWS_AS(thresholds(41), parameter_error);
}

TEST_CASE("numeric second-moment threshold near its large-k expansion") {
  const auto t = thresholds(20);
  REQUIRE(std::fabs(t.r_second - (std::ldexp(1.0, 19) * M_LN2 - (1 + M_LN2) / 2)) <= 0.05);
  REQUIRE(std::fabs(t.r_first_exact - (std::ldexp(1.0, 19) * M_LN2 - M_LN2 / 2)) <= std::ldexp(1.0, -18));
}

TEST_CASE("pair rate reduces to the first-moment rate at zero tilt and half overlap") {
  for (int k = 5; k <= 15; ++k) {
    const double rc = (std::ldexp(1.0, k - 1) - 1) * M_LN2;
    for (const double f : {0.6, 0.8, 1.0, 1.2, 1.4}) {
      const double r = f * rc;
      CAPTURE(k, r);
      REQUIRE(std::fabs(pair_rate(k, r, 0.0, 0.5) - first_moment_rate(k, r)) <= 1e-9);
    }
  }
}

TEST_CASE("pair rate dips away from half overlap in the tilted ensemble") {
  const int k = 10;
  const double r = 511.0 * M_LN2;
  const double beta = std::pow(3.0, -10.0);
  const double g_half = pair_rate(k, r, beta, 0.5);
  for (const double delta : {0.01, 0.02}) {
    REQUIRE(pair_rate(k, r, beta, 0.5 + delta) < g_half);
    REQUIRE(pair_rate(k, r, beta, 0.5 - delta) < g_half);
  }
  REQUIRE(pair_rate(k, r, beta, 0.0) == 0.0);
  REQUIRE(pair_rate(k, r, beta, 1.0) == 0.0);
}

TEST_CASE("laplace sum over a flat rate counts the interior points") {
  const auto res = laplace_sum([](double) { return 0.0; }, 100);
  REQUIRE(res.ratio == Catch::Approx(99.0).margin(1e-9));
  REQUIRE(res.log_sum == Catch::Approx(std::log(99.0)).margin(1e-12));
}

TEST_CASE("laplace sum over a quadratic rate scales like the gaussian integral") {
  const long n = 10000;
  const auto res = laplace_sum([](double x) { return -(x - 0.5) * (x - 0.5); }, n);
  const double ratio_scaled = res.ratio / std::sqrt(static_cast<double>(n));
  REQUIRE(ratio_scaled == Catch::Approx(std::sqrt(M_PI)).margin(0.05));
}

TEST_CASE("local cluster rate is analytically consistent with the first-moment rate") {
  const double lcr = local_cluster_rate(10, 10 * M_LN2);
  const double fmr = first_moment_rate(10, 511.0 * M_LN2);
  REQUIRE(std::fabs(lcr - fmr) <= 0.05 * fmr);
  REQUIRE(local_cluster_rate(10, 30.0) < lcr);
}

TEST_CASE("cluster vs first-moment crossing sits near its predicted location") {
  const auto c10 = cluster_vs_first_moment_crossing(10);
  REQUIRE(c10.found);
  const double pred10 = 10 * M_LN2;
  REQUIRE(std::fabs(c10.lambda_star - pred10) <= 0.1 * pred10);
  const auto c15 = cluster_vs_first_moment_crossing(15);
  REQUIRE(c15.found);
  const double pred15 = 15 * M_LN2;
  const double rel10 = std::fabs(c10.lambda_star - pred10) / pred10;
  const double rel15 = std::fabs(c15.lambda_star - pred15) / pred15;
  REQUIRE(rel15 < rel10);
}

TEST_CASE("parameter validation") {
  Params p;
  p.k = 10;
  p.r = 350;
  p.beta = 0.0;
  p.lambda = 7;
  REQUIRE_NOTHROW(validate(p));
  p.k = 2;
  REQUIRE_THROWS_AS(validate(p), parameter_error);
  p.k = 10;
  p.r = -1;
  REQUIRE_THROWS_AS(validate(p), parameter_error);
  p.r = 1;
  p.beta = -1.5;
  REQUIRE_THROWS_AS(validate(p), parameter_error);
}

TEST_CASE("utility numerics") {
  SECTION("golden section maximization") {
    const auto res = golden_max([](double x) { return -(x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-10);
    REQUIRE(res.x == Catch::Approx(2.0).margin(1e-8));
  }
  SECTION("predicate bisection") {
    const double edge = bisect_predicate([](double x) { return x < 3.0; }, 0.0, 10.0, 1e-9);
    REQUIRE(edge == Catch::Approx(3.0).margin(1e-8));
  }
  SECTION("root bisection requires a sign change") {
    REQUIRE(bisect_root([](double x) { return x - 1.5; }, 0.0, 4.0, 1e-12) ==
            Catch::Approx(1.5).margin(1e-10));
    REQUIRE_THROWS_AS(bisect_root([](double x) { return x * x + 1; }, -1.0, 1.0, 1e-12), parameter_error);
  }
  SECTION("compensated summation") {
    KahanSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    REQUIRE(s.value() == Catch::Approx(1000.0).margin(1e-6));
  }
  SECTION("log-sum-exp") {
    REQUIRE(log_sum_exp({0.0, 0.0}) == Catch::Approx(std::log(2.0)).margin(1e-14));
    REQUIRE(log_sum_exp({-1e308, 10.0}) == Catch::Approx(10.0).margin(1e-12));
  }
  SECTION("binomial coefficients") {
    REQUIRE(choose_ld(52, 5) == Catch::Approx(2598960.0L).epsilon(1e-15));
    REQUIRE(lchoose(52, 5) == Catch::Approx(std::log(2598960.0)).margin(1e-10));
    REQUIRE(choose_ld(4, 5) == 0.0L);
  }
  SECTION("seventeen digit formatting round-trips") {
    for (const double v : {0.1, M_PI, 6.773427e-4, 1e300, -3.5}) {
      REQUIRE(std::strtod(fmt17(v).c_str(), nullptr) == v);
    }
  }
  SECTION("seed stream separation") {
    REQUIRE(hash64(1, 0) != hash64(1, 1));
    REQUIRE(hash64(1, 0) != hash64(2, 0));
    Rng a(7), b(7);
    REQUIRE(a.u64() == b.u64());
    REQUIRE(a.below(10) < 10);
    const double u = b.uniform01();
    REQUIRE((u >= 0.0 && u < 1.0));
  }
}
