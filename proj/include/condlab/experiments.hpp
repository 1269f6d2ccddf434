#pragma once
// Seeded Monte-Carlo harness: a config names a scan kind, a model, and a
// density grid; run_trials turns it into per-trial records, and the fold
// below turns records into plot-ready curves with analytic reference
// columns.  Record i always draws its randomness from hash64(master_seed, i),
// so batches are reproducible independent of worker count or sink.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "condlab/analytic.hpp"
#include "condlab/exact.hpp"
#include "condlab/sampler.hpp"
#include "condlab/whitening.hpp"

namespace condlab {

enum class ExperimentKind { degree_law, u_size, condensation_scan, cluster_entropy_scan, moment_check };
enum class ModelKind { uniform, planted, planted_critical, binomial_planted };

inline const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::degree_law: return "degree_law";
    case ExperimentKind::u_size: return "u_size";
    case ExperimentKind::condensation_scan: return "condensation_scan";
    case ExperimentKind::cluster_entropy_scan: return "cluster_entropy_scan";
    case ExperimentKind::moment_check: return "moment_check";
  }
  return "?";
}

inline const char* model_name(ModelKind m) {
  switch (m) {
    case ModelKind::uniform: return "uniform";
    case ModelKind::planted: return "planted";
    case ModelKind::planted_critical: return "planted_critical";
    case ModelKind::binomial_planted: return "binomial_planted";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::moment_check;
  ModelKind model = ModelKind::uniform;
  int k = 3;
  long n = 0;
  long trials = 1;
  std::uint64_t master_seed = kDefaultSeed;

  // Exactly one grid is in play.  Enumeration kinds (moment_check,
  // condensation_scan) take total edge densities: r_grid in edges per vertex,
  // or m_grid as explicit counts (m_grid wins when non-empty).  The planted-
  // critical kinds (degree_law, u_size, cluster_entropy_scan) take
  // lambda_grid, critical edges per vertex; the instance is completed to
  // total density r(lambda) = lambda (2^(k-1)-1)/k with non-critical
  // bichromatic edges.
  std::vector<double> r_grid;
  std::vector<long> m_grid;
  std::vector<double> lambda_grid;

  double beta = 0.0;  // criticality surplus: m1 = (1+beta) lambda n

  // Overlap-geometry verdict constants; alpha = 0 leaves the verdict off.
  double geom_alpha = 0.0, geom_beta = 0.5, geom_gamma = 0.0;

  int workers = 1;
  double time_budget = std::numeric_limits<double>::infinity();  // seconds per trial

  std::string out;             // output path, empty = stdout (used by callers)
  std::string format = "csv";  // "csv" or "json"
};

struct TrialRecord {
  long index = -1;  // global record index; doubles as the seed stream
  std::uint64_t seed = 0;
  long grid_index = -1;
  long trial = -1;  // trial number within the grid point
  double x = 0.0;   // grid coordinate: r = m/n or lambda
  std::vector<std::pair<std::string, double>> stats;
  std::string error;  // non-empty: the trial threw and carries no stats
  double seconds = 0.0;
  bool over_budget = false;
};

// Every statistic emitted into a TrialRecord uses one of these keys.
inline const std::vector<std::string>& stat_dictionary() {
  static const std::vector<std::string> keys = {
      "m",        "z",         "z_e",       "ln1p_z_over_n", "u_frac",   "s0_frac",
      "s1_frac",  "extra_frac", "s0_entropy", "upper",        "lower",    "cluster_size",
      "verdict",  "frac_s_0",  "frac_s_1",  "frac_s_2",      "frac_s_3", "frac_s_4",
      "frac_s_5", "frac_s_6",  "frac_s_7",  "frac_s_8",      "frac_s_9"};
  return keys;
}

inline bool is_stat_key(const std::string& key) {
  const auto& d = stat_dictionary();
  return std::find(d.begin(), d.end(), key) != d.end();
}

namespace detail {

struct GridPoint {
  double x = 0.0;
  long m_total = 0, m1 = 0, m2 = 0;
};

inline bool lambda_kind(ExperimentKind k) {
  return k == ExperimentKind::degree_law || k == ExperimentKind::u_size ||
         k == ExperimentKind::cluster_entropy_scan;
}

inline std::vector<GridPoint> resolve_grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> grid;
  if (lambda_kind(cfg.kind)) {
    const double scale = (std::ldexp(1.0, cfg.k - 1) - 1.0) / cfg.k;
    for (double lam : cfg.lambda_grid) {
      GridPoint g;
      g.x = lam;
      g.m1 = std::lround((1.0 + cfg.beta) * lam * static_cast<double>(cfg.n));
      g.m_total = std::max(g.m1, std::lround(lam * scale * static_cast<double>(cfg.n)));
      g.m2 = g.m_total - g.m1;
      grid.push_back(g);
    }
  } else if (!cfg.m_grid.empty()) {
    for (long m : cfg.m_grid)
      grid.push_back({static_cast<double>(m) / static_cast<double>(cfg.n), m, 0, 0});
  } else {
    for (double r : cfg.r_grid)
      grid.push_back({r, std::lround(r * static_cast<double>(cfg.n)), 0, 0});
  }
  return grid;
}

// E[Z] for H_k(n,m) below the enumeration cap.  The m = 0 value is the
// identity E[Z] = 2^n and is evaluated through ldexp so the zero-density gap
// in a scan closes bit-exactly.
inline double first_moment_capped(long n, long m, int k) {
  if (m == 0) return std::ldexp(1.0, static_cast<int>(n));
  return exact_first_moment(n, m, k);
}

}  // namespace detail

inline void validate_config(const ExperimentConfig& cfg) {
  require_k(cfg.k);
  if (cfg.n < cfg.k) throw parameter_error("experiments: need n >= k");
  if (cfg.trials < 1) throw parameter_error("experiments: need trials >= 1");
  if (cfg.workers < 1) throw parameter_error("experiments: need workers >= 1");
  if (!(cfg.beta >= 0.0)) throw parameter_error("experiments: need beta >= 0");
  if (!(cfg.time_budget > 0.0)) throw parameter_error("experiments: need a positive time budget");
  if (detail::lambda_kind(cfg.kind)) {
    if (cfg.lambda_grid.empty()) throw parameter_error("experiments: lambda grid is empty");
    for (double lam : cfg.lambda_grid)
      if (!(lam >= 0.0)) throw parameter_error("experiments: lambda must be >= 0");
    if (cfg.n % 2 != 0)
      throw parameter_error("experiments: planted-critical kinds need even n (equitable reference)");
  } else {
    if (cfg.r_grid.empty() && cfg.m_grid.empty())
      throw parameter_error("experiments: density grid is empty");
    for (double r : cfg.r_grid)
      if (!(r >= 0.0)) throw parameter_error("experiments: r must be >= 0");
    for (long m : cfg.m_grid)
      if (m < 0) throw parameter_error("experiments: m must be >= 0");
    if (cfg.model == ModelKind::planted_critical)
      throw parameter_error("experiments: planted_critical wants a lambda grid kind");
    if (cfg.model != ModelKind::uniform && cfg.n % 2 != 0)
      throw parameter_error("experiments: planted models need even n (equitable reference)");
    detail::check_enumeration_cap(experiment_name(cfg.kind), static_cast<int>(cfg.n));
  }
  if (cfg.geom_alpha != 0.0) {
    if (!(0.0 < cfg.geom_alpha && cfg.geom_alpha < cfg.geom_beta && cfg.geom_beta <= 0.5))
      throw parameter_error("experiments: need 0 < geom_alpha < geom_beta <= 1/2");
    if (!(cfg.geom_gamma >= 0.0)) throw parameter_error("experiments: need geom_gamma >= 0");
    if (cfg.model == ModelKind::uniform)
      throw parameter_error("experiments: geometry verdict needs a planted reference");
  }
  if (cfg.format != "csv" && cfg.format != "json")
    throw parameter_error("experiments: format must be csv or json");
}

namespace detail {

inline void put(TrialRecord& rec, const char* key, double v) { rec.stats.emplace_back(key, v); }

inline void run_one(const ExperimentConfig& cfg, const GridPoint& g, TrialRecord& rec) {
  Rng rng(rec.seed);
  const Coloring sigma = canonical_equitable(cfg.n);

  if (cfg.kind == ExperimentKind::moment_check || cfg.kind == ExperimentKind::condensation_scan) {
    Hypergraph h;
    switch (cfg.model) {
      case ModelKind::uniform:
        h = sample_uniform(cfg.n, g.m_total, cfg.k, rng);
        break;
      case ModelKind::planted:
        h = sample_planted(cfg.n, g.m_total, cfg.k, sigma, rng);
        break;
      case ModelKind::binomial_planted: {
        const long double pool = count_bichromatic(cfg.n / 2, cfg.n - cfg.n / 2, cfg.k);
        const double p = std::min(1.0, static_cast<double>(g.m_total / pool));
        h = sample_binomial_planted(cfg.n, p, cfg.k, sigma, rng);
        break;
      }
      case ModelKind::planted_critical:
        throw parameter_error("experiments: planted_critical wants a lambda grid kind");
    }
    const SolutionCensus census = solution_census(h, {});
    put(rec, "m", static_cast<double>(h.m()));
    put(rec, "z", static_cast<double>(census.z));
    put(rec, "z_e", static_cast<double>(census.z_e));
    put(rec, "ln1p_z_over_n",
        std::log1p(static_cast<double>(census.z)) / static_cast<double>(cfg.n));
    if (cfg.geom_alpha != 0.0) {
      const ClusterReport rep =
          geometry_verdict(h, sigma, cfg.geom_alpha, cfg.geom_beta, cfg.geom_gamma);
      put(rec, "cluster_size", static_cast<double>(rep.local_cluster_size));
      put(rec, "verdict", static_cast<double>(static_cast<int>(rep.verdict)));
    }
    return;
  }

  const Hypergraph h = sample_planted_critical(cfg.n, g.m1, g.m2, cfg.k, sigma, rng);
  if (cfg.kind == ExperimentKind::degree_law) {
    const EdgeClassification cls = classify_edges(h, sigma);
    put(rec, "m", static_cast<double>(h.m()));
    std::array<long, 10> hist{};
    for (long v = 0; v < cfg.n; ++v)
      if (cls.s[v] < 10) ++hist[cls.s[v]];
    for (int l = 0; l < 10; ++l)
      put(rec, stat_dictionary()[13 + l].c_str(),
          static_cast<double>(hist[l]) / static_cast<double>(cfg.n));
    return;
  }

  const WhiteningResult w = whiten(h, sigma);
  put(rec, "m", static_cast<double>(h.m()));
  if (cfg.kind == ExperimentKind::u_size) {
    const UCensus c = u_census(w, h, sigma);
    put(rec, "u_frac", c.u_frac);
    put(rec, "s0_frac", c.s0_frac);
    put(rec, "s1_frac", c.s1_frac);
    put(rec, "extra_frac", c.extra_frac);
  } else {  // cluster_entropy_scan
    const EdgeClassification cls = classify_edges(h, sigma);
    const ClusterEntropyBounds b = cluster_entropy_bounds(h, sigma, w, cls);
    put(rec, "s0_entropy",
        static_cast<double>(b.s0) / static_cast<double>(cfg.n) * std::log(2.0));
    put(rec, "upper", b.upper);
    put(rec, "lower", b.lower);
  }
}

}  // namespace detail

using RecordSink = std::function<void(const TrialRecord&)>;

// Runs trials x grid and returns all records in index order.  Record i is
// seeded by hash64(master_seed, i) and is therefore independent of scheduling;
// workers > 1 runs blocks of records concurrently while the sink still sees
// records in index order.  A trial that throws keeps its record with the
// message in `error`; the batch always completes.
inline std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, const RecordSink& sink = {}) {
  validate_config(cfg);
  const std::vector<detail::GridPoint> grid = detail::resolve_grid(cfg);
  const long total = static_cast<long>(grid.size()) * cfg.trials;
  std::vector<TrialRecord> records(total);
  for (long i = 0; i < total; ++i) {
    TrialRecord& rec = records[i];
    rec.index = i;
    rec.seed = hash64(cfg.master_seed, static_cast<std::uint64_t>(i));
    rec.grid_index = i / cfg.trials;
    rec.trial = i % cfg.trials;
    rec.x = grid[rec.grid_index].x;
  }

  const auto work = [&](long i) {
    TrialRecord& rec = records[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      detail::run_one(cfg, grid[rec.grid_index], rec);
    } catch (const std::exception& ex) {
      rec.stats.clear();
      rec.error = ex.what();
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.over_budget = rec.seconds > cfg.time_budget;
  };

  const long block = std::max(1, cfg.workers);
  for (long base = 0; base < total; base += block) {
    const long hi = std::min(total, base + block);
    if (block == 1 || hi - base == 1) {
      work(base);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(hi - base);
      for (long i = base; i < hi; ++i) pool.emplace_back(work, i);
      for (auto& th : pool) th.join();
    }
    if (sink)
      for (long i = base; i < hi; ++i) sink(records[i]);
  }
  return records;
}

struct CurvePoint {
  double x = 0.0;
  std::string statistic;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stderr_of_mean = std::numeric_limits<double>::quiet_NaN();
  double analytic = std::numeric_limits<double>::quiet_NaN();
  long count = 0;  // successful trials behind the mean
};

struct Curve {
  ExperimentConfig config;
  std::vector<CurvePoint> points;
  std::vector<std::pair<std::string, double>> constants;
  long failed_trials = 0;
};

namespace detail {

// Mean and standard error per (grid point, statistic), preserving first-seen
// statistic order.  A point where every trial agrees reports the common value
// itself so exact identities survive the fold.
inline void fold_point(const std::vector<const TrialRecord*>& recs, double x,
                       std::vector<CurvePoint>& out) {
  std::vector<std::string> order;
  for (const TrialRecord* r : recs)
    for (const auto& [key, value] : r->stats)
      if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
  for (const std::string& key : order) {
    CurvePoint p;
    p.x = x;
    p.statistic = key;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    KahanSum sum;
    std::vector<double> vals;
    for (const TrialRecord* r : recs)
      for (const auto& [k2, value] : r->stats)
        if (k2 == key) {
          vals.push_back(value);
          sum.add(value);
          lo = std::min(lo, value);
          hi = std::max(hi, value);
        }
    p.count = static_cast<long>(vals.size());
    if (p.count > 0) {
      p.mean = lo == hi ? lo : sum.value() / static_cast<double>(p.count);
      if (p.count > 1) {
        KahanSum dev;
        for (double v : vals) dev.add((v - p.mean) * (v - p.mean));
        p.stderr_of_mean =
            std::sqrt(dev.value() / (static_cast<double>(p.count) * (p.count - 1.0)));
      } else {
        p.stderr_of_mean = 0.0;
      }
    }
    out.push_back(std::move(p));
  }
}

inline double poisson_pmf(double lambda, int l) {
  if (lambda == 0.0) return l == 0 ? 1.0 : 0.0;
  return std::exp(l * std::log(lambda) - lambda - std::lgamma(l + 1.0));
}

}  // namespace detail

// Pure fold from records to a curve: per grid point, mean/stderr for every
// statistic plus the analytic reference column for the kind.
inline Curve fold_records(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  const std::vector<detail::GridPoint> grid = detail::resolve_grid(cfg);
  Curve curve;
  curve.config = cfg;
  const double nd = static_cast<double>(cfg.n);
  const double ln2 = std::log(2.0);
  const double scale = (std::ldexp(1.0, cfg.k - 1) - 1.0) / cfg.k;

  for (long gi = 0; gi < static_cast<long>(grid.size()); ++gi) {
    std::vector<const TrialRecord*> recs;
    for (const TrialRecord& r : records)
      if (r.grid_index == gi) {
        if (r.error.empty())
          recs.push_back(&r);
        else
          ++curve.failed_trials;
      }
    std::vector<CurvePoint> pts;
    detail::fold_point(recs, grid[gi].x, pts);

    const double lam = detail::lambda_kind(cfg.kind)
                           ? (cfg.n > 0 ? static_cast<double>(grid[gi].m1) / nd : grid[gi].x)
                           : 0.0;
    for (CurvePoint& p : pts) {
      switch (cfg.kind) {
        case ExperimentKind::moment_check:
        case ExperimentKind::condensation_scan:
          if (p.statistic == "z")
            p.analytic = detail::first_moment_capped(cfg.n, grid[gi].m_total, cfg.k);
          else if (p.statistic == "ln1p_z_over_n")
            p.analytic =
                std::log1p(detail::first_moment_capped(cfg.n, grid[gi].m_total, cfg.k)) / nd;
          break;
        case ExperimentKind::degree_law:
          for (int l = 0; l < 10; ++l)
            if (p.statistic == stat_dictionary()[13 + l])
              p.analytic = detail::poisson_pmf(lam, l);
          break;
        case ExperimentKind::u_size:
          if (p.statistic == "u_frac")
            p.analytic = std::exp(-lam) + lam * (cfg.k - 1) * std::exp(-2.0 * lam);
          else if (p.statistic == "s0_frac")
            p.analytic = std::exp(-lam);
          else if (p.statistic == "s1_frac")
            p.analytic = lam * (cfg.k - 1) * std::exp(-2.0 * lam);
          break;
        case ExperimentKind::cluster_entropy_scan:
          if (p.statistic == "s0_entropy")
            p.analytic = std::exp(-lam) * ln2;
          else if (p.statistic == "upper")
            p.analytic = local_cluster_rate(cfg.k, lam);
          break;
      }
    }

    // Derived rows: the Jensen gap for condensation scans, the first-moment
    // rate reference for cluster scans.
    if (cfg.kind == ExperimentKind::condensation_scan) {
      for (const CurvePoint& p : pts)
        if (p.statistic == "ln1p_z_over_n" && p.count > 0) {
          CurvePoint gap;
          gap.x = p.x;
          gap.statistic = "jensen_gap";
          gap.mean = p.analytic - p.mean;
          if (gap.mean == 0.0) gap.mean = 0.0;  // normalize -0
          gap.stderr_of_mean = p.stderr_of_mean;
          gap.analytic = 0.0;  // the Jensen boundary
          gap.count = p.count;
          pts.push_back(gap);
        }
    } else if (cfg.kind == ExperimentKind::cluster_entropy_scan) {
      CurvePoint fm;
      fm.x = grid[gi].x;
      fm.statistic = "first_moment_rate";
      fm.analytic = first_moment_rate(cfg.k, grid[gi].x * scale);
      pts.push_back(fm);
    }
    for (CurvePoint& p : pts) curve.points.push_back(std::move(p));
  }

  if (cfg.kind == ExperimentKind::condensation_scan) {
    const ThresholdReport rep = thresholds(cfg.k);
    curve.constants.emplace_back("r_second", rep.r_second);
    curve.constants.emplace_back("r_cond", rep.r_cond);
    curve.constants.emplace_back("r_first", rep.r_first_exact);
  } else if (cfg.kind == ExperimentKind::cluster_entropy_scan) {
    curve.constants.emplace_back("lambda_cond", cfg.k * ln2);
    const CrossingResult cross = cluster_vs_first_moment_crossing(cfg.k);
    if (cross.found) curve.constants.emplace_back("analytic_crossing", cross.lambda_star);
    // Bracket of adjacent grid points where the measured upper bound crosses
    // the first-moment rate.
    std::vector<std::pair<double, double>> uppers;
    for (const CurvePoint& p : curve.points)
      if (p.statistic == "upper" && p.count > 0)
        uppers.emplace_back(p.x, p.mean - first_moment_rate(cfg.k, p.x * scale));
    std::sort(uppers.begin(), uppers.end());
    for (std::size_t i = 1; i < uppers.size(); ++i)
      if ((uppers[i - 1].second < 0.0) != (uppers[i].second < 0.0)) {
        curve.constants.emplace_back("lambda_cross_lo", uppers[i - 1].first);
        curve.constants.emplace_back("lambda_cross_hi", uppers[i].first);
        break;
      }
  }
  return curve;
}

inline Curve condensation_scan(int k, long n, const std::vector<double>& r_grid, long trials,
                               std::uint64_t seed, int workers = 1, const RecordSink& sink = {}) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::condensation_scan;
  cfg.model = ModelKind::uniform;
  cfg.k = k;
  cfg.n = n;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.r_grid = r_grid;
  cfg.workers = workers;
  return fold_records(cfg, run_trials(cfg, sink));
}

inline Curve cluster_entropy_scan(int k, long n, const std::vector<double>& lambda_grid, long trials,
                                  std::uint64_t seed, int workers = 1, const RecordSink& sink = {}) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::cluster_entropy_scan;
  cfg.model = ModelKind::planted_critical;
  cfg.k = k;
  cfg.n = n;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.lambda_grid = lambda_grid;
  cfg.workers = workers;
  return fold_records(cfg, run_trials(cfg, sink));
}

// --- serialization ---------------------------------------------------------

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Scheduling knobs (workers, time budget) stay out of emitted headers so a
// re-run under any worker count reproduces the same bytes.
inline void config_header(std::ostream& os, const ExperimentConfig& cfg, const char* prefix) {
  os << prefix << "kind=" << experiment_name(cfg.kind) << " model=" << model_name(cfg.model)
     << " k=" << cfg.k << " n=" << cfg.n << " trials=" << cfg.trials
     << " master_seed=" << cfg.master_seed;
  if (cfg.beta != 0.0) os << " beta=" << fmt17(cfg.beta);
  os << "\n" << prefix << "grid=";
  const std::vector<GridPoint> grid = resolve_grid(cfg);
  for (std::size_t i = 0; i < grid.size(); ++i) os << (i ? "," : "") << fmt17(grid[i].x);
  os << "\n";
}

inline void json_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    if (c == '"' || c == '\\') os << '\\' << c;
    else if (c == '\n') os << "\\n";
    else os << c;
  }
  os << '"';
}

inline void json_number(std::ostream& os, double v) {
  if (std::isfinite(v))
    os << fmt17(v);
  else
    os << "null";  // JSON has no nan/inf
}

}  // namespace detail

// One row per (grid point, statistic); reference constants appended as rows
// with an empty coordinate so plots can draw them as vertical lines.  No
// timestamps anywhere: identical config and seed give identical bytes.
inline void write_curve_csv(std::ostream& os, const Curve& c) {
  detail::config_header(os, c.config, "# ");
  if (c.failed_trials > 0) os << "# failed_trials=" << c.failed_trials << "\n";
  os << "r_or_lambda,statistic,mean,stderr,analytic_value\n";
  for (const CurvePoint& p : c.points)
    os << detail::fmt17(p.x) << ',' << p.statistic << ',' << detail::fmt17(p.mean) << ','
       << detail::fmt17(p.stderr_of_mean) << ',' << detail::fmt17(p.analytic) << '\n';
  for (const auto& [name, value] : c.constants)
    os << "nan," << name << ",nan,nan," << detail::fmt17(value) << '\n';
}

inline void write_curve_json(std::ostream& os, const Curve& c) {
  os << "{\"schema\":1,\"kind\":";
  detail::json_string(os, experiment_name(c.config.kind));
  os << ",\"model\":";
  detail::json_string(os, model_name(c.config.model));
  os << ",\"k\":" << c.config.k << ",\"n\":" << c.config.n << ",\"trials\":" << c.config.trials
     << ",\"master_seed\":" << c.config.master_seed << ",\"failed_trials\":" << c.failed_trials
     << ",\"constants\":{";
  for (std::size_t i = 0; i < c.constants.size(); ++i) {
    if (i) os << ',';
    detail::json_string(os, c.constants[i].first);
    os << ':';
    detail::json_number(os, c.constants[i].second);
  }
  os << "},\"points\":[";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const CurvePoint& p = c.points[i];
    if (i) os << ',';
    os << "{\"r_or_lambda\":";
    detail::json_number(os, p.x);
    os << ",\"statistic\":";
    detail::json_string(os, p.statistic);
    os << ",\"mean\":";
    detail::json_number(os, p.mean);
    os << ",\"stderr\":";
    detail::json_number(os, p.stderr_of_mean);
    os << ",\"analytic_value\":";
    detail::json_number(os, p.analytic);
    os << ",\"count\":" << p.count << '}';
  }
  os << "]}\n";
}

// Trial records as JSON lines, schema-versioned and self-describing.
inline void write_record_json(std::ostream& os, const ExperimentConfig& cfg, const TrialRecord& r) {
  os << "{\"schema\":1,\"kind\":";
  detail::json_string(os, experiment_name(cfg.kind));
  os << ",\"index\":" << r.index << ",\"seed\":" << r.seed << ",\"trial\":" << r.trial
     << ",\"r_or_lambda\":";
  detail::json_number(os, r.x);
  if (!r.error.empty()) {
    os << ",\"error\":";
    detail::json_string(os, r.error);
  }
  if (r.over_budget) os << ",\"over_budget\":true";
  os << ",\"stats\":{";
  for (std::size_t i = 0; i < r.stats.size(); ++i) {
    if (i) os << ',';
    detail::json_string(os, r.stats[i].first);
    os << ':';
    detail::json_number(os, r.stats[i].second);
  }
  os << "}}\n";
}

}  // namespace condlab
