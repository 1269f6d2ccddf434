// condlab: command surface over the header library.
//
// Subcommands: thresholds, rate-curve, pair-curve, sample, count, profile,
// whiten, core, census, scan-condensation, scan-cluster, degree-law.
// Every subcommand accepts --seed, --out, --format csv|json, --config FILE
// (JSON, same keys as the long flags, flags win) and --workers (default from
// CONDENSATION_LAB_WORKERS).  Exit codes: 0 ok, 2 parameter problem,
// 3 resource-cap refusal.
//
// Output is byte-stable: fixed default seed, 17-significant-digit floats, no
// timestamps, and scheduling knobs are kept out of emitted headers.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "condlab/analytic.hpp"
#include "condlab/exact.hpp"
#include "condlab/experiments.hpp"
#include "condlab/sampler.hpp"
#include "condlab/whitening.hpp"

using condlab::parameter_error;
using nlohmann::ordered_json;

namespace {

std::string fmt(double v) { return condlab::detail::fmt17(v); }

int env_workers() {
  const char* s = std::getenv("CONDENSATION_LAB_WORKERS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  const long w = std::strtol(s, &end, 10);
  if (end && *end == '\0' && w >= 1 && w <= 1024) return static_cast<int>(w);
  return 1;
}

struct Common {
  std::uint64_t seed = condlab::kDefaultSeed;
  std::string out;
  std::string format;  // empty = subcommand default
  std::string config_path;
  int workers = env_workers();
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "master seed (fixed default keeps runs reproducible)");
  sub->add_option("--out", c.out, "output path (default stdout)");
  sub->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--config", c.config_path, "JSON config file; explicit flags win");
  sub->add_option("--workers", c.workers, "worker threads for trial batches");
}

ordered_json load_config(const std::string& path) {
  if (path.empty()) return ordered_json::object();
  std::ifstream is(path);
  if (!is) throw parameter_error("cannot open config file: " + path);
  try {
    return ordered_json::parse(is);
  } catch (const nlohmann::json::exception& ex) {
    throw parameter_error("config file " + path + ": " + ex.what());
  }
}

// Fill a value from the config file only when the flag was not given.
template <class T>
void merge_key(const ordered_json& j, const CLI::App& sub, const std::string& flag, T& var) {
  const std::string key = flag.substr(2);
  if (sub.count(flag) == 0 && j.contains(key)) {
    try {
      var = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& ex) {
      throw parameter_error("config key " + key + ": " + ex.what());
    }
  }
}

std::string resolve_format(const Common& c, const char* dflt) {
  if (c.format.empty()) return dflt;
  if (c.format != "csv" && c.format != "json")
    throw parameter_error("format must be csv or json");
  return c.format;
}

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw parameter_error("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& get() { return *os; }
};

condlab::Hypergraph load_hypergraph(const std::string& path) {
  if (path.empty()) throw parameter_error("--in is required");
  std::ifstream is(path);
  if (!is) throw parameter_error("cannot open input file: " + path);
  return condlab::read_hypergraph(is);
}

// Reference coloring: an explicit file, or the canonical equitable split.
condlab::Coloring load_sigma(const std::string& path, long n) {
  if (path.empty()) return condlab::canonical_equitable(n);
  std::ifstream is(path);
  if (!is) throw parameter_error("cannot open coloring file: " + path);
  return condlab::read_coloring(is, n);
}

// "lo:hi:points" (inclusive linspace), or a comma list, or one value.
std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw parameter_error("empty grid");
  std::vector<double> grid;
  const auto to_d = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw parameter_error("bad grid value: " + tok);
      return v;
    } catch (const std::exception&) {
      throw parameter_error("bad grid value: " + tok);
    }
  };
  if (text.find(':') != std::string::npos) {
    std::istringstream is(text);
    std::string lo_s, hi_s, pts_s;
    if (!std::getline(is, lo_s, ':') || !std::getline(is, hi_s, ':') ||
        !std::getline(is, pts_s, ':') || !is.eof())
      throw parameter_error("grid wants lo:hi:points, got: " + text);
    const double lo = to_d(lo_s), hi = to_d(hi_s);
    const long pts = std::lround(to_d(pts_s));
    if (pts < 1 || hi < lo) throw parameter_error("grid wants hi >= lo and points >= 1");
    for (long i = 0; i < pts; ++i)
      grid.push_back(pts == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (pts - 1));
    return grid;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) grid.push_back(to_d(tok));
  if (grid.empty()) throw parameter_error("empty grid");
  return grid;
}

std::vector<double> parse_b_list(const std::string& text) {
  return text.empty() ? std::vector<double>{} : parse_grid(text);
}

ordered_json config_echo(const Common& c, const std::string& format) {
  ordered_json j;
  j["seed"] = c.seed;
  j["format"] = format;
  return j;
}

void csv_config_line(std::ostream& os, const ordered_json& cfg, const char* cmd) {
  os << "# cmd=" << cmd;
  for (const auto& [key, value] : cfg.items())
    os << ' ' << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump());
  os << '\n';
}

// --- thresholds ------------------------------------------------------------

struct ThresholdsArgs {
  Common c;
  int k = 10;
};

void run_thresholds(const CLI::App& sub, ThresholdsArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--k", a.k);
  merge_key(j, sub, "--seed", a.c.seed);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  const std::string format = resolve_format(a.c, "json");

  const condlab::ThresholdReport rep = condlab::thresholds(a.k);
  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["k"] = a.k;
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "thresholds";
    out["config"] = cfg;
    out["r_first_exact"] = rep.r_first_exact;
    out["r_first_asymptotic"] = rep.r_first_asymptotic;
    out["r_second"] = rep.r_second;
    out["r_second_asymptotic"] = rep.r_second_asymptotic;
    out["r_cond"] = rep.r_cond;
    out["r_conjectured"] = rep.r_conjectured;
    if (rep.r_crit)
      out["r_crit"] = *rep.r_crit;
    else
      out["r_crit"] = nullptr;
    out["r_crit_diagnostic"] = rep.r_crit_diagnostic;
    sink.get() << out.dump() << '\n';
  } else {
    csv_config_line(sink.get(), cfg, "thresholds");
    std::ostream& os = sink.get();
    os << "statistic,value\n";
    os << "r_first_exact," << fmt(rep.r_first_exact) << '\n';
    os << "r_first_asymptotic," << fmt(rep.r_first_asymptotic) << '\n';
    os << "r_second," << fmt(rep.r_second) << '\n';
    os << "r_second_asymptotic," << fmt(rep.r_second_asymptotic) << '\n';
    os << "r_cond," << fmt(rep.r_cond) << '\n';
    os << "r_conjectured," << fmt(rep.r_conjectured) << '\n';
    if (rep.r_crit) os << "r_crit," << fmt(*rep.r_crit) << '\n';
  }
}

// --- rate-curve / pair-curve ----------------------------------------------

struct RateCurveArgs {
  Common c;
  int k = 10;
  double r = 0;
  long points = 1001;
};

void run_rate_curve(const CLI::App& sub, RateCurveArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--k", a.k);
  merge_key(j, sub, "--r", a.r);
  merge_key(j, sub, "--points", a.points);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  if (a.points < 1) throw parameter_error("rate-curve: need points >= 1");
  const std::string format = resolve_format(a.c, "csv");

  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["k"] = a.k;
  cfg["r"] = a.r;
  cfg["points"] = a.points;
  std::vector<std::pair<double, double>> rows;
  for (long i = 0; i < a.points; ++i) {
    const double x =
        a.points == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(a.points - 1);
    rows.emplace_back(x, condlab::psi(a.k, a.r, x));
  }
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "rate-curve";
    out["config"] = cfg;
    auto& pts = out["points"] = ordered_json::array();
    for (const auto& [x, y] : rows) pts.push_back({{"x", x}, {"psi", y}});
    sink.get() << out.dump() << '\n';
  } else {
    csv_config_line(sink.get(), cfg, "rate-curve");
    sink.get() << "x,psi\n";
    for (const auto& [x, y] : rows) sink.get() << fmt(x) << ',' << fmt(y) << '\n';
  }
}

struct PairCurveArgs {
  Common c;
  int k = 10;
  double r = 0;
  double beta = 0;
  long points = 999;
};

void run_pair_curve(const CLI::App& sub, PairCurveArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--k", a.k);
  merge_key(j, sub, "--r", a.r);
  merge_key(j, sub, "--beta", a.beta);
  merge_key(j, sub, "--points", a.points);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  if (a.points < 1) throw parameter_error("pair-curve: need points >= 1");
  const std::string format = resolve_format(a.c, "csv");

  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["k"] = a.k;
  cfg["r"] = a.r;
  cfg["beta"] = a.beta;
  cfg["points"] = a.points;
  std::vector<std::pair<double, double>> rows;
  for (long i = 1; i <= a.points; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(a.points + 1);
    rows.emplace_back(alpha, condlab::pair_rate(a.k, a.r, a.beta, alpha));
  }
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "pair-curve";
    out["config"] = cfg;
    auto& pts = out["points"] = ordered_json::array();
    for (const auto& [x, y] : rows) pts.push_back({{"alpha", x}, {"pair_rate", y}});
    sink.get() << out.dump() << '\n';
  } else {
    csv_config_line(sink.get(), cfg, "pair-curve");
    sink.get() << "alpha,pair_rate\n";
    for (const auto& [x, y] : rows) sink.get() << fmt(x) << ',' << fmt(y) << '\n';
  }
}

// --- sample ----------------------------------------------------------------

struct SampleArgs {
  Common c;
  std::string model = "uniform";
  int k = 3;
  long n = 0;
  long m = -1;
  double r = -1;
  long m1 = -1, m2 = -1;
  double lambda = -1;
  double p = -1;
  std::string sigma_out;
};

void run_sample(const CLI::App& sub, SampleArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--model", a.model);
  merge_key(j, sub, "--k", a.k);
  merge_key(j, sub, "--n", a.n);
  merge_key(j, sub, "--m", a.m);
  merge_key(j, sub, "--r", a.r);
  merge_key(j, sub, "--m1", a.m1);
  merge_key(j, sub, "--m2", a.m2);
  merge_key(j, sub, "--lambda", a.lambda);
  merge_key(j, sub, "--p", a.p);
  merge_key(j, sub, "--sigma-out", a.sigma_out);
  merge_key(j, sub, "--seed", a.c.seed);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  const std::string format = resolve_format(a.c, "csv");

  condlab::Rng rng(a.c.seed);
  const bool planted = a.model != "uniform";
  condlab::Coloring sigma;
  if (planted) {
    if (a.n % 2 != 0) throw parameter_error("sample: planted models need even n");
    sigma = condlab::canonical_equitable(a.n);
  }
  long m_total = a.m;
  if (m_total < 0 && a.r >= 0) m_total = std::lround(a.r * static_cast<double>(a.n));

  condlab::Hypergraph h;
  if (a.model == "uniform") {
    if (m_total < 0) throw parameter_error("sample: uniform model wants --m or --r");
    h = condlab::sample_uniform(a.n, m_total, a.k, rng);
  } else if (a.model == "planted") {
    if (m_total < 0) throw parameter_error("sample: planted model wants --m or --r");
    h = condlab::sample_planted(a.n, m_total, a.k, sigma, rng);
  } else if (a.model == "planted_critical") {
    long m1 = a.m1, m2 = a.m2;
    if (m1 < 0 && a.lambda >= 0) {
      // Complete to the matching total density, as the scans do.
      m1 = std::lround(a.lambda * static_cast<double>(a.n));
      const double scale = (std::ldexp(1.0, a.k - 1) - 1.0) / a.k;
      m2 = std::max(0L, std::lround(a.lambda * scale * static_cast<double>(a.n)) - m1);
    }
    if (m1 < 0) throw parameter_error("sample: planted_critical wants --m1/--m2 or --lambda");
    if (m2 < 0) m2 = 0;
    h = condlab::sample_planted_critical(a.n, m1, m2, a.k, sigma, rng);
  } else if (a.model == "binomial_planted") {
    double p = a.p;
    if (p < 0 && m_total >= 0) {
      const long double pool =
          condlab::count_bichromatic(a.n / 2, a.n - a.n / 2, a.k);
      p = std::min(1.0, static_cast<double>(static_cast<long double>(m_total) / pool));
    }
    if (p < 0) throw parameter_error("sample: binomial_planted wants --p or --m/--r");
    h = condlab::sample_binomial_planted(a.n, p, a.k, sigma, rng);
  } else {
    throw parameter_error("sample: unknown model " + a.model);
  }

  Sink sink(a.c.out);
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "sample";
    ordered_json cfg = config_echo(a.c, format);
    cfg["model"] = a.model;
    cfg["k"] = a.k;
    cfg["n"] = a.n;
    out["config"] = cfg;
    out["n"] = h.n;
    out["k"] = h.k;
    out["m"] = h.m();
    auto& edges = out["edges"] = ordered_json::array();
    for (long i = 0; i < h.m(); ++i) {
      ordered_json e = ordered_json::array();
      for (int t = 0; t < h.k; ++t) e.push_back(h.edge(i)[t]);
      edges.push_back(std::move(e));
    }
    sink.get() << out.dump() << '\n';
  } else {
    // Native instance format: header line then one edge per line.
    sink.get() << "# cmd=sample model=" << a.model << " k=" << a.k << " n=" << a.n
               << " seed=" << a.c.seed << '\n';
    condlab::write_hypergraph(sink.get(), h);
  }
  if (planted && !a.sigma_out.empty()) {
    Sink ssink(a.sigma_out);
    condlab::write_coloring(ssink.get(), sigma);
  }
}

// --- count -----------------------------------------------------------------

struct CountArgs {
  Common c;
  std::string in;
  std::string b_text;
};

void run_count(const CLI::App& sub, CountArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--in", a.in);
  merge_key(j, sub, "--b", a.b_text);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  merge_key(j, sub, "--workers", a.c.workers);
  const std::string format = resolve_format(a.c, "json");

  const condlab::Hypergraph h = load_hypergraph(a.in);
  const std::vector<double> b_list = parse_b_list(a.b_text);
  const condlab::SolutionCensus census = condlab::solution_census(h, b_list, a.c.workers);

  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["in"] = a.in;
  if (!a.b_text.empty()) cfg["b"] = a.b_text;
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "count";
    out["config"] = cfg;
    out["n"] = census.n;
    out["m"] = census.m;
    out["z"] = census.z;
    out["z_e"] = census.z_e;
    out["s_mu"] = census.s_mu;
    auto& zb = out["z_b"] = ordered_json::array();
    for (const auto& [b, v] : census.z_b) zb.push_back({{"b", b}, {"value", v}});
    sink.get() << out.dump() << '\n';
  } else {
    csv_config_line(sink.get(), cfg, "count");
    std::ostream& os = sink.get();
    os << "statistic,value\n";
    os << "n," << census.n << '\n';
    os << "m," << census.m << '\n';
    os << "z," << census.z << '\n';
    os << "z_e," << census.z_e << '\n';
    for (std::size_t mu = 0; mu < census.s_mu.size(); ++mu)
      os << "s_mu_" << mu << ',' << census.s_mu[mu] << '\n';
    for (const auto& [b, v] : census.z_b) os << "z_b_" << fmt(b) << ',' << fmt(v) << '\n';
  }
}

// --- profile ---------------------------------------------------------------

struct ProfileArgs {
  Common c;
  std::string in;
  std::string sigma_path;
  bool equitable_only = false;
};

void run_profile(const CLI::App& sub, ProfileArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--in", a.in);
  merge_key(j, sub, "--sigma", a.sigma_path);
  merge_key(j, sub, "--equitable-only", a.equitable_only);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  merge_key(j, sub, "--workers", a.c.workers);
  const std::string format = resolve_format(a.c, "csv");

  const condlab::Hypergraph h = load_hypergraph(a.in);
  const condlab::Coloring sigma = load_sigma(a.sigma_path, h.n);
  const condlab::DistanceProfile prof =
      condlab::distance_profile(h, sigma, a.equitable_only, a.c.workers);

  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["in"] = a.in;
  cfg["sigma"] = a.sigma_path.empty() ? "canonical" : a.sigma_path;
  if (a.equitable_only) cfg["equitable-only"] = true;
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "profile";
    out["config"] = cfg;
    out["n"] = prof.n;
    out["sigma_proper"] = prof.sigma_proper;
    out["z"] = prof.z;
    out["z_d"] = prof.z_d;
    sink.get() << out.dump() << '\n';
  } else {
    csv_config_line(sink.get(), cfg, "profile");
    std::ostream& os = sink.get();
    os << "# z=" << prof.z << " sigma_proper=" << (prof.sigma_proper ? 1 : 0) << '\n';
    os << "d,z_d\n";
    for (std::size_t d = 0; d < prof.z_d.size(); ++d) os << d << ',' << prof.z_d[d] << '\n';
  }
}

// --- whiten / core / census ------------------------------------------------

struct WhitenArgs {
  Common c;
  std::string in;
  std::string sigma_path;
  bool census = false;
};

void run_whiten(const CLI::App& sub, WhitenArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--in", a.in);
  merge_key(j, sub, "--sigma", a.sigma_path);
  merge_key(j, sub, "--census", a.census);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  const std::string format = resolve_format(a.c, "csv");

  const condlab::Hypergraph h = load_hypergraph(a.in);
  const condlab::Coloring sigma = load_sigma(a.sigma_path, h.n);
  const condlab::WhiteningResult w = condlab::whiten(h, sigma);
  const condlab::UCensus uc = condlab::u_census(w, h, sigma);

  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["in"] = a.in;
  cfg["sigma"] = a.sigma_path.empty() ? "canonical" : a.sigma_path;
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "whiten";
    out["config"] = cfg;
    if (!w.warning.empty()) out["warning"] = w.warning;
    auto& rounds = out["rounds"] = ordered_json::array();
    for (const auto& [round, verts] : w.rounds)
      rounds.push_back({{"round", round}, {"vertices", verts}});
    out["u_size"] = static_cast<long>(w.U.size());
    out["census"] = {{"lambda", uc.lambda},
                     {"u_frac", uc.u_frac},
                     {"s0_frac", uc.s0_frac},
                     {"s1_frac", uc.s1_frac},
                     {"extra_frac", uc.extra_frac},
                     {"pred_u", uc.pred_u},
                     {"pred_s0", uc.pred_s0},
                     {"pred_s1", uc.pred_s1}};
    sink.get() << out.dump() << '\n';
  } else if (a.census) {
    csv_config_line(sink.get(), cfg, "whiten");
    std::ostream& os = sink.get();
    if (!w.warning.empty()) os << "# warning=" << w.warning << '\n';
    os << "statistic,observed,predicted\n";
    os << "lambda," << fmt(uc.lambda) << ",nan\n";
    os << "u_frac," << fmt(uc.u_frac) << ',' << fmt(uc.pred_u) << '\n';
    os << "s0_frac," << fmt(uc.s0_frac) << ',' << fmt(uc.pred_s0) << '\n';
    os << "s1_frac," << fmt(uc.s1_frac) << ',' << fmt(uc.pred_s1) << '\n';
    os << "extra_frac," << fmt(uc.extra_frac) << ",nan\n";
  } else {
    csv_config_line(sink.get(), cfg, "whiten");
    std::ostream& os = sink.get();
    if (!w.warning.empty()) os << "# warning=" << w.warning << '\n';
    os << "round,vertex\n";
    for (const auto& [round, verts] : w.rounds)
      for (auto v : verts) os << round << ',' << v << '\n';
  }
}

struct CoreArgs {
  Common c;
  std::string in;
  std::string sigma_path;
  int l = 10;
};

void run_core(const CLI::App& sub, CoreArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--in", a.in);
  merge_key(j, sub, "--sigma", a.sigma_path);
  merge_key(j, sub, "--l", a.l);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  const std::string format = resolve_format(a.c, "csv");

  const condlab::Hypergraph h = load_hypergraph(a.in);
  const condlab::Coloring sigma = load_sigma(a.sigma_path, h.n);
  const condlab::CoreResult core = condlab::core(h, sigma, a.l);
  const auto att = condlab::attach(h, sigma, core.C);

  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["in"] = a.in;
  cfg["sigma"] = a.sigma_path.empty() ? "canonical" : a.sigma_path;
  cfg["l"] = a.l;
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "core";
    out["config"] = cfg;
    out["core"] = core.C;
    out["attach"] = att.A;
    out["removed"] = core.removed_trace;
    sink.get() << out.dump() << '\n';
  } else {
    csv_config_line(sink.get(), cfg, "core");
    std::ostream& os = sink.get();
    os << "set,vertex\n";
    for (auto v : core.C) os << "core," << v << '\n';
    for (auto v : att.A)
      if (!core.in_C[v]) os << "attach," << v << '\n';
  }
}

struct CensusArgs {
  Common c;
  std::string in;
  std::string sigma_path;
  int l = 10;
  int cap = 26;
};

void run_census(const CLI::App& sub, CensusArgs& a) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--in", a.in);
  merge_key(j, sub, "--sigma", a.sigma_path);
  merge_key(j, sub, "--l", a.l);
  merge_key(j, sub, "--cap", a.cap);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  const std::string format = resolve_format(a.c, "json");

  const condlab::Hypergraph h = load_hypergraph(a.in);
  const condlab::Coloring sigma = load_sigma(a.sigma_path, h.n);
  // Condition on the attachment closure of the l-core: the stable region the
  // peeling keeps plus everything forced by it.
  const condlab::CoreResult core = condlab::core(h, sigma, a.l);
  const auto att = condlab::attach(h, sigma, core.C);
  const condlab::ComponentCensus census = condlab::residual_census(h, sigma, att.A, a.cap);

  Sink sink(a.c.out);
  ordered_json cfg = config_echo(a.c, format);
  cfg["in"] = a.in;
  cfg["sigma"] = a.sigma_path.empty() ? "canonical" : a.sigma_path;
  cfg["l"] = a.l;
  cfg["cap"] = a.cap;
  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["report"] = "census";
    out["config"] = cfg;
    if (!census.warning.empty()) out["warning"] = census.warning;
    out["conditioning_size"] = static_cast<long>(att.A.size());
    out["residual_vertices"] = census.residual_vertices;
    out["entropy_estimate"] = static_cast<double>(census.entropy_estimate);
    out["contradiction"] = census.contradiction;
    out["oversized"] = census.oversized;
    auto& comps = out["components"] = ordered_json::array();
    for (const auto& c : census.components)
      comps.push_back({{"key", c.key},
                       {"multiplicity", c.multiplicity},
                       {"vertex_count", c.vertex_count},
                       {"z_T", c.z_T}});
    sink.get() << out.dump() << '\n';
  } else {
    csv_config_line(sink.get(), cfg, "census");
    std::ostream& os = sink.get();
    if (!census.warning.empty()) os << "# warning=" << census.warning << '\n';
    os << "# conditioning_size=" << att.A.size()
       << " residual_vertices=" << census.residual_vertices
       << " entropy_estimate=" << fmt(static_cast<double>(census.entropy_estimate))
       << " contradiction=" << (census.contradiction ? 1 : 0) << '\n';
    os << "key,multiplicity,vertex_count,z_T\n";
    for (const auto& c : census.components)
      os << '"' << c.key << "\"," << c.multiplicity << ',' << c.vertex_count << ',' << c.z_T
         << '\n';
  }
}

// --- scans -----------------------------------------------------------------

struct ScanArgs {
  Common c;
  int k = 3;
  long n = 0;
  long trials = 20;
  std::string grid_text;
  double beta = 0;
  double lambda = -1;  // degree-law single point
  std::string records_path;
};

void run_scan(const CLI::App& sub, ScanArgs& a, condlab::ExperimentKind kind) {
  const ordered_json j = load_config(a.c.config_path);
  merge_key(j, sub, "--k", a.k);
  merge_key(j, sub, "--n", a.n);
  merge_key(j, sub, "--trials", a.trials);
  if (kind == condlab::ExperimentKind::condensation_scan)
    merge_key(j, sub, "--r-grid", a.grid_text);
  if (kind == condlab::ExperimentKind::cluster_entropy_scan) {
    merge_key(j, sub, "--lambda-grid", a.grid_text);
    merge_key(j, sub, "--beta", a.beta);
  }
  if (kind == condlab::ExperimentKind::degree_law) merge_key(j, sub, "--lambda", a.lambda);
  merge_key(j, sub, "--records", a.records_path);
  merge_key(j, sub, "--seed", a.c.seed);
  merge_key(j, sub, "--out", a.c.out);
  merge_key(j, sub, "--format", a.c.format);
  merge_key(j, sub, "--workers", a.c.workers);
  const std::string format = resolve_format(a.c, "csv");

  condlab::ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.k = a.k;
  cfg.n = a.n;
  cfg.trials = a.trials;
  cfg.master_seed = a.c.seed;
  cfg.workers = a.c.workers;
  cfg.beta = a.beta;
  cfg.format = format;
  if (kind == condlab::ExperimentKind::condensation_scan) {
    cfg.model = condlab::ModelKind::uniform;
    cfg.r_grid = parse_grid(a.grid_text);
  } else {
    cfg.model = condlab::ModelKind::planted_critical;
    cfg.lambda_grid = kind == condlab::ExperimentKind::degree_law
                          ? std::vector<double>{a.lambda}
                          : parse_grid(a.grid_text);
    if (kind == condlab::ExperimentKind::degree_law && a.lambda < 0)
      throw parameter_error("degree-law: --lambda is required");
  }

  condlab::RecordSink record_sink;
  std::unique_ptr<Sink> records_out;
  if (!a.records_path.empty()) {
    records_out = std::make_unique<Sink>(a.records_path);
    record_sink = [&cfg, &records_out](const condlab::TrialRecord& r) {
      condlab::write_record_json(records_out->get(), cfg, r);
    };
  }
  const auto records = condlab::run_trials(cfg, record_sink);
  const condlab::Curve curve = condlab::fold_records(cfg, records);

  Sink sink(a.c.out);
  if (format == "json")
    condlab::write_curve_json(sink.get(), curve);
  else
    condlab::write_curve_csv(sink.get(), curve);
  std::cerr << "batch: " << records.size() << " records, " << curve.failed_trials
            << " failed\n";  // line-per-batch log, never in the output file
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"condensation laboratory for random hypergraph 2-coloring"};
  app.require_subcommand(1);

  ThresholdsArgs th;
  auto* sub_th = app.add_subcommand("thresholds", "threshold densities for a given k");
  sub_th->add_option("--k", th.k, "edge size");
  add_common(sub_th, th.c);
  sub_th->callback([&] { run_thresholds(*sub_th, th); });

  RateCurveArgs rc;
  auto* sub_rc = app.add_subcommand("rate-curve", "overlap rate function x -> psi(k,r,x)");
  sub_rc->add_option("--k", rc.k, "edge size");
  sub_rc->add_option("--r", rc.r, "edge density m/n");
  sub_rc->add_option("--points", rc.points, "grid points over [0,1]");
  add_common(sub_rc, rc.c);
  sub_rc->callback([&] { run_rate_curve(*sub_rc, rc); });

  PairCurveArgs pc;
  auto* sub_pc = app.add_subcommand("pair-curve", "planted-pair rate alpha -> g(alpha)");
  sub_pc->add_option("--k", pc.k, "edge size");
  sub_pc->add_option("--r", pc.r, "edge density m/n");
  sub_pc->add_option("--beta", pc.beta, "critical-edge surplus");
  sub_pc->add_option("--points", pc.points, "grid points over (0,1)");
  add_common(sub_pc, pc.c);
  sub_pc->callback([&] { run_pair_curve(*sub_pc, pc); });

  SampleArgs sa;
  auto* sub_sa = app.add_subcommand("sample", "draw an instance and write it out");
  sub_sa->add_option("--model", sa.model, "uniform|planted|planted_critical|binomial_planted");
  sub_sa->add_option("--k", sa.k, "edge size");
  sub_sa->add_option("--n", sa.n, "vertices");
  sub_sa->add_option("--m", sa.m, "edges (uniform/planted/binomial)");
  sub_sa->add_option("--r", sa.r, "edge density m/n, alternative to --m");
  sub_sa->add_option("--m1", sa.m1, "critical edges (planted_critical)");
  sub_sa->add_option("--m2", sa.m2, "non-critical bichromatic edges (planted_critical)");
  sub_sa->add_option("--lambda", sa.lambda, "critical density m1/n, alternative to --m1/--m2");
  sub_sa->add_option("--p", sa.p, "per-edge probability (binomial_planted)");
  sub_sa->add_option("--sigma-out", sa.sigma_out, "write the reference coloring here");
  add_common(sub_sa, sa.c);
  sub_sa->callback([&] { run_sample(*sub_sa, sa); });

  CountArgs ca;
  auto* sub_ca = app.add_subcommand("count", "exact solution census of an instance file");
  sub_ca->add_option("--in", ca.in, "hypergraph file");
  sub_ca->add_option("--b", ca.b_text, "comma list of inverse temperatures");
  add_common(sub_ca, ca.c);
  sub_ca->callback([&] { run_count(*sub_ca, ca); });

  ProfileArgs pa;
  auto* sub_pa = app.add_subcommand("profile", "distance profile of solutions around a coloring");
  sub_pa->add_option("--in", pa.in, "hypergraph file");
  sub_pa->add_option("--sigma", pa.sigma_path, "reference coloring file (default canonical)");
  sub_pa->add_flag("--equitable-only", pa.equitable_only, "count equitable solutions only");
  add_common(sub_pa, pa.c);
  sub_pa->callback([&] { run_profile(*sub_pa, pa); });

  WhitenArgs wa;
  auto* sub_wa = app.add_subcommand("whiten", "whitening fixpoint trace or census");
  sub_wa->add_option("--in", wa.in, "hypergraph file");
  sub_wa->add_option("--sigma", wa.sigma_path, "reference coloring file (default canonical)");
  sub_wa->add_flag("--census", wa.census, "emit observed-vs-predicted census instead of the trace");
  add_common(sub_wa, wa.c);
  sub_wa->callback([&] { run_whiten(*sub_wa, wa); });

  CoreArgs oa;
  auto* sub_oa = app.add_subcommand("core", "support core and its attachment closure");
  sub_oa->add_option("--in", oa.in, "hypergraph file");
  sub_oa->add_option("--sigma", oa.sigma_path, "reference coloring file (default canonical)");
  sub_oa->add_option("--l", oa.l, "peeling parameter (even, >= 2)");
  add_common(sub_oa, oa.c);
  sub_oa->callback([&] { run_core(*sub_oa, oa); });

  CensusArgs na;
  auto* sub_na = app.add_subcommand("census", "residual component census conditioned on the core");
  sub_na->add_option("--in", na.in, "hypergraph file");
  sub_na->add_option("--sigma", na.sigma_path, "reference coloring file (default canonical)");
  sub_na->add_option("--l", na.l, "peeling parameter (even, >= 2)");
  sub_na->add_option("--cap", na.cap, "component enumeration cap");
  add_common(sub_na, na.c);
  sub_na->callback([&] { run_census(*sub_na, na); });

  ScanArgs sc;
  auto* sub_sc = app.add_subcommand("scan-condensation", "ln(1+Z) against the first moment over r");
  sub_sc->add_option("--k", sc.k, "edge size");
  sub_sc->add_option("--n", sc.n, "vertices (within the enumeration cap)");
  sub_sc->add_option("--r-grid", sc.grid_text, "lo:hi:points or comma list");
  sub_sc->add_option("--trials", sc.trials, "trials per grid point");
  sub_sc->add_option("--records", sc.records_path, "also stream per-trial JSON records here");
  add_common(sub_sc, sc.c);
  sub_sc->callback([&] { run_scan(*sub_sc, sc, condlab::ExperimentKind::condensation_scan); });

  ScanArgs sl;
  auto* sub_sl = app.add_subcommand("scan-cluster", "cluster entropy bounds over lambda");
  sub_sl->add_option("--k", sl.k, "edge size");
  sub_sl->add_option("--n", sl.n, "vertices (even)");
  sub_sl->add_option("--lambda-grid", sl.grid_text, "lo:hi:points or comma list");
  sub_sl->add_option("--trials", sl.trials, "trials per grid point");
  sub_sl->add_option("--beta", sl.beta, "criticality surplus");
  sub_sl->add_option("--records", sl.records_path, "also stream per-trial JSON records here");
  add_common(sub_sl, sl.c);
  sub_sl->callback([&] { run_scan(*sub_sl, sl, condlab::ExperimentKind::cluster_entropy_scan); });

  ScanArgs dl;
  auto* sub_dl = app.add_subcommand("degree-law", "support-degree histogram against Poisson");
  sub_dl->add_option("--k", dl.k, "edge size");
  sub_dl->add_option("--n", dl.n, "vertices (even)");
  sub_dl->add_option("--lambda", dl.lambda, "critical density m1/n");
  sub_dl->add_option("--trials", dl.trials, "trials");
  sub_dl->add_option("--records", dl.records_path, "also stream per-trial JSON records here");
  add_common(sub_dl, dl.c);
  sub_dl->callback([&] { run_scan(*sub_dl, dl, condlab::ExperimentKind::degree_law); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  } catch (const condlab::resource_cap_error& e) {
    std::cerr << "condlab: " << e.what() << '\n';
    return 3;
  } catch (const parameter_error& e) {
    std::cerr << "condlab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "condlab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
