#pragma once

// Combinatorial processes driven by the support relation of a colored
// hypergraph: the whitening fixpoint U with its projected hypergraph H_U,
// the support core with attachment closure, a census of the residual
// components outside a frozen set, and per-instance cluster-entropy bounds.
//
// Only critical edges carry support, so the fixpoints ignore bichromatic
// non-critical edges entirely; those enter once, in cluster_entropy_bounds,
// where they thin the star structure of H_U.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "condlab/common.hpp"
#include "condlab/hypergraph.hpp"

namespace condlab {

// Projection e ∩ U of a source edge; kept only when it has >= 2 vertices.
struct ProjectedEdge {
  std::vector<std::int32_t> verts;  // sorted
  long source = -1;                 // index of the source edge
};

struct WhiteningResult {
  std::vector<std::int32_t> U;   // sorted
  std::vector<std::uint8_t> in_U;
  // Wave t holds the vertices added in round t; wave 0 is the support-free set.
  std::vector<std::pair<int, std::vector<std::int32_t>>> rounds;
  std::vector<ProjectedEdge> H_U;  // projections of critical edges onto U
  std::vector<std::uint8_t> star;  // per H_U edge: belongs to the S1 -> S0 star structure
  std::vector<std::int32_t> S0;    // support-free vertices
  std::vector<std::int32_t> S1;    // support exactly one edge, whose projection is a 2-set meeting S0
  long extra_edges = 0;            // H_U edges outside the star structure
  long m_critical = 0;
  std::string warning;  // set when sigma is not proper; the processes still run
};

namespace detail {

// Incidence of vertices in critical edges only, in CSR form.
// Incidence of vertices in critical edges, in CSR form. Lists hold dense
// indices into crit so per-edge scratch arrays can be m_critical-sized.
struct CriticalIncidence {
  std::vector<long> crit;          // dense index -> original edge index
  std::vector<long> off;           // size n+1
  std::vector<long> lists;         // concatenated per-vertex dense indices
};

inline CriticalIncidence critical_incidence(const Hypergraph& h, const EdgeClassification& cls) {
  CriticalIncidence inc;
  const long mm = h.m();
  inc.crit.reserve(cls.m_critical);
  for (long i = 0; i < mm; ++i)
    if (cls.kind[i] == EdgeKind::critical) inc.crit.push_back(i);
  std::vector<long> deg(h.n, 0);
  for (long j : inc.crit)
    for (int t = 0; t < h.k; ++t) ++deg[h.edge(j)[t]];
  inc.off.assign(h.n + 1, 0);
  for (int v = 0; v < h.n; ++v) inc.off[v + 1] = inc.off[v] + deg[v];
  inc.lists.resize(inc.off[h.n]);
  std::vector<long> cur(inc.off.begin(), inc.off.end() - 1);
  for (std::size_t d = 0; d < inc.crit.size(); ++d)
    for (int t = 0; t < h.k; ++t) inc.lists[cur[h.edge(inc.crit[d])[t]]++] = static_cast<long>(d);
  return inc;
}

}  // namespace detail

// Least fixpoint of: start from the support-free vertices, then add any v all
// of whose supported edges already contain a U-vertex. Worklist driven, so the
// cost is O(sum of edge sizes). The result is order-independent; tests pin
// that against a scan-until-stable recomputation under shuffled orders.
inline WhiteningResult whiten(const Hypergraph& h, const Coloring& sigma) {
  const EdgeClassification cls = classify_edges(h, sigma);
  WhiteningResult out;
  out.m_critical = cls.m_critical;
  if (cls.m_mono > 0)
    out.warning = "sigma is not proper (" + std::to_string(cls.m_mono) +
                  " monochromatic edges); support relation applied as-is";
  const detail::CriticalIncidence inc = detail::critical_incidence(h, cls);

  // need[v] = supported edges of v not yet meeting U; cover[d] = |e_d ∩ U|.
  std::vector<long> need(cls.s.begin(), cls.s.end());
  std::vector<long> cover(inc.crit.size(), 0);
  out.in_U.assign(h.n, 0);

  std::vector<std::int32_t> wave;
  for (int v = 0; v < h.n; ++v)
    if (need[v] == 0) wave.push_back(v);
  int round = 0;
  while (!wave.empty()) {
    std::vector<std::int32_t> next;
    for (std::int32_t v : wave) out.in_U[v] = 1;
    for (std::int32_t v : wave) {
      for (long t = inc.off[v]; t < inc.off[v + 1]; ++t) {
        const long d = inc.lists[t];
        if (++cover[d] != 1) continue;
        const std::int32_t w = cls.support[inc.crit[d]];
        if (!out.in_U[w] && --need[w] == 0) next.push_back(w);
      }
    }
    out.rounds.emplace_back(round++, std::move(wave));
    wave = std::move(next);
  }
  for (int v = 0; v < h.n; ++v)
    if (out.in_U[v]) out.U.push_back(v);

  for (int v = 0; v < h.n; ++v)
    if (cls.s[v] == 0) out.S0.push_back(v);

  // Projections, with the dense index map reused for the S1 scan.
  std::vector<long> hu_of(inc.crit.size(), -1);
  for (std::size_t d = 0; d < inc.crit.size(); ++d) {
    const long j = inc.crit[d];
    ProjectedEdge pe;
    for (int t = 0; t < h.k; ++t) {
      const std::int32_t w = h.edge(j)[t];
      if (out.in_U[w]) pe.verts.push_back(w);
    }
    if (pe.verts.size() < 2) continue;
    pe.source = j;
    hu_of[d] = static_cast<long>(out.H_U.size());
    out.H_U.push_back(std::move(pe));
  }
  out.star.assign(out.H_U.size(), 0);
  for (int v = 0; v < h.n; ++v) {
    if (cls.s[v] != 1 || !out.in_U[v]) continue;
    long d = -1;
    for (long t = inc.off[v]; t < inc.off[v + 1]; ++t)
      if (cls.support[inc.crit[inc.lists[t]]] == v) { d = inc.lists[t]; break; }
    if (d < 0 || hu_of[d] < 0) continue;
    const ProjectedEdge& pe = out.H_U[hu_of[d]];
    if (pe.verts.size() != 2) continue;
    const std::int32_t other = pe.verts[0] == v ? pe.verts[1] : pe.verts[0];
    if (cls.s[other] != 0) continue;
    out.S1.push_back(v);
    out.star[hu_of[d]] = 1;
  }
  out.extra_edges = static_cast<long>(out.H_U.size()) - static_cast<long>(out.S1.size());
  return out;
}

struct UCensus {
  long n = 0;
  double lambda = 0;  // critical edges per vertex
  double u_frac = 0, s0_frac = 0, s1_frac = 0, extra_frac = 0;
  double pred_u = 0, pred_s0 = 0, pred_s1 = 0;
};

// Side-by-side sizes of U, S0, S1 and the extra-edge count against the
// sparse-regime predictions exp(-lambda) and lambda*(k-1)*exp(-2*lambda).
inline UCensus u_census(const WhiteningResult& w, const Hypergraph& h, const Coloring& sigma) {
  (void)sigma;
  UCensus c;
  c.n = h.n;
  if (h.n == 0) return c;
  const double dn = static_cast<double>(h.n);
  c.lambda = static_cast<double>(w.m_critical) / dn;
  c.u_frac = static_cast<double>(w.U.size()) / dn;
  c.s0_frac = static_cast<double>(w.S0.size()) / dn;
  c.s1_frac = static_cast<double>(w.S1.size()) / dn;
  c.extra_frac = static_cast<double>(w.extra_edges) / dn;
  c.pred_s0 = std::exp(-c.lambda);
  c.pred_s1 = c.lambda * (h.k - 1) * std::exp(-2 * c.lambda);
  c.pred_u = c.pred_s0 + c.pred_s1;
  return c;
}

struct CoreResult {
  std::vector<std::int32_t> C;  // sorted
  std::vector<std::uint8_t> in_C;
  std::vector<std::int32_t> removed_trace;  // deletion order of the peeling stage
  std::vector<std::int32_t> A;  // attachment closure of C; empty until attach() runs
  std::vector<std::uint8_t> in_A;
  int l = 0;
};

// Maximal S in which every member supports at least l/2 edges lying entirely
// inside S. Starts from the vertices supporting >= l/2 edges at all and peels
// with a worklist; removed_trace records the peeling order.
inline CoreResult core(const Hypergraph& h, const Coloring& sigma, int l = 10) {
  if (l < 2 || l % 2 != 0) throw parameter_error("core: l must be even and >= 2");
  const EdgeClassification cls = classify_edges(h, sigma);
  const detail::CriticalIncidence inc = detail::critical_incidence(h, cls);
  const long half = l / 2;

  CoreResult out;
  out.l = l;
  out.in_C.assign(h.n, 0);
  for (int v = 0; v < h.n; ++v)
    if (cls.s[v] >= half) out.in_C[v] = 1;

  // out_cnt[d] = vertices of e_d outside S; inside[v] = supported edges fully inside.
  std::vector<long> out_cnt(inc.crit.size(), 0);
  for (std::size_t d = 0; d < inc.crit.size(); ++d)
    for (int t = 0; t < h.k; ++t)
      if (!out.in_C[h.edge(inc.crit[d])[t]]) ++out_cnt[d];
  std::vector<long> inside(h.n, 0);
  for (std::size_t d = 0; d < inc.crit.size(); ++d)
    if (out_cnt[d] == 0) ++inside[cls.support[inc.crit[d]]];

  std::vector<std::int32_t> stack;
  std::vector<std::uint8_t> queued(h.n, 0);
  for (int v = 0; v < h.n; ++v)
    if (out.in_C[v] && inside[v] < half) { stack.push_back(v); queued[v] = 1; }
  while (!stack.empty()) {
    const std::int32_t v = stack.back();
    stack.pop_back();
    queued[v] = 0;
    if (!out.in_C[v] || inside[v] >= half) continue;
    out.in_C[v] = 0;
    out.removed_trace.push_back(v);
    for (long t = inc.off[v]; t < inc.off[v + 1]; ++t) {
      const long d = inc.lists[t];
      if (++out_cnt[d] != 1) continue;
      const std::int32_t w = cls.support[inc.crit[d]];
      if (!out.in_C[w]) continue;
      if (--inside[w] < half && !queued[w]) { stack.push_back(w); queued[w] = 1; }
    }
  }
  for (int v = 0; v < h.n; ++v)
    if (out.in_C[v]) out.C.push_back(v);
  return out;
}

// Least fixpoint of: v joins A when it supports an edge whose other k-1
// vertices already lie in A. Every supported edge qualifies, not just one
// designated edge per vertex, so the closure is deterministic.
inline CoreResult attach(const Hypergraph& h, const Coloring& sigma, const std::vector<std::int32_t>& C) {
  for (std::int32_t v : C)
    if (v < 0 || v >= h.n) throw parameter_error("attach: vertex id out of range");
  const EdgeClassification cls = classify_edges(h, sigma);
  const detail::CriticalIncidence inc = detail::critical_incidence(h, cls);

  CoreResult out;
  out.in_C.assign(h.n, 0);
  for (std::int32_t v : C) out.in_C[v] = 1;
  for (int v = 0; v < h.n; ++v)
    if (out.in_C[v]) out.C.push_back(v);
  out.in_A = out.in_C;

  // miss[d] = non-supporting vertices of e_d outside A. All counts are taken
  // against the initial A before any vertex joins, so each later join
  // decrements each edge it sits in exactly once.
  std::vector<long> miss(inc.crit.size(), 0);
  for (std::size_t d = 0; d < inc.crit.size(); ++d)
    for (int t = 0; t < h.k; ++t) {
      const std::int32_t w = h.edge(inc.crit[d])[t];
      if (w != cls.support[inc.crit[d]] && !out.in_A[w]) ++miss[d];
    }
  std::vector<std::int32_t> stack;
  for (std::size_t d = 0; d < inc.crit.size(); ++d) {
    if (miss[d] != 0) continue;
    const std::int32_t w = cls.support[inc.crit[d]];
    if (!out.in_A[w]) { out.in_A[w] = 1; stack.push_back(w); }
  }
  while (!stack.empty()) {
    const std::int32_t v = stack.back();
    stack.pop_back();
    for (long t = inc.off[v]; t < inc.off[v + 1]; ++t) {
      const long d = inc.lists[t];
      const std::int32_t w = cls.support[inc.crit[d]];
      if (w == v) continue;
      if (--miss[d] != 0) continue;
      if (!out.in_A[w]) { out.in_A[w] = 1; stack.push_back(w); }
    }
  }
  for (int v = 0; v < h.n; ++v)
    if (out.in_A[v]) out.A.push_back(v);
  return out;
}

struct CensusComponent {
  std::string key;
  long multiplicity = 0;
  int vertex_count = 0;
  unsigned long long z_T = 0;  // conditioned coloring count of the component
};

struct ComponentCensus {
  std::vector<CensusComponent> components;  // grouped by (key, size, z_T)
  std::vector<int> oversized;               // sizes of components beyond the enumeration cap
  long residual_vertices = 0;               // |V \ C|
  long double entropy_estimate = 0;         // sum multiplicity * ln z_T; -inf on contradiction
  bool contradiction = false;
  std::string warning;
};

namespace detail {

// Residual constraint on free vertices: an edge may forbid both monochromatic
// patterns (its frozen part is empty) or just one color (its frozen part is
// monochromatic in that color). Frozen-bichromatic edges impose nothing.
enum class ResidualKind : std::uint8_t { nae, forbid0, forbid1 };

struct ResidualConstraint {
  std::vector<int> verts;  // local component indices once extracted
  ResidualKind kind = ResidualKind::nae;
};

// Canonical name of a residual component: for <= 12 vertices, the minimal
// constraint encoding over vertex relabelings, searched within degree classes
// under a permutation budget; symmetric cases past the budget and components
// past 12 vertices fall back to a signature key. Callers group by (key, z_T),
// so a coarse key can never merge types with different counts.
inline std::string component_key(int sz, const std::vector<ResidualConstraint>& cons) {
  std::vector<int> sizes;
  for (const auto& c : cons) sizes.push_back(static_cast<int>(c.verts.size()));
  std::sort(sizes.begin(), sizes.end());
  auto join = [](const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(xs[i]);
    }
    return s;
  };
  if (sz > 12) return "large:v=" + std::to_string(sz) + ";e=" + join(sizes);

  // Vertex signature: per-kind membership size lists.
  std::vector<std::array<std::vector<int>, 3>> sig(sz);
  for (const auto& c : cons)
    for (int v : c.verts) sig[v][static_cast<int>(c.kind)].push_back(static_cast<int>(c.verts.size()));
  std::vector<std::string> sig_str(sz);
  for (int v = 0; v < sz; ++v) {
    for (auto& lst : sig[v]) std::sort(lst.begin(), lst.end());
    sig_str[v] = join(sig[v][0]) + "|" + join(sig[v][1]) + "|" + join(sig[v][2]);
  }
  std::vector<int> order(sz);
  for (int v = 0; v < sz; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tie(sig_str[a], a) < std::tie(sig_str[b], b);
  });
  // [begin, end) runs of equal signature; each run starts in ascending order
  // so next_permutation visits every arrangement.
  std::vector<std::pair<int, int>> groups;
  {
    int b = 0;
    for (int i = 1; i <= sz; ++i)
      if (i == sz || sig_str[order[i]] != sig_str[order[b]]) { groups.emplace_back(b, i); b = i; }
  }
  long double perms = 1;
  for (auto [b, e] : groups)
    for (int t = 2; t <= e - b; ++t) perms *= t;
  if (perms > 200000.0L) {
    std::string s = "sig:v=" + std::to_string(sz) + ";deg=";
    std::vector<std::string> ss(sig_str);
    std::sort(ss.begin(), ss.end());
    for (const auto& x : ss) s += x + ";";
    return s;
  }

  auto encode = [&](const std::vector<int>& label_of) {
    std::vector<std::vector<int>> enc;
    enc.reserve(cons.size());
    for (const auto& c : cons) {
      std::vector<int> row;
      row.push_back(static_cast<int>(c.kind));
      for (int v : c.verts) row.push_back(label_of[v]);
      std::sort(row.begin() + 1, row.end());
      enc.push_back(std::move(row));
    }
    std::sort(enc.begin(), enc.end());
    return enc;
  };

  std::vector<int> perm(order);  // perm[new label] = old vertex
  std::vector<int> label_of(sz);
  std::vector<std::vector<int>> best;
  bool have = false;
  while (true) {
    for (int i = 0; i < sz; ++i) label_of[perm[i]] = i;
    auto enc = encode(label_of);
    if (!have || enc < best) { best = std::move(enc); have = true; }
    // Odometer over within-group permutations.
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      auto [b, e] = groups[g];
      if (std::next_permutation(perm.begin() + b, perm.begin() + e)) break;
    }
    if (g == groups.size()) break;
  }
  std::string s = "c:v=" + std::to_string(sz) + ";";
  for (const auto& row : best) {
    s += 't' + std::to_string(row[0]) + '(';
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (i > 1) s += ',';
      s += std::to_string(row[i]);
    }
    s += ");";
  }
  return s;
}

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(long n) : parent(n) {
    for (long i = 0; i < n; ++i) parent[i] = static_cast<std::int32_t>(i);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

}  // namespace detail

// Census of the components left outside the frozen set C. Each edge is
// reduced against sigma restricted to C: a frozen-bichromatic edge drops, a
// frozen-monochromatic edge forbids its free part taking that color (a unary
// forcing when one vertex is free), and a fully free edge keeps the plain
// not-monochromatic constraint. z_T of every concrete component is counted by
// enumeration, so entropy_estimate matches the exactly conditioned count.
inline ComponentCensus residual_census(const Hypergraph& h, const Coloring& sigma,
                                       const std::vector<std::int32_t>& C, int enum_cap = 26) {
  if (static_cast<long>(sigma.size()) != h.n) throw parameter_error("residual_census: coloring length != n");
  std::vector<std::uint8_t> in_C(h.n, 0);
  for (std::int32_t v : C) {
    if (v < 0 || v >= h.n) throw parameter_error("residual_census: vertex id out of range");
    in_C[v] = 1;
  }
  ComponentCensus out;
  long frozen = 0;
  for (int v = 0; v < h.n; ++v) frozen += in_C[v];
  out.residual_vertices = h.n - frozen;

  struct RawConstraint {
    std::vector<std::int32_t> verts;
    detail::ResidualKind kind;
  };
  std::vector<RawConstraint> cons;
  const long mm = h.m();
  for (long i = 0; i < mm; ++i) {
    const std::int32_t* e = h.edge(i);
    int in0 = 0, in1 = 0;
    RawConstraint rc;
    for (int t = 0; t < h.k; ++t) {
      if (in_C[e[t]]) {
        (sigma[e[t]] ? in1 : in0)++;
      } else {
        rc.verts.push_back(e[t]);
      }
    }
    if (in0 > 0 && in1 > 0) continue;  // frozen part already bichromatic
    if (rc.verts.empty()) {
      if (!out.contradiction) out.warning = "an edge inside C is monochromatic under sigma";
      out.contradiction = true;
      continue;
    }
    if (in0 == 0 && in1 == 0) rc.kind = detail::ResidualKind::nae;
    else rc.kind = in1 == 0 ? detail::ResidualKind::forbid0 : detail::ResidualKind::forbid1;
    cons.push_back(std::move(rc));
  }

  detail::UnionFind uf(h.n);
  for (const auto& rc : cons)
    for (std::size_t t = 1; t < rc.verts.size(); ++t) uf.unite(rc.verts[0], rc.verts[t]);

  std::vector<std::vector<std::int32_t>> members(h.n);
  for (int v = 0; v < h.n; ++v)
    if (!in_C[v]) members[uf.find(v)].push_back(v);
  std::vector<std::vector<long>> comp_cons(h.n);
  for (std::size_t c = 0; c < cons.size(); ++c)
    comp_cons[uf.find(cons[c].verts[0])].push_back(static_cast<long>(c));

  std::map<std::tuple<std::string, int, unsigned long long>, long> groups;
  KahanSum entropy;
  std::vector<int> local_of(h.n, -1);  // reset per component below
  for (int root = 0; root < h.n; ++root) {
    const auto& verts = members[root];
    if (verts.empty()) continue;
    const int sz = static_cast<int>(verts.size());
    if (sz > enum_cap) {
      out.oversized.push_back(sz);
      if (out.warning.empty()) out.warning = "component above the enumeration cap reported without a count";
      continue;
    }
    for (int i = 0; i < sz; ++i) local_of[verts[i]] = i;
    std::vector<detail::ResidualConstraint> local;
    local.reserve(comp_cons[root].size());
    std::vector<std::uint64_t> masks;
    std::vector<int> kinds;
    for (long ci : comp_cons[root]) {
      detail::ResidualConstraint lc;
      lc.kind = cons[ci].kind;
      std::uint64_t cm = 0;
      for (std::int32_t v : cons[ci].verts) {
        lc.verts.push_back(local_of[v]);
        cm |= std::uint64_t{1} << local_of[v];
      }
      std::sort(lc.verts.begin(), lc.verts.end());
      masks.push_back(cm);
      kinds.push_back(static_cast<int>(lc.kind));
      local.push_back(std::move(lc));
    }
    unsigned long long z = 0;
    const std::uint64_t top = std::uint64_t{1} << sz;
    for (std::uint64_t m = 0; m < top; ++m) {
      bool ok = true;
      for (std::size_t c = 0; c < masks.size() && ok; ++c) {
        const std::uint64_t x = m & masks[c];
        if (kinds[c] == static_cast<int>(detail::ResidualKind::nae)) ok = x != 0 && x != masks[c];
        else if (kinds[c] == static_cast<int>(detail::ResidualKind::forbid0)) ok = x != 0;
        else ok = x != masks[c];
      }
      z += ok;
    }
    if (z == 0) {
      out.contradiction = true;
      if (out.warning.empty()) out.warning = "a residual component admits no coloring";
    }
    ++groups[{detail::component_key(sz, local), sz, z}];
    for (int i = 0; i < sz; ++i) local_of[verts[i]] = -1;
  }

  for (const auto& [key, mult] : groups) {
    CensusComponent cc;
    cc.key = std::get<0>(key);
    cc.vertex_count = std::get<1>(key);
    cc.z_T = std::get<2>(key);
    cc.multiplicity = mult;
    if (cc.z_T > 0) entropy.add(static_cast<double>(mult) * std::log(static_cast<double>(cc.z_T)));
    out.components.push_back(std::move(cc));
  }
  std::sort(out.components.begin(), out.components.end(), [](const CensusComponent& a, const CensusComponent& b) {
    return std::tie(a.vertex_count, a.key, a.z_T) < std::tie(b.vertex_count, b.key, b.z_T);
  });
  out.entropy_estimate = out.contradiction
                             ? -std::numeric_limits<long double>::infinity()
                             : static_cast<long double>(entropy.value());
  return out;
}

struct ClusterEntropyBounds {
  double upper = 0;  // per-vertex ln bound on the local cluster size
  double lower = 0;  // matching lower form, clamped at 0
  long s0 = 0, s1 = 0;
  long e2_prime = 0, e2_doubleprime = 0, e3_prime = 0;
  long f1 = 0, f2 = 0, f3 = 0, f_union = 0;
};

// Entropy bounds for the local cluster around sigma. The star structure of
// H_U gives |S0| free binary choices; bichromatic non-critical edges whose
// free part is exactly two untouched S0 vertices (and whose vertices outside
// U agree in color) each cost one bit, after thinning to a matching away from
// the exceptional set F = F1 ∪ F2 ∪ F3 of star components damaged by extra
// projections, by triple contacts, or by contacts beside the free pairs:
//   upper = (|S0| - |E2''|) ln2 / n
//   lower = (|S0| - |F| - |E2''|) ln2 / n, clamped at 0.
inline ClusterEntropyBounds cluster_entropy_bounds(const Hypergraph& h, const Coloring& sigma,
                                                   const WhiteningResult& w, const EdgeClassification& cls) {
  ClusterEntropyBounds out;
  out.s0 = static_cast<long>(w.S0.size());
  out.s1 = static_cast<long>(w.S1.size());
  if (h.n == 0) return out;

  std::vector<std::uint8_t> in_S0(h.n, 0), in_S1(h.n, 0);
  for (std::int32_t v : w.S0) in_S0[v] = 1;
  for (std::int32_t v : w.S1) in_S1[v] = 1;

  // Components of H_U, and star components of its star substructure.
  detail::UnionFind hu(h.n), stars(h.n);
  for (std::size_t i = 0; i < w.H_U.size(); ++i) {
    const auto& pe = w.H_U[i];
    for (std::size_t t = 1; t < pe.verts.size(); ++t) hu.unite(pe.verts[0], pe.verts[t]);
    if (w.star[i]) stars.unite(pe.verts[0], pe.verts[1]);
  }
  std::vector<std::uint8_t> comp_extra(h.n, 0), comp_e3(h.n, 0);
  for (std::size_t i = 0; i < w.H_U.size(); ++i)
    if (!w.star[i]) comp_extra[hu.find(w.H_U[i].verts[0])] = 1;

  std::vector<std::uint8_t> nS1(h.n, 0);
  for (const auto& pe : w.H_U) {
    bool touches = false;
    for (std::int32_t v : pe.verts) touches = touches || in_S1[v];
    if (!touches) continue;
    for (std::int32_t v : pe.verts)
      if (!in_S1[v]) nS1[v] = 1;
      else {
        // another S1 vertex in the same projection makes each the other's neighbor
        for (std::int32_t u : pe.verts)
          if (u != v && in_S1[u]) { nS1[v] = 1; break; }
      }
  }

  // One pass over the non-critical bichromatic portion.
  std::vector<long> e2_edges;
  std::vector<long> e2deg(h.n, 0);
  const long mm = h.m();
  for (long i = 0; i < mm; ++i) {
    if (cls.kind[i] != EdgeKind::bichromatic_other) continue;
    const std::int32_t* e = h.edge(i);
    int cnt_u = 0, cnt_free = 0, out0 = 0, out1 = 0;
    for (int t = 0; t < h.k; ++t) {
      const std::int32_t v = e[t];
      if (w.in_U[v]) {
        ++cnt_u;
        if (in_S0[v] && !nS1[v]) ++cnt_free;
      } else {
        (sigma[v] ? out1 : out0)++;
      }
    }
    if (out0 > 0 && out1 > 0) continue;  // vertices outside U disagree
    if (cnt_free == 2) {
      e2_edges.push_back(i);
      for (int t = 0; t < h.k; ++t)
        if (in_S0[e[t]]) ++e2deg[e[t]];
    }
    if (cnt_u >= 3) {
      ++out.e3_prime;
      for (int t = 0; t < h.k; ++t)
        if (w.in_U[e[t]]) comp_e3[hu.find(e[t])] = 1;
    }
  }
  out.e2_prime = static_cast<long>(e2_edges.size());

  std::vector<std::uint8_t> f1v(h.n, 0), f3v(h.n, 0);
  for (std::int32_t v : w.U) {
    const std::int32_t r = hu.find(v);
    f1v[v] = comp_extra[r];
    f3v[v] = comp_e3[r];
  }

  // Seeds beside the free pairs: projection neighbors of S1 and the non-S0
  // part of U (outside F1/F3, which already cover their components) that an
  // E2' edge touches, plus S0 vertices carrying two or more E2' edges.
  std::vector<std::uint8_t> seed(h.n, 0);
  for (long i : e2_edges) {
    const std::int32_t* e = h.edge(i);
    for (int t = 0; t < h.k; ++t) {
      const std::int32_t v = e[t];
      if (nS1[v] || (w.in_U[v] && !in_S0[v] && !f1v[v] && !f3v[v])) seed[v] = 1;
    }
  }
  for (int v = 0; v < h.n; ++v)
    if (in_S0[v] && e2deg[v] >= 2) seed[v] = 1;

  std::vector<std::uint8_t> seeded_comp(h.n, 0);
  for (int v = 0; v < h.n; ++v)
    if (seed[v]) seeded_comp[stars.find(v)] = 1;
  std::vector<std::uint8_t> f2v(h.n, 0);
  for (std::int32_t v : w.U)
    if (seed[v] || seeded_comp[stars.find(v)]) f2v[v] = 1;

  for (std::int32_t v : w.U) {
    out.f1 += f1v[v];
    out.f2 += f2v[v];
    out.f3 += f3v[v];
    out.f_union += (f1v[v] || f2v[v] || f3v[v]) ? 1 : 0;
  }

  for (long i : e2_edges) {
    const std::int32_t* e = h.edge(i);
    bool clean = true;
    for (int t = 0; t < h.k && clean; ++t) clean = !f2v[e[t]];
    out.e2_doubleprime += clean;
  }

  const double dn = static_cast<double>(h.n);
  out.upper = static_cast<double>(out.s0 - out.e2_doubleprime) * M_LN2 / dn;
  out.lower = std::max(0.0, static_cast<double>(out.s0 - out.f_union - out.e2_doubleprime) * M_LN2 / dn);
  return out;
}

inline ClusterEntropyBounds cluster_entropy_bounds(const Hypergraph& h, const Coloring& sigma) {
  const WhiteningResult w = whiten(h, sigma);
  const EdgeClassification cls = classify_edges(h, sigma);
  return cluster_entropy_bounds(h, sigma, w, cls);
}

struct ExpansionAudit {
  int size = 0;
  int samples = 0;
  int violating = 0;
  double pass_rate = 1;
};

// Diagnostic sparsity check: for random vertex sets S of the given sizes,
// the number of edges meeting S in >= 2 vertices should stay below 1.01|S|.
// Reported as a rate; costs one full edge scan per sample.
inline std::vector<ExpansionAudit> expansion_audit(const Hypergraph& h, const std::vector<int>& sizes,
                                                   int samples_per_size, std::uint64_t seed) {
  if (samples_per_size <= 0) throw parameter_error("expansion_audit: samples_per_size must be positive");
  Rng rng(seed);
  std::vector<ExpansionAudit> out;
  std::vector<std::uint8_t> in_S(h.n, 0);
  std::vector<std::int32_t> pool(h.n);
  for (int v = 0; v < h.n; ++v) pool[v] = v;
  const long mm = h.m();
  for (int s : sizes) {
    if (s < 0 || s > h.n) throw parameter_error("expansion_audit: size out of range");
    ExpansionAudit a;
    a.size = s;
    a.samples = samples_per_size;
    for (int rep = 0; rep < samples_per_size; ++rep) {
      for (int i = 0; i < s; ++i) {
        const long j = i + static_cast<long>(rng.below(static_cast<std::uint64_t>(h.n - i)));
        std::swap(pool[i], pool[j]);
        in_S[pool[i]] = 1;
      }
      long heavy = 0;
      for (long e = 0; e < mm; ++e) {
        int c = 0;
        const std::int32_t* ev = h.edge(e);
        for (int t = 0; t < h.k && c < 2; ++t) c += in_S[ev[t]];
        heavy += c >= 2;
      }
      if (static_cast<double>(heavy) > 1.01 * s) ++a.violating;
      for (int i = 0; i < s; ++i) in_S[pool[i]] = 0;
    }
    a.pass_rate = 1.0 - static_cast<double>(a.violating) / samples_per_size;
    out.push_back(a);
  }
  return out;
}

}  // namespace condlab
