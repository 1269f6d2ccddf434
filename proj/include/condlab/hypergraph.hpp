#pragma once

// k-uniform hypergraphs on vertex set {0..n-1} with 2-colorings.
//
// Storage is one flat int32 array with stride k; every edge holds strictly
// increasing vertex ids and edges sit in lexicographic order once
// canonicalize() has run. An edge is monochromatic under a coloring when all
// its vertices share one color; it is critical when exactly one vertex \"supports\"
// it, i.e. carries the minority color alone.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "condlab/common.hpp"

namespace condlab {

using Coloring = std::vector<std::uint8_t>;

struct Hypergraph {
  int n = 0;
  int k = 0;
  std::vector<std::int32_t> flat;  // m*k vertex ids

  long m() const { return k == 0 ? 0 : static_cast<long>(flat.size()) / k; }
  const std::int32_t* edge(long i) const { return flat.data() + static_cast<std::size_t>(i) * k; }

  // Sorts edges into lexicographic order and verifies the invariants:
  // strictly increasing vertices inside each edge, ids in range, no duplicate
  // edges. Duplicates surface as adjacent equal blocks after the sort.
  void canonicalize() {
    const long mm = m();
    for (long i = 0; i < mm; ++i) {
      const std::int32_t* e = edge(i);
      if (e[0] < 0 || e[k - 1] >= n) throw parameter_error("Hypergraph: vertex id out of range");
      for (int j = 1; j < k; ++j)
        if (e[j] <= e[j - 1]) throw parameter_error("Hypergraph: edge vertices must be strictly increasing");
    }
    std::vector<long> order(mm);
    for (long i = 0; i < mm; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](long a, long b) {
      const std::int32_t* ea = edge(a);
      const std::int32_t* eb = edge(b);
      return std::lexicographical_compare(ea, ea + k, eb, eb + k);
    });
    std::vector<std::int32_t> out;
    out.reserve(flat.size());
    for (long i = 0; i < mm; ++i) {
      const std::int32_t* e = edge(order[i]);
      out.insert(out.end(), e, e + k);
    }
    flat.swap(out);
    for (long i = 1; i < mm; ++i)
      if (std::equal(edge(i - 1), edge(i - 1) + k, edge(i))) throw parameter_error("Hypergraph: duplicate edge");
  }
};

inline bool is_equitable(const Coloring& sigma) {
  long ones = 0;
  for (auto c : sigma) ones += c;
  return 2 * ones == static_cast<long>(sigma.size());
}

// The canonical equitable coloring: first half color 0, second half color 1.
inline Coloring canonical_equitable(long n) {
  if (n <= 0 || n % 2 != 0) throw parameter_error("canonical_equitable: n must be positive and even");
  Coloring sigma(n, 0);
  for (long v = n / 2; v < n; ++v) sigma[v] = 1;
  return sigma;
}

inline long hamming(const Coloring& a, const Coloring& b) {
  if (a.size() != b.size()) throw parameter_error("hamming: colorings differ in length");
  long d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

enum class EdgeKind : std::uint8_t { monochromatic, critical, bichromatic_other };

struct EdgeClassification {
  std::vector<EdgeKind> kind;       // per edge
  std::vector<std::int32_t> support;  // supporting vertex of a critical edge, else -1
  std::vector<std::int32_t> s;        // per vertex: number of edges it supports
  long m_mono = 0, m_critical = 0, m_other = 0;
};

inline EdgeClassification classify_edges(const Hypergraph& h, const Coloring& sigma) {
  if (static_cast<long>(sigma.size()) != h.n) throw parameter_error("classify_edges: coloring length != n");
  const long mm = h.m();
  EdgeClassification out;
  out.kind.resize(mm);
  out.support.assign(mm, -1);
  out.s.assign(h.n, 0);
  for (long i = 0; i < mm; ++i) {
    const std::int32_t* e = h.edge(i);
    int ones = 0;
    for (int j = 0; j < h.k; ++j) ones += sigma[e[j]];
    if (ones == 0 || ones == h.k) {
      out.kind[i] = EdgeKind::monochromatic;
      ++out.m_mono;
    } else if (ones == 1 || ones == h.k - 1) {
      out.kind[i] = EdgeKind::critical;
      ++out.m_critical;
      const std::uint8_t minority = ones == 1 ? 1 : 0;
      for (int j = 0; j < h.k; ++j) {
        if (sigma[e[j]] == minority) {
          out.support[i] = e[j];
          ++out.s[e[j]];
          break;
        }
      }
    } else {
      out.kind[i] = EdgeKind::bichromatic_other;
      ++out.m_other;
    }
  }
  return out;
}

inline long violations(const Hypergraph& h, const Coloring& sigma) {
  if (static_cast<long>(sigma.size()) != h.n) throw parameter_error("violations: coloring length != n");
  long bad = 0;
  const long mm = h.m();
  for (long i = 0; i < mm; ++i) {
    const std::int32_t* e = h.edge(i);
    int ones = 0;
    for (int j = 0; j < h.k; ++j) ones += sigma[e[j]];
    bad += (ones == 0 || ones == h.k);
  }
  return bad;
}

// Membership set for edges-as-sorted-tuples. Exact bitmask keys up to n = 64;
// beyond that a 2x64-bit mix of the tuple stands in (collision probability
// ~2^-128 per pair, i.e. none at any reachable scale).
class EdgeKeySet {
 public:
  explicit EdgeKeySet(int n) : small_(n <= 64) {}

  bool insert(const std::int32_t* e, int k) {
    if (small_) {
      std::uint64_t mask = 0;
      for (int j = 0; j < k; ++j) mask |= std::uint64_t{1} << e[j];
      return set_.insert(Key{mask, 0}).second;
    }
    std::uint64_t a = 0x243F6A8885A308D3ull, b = 0x13198A2E03707344ull;
    for (int j = 0; j < k; ++j) {
      a = mix64(a ^ static_cast<std::uint64_t>(e[j] + 1));
      b = mix64(b + static_cast<std::uint64_t>(e[j] + 1));
    }
    return set_.insert(Key{a, b}).second;
  }

 private:
  struct Key {
    std::uint64_t a, b;
    bool operator==(const Key& o) const { return a == o.a && b == o.b; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& x) const { return x.a ^ (x.b * 0x9E3779B97F4A7C15ull); }
  };
  bool small_;
  std::unordered_set<Key, KeyHash> set_;
};

// Text format: a header line "n k m", then one edge per line as space-
// separated increasing vertex ids. Lines starting with '#' are comments.
inline void write_hypergraph(std::ostream& os, const Hypergraph& h) {
  os << h.n << ' ' << h.k << ' ' << h.m() << '\n';
  const long mm = h.m();
  for (long i = 0; i < mm; ++i) {
    const std::int32_t* e = h.edge(i);
    for (int j = 0; j < h.k; ++j) {
      if (j) os << ' ';
      os << e[j];
    }
    os << '\n';
  }
}

inline Hypergraph read_hypergraph(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] == '#') continue;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw parameter_error("read_hypergraph: missing header line");
  Hypergraph h;
  long m = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> h.n >> h.k >> m)) throw parameter_error("read_hypergraph: malformed header (want: n k m)");
  }
  if (h.n <= 0 || h.k < 2 || h.k > h.n || m < 0) throw parameter_error("read_hypergraph: invalid header values");
  h.flat.reserve(static_cast<std::size_t>(m) * h.k);
  for (long i = 0; i < m; ++i) {
    if (!next_line()) throw parameter_error("read_hypergraph: fewer edges than header announces");
    std::istringstream ss(line);
    for (int j = 0; j < h.k; ++j) {
      std::int32_t v;
      if (!(ss >> v)) throw parameter_error("read_hypergraph: short edge line");
      h.flat.push_back(v);
    }
    std::int32_t extra;
    if (ss >> extra) throw parameter_error("read_hypergraph: edge line longer than k");
  }
  h.canonicalize();  // validates ranges, ordering, distinctness
  return h;
}

// A coloring serializes as one line of '0'/'1' characters, vertex 0 first.
inline void write_coloring(std::ostream& os, const Coloring& sigma) {
  for (auto c : sigma) os << (c ? '1' : '0');
  os << '\n';
}

inline Coloring read_coloring(std::istream& is, long n) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (static_cast<long>(line.size()) != n) throw parameter_error("read_coloring: length != n");
    Coloring sigma(n);
    for (long i = 0; i < n; ++i) {
      if (line[i] != '0' && line[i] != '1') throw parameter_error("read_coloring: characters must be 0/1");
      sigma[i] = line[i] == '1';
    }
    return sigma;
  }
  throw parameter_error("read_coloring: no coloring line found");
}

}  // namespace condlab
