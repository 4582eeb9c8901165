#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qk/digraph.hpp"
#include "qk/errors.hpp"
#include "qk/recognition.hpp"

namespace qk {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for instance `index` of a run seeded with `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ splitmix64(index + 0x51ed2701ULL)));
}

namespace detail {

// The standard distributions are not specified bit-for-bit; these are, so
// instances are reproducible across standard libraries.
inline double unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline bool coin(Rng& rng, double p) { return unit(rng) < p; }
inline std::uint64_t below(Rng& rng, std::uint64_t bound) { return rng() % bound; }

inline void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_input("arc probability must lie in [0, 1]");
}

}  // namespace detail

/// Each ordered pair (u, v), u != v, becomes an arc with probability p.
inline Digraph random_digraph(std::size_t n, double p, Rng& rng) {
  detail::require_probability(p);
  std::vector<Arc> arcs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && detail::coin(rng, p)) arcs.push_back({u, v});
  return Digraph(n, arcs);
}

/// random_digraph, then every sink gets one arc to a uniformly chosen vertex.
inline Digraph random_sink_free_digraph(std::size_t n, double p, Rng& rng) {
  if (n < 2) throw invalid_input("a sink-free digraph needs at least two vertices");
  std::vector<Arc> arcs = random_digraph(n, p, rng).arcs();
  std::vector<bool> has_out(n, false);
  for (const Arc& a : arcs) has_out[a.tail] = true;
  for (Vertex v = 0; v < n; ++v)
    if (!has_out[v]) {
      Vertex w = static_cast<Vertex>(detail::below(rng, n - 1));
      if (w >= v) ++w;
      arcs.push_back({v, w});
    }
  std::sort(arcs.begin(), arcs.end());
  return Digraph(n, arcs);
}

/// One uniformly oriented arc per pair.
inline Digraph random_tournament(std::size_t n, Rng& rng) {
  std::vector<Arc> arcs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) arcs.push_back(detail::coin(rng, 0.5) ? Arc{u, v} : Arc{v, u});
  return Digraph(n, arcs);
}

/// Each pair gets u->v, v->u or a digon with equal probability.
inline Digraph random_semicomplete(std::size_t n, Rng& rng) {
  std::vector<Arc> arcs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const auto pick = detail::below(rng, 3);
      if (pick != 1) arcs.push_back({u, v});
      if (pick != 0) arcs.push_back({v, u});
    }
  return Digraph(n, arcs);
}

/// Sink-free one-way split digraph: X = 0..nx-1, Y = nx..nx+ny-1. Y is a
/// random semicomplete digraph redrawn until sink-free; each arc x->y is
/// present with probability p, and each x's arcs are redrawn until non-empty.
inline Digraph random_split(std::size_t nx, std::size_t ny, double p, Rng& rng) {
  detail::require_probability(p);
  if (ny < 2) throw invalid_input("a sink-free split digraph needs |Y| >= 2");
  if (nx > 0 && p == 0.0) throw invalid_input("vertices of X need arcs: p must be positive");
  Digraph y_part;
  do {
    y_part = random_semicomplete(ny, rng);
  } while (!is_sink_free(y_part));
  std::vector<Arc> arcs;
  for (Vertex x = 0; x < nx; ++x) {
    std::vector<Arc> mine;
    while (mine.empty())
      for (Vertex y = 0; y < ny; ++y)
        if (detail::coin(rng, p)) mine.push_back({x, static_cast<Vertex>(nx + y)});
    arcs.insert(arcs.end(), mine.begin(), mine.end());
  }
  for (const Arc& a : y_part.arcs()) arcs.push_back({static_cast<Vertex>(nx + a.tail), static_cast<Vertex>(nx + a.head)});
  return Digraph(nx + ny, arcs);
}

/// Sink-free digraph with every in-degree at most 3: each vertex first gets
/// one out-arc to a vertex with spare in-degree, then every remaining
/// ordered pair is added with probability p while capacity allows.
inline Digraph random_indegree3(std::size_t n, double p, Rng& rng) {
  detail::require_probability(p);
  if (n < 2) throw invalid_input("a sink-free digraph needs at least two vertices");
  std::vector<std::size_t> indeg(n, 0);
  std::vector<Arc> arcs;
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  for (Vertex v = 0; v < n; ++v) {
    std::vector<Vertex> open;
    for (Vertex w = 0; w < n; ++w)
      if (w != v && indeg[w] < 3) open.push_back(w);
    const Vertex w = open[detail::below(rng, open.size())];
    arcs.push_back({v, w});
    present[v][w] = true;
    ++indeg[w];
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && !present[u][v] && indeg[v] < 3 && detail::coin(rng, p)) {
        arcs.push_back({u, v});
        present[u][v] = true;
        ++indeg[v];
      }
  std::sort(arcs.begin(), arcs.end());
  return Digraph(n, arcs);
}

struct PartitionedDigraph {
  Digraph graph;
  VertexSet v1;
  VertexSet v2;
};

/// Random bipartition V1/V2 with both parts acyclic: inside a part, arcs
/// follow a random linear order; across parts any orientation is allowed.
inline PartitionedDigraph random_dag_partitioned(std::size_t n, double p, Rng& rng) {
  detail::require_probability(p);
  std::vector<Vertex> rank(n);
  std::iota(rank.begin(), rank.end(), Vertex{0});
  for (std::size_t i = n; i > 1; --i) std::swap(rank[i - 1], rank[detail::below(rng, i)]);
  PartitionedDigraph out{Digraph(), VertexSet(n), VertexSet(n)};
  for (Vertex v = 0; v < n; ++v) (detail::coin(rng, 0.5) ? out.v1 : out.v2).insert(v);
  std::vector<Arc> arcs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool same = out.v1.contains(u) == out.v1.contains(v);
      if (same && rank[u] > rank[v]) continue;
      if (detail::coin(rng, p)) arcs.push_back({u, v});
    }
  out.graph = Digraph(n, arcs);
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of labeled loop-free digraphs.

inline constexpr std::size_t kMaxEnumerationOrder = 5;

/// 4^(n(n-1)/2): each unordered pair is absent, forward, backward or a digon.
inline std::uint64_t enumeration_count(std::size_t n) {
  if (n > kMaxEnumerationOrder) throw resource_error("exhaustive enumeration is limited to n <= 5");
  return std::uint64_t{1} << (n * (n - 1));
}

/// Digraph number `index` in enumeration order: pairs (i, j), i < j, in
/// lexicographic order, pair t taking base-4 digit t (least significant
/// first); digit bit 0 = arc i->j, bit 1 = arc j->i.
inline std::vector<Arc> enumeration_arcs(std::size_t n, std::uint64_t index) {
  std::vector<Arc> arcs;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      const auto digit = index & 3U;
      index >>= 2;
      if (digit & 1U) arcs.push_back({i, j});
      if (digit & 2U) arcs.push_back({j, i});
    }
  return arcs;
}

inline bool arcs_sink_free(std::size_t n, const std::vector<Arc>& arcs) {
  std::uint32_t has_out = 0;
  for (const Arc& a : arcs) has_out |= 1U << a.tail;
  return has_out == (n >= 32 ? ~0U : (1U << n) - 1);
}

inline Digraph digraph_from_index(std::size_t n, std::uint64_t index) {
  if (index >= enumeration_count(n)) throw invalid_input("enumeration index out of range");
  std::vector<Arc> arcs = enumeration_arcs(n, index);
  std::sort(arcs.begin(), arcs.end());
  return Digraph(n, arcs);
}

/// Calls visit(digraph, index) for every labeled loop-free digraph on n
/// vertices in [begin, end) of enumeration order, optionally skipping those
/// with a sink before a Digraph is built.
template <class Visitor>
void enumerate_digraphs(std::size_t n, bool sink_free_only, Visitor&& visit, std::uint64_t begin = 0,
                        std::uint64_t end = ~std::uint64_t{0}) {
  const std::uint64_t count = enumeration_count(n);
  end = std::min(end, count);
  for (std::uint64_t index = begin; index < end; ++index) {
    std::vector<Arc> arcs = enumeration_arcs(n, index);
    if (sink_free_only && !arcs_sink_free(n, arcs)) continue;
    std::sort(arcs.begin(), arcs.end());
    visit(Digraph(n, arcs), index);
  }
}

}  // namespace qk
