#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qk/errors.hpp"
#include "qk/vertex_set.hpp"

namespace qk {

struct Arc {
  Vertex tail;
  Vertex head;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Loop-free digraph on vertices 0..n-1. Digons are allowed, parallel arcs
/// are not. Immutable once built; adjacency lists are kept sorted.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : out_(n), in_(n), out_set_(n, VertexSet(n)), in_set_(n, VertexSet(n)) {}

  Digraph(std::size_t n, std::span<const Arc> arcs) : Digraph(n) {
    for (const Arc& a : arcs) {
      if (a.tail >= n || a.head >= n)
        throw invalid_input("arc " + std::to_string(a.tail) + "->" + std::to_string(a.head) +
                            " has an endpoint outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
      if (a.tail == a.head) throw invalid_input("self-loop at vertex " + std::to_string(a.tail));
      if (out_set_[a.tail].contains(a.head))
        throw invalid_input("duplicate arc " + std::to_string(a.tail) + "->" + std::to_string(a.head));
      out_set_[a.tail].insert(a.head);
      in_set_[a.head].insert(a.tail);
    }
    for (std::size_t v = 0; v < n; ++v) {
      out_[v] = out_set_[v].members();
      in_[v] = in_set_[v].members();
    }
    arc_count_ = arcs.size();
  }
  Digraph(std::size_t n, std::initializer_list<Arc> arcs) : Digraph(n, std::span<const Arc>(arcs.begin(), arcs.size())) {}
  Digraph(std::size_t n, const std::vector<Arc>& arcs) : Digraph(n, std::span<const Arc>(arcs)) {}

  std::size_t order() const noexcept { return out_.size(); }
  std::size_t arc_count() const noexcept { return arc_count_; }

  const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }
  const VertexSet& out_set(Vertex v) const { return out_set_[v]; }
  const VertexSet& in_set(Vertex v) const { return in_set_[v]; }
  std::size_t out_degree(Vertex v) const { return out_[v].size(); }
  std::size_t in_degree(Vertex v) const { return in_[v].size(); }

  bool has_arc(Vertex u, Vertex v) const { return u < order() && out_set_[u].contains(v); }
  bool adjacent(Vertex u, Vertex v) const { return has_arc(u, v) || has_arc(v, u); }

  /// Arcs sorted by (tail, head).
  std::vector<Arc> arcs() const {
    std::vector<Arc> result;
    result.reserve(arc_count_);
    for (Vertex u = 0; u < order(); ++u)
      for (Vertex v : out_[u]) result.push_back({u, v});
    return result;
  }

  VertexSet vertices() const { return VertexSet::full(order()); }
  VertexSet empty_set() const { return VertexSet(order()); }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.order() == b.order() && a.out_ == b.out_;
  }

 private:
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  std::vector<VertexSet> out_set_;
  std::vector<VertexSet> in_set_;
  std::size_t arc_count_ = 0;
};

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

inline void require_subset(const Digraph& d, const VertexSet& s) {
  if (s.universe() != d.order())
    throw invalid_input("vertex set over " + std::to_string(s.universe()) + " vertices used with a digraph of order " +
                        std::to_string(d.order()));
}

/// N^-(S): vertices outside S with an arc into S.
inline VertexSet in_neighborhood(const Digraph& d, const VertexSet& s) {
  require_subset(d, s);
  VertexSet result(d.order());
  for (Vertex v : s) result |= d.in_set(v);
  return result -= s;
}

/// N^-[S] = N^-(S) ∪ S.
inline VertexSet closed_in_neighborhood(const Digraph& d, const VertexSet& s) {
  return in_neighborhood(d, s) |= s;
}

/// N^--(S) = N^-(N^-[S]): vertices at in-distance exactly two from S.
inline VertexSet second_in_neighborhood(const Digraph& d, const VertexSet& s) {
  return in_neighborhood(d, closed_in_neighborhood(d, s));
}

/// N^+(S) \ S.
inline VertexSet out_neighborhood(const Digraph& d, const VertexSet& s) {
  require_subset(d, s);
  VertexSet result(d.order());
  for (Vertex v : s) result |= d.out_set(v);
  return result -= s;
}

/// Q, N^-(Q), N^--(Q) and the vertices further away. A certificate for the
/// quasi-kernel property: q is one iff it is independent and far is empty.
struct NeighborhoodPartition {
  VertexSet q;
  VertexSet dist1;
  VertexSet dist2;
  VertexSet far;
};

inline NeighborhoodPartition distance_partition(const Digraph& d, const VertexSet& q) {
  NeighborhoodPartition p;
  p.q = q;
  p.dist1 = in_neighborhood(d, q);
  VertexSet within1 = p.dist1 | q;
  p.dist2 = in_neighborhood(d, within1);
  p.far = (within1 | p.dist2).complement();
  return p;
}

inline bool is_independent(const Digraph& d, const VertexSet& s) {
  require_subset(d, s);
  for (Vertex v : s)
    if (d.out_set(v).intersects(s)) return false;
  return true;
}

inline VertexSet sinks(const Digraph& d) {
  VertexSet result(d.order());
  for (Vertex v = 0; v < d.order(); ++v)
    if (d.out_degree(v) == 0) result.insert(v);
  return result;
}

inline VertexSet sources(const Digraph& d) {
  VertexSet result(d.order());
  for (Vertex v = 0; v < d.order(); ++v)
    if (d.in_degree(v) == 0) result.insert(v);
  return result;
}

inline bool is_sink_free(const Digraph& d) {
  for (Vertex v = 0; v < d.order(); ++v)
    if (d.out_degree(v) == 0) return false;
  return true;
}

/// D[S] together with the vertex maps in both directions. Vertices keep
/// their relative order.
struct InducedSubdigraph {
  Digraph graph;
  std::vector<Vertex> to_parent;    // new id -> old id
  std::vector<Vertex> from_parent;  // old id -> new id, kNoVertex if dropped

  VertexSet lift(const VertexSet& sub) const {
    VertexSet result(from_parent.size());
    for (Vertex v : sub) result.insert(to_parent[v]);
    return result;
  }
  /// Members of a parent-side set that survive in the subdigraph.
  VertexSet restrict(const VertexSet& parent) const {
    VertexSet result(to_parent.size());
    for (Vertex v : parent)
      if (from_parent[v] != kNoVertex) result.insert(from_parent[v]);
    return result;
  }
};

inline InducedSubdigraph induced(const Digraph& d, const VertexSet& s) {
  require_subset(d, s);
  InducedSubdigraph sub;
  sub.from_parent.assign(d.order(), kNoVertex);
  for (Vertex v : s) {
    sub.from_parent[v] = static_cast<Vertex>(sub.to_parent.size());
    sub.to_parent.push_back(v);
  }
  std::vector<Arc> arcs;
  for (Vertex v : s)
    for (Vertex w : d.out(v))
      if (s.contains(w)) arcs.push_back({sub.from_parent[v], sub.from_parent[w]});
  sub.graph = Digraph(sub.to_parent.size(), arcs);
  return sub;
}

/// D - S.
inline InducedSubdigraph delete_vertices(const Digraph& d, const VertexSet& s) {
  require_subset(d, s);
  return induced(d, s.complement());
}

/// T[D_1, ..., D_t]: vertex i of `outer` is replaced by `parts[i]`, and every
/// arc i->j of `outer` becomes all arcs from block i to block j.
struct CompositionSpec {
  Digraph outer;
  std::vector<Digraph> parts;
};

struct Composition {
  Digraph graph;
  std::vector<Vertex> block_start;  // size t+1; block i is [block_start[i], block_start[i+1])
  std::vector<Vertex> block_of;     // vertex -> block index

  VertexSet block(Vertex i) const {
    VertexSet s(graph.order());
    for (Vertex v = block_start[i]; v < block_start[i + 1]; ++v) s.insert(v);
    return s;
  }
};

inline Composition compose(const CompositionSpec& spec) {
  const std::size_t t = spec.outer.order();
  if (t == 0) throw invalid_input("composition needs an outer digraph with at least one vertex");
  if (spec.parts.size() != t)
    throw invalid_input("composition needs " + std::to_string(t) + " parts, got " + std::to_string(spec.parts.size()));
  Composition c;
  c.block_start.push_back(0);
  for (Vertex i = 0; i < t; ++i) {
    c.block_start.push_back(c.block_start.back() + static_cast<Vertex>(spec.parts[i].order()));
    c.block_of.insert(c.block_of.end(), spec.parts[i].order(), i);
  }
  std::vector<Arc> arcs;
  for (Vertex i = 0; i < t; ++i) {
    const Vertex base = c.block_start[i];
    for (const Arc& a : spec.parts[i].arcs()) arcs.push_back({base + a.tail, base + a.head});
    for (Vertex j : spec.outer.out(i))
      for (Vertex u = c.block_start[i]; u < c.block_start[i + 1]; ++u)
        for (Vertex w = c.block_start[j]; w < c.block_start[j + 1]; ++w) arcs.push_back({u, w});
  }
  std::sort(arcs.begin(), arcs.end());
  c.graph = Digraph(c.block_start.back(), arcs);
  return c;
}

}  // namespace qk
