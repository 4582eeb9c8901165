#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qk/digraph.hpp"
#include "qk/errors.hpp"
#include "qk/quasi_kernel.hpp"
#include "qk/recognition.hpp"

namespace qk {

/// Upper bound (n + 3)/2 - sqrt(n) on the smallest quasi-kernel of a
/// sink-free one-way split digraph of order n >= 3.
inline double split_bound(std::size_t n) { return (static_cast<double>(n) + 3.0) / 2.0 - std::sqrt(static_cast<double>(n)); }

inline constexpr double kSplitBoundSlack = 1e-9;

/// Picks v(x) among the out-neighbours of x (never empty).
using OutNeighbourChooser = std::function<Vertex(Vertex x, std::span<const Vertex> out)>;

inline Vertex lowest_out_neighbour(Vertex, std::span<const Vertex> out) { return out.front(); }

/// The auxiliary semicomplete digraph on X: x1 -> x2 whenever v(x1) = v(x2)
/// or v(x1) -> v(x2) in D. Vertex i of `h` is x_vertices[i].
struct AuxDigraphH {
  std::vector<Vertex> x_vertices;
  std::vector<Vertex> vmap;                 // i -> v(x_vertices[i])
  std::vector<std::vector<Vertex>> r;       // y -> R(y) as D ids, indexed by D vertex
  Digraph h;
};

inline void require_split_partition(const Digraph& d, const OneWaySplitPartition& part) {
  if (!is_one_way_split_partition(d, part)) throw invalid_input("not a one-way split partition of this digraph");
}

inline AuxDigraphH build_aux(const Digraph& d, const OneWaySplitPartition& part,
                             const OutNeighbourChooser& choose = lowest_out_neighbour) {
  require_split_partition(d, part);
  AuxDigraphH aux;
  aux.x_vertices = part.x.members();
  aux.r.assign(d.order(), {});
  for (Vertex x : aux.x_vertices) {
    if (d.out_degree(x) == 0) throw invalid_input("vertex " + std::to_string(x) + " of X is a sink");
    const Vertex v = choose(x, d.out(x));
    if (!d.has_arc(x, v)) throw invalid_input("v(x) must be an out-neighbour of x");
    aux.vmap.push_back(v);
    aux.r[v].push_back(x);
  }
  std::vector<Arc> arcs;
  const std::size_t m = aux.x_vertices.size();
  for (Vertex i = 0; i < m; ++i)
    for (Vertex j = 0; j < m; ++j)
      if (i != j && (aux.vmap[i] == aux.vmap[j] || d.has_arc(aux.vmap[i], aux.vmap[j]))) arcs.push_back({i, j});
  aux.h = Digraph(m, arcs);
  if (!is_semicomplete(aux.h)) throw invariant_error("auxiliary digraph is not semicomplete");
  return aux;
}

namespace detail {

inline VertexSet within_two(const Digraph& d, Vertex y) {
  const VertexSet single(d.order(), {y});
  return closed_in_neighborhood(d, single) | second_in_neighborhood(d, single);
}

inline VertexSet closed_in_y(const Digraph& d, const VertexSet& y_part, Vertex y) {
  VertexSet s = d.in_set(y) & y_part;
  s.insert(y);
  return s;
}

}  // namespace detail

/// Quasi-kernel {y} ∪ (X vertices at in-distance >= 3 from y) with y chosen
/// through the auxiliary digraph. For n >= 3 its size is at most
/// (n + 3)/2 - sqrt(n).
inline VertexSet split_small_qk(const Digraph& d, const OneWaySplitPartition& part,
                                const OutNeighbourChooser& choose = lowest_out_neighbour) {
  require_split_partition(d, part);
  if (d.order() == 0) throw invalid_input("split_small_qk needs at least one vertex");
  if (!is_sink_free(d)) throw invalid_input("split_small_qk needs a sink-free digraph");

  VertexSet q = d.empty_set();
  if (part.x.empty()) {
    const auto y_sub = induced(d, part.y);
    q.insert(y_sub.to_parent[semicomplete_singleton_qk(y_sub.graph)]);
  } else {
    const AuxDigraphH aux = build_aux(d, part, choose);
    Vertex best = 0;
    for (Vertex i = 1; i < aux.h.order(); ++i)
      if (aux.h.in_degree(i) > aux.h.in_degree(best)) best = i;
    const VertexSet base = detail::closed_in_y(d, part.y, aux.vmap[best]);

    // Largest closed in-neighbourhood inside Y containing that of v(x*).
    Vertex y = kNoVertex;
    std::size_t y_size = 0;
    for (Vertex c : part.y) {
      const VertexSet cl = detail::closed_in_y(d, part.y, c);
      if (base.is_subset_of(cl) && (y == kNoVertex || cl.size() > y_size)) {
        y = c;
        y_size = cl.size();
      }
    }
    // Make it inclusion-maximal among all of Y.
    for (bool grew = true; grew;) {
      grew = false;
      const VertexSet cur = detail::closed_in_y(d, part.y, y);
      for (Vertex c : part.y) {
        const VertexSet cl = detail::closed_in_y(d, part.y, c);
        if (cur.is_subset_of(cl) && !(cur == cl)) {
          y = c;
          grew = true;
          break;
        }
      }
    }
    q = part.x - detail::within_two(d, y);
    q.insert(y);
  }

  if (!is_quasi_kernel(d, q)) throw invariant_error("split construction produced non-quasi-kernel " + q.to_string());
  if (d.order() >= 3 && static_cast<double>(q.size()) > split_bound(d.order()) + kSplitBoundSlack)
    throw invariant_error("split construction exceeded (n+3)/2 - sqrt(n): " + q.to_string());
  return q;
}

/// Exact minimum quasi-kernel of a sink-free one-way split digraph in
/// polynomial time: every quasi-kernel is one vertex y of Y (which all of Y
/// must reach within two arcs) plus the X vertices at in-distance >= 3 from y.
inline MinQuasiKernel split_min_qk_exact(const Digraph& d, const OneWaySplitPartition& part) {
  require_split_partition(d, part);
  if (!is_sink_free(d)) throw invalid_input("split_min_qk_exact needs a sink-free digraph");
  if (d.order() == 0) return {0, d.empty_set()};
  std::optional<VertexSet> best;
  for (Vertex y : part.y) {
    const VertexSet ball = detail::within_two(d, y);
    if (!part.y.is_subset_of(ball)) continue;
    VertexSet cand = part.x - ball;
    cand.insert(y);
    if (!best || cand.size() < best->size()) best = cand;
  }
  if (!best) throw invariant_error("no vertex of Y is reached by all of Y within two arcs");
  return {best->size(), *best};
}

// ---------------------------------------------------------------------------
// Constructions

/// Regular tournament on 2k+1 vertices: i -> i+j (mod 2k+1) for j = 1..k.
inline Digraph construct_circulant_tournament(std::size_t k) {
  if (k < 1) throw invalid_input("circulant tournament needs k >= 1");
  const std::size_t t = 2 * k + 1;
  std::vector<Arc> arcs;
  for (Vertex i = 0; i < t; ++i)
    for (std::size_t j = 1; j <= k; ++j) arcs.push_back({i, static_cast<Vertex>((i + j) % t)});
  return Digraph(t, arcs);
}

/// The k-regular tournament on 0..2k with 2k pendant in-neighbours per
/// tournament vertex; order (2k+1)^2. Pendants of vertex v are
/// 2k+1 + 2k*v, ..., 2k+1 + 2k*v + 2k-1.
inline Digraph construct_d_k(std::size_t k) {
  if (k < 1) throw invalid_input("D_k needs k >= 1");
  const std::size_t t = 2 * k + 1;
  std::vector<Arc> arcs = construct_circulant_tournament(k).arcs();
  for (Vertex v = 0; v < t; ++v)
    for (std::size_t p = 0; p < 2 * k; ++p) arcs.push_back({static_cast<Vertex>(t + 2 * k * v + p), v});
  return Digraph(t * t, arcs);
}

/// Two directed triangles 1->2->3->1 and 4->5->6->4 joined by 3->5, 6->2,
/// 2->5; vertex i is stored as i-1. Kernel-free, with good quasi-kernel {3,6}.
inline Digraph construct_dstar() {
  return Digraph(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {2, 4}, {5, 1}, {1, 4}});
}

inline std::vector<std::string> dstar_labels() { return {"1", "2", "3", "4", "5", "6"}; }

}  // namespace qk
