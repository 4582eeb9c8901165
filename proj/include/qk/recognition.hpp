#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "qk/digraph.hpp"
#include "qk/errors.hpp"

namespace qk {

inline bool is_semicomplete(const Digraph& d) {
  for (Vertex u = 0; u < d.order(); ++u)
    for (Vertex v = u + 1; v < d.order(); ++v)
      if (!d.adjacent(u, v)) return false;
  return true;
}

inline bool is_tournament(const Digraph& d) {
  for (Vertex u = 0; u < d.order(); ++u)
    for (Vertex v = u + 1; v < d.order(); ++v)
      if (d.has_arc(u, v) == d.has_arc(v, u)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Forbidden induced patterns: a center with 3 or 4 in-neighbours ("tails")
// that it does not point back to.
//
//   anti_claw  3 tails, no arcs among them
//   k41        4 tails, no arcs among them
//   k41_plus   4 tails, exactly one arc among them

enum class ForbiddenKind { anti_claw, k41, k41_plus };

inline std::string_view to_string(ForbiddenKind kind) {
  switch (kind) {
    case ForbiddenKind::anti_claw: return "anti_claw";
    case ForbiddenKind::k41: return "k41";
    case ForbiddenKind::k41_plus: return "k41_plus";
  }
  return "?";
}

struct ForbiddenWitness {
  ForbiddenKind kind;
  Vertex center;
  std::vector<Vertex> tails;
  std::optional<Arc> extra_arc;  // k41_plus only

  friend bool operator==(const ForbiddenWitness&, const ForbiddenWitness&) = default;
};

inline std::size_t tail_count(ForbiddenKind kind) { return kind == ForbiddenKind::anti_claw ? 3 : 4; }

namespace detail {

inline std::size_t arcs_among(const Digraph& d, std::span<const Vertex> vs, std::optional<Arc>* last = nullptr) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (i != j && d.has_arc(vs[i], vs[j])) {
        ++count;
        if (last) *last = Arc{vs[i], vs[j]};
      }
  return count;
}

}  // namespace detail

inline bool verify_witness(const Digraph& d, const ForbiddenWitness& w) {
  const std::size_t n = d.order();
  if (w.tails.size() != tail_count(w.kind) || w.center >= n) return false;
  if (w.kind != ForbiddenKind::k41_plus && w.extra_arc) return false;
  for (std::size_t i = 0; i < w.tails.size(); ++i) {
    const Vertex t = w.tails[i];
    if (t >= n || t == w.center) return false;
    for (std::size_t j = i + 1; j < w.tails.size(); ++j)
      if (w.tails[j] == t) return false;
    if (!d.has_arc(t, w.center) || d.has_arc(w.center, t)) return false;
  }
  std::optional<Arc> found;
  const std::size_t among = detail::arcs_among(d, w.tails, &found);
  if (w.kind != ForbiddenKind::k41_plus) return among == 0;
  return among == 1 && w.extra_arc && *w.extra_arc == *found;
}

/// First induced occurrence of `kind`, scanning centers in increasing id and
/// tail subsets in lexicographic order.
inline std::optional<ForbiddenWitness> find_forbidden(const Digraph& d, ForbiddenKind kind) {
  const std::size_t k = tail_count(kind);
  const std::size_t allowed = kind == ForbiddenKind::k41_plus ? 1 : 0;
  for (Vertex c = 0; c < d.order(); ++c) {
    const std::vector<Vertex> cand = (d.in_set(c) - d.out_set(c)).members();
    if (cand.size() < k) continue;
    std::array<std::size_t, 4> idx{};
    std::array<Vertex, 4> pick{};
    // Depth-first over increasing index tuples, pruning as soon as the
    // partial tuple already has too many internal arcs.
    std::size_t depth = 0;
    idx[0] = 0;
    while (true) {
      if (idx[depth] + (k - depth) > cand.size()) {
        if (depth == 0) break;
        --depth;
        ++idx[depth];
        continue;
      }
      pick[depth] = cand[idx[depth]];
      std::size_t among = detail::arcs_among(d, std::span<const Vertex>(pick.data(), depth + 1));
      if (among > allowed) {
        ++idx[depth];
        continue;
      }
      if (depth + 1 == k) {
        std::optional<Arc> extra;
        among = detail::arcs_among(d, std::span<const Vertex>(pick.data(), k), &extra);
        if (among == allowed) {
          ForbiddenWitness w{kind, c, std::vector<Vertex>(pick.begin(), pick.begin() + k), std::nullopt};
          if (kind == ForbiddenKind::k41_plus) w.extra_arc = extra;
          return w;
        }
        ++idx[depth];
        continue;
      }
      idx[depth + 1] = idx[depth] + 1;
      ++depth;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Matchings

/// Maximum matching using only arcs directed from `left` into `right`
/// (augmenting paths, left vertices and adjacency scanned in increasing id).
inline std::vector<Arc> max_matching(const Digraph& d, const VertexSet& left, const VertexSet& right) {
  require_subset(d, left);
  require_subset(d, right);
  if (left.intersects(right)) throw invalid_input("matching sides must be disjoint");
  std::vector<Vertex> match_right(d.order(), kNoVertex);
  std::vector<Vertex> match_left(d.order(), kNoVertex);
  std::vector<unsigned> seen(d.order(), 0);
  unsigned stamp = 0;

  // Iterative augmenting-path search from `root`.
  auto augment = [&](Vertex root) {
    struct Frame {
      Vertex u;
      std::size_t next;
      Vertex via;  // right vertex that led here
    };
    std::vector<Frame> stack{{root, 0, kNoVertex}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& outs = d.out(f.u);
      bool descended = false;
      while (f.next < outs.size()) {
        const Vertex w = outs[f.next++];
        if (!right.contains(w) || seen[w] == stamp) continue;
        seen[w] = stamp;
        if (match_right[w] == kNoVertex) {
          // Flip the alternating path.
          Vertex free_right = w;
          for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const Vertex prev = match_left[it->u];
            match_left[it->u] = free_right;
            match_right[free_right] = it->u;
            free_right = prev;
          }
          return true;
        }
        stack.push_back({match_right[w], 0, w});
        descended = true;
        break;
      }
      if (!descended) stack.pop_back();
    }
    return false;
  };

  for (Vertex u : left) {
    ++stamp;
    augment(u);
  }
  std::vector<Arc> m;
  for (Vertex u : left)
    if (match_left[u] != kNoVertex) m.push_back({u, match_left[u]});
  return m;
}

/// For an independent set Q: a maximum matching M from N^-(Q) into Q,
/// M1 = Q-endpoints of M, M2 = N^-(Q)-endpoints, A = Q \ M1.
struct MatchingDecomposition {
  VertexSet q;
  std::vector<Arc> m;
  VertexSet m1;
  VertexSet m2;
  VertexSet a;
};

inline MatchingDecomposition matching_decomposition(const Digraph& d, const VertexSet& q) {
  if (!is_independent(d, q)) throw invalid_input("matching decomposition needs an independent set");
  MatchingDecomposition md;
  md.q = q;
  const VertexSet nq = in_neighborhood(d, q);
  md.m = max_matching(d, nq, q);
  md.m1 = d.empty_set();
  md.m2 = d.empty_set();
  for (const Arc& arc : md.m) {
    md.m2.insert(arc.tail);
    md.m1.insert(arc.head);
  }
  md.a = q - md.m1;
  if (!(in_neighborhood(d, md.m1) == nq))
    throw invariant_error("maximum matching leaves N^-(Q) != N^-(M1) for Q = " + q.to_string());
  return md;
}

// ---------------------------------------------------------------------------
// One-way split digraphs: X independent sources, Y semicomplete, arcs X -> Y.

struct OneWaySplitPartition {
  VertexSet x;
  VertexSet y;
};

inline bool is_one_way_split_partition(const Digraph& d, const OneWaySplitPartition& part) {
  if (part.x.universe() != d.order() || part.y.universe() != d.order()) return false;
  if (part.x.intersects(part.y) || !((part.x | part.y) == d.vertices())) return false;
  for (Vertex x : part.x)
    if (d.in_degree(x) != 0) return false;  // no arcs inside X, none from Y into X
  for (Vertex u : part.y)
    for (Vertex v : part.y)
      if (u < v && !d.adjacent(u, v)) return false;
  return true;
}

/// Canonical partition X = sources, Y = the rest, if Y is semicomplete.
inline std::optional<OneWaySplitPartition> recognize_one_way_split(const Digraph& d) {
  OneWaySplitPartition part{sources(d), d.empty_set()};
  part.y = part.x.complement();
  for (Vertex u : part.y)
    for (Vertex v : part.y)
      if (u < v && !d.adjacent(u, v)) return std::nullopt;
  return part;
}

// ---------------------------------------------------------------------------
// Cycle structure

/// Kahn's algorithm, smallest available vertex first. nullopt on a cycle.
inline std::optional<std::vector<Vertex>> topological_order(const Digraph& d) {
  std::vector<std::size_t> indeg(d.order());
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (Vertex v = 0; v < d.order(); ++v) {
    indeg[v] = d.in_degree(v);
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<Vertex> order;
  order.reserve(d.order());
  while (!ready.empty()) {
    const Vertex v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Vertex w : d.out(v))
      if (--indeg[w] == 0) ready.push(w);
  }
  if (order.size() != d.order()) return std::nullopt;
  return order;
}

inline bool is_dag(const Digraph& d) { return topological_order(d).has_value(); }

/// Strongly connected component id per vertex (iterative Tarjan).
inline std::vector<Vertex> strong_components(const Digraph& d) {
  const std::size_t n = d.order();
  std::vector<Vertex> comp(n, kNoVertex), index(n, kNoVertex), low(n, 0);
  std::vector<Vertex> stack;
  std::vector<bool> on_stack(n, false);
  Vertex next_index = 0, next_comp = 0;
  struct Frame {
    Vertex v;
    std::size_t edge;
  };
  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kNoVertex) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& outs = d.out(f.v);
      if (f.edge < outs.size()) {
        const Vertex w = outs[f.edge++];
        if (index[w] == kNoVertex) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const Vertex v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
    }
  }
  return comp;
}

/// True iff some directed cycle has odd length. Within a strong component an
/// odd closed walk exists iff the component admits no 2-colouring in which
/// every arc changes colour.
inline bool has_odd_directed_cycle(const Digraph& d) {
  const auto comp = strong_components(d);
  std::vector<int> parity(d.order(), -1);
  std::vector<Vertex> queue;
  for (Vertex root = 0; root < d.order(); ++root) {
    if (parity[root] != -1) continue;
    parity[root] = 0;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (Vertex w : d.out(v)) {
        if (comp[w] != comp[v]) continue;
        if (parity[w] == -1) {
          parity[w] = 1 - parity[v];
          queue.push_back(w);
        } else if (parity[w] == parity[v]) {
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace qk
