#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qk/digraph.hpp"
#include "qk/errors.hpp"
#include "qk/parallel.hpp"
#include "qk/recognition.hpp"

namespace qk {

// ---------------------------------------------------------------------------
// Verification

/// Independent, and every vertex outside K has an arc into K.
inline bool verify_kernel(const Digraph& d, const VertexSet& k) {
  if (!is_independent(d, k)) return false;
  for (Vertex v = 0; v < d.order(); ++v)
    if (!k.contains(v) && !d.out_set(v).intersects(k)) return false;
  return true;
}

struct QuasiKernelCheck {
  bool ok;
  NeighborhoodPartition partition;
};

/// Independent, and every vertex reaches Q by a path of at most two arcs.
/// The distance partition is returned as the certificate either way.
inline QuasiKernelCheck verify_quasi_kernel(const Digraph& d, const VertexSet& q) {
  QuasiKernelCheck check{false, distance_partition(d, q)};
  check.ok = check.partition.far.empty() && is_independent(d, q);
  return check;
}

inline bool is_quasi_kernel(const Digraph& d, const VertexSet& q) { return verify_quasi_kernel(d, q).ok; }

/// A quasi-kernel in which every member has an out-neighbour in N^-(Q).
inline bool is_good_quasi_kernel(const Digraph& d, const VertexSet& q) {
  auto check = verify_quasi_kernel(d, q);
  if (!check.ok) return false;
  for (Vertex u : q)
    if (!d.out_set(u).intersects(check.partition.dist1)) return false;
  return true;
}

inline bool is_small(const Digraph& d, const VertexSet& q) { return 2 * q.size() <= d.order(); }

// ---------------------------------------------------------------------------
// Constructions

/// Chvátal–Lovász: take the lowest remaining vertex v, recurse on D - N^-[v],
/// and add v back unless it already points into the recursive answer.
/// Iterative; the pivots are unwound in reverse.
inline VertexSet quasi_kernel_cl(const Digraph& d) {
  VertexSet remaining = d.vertices();
  std::vector<Vertex> pivots;
  while (!remaining.empty()) {
    const Vertex v = remaining.first();
    pivots.push_back(v);
    remaining -= d.in_set(v);
    remaining.erase(v);
  }
  VertexSet q = d.empty_set();
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it)
    if (!d.out_set(*it).intersects(q)) q.insert(*it);
  return q;
}

/// Quasi-kernel Q with every member of the independent set S either in Q or
/// pointing into Q: Q = Q' ∪ {u in S : u has no arc into Q'}, where Q' is
/// the Chvátal–Lovász quasi-kernel of D - N^-[S].
inline VertexSet quasi_kernel_forced(const Digraph& d, const VertexSet& s) {
  if (!is_independent(d, s)) throw invalid_input("forced set must be independent");
  const auto rest = delete_vertices(d, closed_in_neighborhood(d, s));
  VertexSet q = rest.lift(quasi_kernel_cl(rest.graph));
  const VertexSet base = q;
  for (Vertex u : s)
    if (!d.out_set(u).intersects(base)) q.insert(u);
  return q;
}

inline void require_quasi_kernel(const Digraph& d, const VertexSet& q, const char* what) {
  require_subset(d, q);
  if (!is_quasi_kernel(d, q)) throw invalid_input(std::string(what) + ": " + q.to_string() + " is not a quasi-kernel");
}

/// Greedily adds (lowest id first) vertices with no arc to or from Q. The
/// result is a maximal independent quasi-kernel, so every vertex of its
/// second in-neighbourhood has an in-neighbour in it.
inline VertexSet maximalize_qk(const Digraph& d, const VertexSet& q) {
  require_quasi_kernel(d, q, "maximalize_qk");
  VertexSet result = q;
  VertexSet blocked = q;
  for (Vertex v : q) {
    blocked |= d.in_set(v);
    blocked |= d.out_set(v);
  }
  for (Vertex v = 0; v < d.order(); ++v) {
    if (blocked.contains(v)) continue;
    result.insert(v);
    blocked.insert(v);
    blocked |= d.in_set(v);
    blocked |= d.out_set(v);
  }
  return result;
}

/// Greedily drops (lowest id first) members whose removal keeps a
/// quasi-kernel. Coverage only shrinks with Q, so one pass reaches an
/// inclusion-minimal quasi-kernel.
inline VertexSet minimalize_qk(const Digraph& d, const VertexSet& q) {
  require_quasi_kernel(d, q, "minimalize_qk");
  VertexSet result = q;
  for (Vertex v : q) {
    result.erase(v);
    if (!is_quasi_kernel(d, result)) result.insert(v);
  }
  return result;
}

/// (Q ∪ Q~) \ N^-(Q~) for a quasi-kernel Q~ of D[N^--(Q)] (given in D's ids).
inline VertexSet jacob_meyniel_combine(const Digraph& d, const VertexSet& q, const VertexSet& q_tilde) {
  return (q | q_tilde) - in_neighborhood(d, q_tilde);
}

struct JacobMeynielResult {
  VertexSet quasi_kernel;
  VertexSet q_tilde;
};

inline JacobMeynielResult jacob_meyniel_refine_detailed(const Digraph& d, const VertexSet& q) {
  require_quasi_kernel(d, q, "jacob_meyniel_refine");
  const auto second = induced(d, second_in_neighborhood(d, q));
  JacobMeynielResult r{d.empty_set(), second.lift(quasi_kernel_cl(second.graph))};
  r.quasi_kernel = jacob_meyniel_combine(d, q, r.q_tilde);
  if (!is_quasi_kernel(d, r.quasi_kernel))
    throw invariant_error("Jacob-Meyniel refinement of " + q.to_string() + " is not a quasi-kernel");
  return r;
}

inline VertexSet jacob_meyniel_refine(const Digraph& d, const VertexSet& q) {
  return jacob_meyniel_refine_detailed(d, q).quasi_kernel;
}

// ---------------------------------------------------------------------------
// Kernels

/// The unique kernel of an acyclic digraph: sweep in reverse topological
/// order, taking every vertex with no out-neighbour already taken.
inline VertexSet kernel_dag(const Digraph& d) {
  auto order = topological_order(d);
  if (!order) throw invalid_input("kernel_dag needs an acyclic digraph");
  VertexSet k = d.empty_set();
  for (auto it = order->rbegin(); it != order->rend(); ++it)
    if (!d.out_set(*it).intersects(k)) k.insert(*it);
  return k;
}

inline constexpr std::size_t kDefaultKernelBudget = 20;
inline constexpr std::size_t kDefaultKernelPerfectBudget = 10;

namespace detail {

/// Branch and bound over vertices 0..n-1, "take" before "skip". A vertex
/// already skipped must still have an out-neighbour among the taken or the
/// undecided-and-takeable vertices.
class KernelSearch {
 public:
  explicit KernelSearch(const Digraph& d) : d_(d) {}

  std::optional<VertexSet> run(VertexSet taken, VertexSet blocked, Vertex start) {
    if (search(taken, blocked, start)) return found_;
    return std::nullopt;
  }

 private:
  bool search(VertexSet& taken, VertexSet& blocked, Vertex i) {
    const std::size_t n = d_.order();
    VertexSet potential = taken;
    for (Vertex v = i; v < n; ++v)
      if (!blocked.contains(v)) potential.insert(v);
    for (Vertex u = 0; u < i; ++u)
      if (!taken.contains(u) && !d_.out_set(u).intersects(potential)) return false;
    if (i == n) {
      found_ = taken;
      return true;
    }
    if (!blocked.contains(i)) {
      VertexSet t = taken, b = blocked;
      t.insert(i);
      b.insert(i);
      b |= d_.in_set(i);
      b |= d_.out_set(i);
      if (search(t, b, i + 1)) return true;
    }
    return search(taken, blocked, i + 1);
  }

  const Digraph& d_;
  VertexSet found_;
};

}  // namespace detail

/// Some kernel of D, or nullopt if none exists. Exhaustive; the returned
/// kernel is the first one in take-before-skip order (so {0} for a digon).
inline std::optional<VertexSet> kernel_exact(const Digraph& d, std::size_t budget = kDefaultKernelBudget,
                                             unsigned workers = 1) {
  if (d.order() > budget)
    throw resource_error("kernel_exact: " + std::to_string(d.order()) + " vertices exceeds budget " +
                         std::to_string(budget));
  if (d.order() == 0) return d.empty_set();
  // Two branches on vertex 0: take it, or skip it.
  std::optional<VertexSet> branch[2];
  auto task = [&](std::size_t which) {
    detail::KernelSearch search(d);
    VertexSet taken = d.empty_set(), blocked = d.empty_set();
    if (which == 0) {
      taken.insert(0);
      blocked.insert(0);
      blocked |= d.in_set(0);
      blocked |= d.out_set(0);
    }
    branch[which] = search.run(taken, blocked, 1);
    return branch[which].has_value();
  };
  const std::size_t winner = detail::first_success(2, workers, task);
  if (winner == 2) return std::nullopt;
  return branch[winner];
}

/// Every induced subdigraph has a kernel (all 2^n subsets checked).
inline bool is_kernel_perfect_exact(const Digraph& d, std::size_t budget = kDefaultKernelPerfectBudget) {
  const std::size_t n = d.order();
  if (n > budget)
    throw resource_error("is_kernel_perfect_exact: " + std::to_string(n) + " vertices exceeds budget " +
                         std::to_string(budget));
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    VertexSet s(n);
    for (Vertex v = 0; v < n; ++v)
      if ((mask >> v) & 1U) s.insert(v);
    if (!kernel_exact(induced(d, s).graph, budget)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Minimum quasi-kernel

struct MinQuasiKernel {
  std::size_t size;
  VertexSet set;
};

namespace detail {

/// Fixed-size search over independent sets in lexicographic order. A
/// partial set is abandoned once some uncovered vertex has no remaining
/// candidate within two arcs of it.
class MinQkSearch {
 public:
  explicit MinQkSearch(const Digraph& d) : d_(d), n_(d.order()) {
    ball_.reserve(n_);
    adj_.reserve(n_);
    for (Vertex c = 0; c < n_; ++c) {
      VertexSet single(n_, {c});
      ball_.push_back(closed_in_neighborhood(d, single) | second_in_neighborhood(d, single));
      adj_.push_back(d.in_set(c) | d.out_set(c));
    }
    coverers_.assign(n_, VertexSet(n_));
    for (Vertex c = 0; c < n_; ++c)
      for (Vertex u : ball_[c]) coverers_[u].insert(c);
  }

  /// Lexicographically first quasi-kernel of exactly `size` vertices whose
  /// smallest member is `first`.
  std::optional<VertexSet> with_first(std::size_t size, Vertex first) {
    target_ = size;
    VertexSet chosen(n_, {first});
    VertexSet cand = VertexSet::full(n_);
    for (Vertex v = 0; v <= first; ++v) cand.erase(v);
    cand -= adj_[first];
    if (search(chosen, ball_[first], cand, 1)) return chosen;
    return std::nullopt;
  }

 private:
  bool search(VertexSet& chosen, const VertexSet& covered, const VertexSet& cand, std::size_t k) {
    const bool complete = covered.size() == n_;
    if (complete) return true;  // Q is a quasi-kernel; extra members cannot be required
    if (k == target_) return false;
    if (cand.size() < 1) return false;
    const VertexSet uncovered = covered.complement();
    for (Vertex u : uncovered)
      if (!coverers_[u].intersects(cand)) return false;
    for (Vertex v : cand) {
      VertexSet next_cand = cand;
      for (Vertex w = 0; w <= v; ++w) next_cand.erase(w);
      next_cand -= adj_[v];
      chosen.insert(v);
      if (search(chosen, covered | ball_[v], next_cand, k + 1)) return true;
      chosen.erase(v);
    }
    return false;
  }

  const Digraph& d_;
  std::size_t n_;
  std::size_t target_ = 0;
  std::vector<VertexSet> ball_;      // vertices reaching c within two arcs, c included
  std::vector<VertexSet> adj_;       // in- and out-neighbours
  std::vector<VertexSet> coverers_;  // c such that u is in ball_[c]
};

}  // namespace detail

/// Smallest quasi-kernel, trying sizes 1, 2, ..., cap. Ties go to the
/// lexicographically smallest member list.
inline MinQuasiKernel minimum_quasi_kernel_exact(const Digraph& d, std::optional<std::size_t> cap = std::nullopt,
                                                 unsigned workers = 1) {
  const std::size_t n = d.order();
  if (n == 0) return {0, d.empty_set()};
  const std::size_t limit = cap.value_or(n);
  for (std::size_t size = 1; size <= limit; ++size) {
    std::vector<std::optional<VertexSet>> found(n);
    auto task = [&](std::size_t first) {
      detail::MinQkSearch search(d);
      found[first] = search.with_first(size, static_cast<Vertex>(first));
      return found[first].has_value();
    };
    const std::size_t winner = detail::first_success(n, workers, task);
    if (winner < n) return {found[winner]->size(), *found[winner]};
  }
  if (limit >= n) throw invariant_error("no quasi-kernel found among all independent sets");
  throw resource_error("no quasi-kernel with at most " + std::to_string(limit) + " vertices");
}

// ---------------------------------------------------------------------------
// Semicomplete digraphs

/// Lowest-id vertex whose in-neighbourhood is inclusion-maximal; it is a
/// quasi-kernel on its own.
inline Vertex semicomplete_singleton_qk(const Digraph& d) {
  if (d.order() == 0) throw invalid_input("semicomplete_singleton_qk needs at least one vertex");
  if (!is_semicomplete(d)) throw invalid_input("semicomplete_singleton_qk needs a semicomplete digraph");
  for (Vertex v = 0; v < d.order(); ++v) {
    bool maximal = true;
    for (Vertex u = 0; u < d.order() && maximal; ++u)
      if (u != v && d.in_set(v).is_subset_of(d.in_set(u)) && !(d.in_set(v) == d.in_set(u))) maximal = false;
    if (maximal) {
      if (!is_quasi_kernel(d, VertexSet(d.order(), {v})))
        throw invariant_error("maximal in-neighbourhood vertex " + std::to_string(v) + " is not a quasi-kernel");
      return v;
    }
  }
  throw invariant_error("no inclusion-maximal in-neighbourhood");
}

}  // namespace qk
