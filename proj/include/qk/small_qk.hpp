#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qk/digraph.hpp"
#include "qk/errors.hpp"
#include "qk/quasi_kernel.hpp"
#include "qk/recognition.hpp"

namespace qk {

enum class StepKind {
  start,           // initial Chvátal–Lovász quasi-kernel
  drop_unmatched,  // unmatched member pointing into N^-(Q) removed
  swap_in,         // second-neighbourhood vertex replaces its in-neighbours in Q
  refine_second,   // Jacob–Meyniel refinement followed by dropping unmatched members
};

inline std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::start: return "start";
    case StepKind::drop_unmatched: return "drop_unmatched";
    case StepKind::swap_in: return "swap_in";
    case StepKind::refine_second: return "refine_second";
  }
  return "?";
}

struct ReductionStep {
  StepKind kind;
  std::optional<Vertex> vertex;
  std::size_t size_after;
};

struct SmallQuasiKernel {
  VertexSet quasi_kernel;
  std::vector<ReductionStep> trace{};
};

/// Either a small quasi-kernel or a verified forbidden induced pattern.
struct SmallQkOutcome {
  std::variant<SmallQuasiKernel, ForbiddenWitness> result;
  std::size_t steps = 0;

  bool found_quasi_kernel() const { return std::holds_alternative<SmallQuasiKernel>(result); }
  const VertexSet& quasi_kernel() const { return std::get<SmallQuasiKernel>(result).quasi_kernel; }
  const ForbiddenWitness& witness() const { return std::get<ForbiddenWitness>(result); }
};

namespace detail {

inline void require_sink_free(const Digraph& d, const char* who) {
  if (!is_sink_free(d)) throw invalid_input(std::string(who) + " needs a sink-free digraph");
}

inline std::vector<Vertex> lowest(const VertexSet& s, std::size_t count) {
  std::vector<Vertex> out;
  for (Vertex v : s) {
    if (out.size() == count) break;
    out.push_back(v);
  }
  return out;
}

enum class Progress { changed, stuck };

/// Shared loop state of the anti-claw and K41 algorithms.
struct ImprovementState {
  const Digraph& d;
  VertexSet q;
  std::vector<ReductionStep> trace{};
  std::size_t steps = 0;

  MatchingDecomposition md{};
  NeighborhoodPartition part{};
  VertexSet heavy{};  // vertices of N^--(Q) with at least two in-neighbours in A

  void record(StepKind kind, std::optional<Vertex> v) {
    trace.push_back({kind, v, q.size()});
    ++steps;
  }

  void analyse() {
    auto check = verify_quasi_kernel(d, q);
    if (!check.ok) throw invariant_error("improvement loop lost the quasi-kernel property at " + q.to_string());
    part = std::move(check.partition);
    md = matching_decomposition(d, q);
  }

  /// Drop an unmatched member with an arc into N^-(Q), or swap a
  /// second-neighbourhood vertex in for at least two unmatched members.
  Progress basic_reductions() {
    for (Vertex v : md.a)
      if (d.out_set(v).intersects(part.dist1)) {
        q.erase(v);
        record(StepKind::drop_unmatched, v);
        return Progress::changed;
      }
    // Reductions exhausted while Q is not small: |N^--(Q)| < |A|.
    if (!(part.dist2.size() < md.a.size()))
      throw invariant_error("|N^--(Q)| >= |A| with Q not small at " + q.to_string());
    heavy = d.empty_set();
    for (Vertex w : part.dist2)
      if ((d.in_set(w) & md.a).size() >= 2) heavy.insert(w);
    if (heavy.empty()) throw invariant_error("no vertex of N^--(Q) has two unmatched in-neighbours");
    for (Vertex w : heavy)
      if (!d.in_set(w).intersects(md.m1)) {
        q -= d.in_set(w);
        q.insert(w);
        record(StepKind::swap_in, w);
        return Progress::changed;
      }
    return Progress::stuck;
  }
};

inline ForbiddenWitness checked(const Digraph& d, ForbiddenWitness w) {
  std::sort(w.tails.begin(), w.tails.end());
  if (!verify_witness(d, w)) throw invariant_error("assembled witness does not induce " + std::string(to_string(w.kind)));
  return w;
}

}  // namespace detail

/// Small quasi-kernel of a sink-free digraph, or an induced anti-claw.
/// Starts from the Chvátal–Lovász quasi-kernel and shrinks it until small;
/// each step removes at least one vertex.
inline SmallQkOutcome small_qk_anti_claw_free(const Digraph& d) {
  if (d.order() == 0) throw invalid_input("small_qk_anti_claw_free needs at least one vertex");
  detail::require_sink_free(d, "small_qk_anti_claw_free");
  detail::ImprovementState st{d, quasi_kernel_cl(d)};
  st.record(StepKind::start, std::nullopt);
  while (true) {
    st.analyse();
    if (is_small(d, st.q)) return {SmallQuasiKernel{st.q, std::move(st.trace)}, st.steps};
    if (st.basic_reductions() == detail::Progress::changed) continue;
    // Every heavy vertex has an in-neighbour in M1: two unmatched plus one
    // matched in-neighbour, all in Q, form an anti-claw.
    const Vertex w = st.heavy.first();
    auto tails = detail::lowest(d.in_set(w) & st.md.a, 2);
    tails.push_back((d.in_set(w) & st.md.m1).first());
    return {detail::checked(d, {ForbiddenKind::anti_claw, w, tails, std::nullopt}), st.steps};
  }
}

/// Small quasi-kernel of a sink-free digraph, or an induced K41 / K41+.
inline SmallQkOutcome small_qk_k41_free(const Digraph& d) {
  if (d.order() == 0) throw invalid_input("small_qk_k41_free needs at least one vertex");
  detail::require_sink_free(d, "small_qk_k41_free");
  detail::ImprovementState st{d, quasi_kernel_cl(d)};
  st.record(StepKind::start, std::nullopt);
  while (true) {
    st.analyse();
    if (is_small(d, st.q)) return {SmallQuasiKernel{st.q, std::move(st.trace)}, st.steps};
    if (st.basic_reductions() == detail::Progress::changed) continue;

    const VertexSet& second = st.part.dist2;
    const VertexSet& a = st.md.a;
    // Q~: a maximal quasi-kernel of D[N^--(Q)].
    const auto sub = induced(d, second);
    const VertexSet q_tilde_sub = maximalize_qk(sub.graph, quasi_kernel_cl(sub.graph));
    const VertexSet q_tilde = sub.lift(q_tilde_sub);
    const VertexSet into_tilde = in_neighborhood(d, q_tilde);

    VertexSet shrunk = jacob_meyniel_combine(d, st.q, q_tilde);
    for (Vertex v : a)
      if (shrunk.contains(v) && d.out_set(v).intersects(into_tilde)) shrunk.erase(v);
    if (shrunk.size() < st.q.size()) {
      st.q = shrunk;
      st.record(StepKind::refine_second, std::nullopt);
      continue;
    }

    // A' = members of A pointing into Q~ or into N^-(Q~) ∩ N^--(Q).
    const VertexSet reach_tilde = q_tilde | (into_tilde & second);
    VertexSet a_rest = a;
    for (Vertex v : a)
      if (d.out_set(v).intersects(reach_tilde)) a_rest.erase(v);
    const VertexSet second_tilde = sub.lift(second_in_neighborhood(sub.graph, q_tilde_sub));
    if (a_rest.size() < second_tilde.size() + 2)
      throw invariant_error("|A \\ A'| < |N^--(Q~) ∩ N^--(Q)| + 2 at " + st.q.to_string());

    std::optional<Vertex> center;
    for (Vertex v : second_tilde)
      if ((d.in_set(v) & a_rest).size() >= 2) {
        center = v;
        break;
      }
    if (!center) throw invariant_error("no vertex of N^--(Q~) has two in-neighbours in A \\ A'");
    const Vertex v = *center;
    const VertexSet from_m1 = d.in_set(v) & st.md.m1;
    const VertexSet from_tilde = d.in_set(v) & q_tilde;
    if (from_m1.empty() || from_tilde.empty())
      throw invariant_error("K41 center " + std::to_string(v) + " lacks an in-neighbour in M1 or Q~");
    const Vertex m = from_m1.first();
    const Vertex t = from_tilde.first();
    auto tails = detail::lowest(d.in_set(v) & a_rest, 2);
    tails.push_back(m);
    tails.push_back(t);
    ForbiddenWitness w{ForbiddenKind::k41, v, tails, std::nullopt};
    if (d.has_arc(m, t)) {
      w.kind = ForbiddenKind::k41_plus;
      w.extra_arc = Arc{m, t};
    }
    return {detail::checked(d, std::move(w)), st.steps};
  }
}

// ---------------------------------------------------------------------------
// Structural predicate for digraphs without a small quasi-kernel.

struct Theorem3Witness {
  enum class Kind { high_in_degree, independent_arcs } kind;
  Vertex vertex = kNoVertex;     // high_in_degree
  std::array<Arc, 2> arcs{};     // independent_arcs
  std::array<Vertex, 3> triple{};  // independent in-neighbours (of `vertex`, or of arcs[0].tail)
};

namespace detail {

inline std::optional<std::array<Vertex, 3>> independent_triple(const Digraph& d, const VertexSet& s) {
  const auto vs = s.members();
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (d.adjacent(vs[i], vs[j])) continue;
      for (std::size_t k = j + 1; k < vs.size(); ++k)
        if (!d.adjacent(vs[i], vs[k]) && !d.adjacent(vs[j], vs[k])) return std::array<Vertex, 3>{vs[i], vs[j], vs[k]};
    }
  return std::nullopt;
}

}  // namespace detail

/// Holds iff D has (a) a vertex with at least 5 in-neighbours, 3 of them
/// independent, or (b) two independent arcs whose four endpoints each have
/// at least 4 in-neighbours, 3 of them independent. Returns the first
/// witness: (a) by vertex id, then (b) by arc pair in (tail, head) order.
inline std::optional<Theorem3Witness> theorem3_predicate(const Digraph& d) {
  const std::size_t n = d.order();
  std::vector<std::optional<std::array<Vertex, 3>>> triple(n);
  for (Vertex v = 0; v < n; ++v)
    if (d.in_degree(v) >= 4) triple[v] = detail::independent_triple(d, d.in_set(v));

  for (Vertex v = 0; v < n; ++v)
    if (d.in_degree(v) >= 5 && triple[v]) {
      Theorem3Witness w{Theorem3Witness::Kind::high_in_degree};
      w.vertex = v;
      w.triple = *triple[v];
      return w;
    }

  const auto arcs = d.arcs();
  auto strong = [&](Vertex v) { return triple[v].has_value(); };
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc e = arcs[i];
    if (!strong(e.tail) || !strong(e.head)) continue;
    for (std::size_t j = i + 1; j < arcs.size(); ++j) {
      const Arc f = arcs[j];
      if (!strong(f.tail) || !strong(f.head)) continue;
      const std::array<Vertex, 2> ends1{e.tail, e.head}, ends2{f.tail, f.head};
      bool independent = true;
      for (Vertex x : ends1)
        for (Vertex y : ends2)
          if (x == y || d.adjacent(x, y)) independent = false;
      if (!independent) continue;
      Theorem3Witness w{Theorem3Witness::Kind::independent_arcs};
      w.arcs = {e, f};
      w.triple = *triple[e.tail];
      return w;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace detail {

/// Kernel of an induced subdigraph: exact sweep when acyclic, else search.
inline std::optional<VertexSet> kernel_of(const Digraph& d) {
  if (is_dag(d)) return kernel_dag(d);
  return kernel_exact(d);
}

/// Drops unmatched members with no arc into N^--(Q) until none is left,
/// then combines with a kernel of D[N^--(Q)]. `d` need not be sink-free:
/// the caller is responsible for covering vertices that lose their only
/// route to Q.
inline VertexSet small_from_second_kernel(const Digraph& d, VertexSet q) {
  while (true) {
    const auto md = matching_decomposition(d, q);
    const VertexSet second = second_in_neighborhood(d, q);
    std::optional<Vertex> isolated;
    for (Vertex v : md.a)
      if (!d.out_set(v).intersects(second)) {
        isolated = v;
        break;
      }
    if (isolated) {
      q.erase(*isolated);
      continue;
    }
    const auto sub = induced(d, second);
    const auto kernel_sub = kernel_of(sub.graph);
    if (!kernel_sub) throw precondition_error("D[N^--(Q)] has no kernel for Q = " + q.to_string());
    if (md.a.size() <= second.size()) return q;
    const VertexSet k = sub.lift(*kernel_sub);
    return (md.m1 | k) - in_neighborhood(d, k);
  }
}

}  // namespace detail

/// Small quasi-kernel from a quasi-kernel Q for which D[N^--(Q)] has a kernel.
inline VertexSet small_qk_via_kernel_of_n2(const Digraph& d, const VertexSet& q) {
  detail::require_sink_free(d, "small_qk_via_kernel_of_n2");
  require_quasi_kernel(d, q, "small_qk_via_kernel_of_n2");
  const VertexSet result = detail::small_from_second_kernel(d, q);
  if (!is_quasi_kernel(d, result) || !is_small(d, result))
    throw invariant_error("second-neighbourhood kernel construction produced " + result.to_string());
  return result;
}

/// Shrinks a good quasi-kernel to its matched part M1 until every member is
/// matched; the result is good and has |Q| = |M| <= |N^-(Q)|.
inline VertexSet small_qk_good(const Digraph& d, const VertexSet& q_good) {
  detail::require_sink_free(d, "small_qk_good");
  require_subset(d, q_good);
  if (!is_good_quasi_kernel(d, q_good)) throw invalid_input(q_good.to_string() + " is not a good quasi-kernel");
  VertexSet q = q_good;
  while (true) {
    const auto md = matching_decomposition(d, q);
    if (md.a.empty()) break;
    q = md.m1;
    if (!is_good_quasi_kernel(d, q)) throw invariant_error("matched part " + q.to_string() + " is not good");
  }
  if (q.size() > in_neighborhood(d, q).size() || !is_small(d, q))
    throw invariant_error("good quasi-kernel " + q.to_string() + " is not small");
  return q;
}

namespace detail {

inline bool kernel_perfect_part(const Digraph& d, const VertexSet& part) {
  const auto sub = induced(d, part);
  if (is_dag(sub.graph)) return true;
  if (sub.graph.order() > kDefaultKernelPerfectBudget)
    throw precondition_error("cannot certify a cyclic part of " + std::to_string(sub.graph.order()) +
                             " vertices as kernel-perfect");
  return is_kernel_perfect_exact(sub.graph);
}

}  // namespace detail

/// Quasi-kernel of size at most (n + |S| - |N^-(S)|) / 2, S the sinks, given
/// a partition of V \ N^-[S] into two kernel-perfect parts. Acyclic parts
/// are accepted directly; cyclic parts are checked exhaustively.
inline VertexSet small_qk_partitioned(const Digraph& d, VertexSet v1, VertexSet v2) {
  require_subset(d, v1);
  require_subset(d, v2);
  const VertexSet s = sinks(d);
  const VertexSet into_s = in_neighborhood(d, s);
  const VertexSet rest = (s | into_s).complement();
  if (v1.intersects(v2) || !((v1 | v2) == rest))
    throw invalid_input("parts must partition the vertices outside N^-[S] = " + (s | into_s).to_string());
  if (!detail::kernel_perfect_part(d, v1) || !detail::kernel_perfect_part(d, v2))
    throw precondition_error("a part is not kernel-perfect");

  // Every vertex of V2 must point into V1; move the others over.
  for (bool moved = true; moved;) {
    moved = false;
    for (Vertex v : v2)
      if (!d.out_set(v).intersects(v1)) {
        v2.erase(v);
        v1.insert(v);
        moved = true;
        break;
      }
  }

  const auto part1 = induced(d, v1);
  const auto k1 = detail::kernel_of(part1.graph);
  if (!k1) throw precondition_error("first part has no kernel");
  const VertexSet kernel = part1.lift(*k1);

  // Unmatched kernel vertices with no arc into V1 ∪ V2 reach S in two arcs.
  const auto body = induced(d, rest);
  const VertexSet kernel_body = body.restrict(kernel);
  if (!is_quasi_kernel(body.graph, kernel_body))
    throw invariant_error("kernel of V1 is not a quasi-kernel of D - N^-[S]");
  const auto md = matching_decomposition(body.graph, kernel_body);
  VertexSet dropped = d.empty_set();
  for (Vertex a : md.a) {
    const Vertex v = body.to_parent[a];
    if (!d.out_set(v).intersects(rest)) dropped.insert(v);
  }

  const auto remainder = induced(d, rest - dropped);
  const VertexSet small = detail::small_from_second_kernel(remainder.graph, remainder.restrict(kernel - dropped));
  const VertexSet result = remainder.lift(small) | s;

  if (!is_quasi_kernel(d, result) || 2 * result.size() > d.order() + s.size() - into_s.size())
    throw invariant_error("partitioned construction produced " + result.to_string());
  return result;
}

/// Good quasi-kernel of T[H_1, ..., H_m] from a good quasi-kernel of T:
/// the union of Chvátal–Lovász quasi-kernels of the parts it selects.
inline VertexSet lift_good_qk_composition(const CompositionSpec& spec, const VertexSet& q_outer) {
  require_subset(spec.outer, q_outer);
  if (spec.outer.order() < 2) throw invalid_input("composition lifting needs an outer digraph with >= 2 vertices");
  for (const auto& part : spec.parts)
    if (part.order() == 0) throw invalid_input("composition parts must be non-empty");
  if (!is_good_quasi_kernel(spec.outer, q_outer))
    throw invalid_input(q_outer.to_string() + " is not a good quasi-kernel of the outer digraph");
  const Composition c = compose(spec);
  VertexSet q = c.graph.empty_set();
  for (Vertex i : q_outer)
    for (Vertex v : quasi_kernel_cl(spec.parts[i])) q.insert(c.block_start[i] + v);
  if (!is_good_quasi_kernel(c.graph, q)) throw invariant_error("lifted set " + q.to_string() + " is not good");
  return q;
}

}  // namespace qk
