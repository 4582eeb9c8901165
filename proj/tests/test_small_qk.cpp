#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qk/generators.hpp"
#include "qk/small_qk.hpp"
#include "qk/split.hpp"

using namespace qk;

namespace {

Digraph c3() { return Digraph(3, {{0, 1}, {1, 2}, {2, 0}}); }
Digraph c5() { return Digraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}); }
Digraph digon() { return Digraph(2, {{0, 1}, {1, 0}}); }

void expect_valid(const Digraph& d, const SmallQkOutcome& out) {
  if (out.found_quasi_kernel()) {
    EXPECT_TRUE(oracle::is_quasi_kernel(oracle::Matrix(d), oracle::to_mask(out.quasi_kernel())));
    EXPECT_LE(2 * out.quasi_kernel().size(), d.order());
  } else {
    EXPECT_TRUE(verify_witness(d, out.witness()));
  }
}

}  // namespace

TEST(AntiClawFree, Examples) {
  Rng rng(201);
  for (int i = 0; i < 100; ++i) {
    const Digraph t = random_tournament(1 + detail::below(rng, 50), rng);
    if (!is_sink_free(t)) continue;
    const auto out = small_qk_anti_claw_free(t);
    ASSERT_TRUE(out.found_quasi_kernel());
    EXPECT_EQ(out.quasi_kernel().size(), 1u);
  }
  const auto c = small_qk_anti_claw_free(c3());
  ASSERT_TRUE(c.found_quasi_kernel());
  EXPECT_EQ(c.quasi_kernel().size(), 1u);

  const Digraph claw(4, {{0, 3}, {1, 3}, {2, 3}, {3, 0}});
  const auto w = small_qk_anti_claw_free(claw);
  expect_valid(claw, w);
  EXPECT_TRUE(w.found_quasi_kernel());

  EXPECT_THROW(small_qk_anti_claw_free(Digraph(2, {{0, 1}})), invalid_input);
  EXPECT_THROW(small_qk_anti_claw_free(Digraph(0)), invalid_input);
}

TEST(AntiClawFree, TraceRecordsShrinkingSizes) {
  Rng rng(203);
  for (int i = 0; i < 300; ++i) {
    const Digraph d = random_sink_free_digraph(2 + detail::below(rng, 20), 0.1, rng);
    const auto out = small_qk_anti_claw_free(d);
    expect_valid(d, out);
    if (!out.found_quasi_kernel()) continue;
    const auto& trace = std::get<SmallQuasiKernel>(out.result).trace;
    ASSERT_FALSE(trace.empty());
    EXPECT_EQ(trace.front().kind, StepKind::start);
    for (std::size_t j = 1; j < trace.size(); ++j) EXPECT_LT(trace[j].size_after, trace[j - 1].size_after);
    EXPECT_EQ(trace.back().size_after, out.quasi_kernel().size());
  }
}

TEST(AntiClawFree, NoWitnessWithoutAntiClaw) {
  Rng rng(207);
  int witnesses = 0;
  for (int i = 0; i < 2000; ++i) {
    const Digraph d = random_sink_free_digraph(2 + detail::below(rng, 14), 0.15, rng);
    const auto out = small_qk_anti_claw_free(d);
    expect_valid(d, out);
    if (!out.found_quasi_kernel()) {
      ++witnesses;
      EXPECT_TRUE(find_forbidden(d, ForbiddenKind::anti_claw));
    }
  }
  RecordProperty("witnesses", witnesses);
}

TEST(AntiClawFree, WitnessesOnSmallDigraphsAreVerified) {
  std::size_t witnesses = 0;
  for (std::size_t n = 4; n <= 5; ++n)
    enumerate_digraphs(n, true, [&](const Digraph& d, std::uint64_t) {
      const auto out = small_qk_anti_claw_free(d);
      if (out.found_quasi_kernel()) return;
      ++witnesses;
      EXPECT_TRUE(verify_witness(d, out.witness()));
      EXPECT_EQ(out.witness().kind, ForbiddenKind::anti_claw);
    });
  EXPECT_GT(witnesses, 0u);
}

TEST(K41Free, Examples) {
  const auto c = small_qk_k41_free(c5());
  ASSERT_TRUE(c.found_quasi_kernel());
  EXPECT_LE(c.quasi_kernel().size(), 2u);
  Rng rng(211);
  for (int i = 0; i < 300; ++i) {
    const Digraph d = random_indegree3(2 + detail::below(rng, 30), 0.2, rng);
    const auto out = small_qk_k41_free(d);
    ASSERT_TRUE(out.found_quasi_kernel());
    expect_valid(d, out);
  }
  EXPECT_THROW(small_qk_k41_free(Digraph(2, {{0, 1}})), invalid_input);
}

TEST(K41Free, NoWitnessWithoutPattern) {
  Rng rng(213);
  for (int i = 0; i < 2000; ++i) {
    const Digraph d = random_sink_free_digraph(2 + detail::below(rng, 16), 0.12, rng);
    const auto out = small_qk_k41_free(d);
    expect_valid(d, out);
    if (!out.found_quasi_kernel()) {
      EXPECT_TRUE(find_forbidden(d, ForbiddenKind::k41) || find_forbidden(d, ForbiddenKind::k41_plus));
    }
  }
}

TEST(SmallQkAlgorithms, ExhaustiveUpToFour) {
  for (std::size_t n = 2; n <= 4; ++n)
    enumerate_digraphs(n, true, [&](const Digraph& d, std::uint64_t) {
      const auto a = small_qk_anti_claw_free(d);
      const auto b = small_qk_k41_free(d);
      EXPECT_TRUE(a.found_quasi_kernel());
      EXPECT_TRUE(b.found_quasi_kernel());
      expect_valid(d, a);
      expect_valid(d, b);
    });
}

TEST(DegreeArcPredicate, Examples) {
  EXPECT_FALSE(theorem3_predicate(c3()));
  const Digraph star(6, {{0, 5}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
  const auto w = theorem3_predicate(star);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->kind, Theorem3Witness::Kind::high_in_degree);
  EXPECT_EQ(w->vertex, 5u);
  EXPECT_EQ(w->triple, (std::array<Vertex, 3>{0, 1, 2}));
}

TEST(DegreeArcPredicate, IndependentArcs) {
  // Arcs 0->1 and 2->3; tails get four private sources, heads get the tail
  // plus `head_sources` private sources.
  auto build = [](int last_head_sources) {
    std::vector<Arc> arcs{{0, 1}, {2, 3}};
    Vertex next = 4;
    for (Vertex v = 0; v < 4; ++v) {
      const int count = v % 2 == 0 ? 4 : (v == 3 ? last_head_sources : 3);
      for (int j = 0; j < count; ++j) arcs.push_back({next++, v});
    }
    return Digraph(next, arcs);
  };
  const auto w = theorem3_predicate(build(3));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->kind, Theorem3Witness::Kind::independent_arcs);
  EXPECT_EQ(w->arcs[0], (Arc{0, 1}));
  EXPECT_EQ(w->arcs[1], (Arc{2, 3}));
  // Vertex 3 drops to in-degree 3.
  EXPECT_FALSE(theorem3_predicate(build(2)));
}

TEST(DegreeArcPredicate, ContrapositiveUpToFour) {
  for (std::size_t n = 2; n <= 4; ++n)
    enumerate_digraphs(n, true, [&](const Digraph& d, std::uint64_t) {
      if (theorem3_predicate(d)) return;
      EXPECT_LE(2 * oracle::min_quasi_kernel_size(oracle::Matrix(d)), n);
    });
}

TEST(SecondNeighbourhoodKernel, Examples) {
  const VertexSet r = small_qk_via_kernel_of_n2(c5(), VertexSet(5, {1, 3}));
  EXPECT_TRUE(is_quasi_kernel(c5(), r));
  EXPECT_LE(r.size(), 2u);
  EXPECT_EQ(small_qk_via_kernel_of_n2(digon(), VertexSet(2, {0})), VertexSet(2, {0}));
  EXPECT_THROW(small_qk_via_kernel_of_n2(c5(), VertexSet(5, {1})), invalid_input);
}

TEST(SecondNeighbourhoodKernel, RandomAcyclicSecondNeighbourhood) {
  Rng rng(217);
  int used = 0;
  for (int i = 0; i < 1000; ++i) {
    const Digraph d = random_sink_free_digraph(2 + detail::below(rng, 16), 0.12, rng);
    const VertexSet q = quasi_kernel_cl(d);
    if (!is_dag(induced(d, second_in_neighborhood(d, q)).graph)) continue;
    ++used;
    const VertexSet r = small_qk_via_kernel_of_n2(d, q);
    EXPECT_TRUE(oracle::is_quasi_kernel(oracle::Matrix(d), oracle::to_mask(r)));
    EXPECT_LE(2 * r.size(), d.order());
  }
  EXPECT_GT(used, 100);
}

TEST(SecondNeighbourhoodKernel, MissingKernelIsPreconditionError) {
  // Q = {3}: N^-(Q) = {0}, N^--(Q) = {1, 2, 4}, which contains a directed triangle.
  const Digraph d(5, {{0, 3}, {1, 0}, {2, 0}, {4, 0}, {1, 2}, {2, 4}, {4, 1}, {3, 0}});
  ASSERT_TRUE(is_quasi_kernel(d, VertexSet(5, {3})));
  EXPECT_THROW(small_qk_via_kernel_of_n2(d, VertexSet(5, {3})), precondition_error);
}

TEST(GoodQuasiKernel, Examples) {
  EXPECT_EQ(small_qk_good(digon(), VertexSet(2, {0})), VertexSet(2, {0}));
  const Digraph ds = construct_dstar();
  const VertexSet q = small_qk_good(ds, VertexSet(6, {2, 5}));
  EXPECT_TRUE(is_good_quasi_kernel(ds, q));
  EXPECT_LE(q.size(), 3u);
  EXPECT_THROW(small_qk_good(c3(), VertexSet(3, {1})), invalid_input);
}

TEST(GoodQuasiKernel, FromKernels) {
  Rng rng(219);
  int used = 0;
  for (int i = 0; i < 800; ++i) {
    const Digraph d = random_sink_free_digraph(2 + detail::below(rng, 12), 0.2, rng);
    const auto k = kernel_exact(d);
    if (!k) continue;
    ++used;
    const VertexSet q = small_qk_good(d, *k);
    EXPECT_TRUE(is_good_quasi_kernel(d, q));
    EXPECT_LE(q.size(), in_neighborhood(d, q).size());
    EXPECT_EQ(matching_decomposition(d, q).a.size(), 0u);
  }
  EXPECT_GT(used, 100);
}

TEST(Partitioned, Examples) {
  EXPECT_EQ(small_qk_partitioned(digon(), VertexSet(2, {0}), VertexSet(2, {1})), VertexSet(2, {0}));
  EXPECT_EQ(small_qk_partitioned(Digraph(2, {{0, 1}}), VertexSet(2), VertexSet(2)), VertexSet(2, {1}));
  EXPECT_THROW(small_qk_partitioned(digon(), VertexSet(2, {0}), VertexSet(2)), invalid_input);
  EXPECT_THROW(small_qk_partitioned(digon(), VertexSet(2, {0, 1}), VertexSet(2, {1})), invalid_input);
  // A triangle is not kernel-perfect.
  EXPECT_THROW(small_qk_partitioned(c3(), VertexSet::full(3), VertexSet(3)), precondition_error);
}

TEST(Partitioned, RandomAcyclicParts) {
  Rng rng(223);
  for (int i = 0; i < 500; ++i) {
    const auto pd = random_dag_partitioned(1 + detail::below(rng, 20), 0.25, rng);
    const Digraph& d = pd.graph;
    const VertexSet s = sinks(d);
    const VertexSet ns = in_neighborhood(d, s);
    const VertexSet rest = (s | ns).complement();
    const VertexSet q = small_qk_partitioned(d, pd.v1 & rest, pd.v2 & rest);
    EXPECT_TRUE(oracle::is_quasi_kernel(oracle::Matrix(d), oracle::to_mask(q)));
    EXPECT_LE(2 * q.size(), d.order() + s.size() - ns.size());
    EXPECT_TRUE(s.is_subset_of(q));
  }
}

TEST(Partitioned, SinkFreeAcyclicPartsGiveHalf) {
  Rng rng(227);
  int used = 0;
  for (int i = 0; i < 2000 && used < 200; ++i) {
    const auto pd = random_dag_partitioned(2 + detail::below(rng, 14), 0.3, rng);
    if (!is_sink_free(pd.graph)) continue;
    ++used;
    const VertexSet q = small_qk_partitioned(pd.graph, pd.v1, pd.v2);
    EXPECT_TRUE(is_quasi_kernel(pd.graph, q));
    EXPECT_LE(2 * q.size(), pd.graph.order());
  }
  EXPECT_GT(used, 20);
}

TEST(CompositionLift, Examples) {
  Rng rng(229);
  for (int i = 0; i < 50; ++i) {
    const CompositionSpec spec{digon(), {random_digraph(1 + detail::below(rng, 4), 0.4, rng),
                                         random_digraph(1 + detail::below(rng, 4), 0.4, rng)}};
    const VertexSet q = lift_good_qk_composition(spec, VertexSet(2, {0}));
    const auto c = compose(spec);
    EXPECT_TRUE(is_good_quasi_kernel(c.graph, q));
    EXPECT_TRUE(q.is_subset_of(c.block(0)));
  }
  const Digraph ds = construct_dstar();
  CompositionSpec dspec{ds, {}};
  for (int j = 0; j < 6; ++j) dspec.parts.push_back(random_digraph(1 + detail::below(rng, 3), 0.5, rng));
  EXPECT_TRUE(is_good_quasi_kernel(compose(dspec).graph, lift_good_qk_composition(dspec, VertexSet(6, {2, 5}))));

  const CompositionSpec ones{ds, std::vector<Digraph>(6, Digraph(1))};
  EXPECT_EQ(lift_good_qk_composition(ones, VertexSet(6, {2, 5})), VertexSet(6, {2, 5}));
  EXPECT_THROW(lift_good_qk_composition({c3(), std::vector<Digraph>(3, Digraph(1))}, VertexSet(3, {1})),
               invalid_input);
}

TEST(CompositionLift, TriangleWithArclessPartsHasNoGoodQuasiKernel) {
  for (std::size_t a = 1; a <= 3; ++a)
    for (std::size_t b = 1; b <= 3; ++b)
      for (std::size_t c = 1; c <= 3; ++c) {
        const auto comp = compose({c3(), {Digraph(a), Digraph(b), Digraph(c)}});
        const oracle::Matrix g(comp.graph);
        for (oracle::Mask m = 0; m < (oracle::Mask{1} << comp.graph.order()); ++m)
          if (oracle::independent(g, m)) {
            EXPECT_FALSE(is_good_quasi_kernel(comp.graph, oracle::from_mask(comp.graph.order(), m)));
          }
      }
}
