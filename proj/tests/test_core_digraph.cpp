#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qk/digraph.hpp"
#include "qk/generators.hpp"
#include "qk/io.hpp"
#include "qk/split.hpp"

using namespace qk;

namespace {

Digraph c3() { return Digraph(3, {{0, 1}, {1, 2}, {2, 0}}); }

// 1-based labels to internal ids.
VertexSet labelled(std::size_t n, std::initializer_list<Vertex> labels) {
  VertexSet s(n);
  for (Vertex l : labels) s.insert(l - 1);
  return s;
}

}  // namespace

TEST(VertexSet, BasicOperations) {
  VertexSet a(130, {0, 64, 129});
  VertexSet b(130, {64, 100});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.contains(129));
  EXPECT_FALSE(a.contains(1));
  EXPECT_EQ((a | b).members(), (std::vector<Vertex>{0, 64, 100, 129}));
  EXPECT_EQ((a & b).members(), (std::vector<Vertex>{64}));
  EXPECT_EQ((a - b).members(), (std::vector<Vertex>{0, 129}));
  EXPECT_EQ(a.complement().size(), 127u);
  EXPECT_TRUE(a.intersects(b));
  EXPECT_TRUE((a & b).is_subset_of(a));
  EXPECT_EQ(VertexSet(5).first(), 5u);
  EXPECT_EQ(a.to_string(), "{0,64,129}");
  EXPECT_THROW(a.insert(130), invalid_input);
}

TEST(Digraph, RejectsLoopsDuplicatesAndRange) {
  EXPECT_THROW(Digraph(2, {{0, 0}}), invalid_input);
  EXPECT_THROW(Digraph(2, {{0, 1}, {0, 1}}), invalid_input);
  EXPECT_THROW(Digraph(2, {{0, 2}}), invalid_input);
  EXPECT_NO_THROW(Digraph(2, {{0, 1}, {1, 0}}));
}

TEST(Digraph, AdjacencyIsConsistentTranspose) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Digraph d = random_digraph(12, 0.3, rng);
    std::size_t arcs = 0;
    for (Vertex u = 0; u < d.order(); ++u) {
      EXPECT_TRUE(std::is_sorted(d.out(u).begin(), d.out(u).end()));
      for (Vertex v : d.out(u)) EXPECT_TRUE(std::binary_search(d.in(v).begin(), d.in(v).end(), u));
      arcs += d.out_degree(u);
    }
    EXPECT_EQ(arcs, d.arc_count());
  }
}

TEST(InNeighbourhood, Examples) {
  const Digraph d = c3();
  EXPECT_EQ(in_neighborhood(d, VertexSet(3, {1})), VertexSet(3, {0}));
  EXPECT_TRUE(in_neighborhood(d, d.vertices()).empty());
  const Digraph ds = construct_dstar();
  EXPECT_EQ(in_neighborhood(ds, labelled(6, {3, 6})), labelled(6, {2, 5}));
  EXPECT_THROW(in_neighborhood(d, VertexSet(4, {3})), invalid_input);
}

TEST(SecondInNeighbourhood, Examples) {
  EXPECT_EQ(second_in_neighborhood(c3(), VertexSet(3, {1})), VertexSet(3, {2}));
  EXPECT_EQ(second_in_neighborhood(construct_dstar(), labelled(6, {3, 6})), labelled(6, {1, 4}));
  const Digraph digon(2, {{0, 1}, {1, 0}});
  EXPECT_TRUE(second_in_neighborhood(digon, VertexSet(2, {0})).empty());
}

TEST(DistancePartition, Examples) {
  const Digraph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  const auto p = distance_partition(c5, VertexSet(5, {1, 3}));
  EXPECT_EQ(p.dist1, VertexSet(5, {0, 2}));
  EXPECT_EQ(p.dist2, VertexSet(5, {4}));
  EXPECT_TRUE(p.far.empty());

  const Digraph path(4, {{0, 1}, {1, 2}, {2, 3}, {3, 2}});
  EXPECT_EQ(distance_partition(path, VertexSet(4, {3})).far, VertexSet(4, {0}));

  const auto all = distance_partition(c5, c5.vertices());
  EXPECT_TRUE(all.dist1.empty() && all.dist2.empty() && all.far.empty());
}

TEST(DistancePartition, MatchesBreadthFirstOracleAndPartitions) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + detail::below(rng, 16);
    const Digraph d = random_digraph(n, 0.2, rng);
    VertexSet q(n);
    for (Vertex v = 0; v < n; ++v)
      if (detail::coin(rng, 0.25)) q.insert(v);
    const auto p = distance_partition(d, q);
    const auto dist = oracle::in_distance(oracle::Matrix(d), oracle::to_mask(q));
    for (Vertex v = 0; v < n; ++v) {
      const int expected = dist[v] < 0 || dist[v] > 2 ? 3 : dist[v];
      const int got = p.q.contains(v) ? 0 : p.dist1.contains(v) ? 1 : p.dist2.contains(v) ? 2 : 3;
      EXPECT_EQ(got, expected);
      const int hits = p.q.contains(v) + p.dist1.contains(v) + p.dist2.contains(v) + p.far.contains(v);
      EXPECT_EQ(hits, 1);
    }
    const VertexSet n1 = in_neighborhood(d, q);
    EXPECT_FALSE(n1.intersects(q));
    EXPECT_FALSE(second_in_neighborhood(d, q).intersects(q | n1));
  }
}

TEST(Induced, Examples) {
  const Digraph ds = construct_dstar();
  const auto tri = induced(ds, labelled(6, {1, 2, 3}));
  EXPECT_EQ(tri.graph, c3());
  EXPECT_EQ(tri.to_parent, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(induced(ds, ds.empty_set()).graph.order(), 0u);
  EXPECT_EQ(induced(ds, ds.vertices()).graph, ds);
  const auto rest = delete_vertices(ds, labelled(6, {1, 2, 3}));
  EXPECT_EQ(rest.to_parent, (std::vector<Vertex>{3, 4, 5}));
  EXPECT_EQ(rest.graph, c3());
}

TEST(SinksSources, Examples) {
  const Digraph path(2, {{0, 1}});
  EXPECT_EQ(sinks(path), VertexSet(2, {1}));
  EXPECT_EQ(sources(path), VertexSet(2, {0}));
  EXPECT_FALSE(is_sink_free(path));
  EXPECT_TRUE(is_sink_free(c3()));
  EXPECT_TRUE(sources(c3()).empty());
  const Digraph ds = construct_dstar();
  EXPECT_TRUE(is_independent(ds, labelled(6, {3, 6})));
  EXPECT_FALSE(is_independent(ds, labelled(6, {2, 5})));
  EXPECT_TRUE(sinks(Digraph(0)).empty());
}

TEST(Compose, Examples) {
  const Digraph e1(1), e2(2);
  const auto same = compose({c3(), {e1, e1, e1}});
  EXPECT_EQ(same.graph, c3());
  const auto bigger = compose({c3(), {e2, e1, e1}});
  EXPECT_EQ(bigger.graph, Digraph(4, {{0, 2}, {1, 2}, {2, 3}, {3, 0}, {3, 1}}));
  EXPECT_EQ(bigger.block(0), VertexSet(4, {0, 1}));
  EXPECT_EQ(bigger.block_of, (std::vector<Vertex>{0, 0, 1, 2}));
  EXPECT_THROW(compose({Digraph(0), {}}), invalid_input);
  EXPECT_THROW(compose({c3(), {e1}}), invalid_input);
}

TEST(Compose, OrderIsSumAndSingletonsAreIdentity) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::size_t t = 1 + detail::below(rng, 6);
    CompositionSpec spec{random_digraph(t, 0.4, rng), {}};
    std::size_t total = 0;
    for (std::size_t j = 0; j < t; ++j) {
      spec.parts.push_back(random_digraph(detail::below(rng, 4), 0.5, rng));
      total += spec.parts.back().order();
    }
    const auto c = compose(spec);
    EXPECT_EQ(c.graph.order(), total);
    for (const Arc& a : c.graph.arcs()) {
      const Vertex bi = c.block_of[a.tail], bj = c.block_of[a.head];
      if (bi == bj) EXPECT_TRUE(spec.parts[bi].has_arc(a.tail - c.block_start[bi], a.head - c.block_start[bj]));
      else EXPECT_TRUE(spec.outer.has_arc(bi, bj));
    }
    const auto id = compose({spec.outer, std::vector<Digraph>(t, Digraph(1))});
    EXPECT_EQ(id.graph, spec.outer);
  }
}

TEST(Io, ParseExamples) {
  EXPECT_EQ(parse_digraph("p dgraph 2 1\n0 1\n"), Digraph(2, {{0, 1}}));
  EXPECT_EQ(serialize_digraph(c3()), "p dgraph 3 3\n0 1\n1 2\n2 0\n");
  try {
    parse_digraph("p dgraph 2 1\n0 0\n");
    FAIL() << "self-loop accepted";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("self-loop"), std::string::npos);
  }
}

TEST(Io, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_digraph(text);
    } catch (const parse_error& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("q dgraph 2 1\n0 1\n"), 1u);
  EXPECT_EQ(line_of("# c\np dgraph 2 1\n0 2\n"), 3u);
  EXPECT_EQ(line_of("p dgraph 2 2\n0 1\n0 1\n"), 3u);
  EXPECT_EQ(line_of("p dgraph 2 1\n0 1\n1 0\n"), 3u);
  EXPECT_NE(line_of("p dgraph 3 2\n0 1\n"), 0u);
  EXPECT_EQ(line_of("p dgraph 2 1\n0 x\n"), 2u);
  EXPECT_NE(line_of("# only comments\n"), 0u);
  EXPECT_EQ(line_of("p dgraph 99999999 0\n"), 1u);
}

TEST(Io, CommentsBlankLinesAndLabels) {
  const Digraph d = parse_digraph("# hi\n\np dgraph 3 2\n# mid\n2 0\n\n0 1\n");
  EXPECT_EQ(d, Digraph(3, {{0, 1}, {2, 0}}));
  const std::string text = serialize_digraph(construct_dstar(), dstar_labels());
  EXPECT_EQ(text.rfind("# label 0 1\n", 0), 0u);
  EXPECT_EQ(parse_digraph(text), construct_dstar());
  EXPECT_EQ(to_dot(Digraph(2, {{0, 1}})), "digraph {\n  0;\n  1;\n  0 -> 1;\n}\n");
}

TEST(Io, RoundTripRandom) {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = detail::below(rng, 21);
    const Digraph d = random_digraph(n, detail::unit(rng), rng);
    EXPECT_EQ(parse_digraph(serialize_digraph(d)), d);
  }
}
