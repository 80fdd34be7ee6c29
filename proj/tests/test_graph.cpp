#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gfb/graph.hpp"
#include "test_util.hpp"

using namespace gfb;

TEST_CASE("build_graph validates and canonicalizes") {
  const auto g = AlgorithmicGraph::build(3, {{2, 3}, {1, 2}});
  CHECK(g.order() == 3);
  CHECK(g.edges() == EdgeList{{1, 2}, {2, 3}});
  CHECK(g.connected());
  CHECK(g.is_tree());

  CHECK_THROWS_AS(AlgorithmicGraph::build(3, {{2, 1}}), EdgeOrderViolation);
  CHECK_THROWS_AS(AlgorithmicGraph::build(3, {{1, 1}}), EdgeOrderViolation);
  CHECK_THROWS_AS(AlgorithmicGraph::build(3, {{1, 2}, {1, 2}}), DuplicateEdge);
  CHECK_THROWS_AS(AlgorithmicGraph::build(3, {{1, 4}}), NodeOutOfRange);
  CHECK_THROWS_AS(AlgorithmicGraph::build(4, {{1, 2}, {3, 4}}, true), NotConnected);
  CHECK_FALSE(AlgorithmicGraph::build(4, {{1, 2}, {3, 4}}).connected());
  CHECK_THROWS_AS(AlgorithmicGraph::build(1, {}), UnsupportedOrder);
}

TEST_CASE("structure matrices on the named shapes") {
  SUBCASE("complete n=3 laplacian") {
    const auto s = structure_matrices(AlgorithmicGraph::complete(3));
    Eigen::MatrixXi expect(3, 3);
    expect << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    CHECK(s.laplacian == expect);
  }
  SUBCASE("sequential n=3 incidence and Q") {
    const auto s = structure_matrices(AlgorithmicGraph::sequential(3));
    Eigen::MatrixXi inc(3, 2);
    inc << 1, 0, -1, 1, 0, -1;
    CHECK(s.incidence == inc);
    Eigen::MatrixXi q(3, 3);
    q << 0, 1, 0, -1, 0, 1, 0, -1, 0;
    CHECK(s.q == q);
  }
  SUBCASE("identities hold exactly in integer arithmetic") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 19);
      const auto g = testutil::random_connected_graph(rng, n);
      const auto s = structure_matrices(g);
      CHECK(s.laplacian == (s.incidence * s.incidence.transpose()).eval());
      CHECK((2 * s.laplacian) == (s.p + s.p.transpose()).eval());
      CHECK(s.q == (-s.q.transpose()).eval());
      CHECK(s.laplacian == (s.degree - s.adjacency - s.adjacency.transpose()).eval());
    }
  }
}

TEST_CASE("onto decomposition canonical rule") {
  SUBCASE("complete n=2 closed form") {
    const auto z = onto_decomposition(AlgorithmicGraph::complete(2));
    CHECK(z.rows() == 2);
    CHECK(z.cols() == 1);
    CHECK(z(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(z(1, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  }
  SUBCASE("complete n=5 last coefficient") {
    const auto z = onto_decomposition(AlgorithmicGraph::complete(5));
    const double expected = std::sqrt(5.0 / 2.0);
    CHECK(z(3, 3) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(z(4, 3) == doctest::Approx(-expected).epsilon(1e-14));
  }
  SUBCASE("tree uses the incidence matrix") {
    const auto g = AlgorithmicGraph::sequential(4);
    const auto z = onto_decomposition(g);
    CHECK(z == structure_matrices(g).incidence.cast<double>());
    const Eigen::MatrixXd lap = structure_matrices(g).laplacian.cast<double>();
    CHECK((z * z.transpose() - lap).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("disconnected graph is rejected") {
    CHECK_THROWS_AS(onto_decomposition(AlgorithmicGraph::build(4, {{1, 2}, {3, 4}})),
                    NotConnected);
  }
  SUBCASE("spectral branch: non-tree, non-complete") {
    // ring of order >= 4 is connected, has n edges, and is not complete
    const auto g = AlgorithmicGraph::ring(6);
    const auto z = onto_decomposition(g);
    const Eigen::MatrixXd lap = structure_matrices(g).laplacian.cast<double>();
    CHECK((z * z.transpose() - lap).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((z.transpose() * Eigen::VectorXd::Ones(6)).cwiseAbs().maxCoeff() < 1e-10);
    // deterministic: same input gives the same Z
    CHECK(z == onto_decomposition(AlgorithmicGraph::ring(6)));
  }
}

TEST_CASE("onto decomposition properties on random connected graphs") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 19);
    const auto g = testutil::random_connected_graph(rng, n, 0.4);
    const auto z = onto_decomposition(g);
    const Eigen::MatrixXd lap = structure_matrices(g).laplacian.cast<double>();
    CHECK((z * z.transpose() - lap).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((z.transpose() * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z);
    CHECK(svd.singularValues()(n - 2) > 1e-8 * svd.singularValues()(0));
  }
}

TEST_CASE("closed-form complete decomposition") {
  SUBCASE("coefficient identities up to n = 100") {
    for (int n = 2; n <= 100; ++n) {
      const Eigen::MatrixXd z = complete_graph_z(n);
      for (int i = 1; i <= n - 2; ++i) {
        const double ai = z(i - 1, i - 1), ti = z(i, i - 1), anext = z(i, i);
        CHECK(std::abs(ai * ai - ti * ti - anext * anext) < 1e-12);
      }
      CHECK(std::abs(z(n - 2, n - 2) - std::sqrt(n / 2.0)) < 1e-12);
      CHECK(std::abs(z(n - 1, n - 2) + std::sqrt(n / 2.0)) < 1e-12);
    }
  }
  SUBCASE("row norms and inner products") {
    for (int n : {2, 3, 5, 17, 60, 100}) {
      const Eigen::MatrixXd z = complete_graph_z(n);
      const Eigen::MatrixXd gram = z * z.transpose();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(std::abs(gram(i, j) - (i == j ? n - 1.0 : -1.0)) < 1e-10);
    }
  }
  SUBCASE("lower triangular with positive diagonal") {
    const Eigen::MatrixXd z = complete_graph_z(9);
    for (int i = 0; i < 9; ++i)
      for (int j = i + 1; j < 8; ++j) CHECK(z(i, j) == 0.0);
    for (int j = 0; j < 8; ++j) CHECK(z(j, j) > 0.0);
  }
}

TEST_CASE("predecessor map") {
  SUBCASE("chain") {
    const auto p = predecessor_map({{1, 2}, {2, 3}, {3, 4}}, 4);
    CHECK(p[2] == 1);
    CHECK(p[3] == 2);
    CHECK(p[4] == 3);
  }
  SUBCASE("star") {
    const auto p = predecessor_map({{1, 2}, {1, 3}, {1, 4}}, 4);
    CHECK(p[2] == 1);
    CHECK(p[3] == 1);
    CHECK(p[4] == 1);
  }
  SUBCASE("violations") {
    CHECK_THROWS_AS(predecessor_map({{1, 3}, {2, 3}}, 3), InDegreeViolation);
    CHECK_THROWS_AS(predecessor_map({{1, 2}}, 3), InDegreeViolation);
  }
}

TEST_CASE("complement subgraph") {
  const auto k3 = AlgorithmicGraph::complete(3);
  SUBCASE("set difference") {
    const auto gp = AlgorithmicGraph::build(3, {{1, 3}, {2, 3}});
    CHECK(complement_subgraph(k3, gp).edges() == EdgeList{{1, 2}});
  }
  SUBCASE("identical graphs give the empty edge set") {
    CHECK(complement_subgraph(k3, k3).edge_count() == 0);
  }
  SUBCASE("ring minus sequential") {
    const auto rest = complement_subgraph(AlgorithmicGraph::ring(4), AlgorithmicGraph::sequential(4));
    CHECK(rest.edges() == EdgeList{{1, 4}});
  }
  SUBCASE("not a subgraph") {
    const auto gp = AlgorithmicGraph::build(3, {{1, 2}});
    CHECK_THROWS_AS(complement_subgraph(gp, k3), NotASubgraph);
  }
}

TEST_CASE("algebraic connectivity") {
  CHECK(algebraic_connectivity(AlgorithmicGraph::complete(5)) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(algebraic_connectivity(AlgorithmicGraph::parallel_up(5)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(algebraic_connectivity(AlgorithmicGraph::sequential(4)) ==
        doctest::Approx(2 * (1 - std::cos(3.14159265358979323846 / 4))).epsilon(1e-9));
  CHECK_THROWS_AS(algebraic_connectivity(AlgorithmicGraph::build(4, {{1, 2}, {3, 4}})),
                  NotConnected);
}

TEST_CASE("preset triples") {
  SUBCASE("ring n=4") {
    const auto t = preset_triple(PresetKind::ring, 4);
    CHECK(t.g.edges() == EdgeList{{1, 2}, {1, 4}, {2, 3}, {3, 4}});
    CHECK(t.gp.edges() == EdgeList{{1, 2}, {2, 3}, {3, 4}});
    CHECK(t.gpp_edges == t.gp.edges());
  }
  SUBCASE("sequential n=5 degrees") {
    const auto t = preset_triple(PresetKind::sequential, 5);
    CHECK(t.degrees == std::vector<int>{1, 2, 2, 2, 1});
  }
  SUBCASE("parallel n=4 degrees") {
    const auto t = preset_triple(PresetKind::parallel, 4);
    CHECK(t.degrees == std::vector<int>{3, 1, 1, 1});
  }
  SUBCASE("complete presets differ only in the forward assignment") {
    const auto ts = preset_triple(PresetKind::complete_seq, 4);
    const auto tp = preset_triple(PresetKind::complete_par, 4);
    CHECK(ts.g.edges() == tp.g.edges());
    CHECK(ts.z == tp.z);
    CHECK(ts.p == std::vector<int>{0, 0, 1, 2, 3});
    CHECK(tp.p == std::vector<int>{0, 0, 1, 1, 1});
  }
  SUBCASE("davis_yin is the unique order-2 triple") {
    const auto t = preset_triple(PresetKind::davis_yin, 2);
    CHECK(t.g.edges() == EdgeList{{1, 2}});
    CHECK(t.z(0, 0) == 1.0);
    CHECK(t.z(1, 0) == -1.0);
  }
  SUBCASE("biparallel limit triple") {
    const auto t = preset_triple(PresetKind::biparallel_limit, 4);
    CHECK(t.g.edges() == EdgeList{{1, 2}, {1, 3}, {1, 4}, {2, 4}, {3, 4}});
    CHECK(t.gp.edges() == EdgeList{{1, 4}, {2, 4}, {3, 4}});
    CHECK(t.p == std::vector<int>{0, 0, 1, 1, 1});
  }
  SUBCASE("four-operator triples") {
    const auto t1 = preset_triple(PresetKind::four_op_1, 3);
    const auto t2 = preset_triple(PresetKind::four_op_2, 3);
    CHECK(t1.g.is_complete());
    CHECK(t1.gp.edges() == EdgeList{{1, 3}, {2, 3}});
    CHECK(t1.p[3] == 1);
    CHECK(t2.p[3] == 2);
  }
  SUBCASE("unsupported orders are rejected") {
    CHECK_THROWS_AS(preset_triple(PresetKind::ring, 2), UnsupportedOrder);
    CHECK_THROWS_AS(preset_triple(PresetKind::davis_yin, 3), UnsupportedOrder);
    CHECK_THROWS_AS(preset_triple(PresetKind::four_op_1, 4), UnsupportedOrder);
  }
}

TEST_CASE("triple invariants over presets and random graphs") {
  auto check_triple = [](const GraphTriple& t) {
    const int n = t.order();
    const Eigen::MatrixXd lap = structure_matrices(t.gp).laplacian.cast<double>();
    CHECK((t.z * t.z.transpose() - lap).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((t.z.transpose() * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 2; i <= n; ++i) {
      CHECK(t.p[i] >= 1);
      CHECK(t.p[i] < i);
      CHECK(std::find(t.gpp_edges.begin(), t.gpp_edges.end(), Edge{t.p[i], i}) !=
            t.gpp_edges.end());
    }
  };
  for (int n : {2, 3, 4, 7}) {
    for (auto kind : {PresetKind::ring, PresetKind::sequential, PresetKind::parallel,
                      PresetKind::complete_seq, PresetKind::complete_par, PresetKind::davis_yin,
                      PresetKind::biparallel_limit, PresetKind::four_op_1, PresetKind::four_op_2}) {
      if (!preset_supports(kind, n)) continue;
      check_triple(preset_triple(kind, n));
    }
  }
  // random triples: G random connected, G' = a random spanning tree inside it
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 8);
    const auto g = testutil::random_connected_graph(rng, n, 0.5);
    EdgeList tree;
    for (int i = 2; i <= n; ++i) {
      const auto& in = g.in_neighbors(i);
      tree.emplace_back(in[static_cast<int>(rng.next_u64() % in.size())], i);
    }
    const auto gp = AlgorithmicGraph::build(n, tree, true);
    check_triple(GraphTriple::make(g, gp, tree));
  }
}
