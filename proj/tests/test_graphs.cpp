#include <doctest.h>

#include <algorithm>
#include <set>

#include "t1cp/graphs.hpp"

using namespace t1cp;

namespace {

void check_simple_symmetric(const FiniteGraph& g) {
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto nb = g.neighbors(x);
    REQUIRE(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
    for (Vertex y : nb) {
      REQUIRE(y != x);
      const auto back = g.neighbors(y);
      REQUIRE(std::binary_search(back.begin(), back.end(), x));
    }
    CHECK(nb.size() == g.degree(x));
  }
}

}  // namespace

TEST_SUITE("graphs") {
  TEST_CASE("torus sizes and degrees") {
    const auto c4 = build_torus(1, 4);
    CHECK(c4.vertex_count() == 4);
    for (Vertex v = 0; v < 4; ++v) CHECK(degree(c4, v) == 2);
    CHECK(c4.neighbors(0) == std::vector<Vertex>{1, 3});

    const auto t23 = build_torus(2, 3);
    CHECK(t23.vertex_count() == 9);
    for (Vertex v = 0; v < 9; ++v) CHECK(t23.degree(v) == 4);
    CHECK(t23.regular_degree() == 4u);
    CHECK(build_torus(2, 8).degree(17) == 4);
  }

  TEST_CASE("torus origin neighbours by coordinate enumeration") {
    const auto g = build_torus(3, 5);
    REQUIRE(g.vertex_count() == 125);
    std::vector<Vertex> expect;
    for (int axis = 0; axis < 3; ++axis)
      for (int s : {1, 4}) {  // +1 and -1 mod 5
        int c[3] = {0, 0, 0};
        c[axis] = s;
        expect.push_back(static_cast<Vertex>(c[0] + 5 * c[1] + 25 * c[2]));
      }
    std::sort(expect.begin(), expect.end());
    CHECK(g.neighbors(0) == expect);
  }

  TEST_CASE("torus coordinates round trip and translation invariance") {
    const auto g = build_torus(2, 6);
    const int shift[2] = {2, 5};
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      const auto c = g.coordinates(v);
      CHECK(g.vertex_at(c) == v);
      auto moved = [&](Vertex u) {
        auto cu = g.coordinates(u);
        for (int i = 0; i < 2; ++i) cu[i] += shift[i];
        return g.vertex_at(cu);
      };
      std::vector<Vertex> image;
      for (Vertex y : g.neighbors(v)) image.push_back(moved(y));
      std::sort(image.begin(), image.end());
      CHECK(image == g.neighbors(moved(v)));
    }
  }

  TEST_CASE("torus rejects small side") {
    CHECK_THROWS_AS(build_torus(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_torus(0, 4), std::invalid_argument);
  }

  TEST_CASE("simplicity and symmetry") {
    check_simple_symmetric(build_torus(1, 3));
    check_simple_symmetric(build_torus(2, 4));
    check_simple_symmetric(build_torus(3, 3));
    check_simple_symmetric(build_tree(2, 5, RootVariant::son_only));
    check_simple_symmetric(build_tree(3, 4, RootVariant::full_degree));
  }

  TEST_CASE("tree vertex counts") {
    const auto single = build_tree(3, 0, RootVariant::son_only);
    CHECK(single.vertex_count() == 1);
    CHECK(single.edge_count() == 0);
    CHECK(single.degree(0) == 0);

    const auto t = build_tree(3, 2, RootVariant::son_only);
    CHECK(t.vertex_count() == 13);
    CHECK(degree(t, 0) == 3);
    CHECK(degree(t, 12) == 1);
    CHECK(t.edge_count() == 12);

    const auto f = build_tree(4, 3, RootVariant::full_degree);
    CHECK(f.vertex_count() == 1 + 5 + 5 * 4 + 5 * 16);
    CHECK(f.degree(0) == 5);
    CHECK(f.degree(1) == 5);
    CHECK_FALSE(f.regular_degree().has_value());
  }

  TEST_CASE("oriented sons form a forest with n sons per interior vertex") {
    for (auto root : {RootVariant::son_only, RootVariant::full_degree}) {
      const int n = 3;
      const auto g = build_tree(n, 4, root);
      const auto& shape = g.tree_shape();
      std::vector<int> fathers(g.vertex_count(), 0);
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const auto sons = g.sons(v);
        const auto nb = g.neighbors(v);
        for (Vertex s : sons) {
          CHECK(std::binary_search(nb.begin(), nb.end(), s));
          ++fathers[s];
        }
        CHECK(sons.size() == (shape.is_leaf(v) ? 0u : static_cast<std::size_t>(n)));
      }
      for (Vertex v = 1; v < g.vertex_count(); ++v) {
        // vertex n+1 is the full_degree root's stand-in father
        const int expect = (root == RootVariant::full_degree && v == static_cast<Vertex>(n + 1)) ? 0 : 1;
        CHECK(fathers[v] == expect);
      }
      CHECK(fathers[0] == 0);
    }
  }

  TEST_CASE("large trees answer by index arithmetic") {
    const auto g = build_tree(2, 22, RootVariant::son_only);
    REQUIRE(g.vertex_count() > FiniteGraph::kMaterializeLimit);
    for (Vertex v : {0u, 1u, 2u, 1000u, 123456u, 4194302u, 8388606u}) {
      std::vector<Vertex> expect;
      if (v > 0) expect.push_back((v - 1) / 2);
      if (2ull * v + 2 < g.vertex_count()) {
        expect.push_back(2 * v + 1);
        expect.push_back(2 * v + 2);
      }
      std::sort(expect.begin(), expect.end());
      CHECK(g.neighbors(v) == expect);
      CHECK(g.degree(v) == expect.size());
    }
  }

  TEST_CASE("custom graphs") {
    const std::pair<Vertex, Vertex> cycle[] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    const auto g = FiniteGraph::custom(4, cycle);
    CHECK(g.regular_degree() == 2u);
    check_simple_symmetric(g);
    const std::pair<Vertex, Vertex> loop[] = {{0, 0}};
    CHECK_THROWS_AS(FiniteGraph::custom(2, loop), std::invalid_argument);
    const std::pair<Vertex, Vertex> dup[] = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(FiniteGraph::custom(2, dup), std::invalid_argument);
    const std::pair<Vertex, Vertex> path[] = {{0, 1}, {1, 2}};
    CHECK_FALSE(FiniteGraph::custom(3, path).regular_degree().has_value());
  }

  TEST_CASE("graph spec strings") {
    const auto t = build_graph(parse_graph_spec("torus:d=2,L=32"));
    CHECK(t.vertex_count() == 1024);
    CHECK(t.describe() == "torus:d=2,L=32");
    const auto s = parse_graph_spec("tree:n=3,depth=10,root=son_only");
    CHECK(s.tree.root == RootVariant::son_only);
    CHECK(parse_graph_spec("tree:n=3,depth=2").tree.root == RootVariant::full_degree);
    CHECK_THROWS_AS(parse_graph_spec("torus:d=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_spec("ring:n=3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_spec("torus:d=2,L=8,x=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_spec("tree:n=3,depth=2,root=upside"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_spec("torus:d=two,L=8"), std::invalid_argument);
  }
}
