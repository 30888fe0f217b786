#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace t1cp {

// Dense 0-based vertex index.
using Vertex = std::uint32_t;

enum class RootVariant {
  full_degree,  // root has n+1 neighbours, as on the infinite regular tree
  son_only,     // root has n sons and no parent
};

struct TorusShape {
  int d = 1;
  int side = 3;
};

// Level-order indexed rooted tree truncated at `depth`.
//
// son_only:    sons of v are n*v+1 .. n*v+n.
// full_degree: the root's neighbours are 1 .. n+1; for v >= 1 the sons are
//              n*(v-1)+n+2 .. n*(v-1)+2n+1.
// Oriented sons follow the same indexing except that the full_degree root
// keeps only 1 .. n as sons; vertex n+1 stands in for its father.
struct TreeShape {
  int n = 2;
  int depth = 0;
  RootVariant root = RootVariant::son_only;

  std::uint64_t vertex_count() const;
  std::uint64_t first_leaf() const;
  bool is_leaf(std::uint64_t v) const { return v >= first_leaf(); }
  int level(std::uint64_t v) const;
  std::optional<std::uint64_t> parent(std::uint64_t v) const;
  // Number of children in the graph (not the oriented-son count).
  int child_count(std::uint64_t v) const;
  std::uint64_t first_child(std::uint64_t v) const;
  int oriented_son_count(std::uint64_t v) const;
};

struct CustomShape {};

enum class GraphKind { torus, tree, custom };

// Immutable simple undirected graph. Torus and custom graphs, and trees up to
// kMaterializeLimit vertices, keep a CSR adjacency; larger trees answer
// neighbour queries by index arithmetic.
class FiniteGraph {
 public:
  static constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 22;

  static FiniteGraph torus(int d, int side);
  static FiniteGraph tree(int n, int depth, RootVariant root);
  // Edges are unordered pairs; self-loops and duplicates are rejected.
  static FiniteGraph custom(std::size_t vertex_count,
                            std::span<const std::pair<Vertex, Vertex>> edges);

  GraphKind kind() const { return kind_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t degree(Vertex x) const;
  std::size_t edge_count() const;

  // Common degree if the graph is regular.
  std::optional<std::size_t> regular_degree() const;

  template <class F>
  void for_each_neighbor(Vertex x, F&& f) const {
    if (!offsets_.empty()) {
      for (auto i = offsets_[x]; i < offsets_[x + 1]; ++i) f(targets_[i]);
      return;
    }
    const auto p = tree_.parent(x);
    if (p) f(static_cast<Vertex>(*p));
    const auto c = tree_.first_child(x);
    for (int k = 0; k < tree_.child_count(x); ++k) f(static_cast<Vertex>(c + k));
  }

  // Sorted neighbour list.
  std::vector<Vertex> neighbors(Vertex x) const;

  bool is_tree() const { return kind_ == GraphKind::tree; }
  const TreeShape& tree_shape() const;
  const TorusShape& torus_shape() const;

  template <class F>
  void for_each_son(Vertex x, F&& f) const {
    const auto c = tree_shape().first_child(x);
    const int k_max = tree_.oriented_son_count(x);
    for (int k = 0; k < k_max; ++k) f(static_cast<Vertex>(c + k));
  }
  std::vector<Vertex> sons(Vertex x) const;

  // Torus coordinate map: index = sum_i c_i * side^i with c_i in [0, side).
  std::vector<int> coordinates(Vertex x) const;
  Vertex vertex_at(std::span<const int> coords) const;

  std::string describe() const;

 private:
  FiniteGraph() = default;
  void build_csr(const std::vector<std::vector<Vertex>>& adjacency);

  GraphKind kind_ = GraphKind::custom;
  std::size_t vertex_count_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> targets_;
  TorusShape torus_{};
  TreeShape tree_{};
};

inline FiniteGraph build_torus(int d, int side) { return FiniteGraph::torus(d, side); }
inline FiniteGraph build_tree(int n, int depth, RootVariant root) {
  return FiniteGraph::tree(n, depth, root);
}
inline std::size_t degree(const FiniteGraph& g, Vertex x) { return g.degree(x); }

// "torus:d=2,L=32" or "tree:n=3,depth=10,root=son_only". Tree root defaults
// to full_degree.
struct GraphSpec {
  GraphKind kind = GraphKind::torus;
  TorusShape torus{};
  TreeShape tree{};
};
GraphSpec parse_graph_spec(std::string_view text);
FiniteGraph build_graph(const GraphSpec& spec);

// Origin of a torus, root of a tree, vertex 0 otherwise.
inline Vertex default_observed_vertex(const FiniteGraph&) { return 0; }

}  // namespace t1cp
