#include "t1cp/graphs.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace t1cp {

namespace {

constexpr std::uint64_t kMaxVertices = std::numeric_limits<Vertex>::max();

// sum_{l=0}^{levels-1} n^l, saturating at kMaxVertices + 1.
std::uint64_t geometric_count(int n, int levels) {
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  for (int l = 0; l < levels; ++l) {
    total += term;
    if (total > kMaxVertices) return kMaxVertices + 1;
    term *= static_cast<std::uint64_t>(n);
    if (term > kMaxVertices) term = kMaxVertices + 1;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------- TreeShape

std::uint64_t TreeShape::vertex_count() const {
  if (root == RootVariant::son_only) return geometric_count(n, depth + 1);
  if (depth == 0) return 1;
  return 1 + static_cast<std::uint64_t>(n + 1) * geometric_count(n, depth);
}

std::uint64_t TreeShape::first_leaf() const {
  if (depth == 0) return 0;
  if (root == RootVariant::son_only) return geometric_count(n, depth);
  return 1 + static_cast<std::uint64_t>(n + 1) * geometric_count(n, depth - 1);
}

int TreeShape::level(std::uint64_t v) const {
  int l = 0;
  std::uint64_t next = 1;  // first index of level l+1
  std::uint64_t width = (root == RootVariant::son_only) ? n : n + 1;
  while (v >= next) {
    ++l;
    next += width;
    width *= static_cast<std::uint64_t>(n);
  }
  return l;
}

std::optional<std::uint64_t> TreeShape::parent(std::uint64_t v) const {
  if (v == 0) return std::nullopt;
  const auto nn = static_cast<std::uint64_t>(n);
  if (root == RootVariant::son_only) return (v - 1) / nn;
  if (v <= nn + 1) return 0;
  return (v - nn - 2) / nn + 1;
}

int TreeShape::child_count(std::uint64_t v) const {
  if (is_leaf(v)) return 0;
  if (root == RootVariant::full_degree && v == 0) return n + 1;
  return n;
}

std::uint64_t TreeShape::first_child(std::uint64_t v) const {
  const auto nn = static_cast<std::uint64_t>(n);
  if (root == RootVariant::son_only) return nn * v + 1;
  if (v == 0) return 1;
  return nn * (v - 1) + nn + 2;
}

int TreeShape::oriented_son_count(std::uint64_t v) const {
  return is_leaf(v) ? 0 : n;
}

// -------------------------------------------------------------- FiniteGraph

void FiniteGraph::build_csr(const std::vector<std::vector<Vertex>>& adjacency) {
  offsets_.assign(adjacency.size() + 1, 0);
  for (std::size_t v = 0; v < adjacency.size(); ++v)
    offsets_[v + 1] = offsets_[v] + adjacency[v].size();
  targets_.clear();
  targets_.reserve(offsets_.back());
  for (const auto& nbrs : adjacency) targets_.insert(targets_.end(), nbrs.begin(), nbrs.end());
}

FiniteGraph FiniteGraph::torus(int d, int side) {
  if (d < 1) throw std::invalid_argument("torus: d must be >= 1");
  if (side < 3) throw std::invalid_argument("torus: L must be >= 3 (L = 2 creates multi-edges)");
  std::uint64_t count = 1;
  for (int i = 0; i < d; ++i) {
    count *= static_cast<std::uint64_t>(side);
    if (count > (std::uint64_t{1} << 28)) throw std::invalid_argument("torus: too many vertices");
  }
  FiniteGraph g;
  g.kind_ = GraphKind::torus;
  g.vertex_count_ = count;
  g.torus_ = {d, side};

  std::vector<std::vector<Vertex>> adjacency(count);
  std::vector<int> c(d);
  for (std::uint64_t v = 0; v < count; ++v) {
    auto& nbrs = adjacency[v];
    nbrs.reserve(2 * d);
    std::uint64_t stride = 1;
    for (int i = 0; i < d; ++i) {
      const auto ci = static_cast<std::int64_t>((v / stride) % side);
      const auto up = static_cast<std::int64_t>(v) + (((ci + 1) % side) - ci) * static_cast<std::int64_t>(stride);
      const auto down = static_cast<std::int64_t>(v) + (((ci + side - 1) % side) - ci) * static_cast<std::int64_t>(stride);
      nbrs.push_back(static_cast<Vertex>(up));
      nbrs.push_back(static_cast<Vertex>(down));
      stride *= side;
    }
    std::sort(nbrs.begin(), nbrs.end());
  }
  g.build_csr(adjacency);
  return g;
}

FiniteGraph FiniteGraph::tree(int n, int depth, RootVariant root) {
  if (n < 2) throw std::invalid_argument("tree: n must be >= 2");
  if (depth < 0) throw std::invalid_argument("tree: depth must be >= 0");
  FiniteGraph g;
  g.kind_ = GraphKind::tree;
  g.tree_ = {n, depth, root};
  const auto count = g.tree_.vertex_count();
  if (count > kMaxVertices) throw std::invalid_argument("tree: vertex count exceeds 32-bit index range");
  g.vertex_count_ = count;
  if (count <= kMaterializeLimit) {
    std::vector<std::vector<Vertex>> adjacency(count);
    for (std::uint64_t v = 0; v < count; ++v) {
      auto& nbrs = adjacency[v];
      if (const auto p = g.tree_.parent(v)) nbrs.push_back(static_cast<Vertex>(*p));
      const auto c = g.tree_.first_child(v);
      for (int k = 0; k < g.tree_.child_count(v); ++k) nbrs.push_back(static_cast<Vertex>(c + k));
    }
    g.build_csr(adjacency);
  }
  return g;
}

FiniteGraph FiniteGraph::custom(std::size_t vertex_count,
                                std::span<const std::pair<Vertex, Vertex>> edges) {
  if (vertex_count == 0) throw std::invalid_argument("custom graph: vertex_count must be positive");
  std::vector<std::vector<Vertex>> adjacency(vertex_count);
  for (const auto& [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count) throw std::invalid_argument("custom graph: vertex out of range");
    if (a == b) throw std::invalid_argument("custom graph: self-loop");
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (auto& nbrs : adjacency) {
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
      throw std::invalid_argument("custom graph: duplicate edge");
  }
  FiniteGraph g;
  g.kind_ = GraphKind::custom;
  g.vertex_count_ = vertex_count;
  g.build_csr(adjacency);
  return g;
}

std::size_t FiniteGraph::degree(Vertex x) const {
  if (!offsets_.empty()) return offsets_[x + 1] - offsets_[x];
  return (x == 0 ? 0 : 1) + static_cast<std::size_t>(tree_.child_count(x));
}

std::size_t FiniteGraph::edge_count() const {
  if (!offsets_.empty()) return targets_.size() / 2;
  return vertex_count_ - 1;
}

std::optional<std::size_t> FiniteGraph::regular_degree() const {
  const auto r = degree(0);
  if (kind_ == GraphKind::torus) return r;
  if (kind_ == GraphKind::tree) {
    if (vertex_count_ == 1) return 0;
    return std::nullopt;  // leaves have degree 1, interior vertices n+1
  }
  for (Vertex v = 1; v < vertex_count_; ++v)
    if (degree(v) != r) return std::nullopt;
  return r;
}

std::vector<Vertex> FiniteGraph::neighbors(Vertex x) const {
  std::vector<Vertex> out;
  for_each_neighbor(x, [&](Vertex y) { out.push_back(y); });
  std::sort(out.begin(), out.end());
  return out;
}

const TreeShape& FiniteGraph::tree_shape() const {
  if (kind_ != GraphKind::tree) throw std::logic_error("graph is not a tree");
  return tree_;
}

const TorusShape& FiniteGraph::torus_shape() const {
  if (kind_ != GraphKind::torus) throw std::logic_error("graph is not a torus");
  return torus_;
}

std::vector<Vertex> FiniteGraph::sons(Vertex x) const {
  std::vector<Vertex> out;
  for_each_son(x, [&](Vertex y) { out.push_back(y); });
  return out;
}

std::vector<int> FiniteGraph::coordinates(Vertex x) const {
  const auto& t = torus_shape();
  std::vector<int> c(t.d);
  std::uint64_t v = x;
  for (int i = 0; i < t.d; ++i) {
    c[i] = static_cast<int>(v % t.side);
    v /= t.side;
  }
  return c;
}

Vertex FiniteGraph::vertex_at(std::span<const int> coords) const {
  const auto& t = torus_shape();
  if (coords.size() != static_cast<std::size_t>(t.d)) throw std::invalid_argument("vertex_at: wrong dimension");
  std::uint64_t v = 0;
  std::uint64_t stride = 1;
  for (int i = 0; i < t.d; ++i) {
    const int ci = ((coords[i] % t.side) + t.side) % t.side;
    v += static_cast<std::uint64_t>(ci) * stride;
    stride *= t.side;
  }
  return static_cast<Vertex>(v);
}

std::string FiniteGraph::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case GraphKind::torus:
      os << "torus:d=" << torus_.d << ",L=" << torus_.side;
      break;
    case GraphKind::tree:
      os << "tree:n=" << tree_.n << ",depth=" << tree_.depth
         << ",root=" << (tree_.root == RootVariant::son_only ? "son_only" : "full_degree");
      break;
    case GraphKind::custom:
      os << "custom:V=" << vertex_count_;
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------- parsing

namespace {

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument("graph spec: bad integer for '" + std::string(key) + "'");
  return out;
}

}  // namespace

GraphSpec parse_graph_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("graph spec: expected '<kind>:<params>'");
  const auto kind = text.substr(0, colon);
  std::map<std::string, std::string, std::less<>> params;
  auto rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("graph spec: expected key=value");
    params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  auto take = [&](const char* key) -> std::string {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument(std::string("graph spec: missing '") + key + "'");
    auto v = it->second;
    params.erase(it);
    return v;
  };

  GraphSpec spec;
  if (kind == "torus") {
    spec.kind = GraphKind::torus;
    spec.torus.d = parse_int("d", take("d"));
    spec.torus.side = parse_int("L", take("L"));
  } else if (kind == "tree") {
    spec.kind = GraphKind::tree;
    spec.tree.n = parse_int("n", take("n"));
    spec.tree.depth = parse_int("depth", take("depth"));
    spec.tree.root = RootVariant::full_degree;
    if (params.count("root")) {
      const auto r = take("root");
      if (r == "son_only") spec.tree.root = RootVariant::son_only;
      else if (r == "full_degree" || r == "full") spec.tree.root = RootVariant::full_degree;
      else throw std::invalid_argument("graph spec: root must be son_only or full_degree");
    }
  } else {
    throw std::invalid_argument("graph spec: unknown kind '" + std::string(kind) + "'");
  }
  if (!params.empty()) throw std::invalid_argument("graph spec: unknown key '" + params.begin()->first + "'");
  return spec;
}

FiniteGraph build_graph(const GraphSpec& spec) {
  if (spec.kind == GraphKind::torus) return FiniteGraph::torus(spec.torus.d, spec.torus.side);
  if (spec.kind == GraphKind::tree) return FiniteGraph::tree(spec.tree.n, spec.tree.depth, spec.tree.root);
  throw std::invalid_argument("build_graph: custom graphs have no spec string");
}

}  // namespace t1cp
