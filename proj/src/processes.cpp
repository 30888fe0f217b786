#include "t1cp/processes.hpp"

#include <algorithm>

namespace t1cp {

std::size_t SpinConfig::count_ones() const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::uint8_t{1}));
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  out.reserve(size_);
  for (std::size_t v = 0; v < member_.size(); ++v)
    if (member_[v]) out.push_back(static_cast<Vertex>(v));
  return out;
}

bool VertexSet::is_superset_of(const VertexSet& other) const {
  if (other.member_.size() != member_.size()) return false;
  for (std::size_t v = 0; v < member_.size(); ++v)
    if (other.member_[v] && !member_[v]) return false;
  return true;
}

ZetaStepper::ZetaStepper(const FiniteGraph& g, double lambda) : graph_(&g) {
  const auto r = g.regular_degree();
  if (!r) throw std::invalid_argument("zeta dynamics need a regular graph");
  drift_ = 1.0 - lambda * static_cast<double>(*r);
}

void ZetaStepper::sync_all(RealConfig& z, double t) const {
  for (Vertex x = 0; x < z.values.size(); ++x) sync(z, x, t);
}

void ZetaStepper::operator()(RealConfig& z, const Event& e) const {
  sync(z, e.vertex, e.time);
  if (e.kind == EventKind::heal) {
    z.values[e.vertex] = 0.0;
    return;
  }
  double sum = 0.0;
  graph_->for_each_neighbor(e.vertex, [&](Vertex y) {
    sync(z, y, e.time);
    sum += z.values[y];
  });
  z.values[e.vertex] += sum;
}

void step_zeta(RealConfig& z, const Event& e, const FiniteGraph& g, double lambda) {
  ZetaStepper(g, lambda)(z, e);
}

void step_branch(VertexSet& s, const Event& e, const FiniteGraph& g) {
  if (!g.is_tree()) throw std::invalid_argument("branching process needs a tree");
  if (!s.contains(e.vertex)) return;
  s.erase(e.vertex);
  if (e.kind == EventKind::infect) g.for_each_son(e.vertex, [&](Vertex y) { s.insert(y); });
}

BranchProcess::BranchProcess(const FiniteGraph& g, VertexSet init) : graph_(&g), state_(std::move(init)) {
  if (!g.is_tree()) throw std::invalid_argument("branching process needs a tree");
}

void BranchProcess::apply(const Event& e) {
  if (!state_.contains(e.vertex)) return;
  if (e.kind == EventKind::heal) ++tally_.heals;
  else if (graph_->tree_shape().is_leaf(e.vertex)) ++tally_.leaf_removals;
  else ++tally_.branchings;
  step_branch(state_, e, *graph_);
}

std::vector<std::size_t> coupled_run_eta_xi(const ClockSchedule& schedule, const FiniteGraph& g,
                                            std::span<const double> observe_times) {
  const auto n = g.vertex_count();
  EtaProcess eta(g, SpinConfig::all_ones(n));
  XiProcess xi(g, CountConfig::all_ones(n));
  const auto a = run(eta, schedule, observe_times);
  const auto b = run(xi, schedule, observe_times);
  std::vector<std::size_t> mismatches(observe_times.size(), 0);
  for (std::size_t k = 0; k < observe_times.size(); ++k)
    for (std::size_t x = 0; x < n; ++x)
      if ((a[k].values[x] != 0) != (b[k].values[x] > 0)) ++mismatches[k];
  return mismatches;
}

std::vector<std::size_t> coupled_run_eta_zeta(const ClockSchedule& schedule, const FiniteGraph& g,
                                              std::span<const double> observe_times) {
  const auto n = g.vertex_count();
  EtaProcess eta(g, SpinConfig::all_ones(n));
  ZetaProcess zeta(g, schedule.lambda(), RealConfig::all_ones(n));
  const auto a = run(eta, schedule, observe_times);
  const auto b = run(zeta, schedule, observe_times);
  std::vector<std::size_t> mismatches(observe_times.size(), 0);
  for (std::size_t k = 0; k < observe_times.size(); ++k)
    for (std::size_t x = 0; x < n; ++x)
      if ((a[k].values[x] != 0) != (b[k].values[x] > 0.0)) ++mismatches[k];
  return mismatches;
}

std::vector<bool> coupled_run_dual_branch(const ClockSchedule& schedule, const FiniteGraph& g, Vertex x,
                                          std::span<const double> observe_times) {
  const auto n = g.vertex_count();
  DualProcess dual(g, VertexSet::singleton(n, x));
  BranchProcess branch(g, VertexSet::singleton(n, x));
  const auto a = run(dual, schedule, observe_times);
  const auto b = run(branch, schedule, observe_times);
  std::vector<bool> ok(observe_times.size());
  for (std::size_t k = 0; k < ok.size(); ++k) ok[k] = a[k].is_superset_of(b[k]);
  return ok;
}

std::vector<bool> coupled_run_attractive(const ClockSchedule& schedule, const FiniteGraph& g,
                                         const SpinConfig& upper, const SpinConfig& lower,
                                         std::span<const double> observe_times) {
  EtaProcess hi(g, upper);
  EtaProcess lo(g, lower);
  const auto a = run(hi, schedule, observe_times);
  const auto b = run(lo, schedule, observe_times);
  std::vector<bool> ok(observe_times.size());
  for (std::size_t k = 0; k < ok.size(); ++k) {
    ok[k] = true;
    for (std::size_t x = 0; x < a[k].values.size(); ++x)
      if (b[k].values[x] > a[k].values[x]) ok[k] = false;
  }
  return ok;
}

}  // namespace t1cp
