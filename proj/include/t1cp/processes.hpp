#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "t1cp/clocks.hpp"
#include "t1cp/graphs.hpp"

namespace t1cp {

using BigCount = boost::multiprecision::cpp_int;

// eta in {0,1}^V.
struct SpinConfig {
  std::vector<std::uint8_t> values;

  static SpinConfig all_ones(std::size_t n) { return {std::vector<std::uint8_t>(n, 1)}; }
  static SpinConfig all_zeros(std::size_t n) { return {std::vector<std::uint8_t>(n, 0)}; }
  std::size_t count_ones() const;
  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

// xi in N^V, exact.
struct CountConfig {
  std::vector<BigCount> values;

  static CountConfig all_ones(std::size_t n) { return {std::vector<BigCount>(n, BigCount{1})}; }
  friend bool operator==(const CountConfig&, const CountConfig&) = default;
};

// zeta in [0, inf)^V. values[x] is exact as of last_update[x]; the drift
// exp{(1 - lambda*r)(t - last_update[x])} is applied when x is next touched.
struct RealConfig {
  std::vector<double> values;
  std::vector<double> last_update;

  static RealConfig all_ones(std::size_t n) { return {std::vector<double>(n, 1.0), std::vector<double>(n, 0.0)}; }
};

// Subset of the vertex set, dense membership.
class VertexSet {
 public:
  explicit VertexSet(std::size_t universe) : member_(universe, 0) {}
  static VertexSet singleton(std::size_t universe, Vertex v) {
    VertexSet s(universe);
    s.insert(v);
    return s;
  }

  bool contains(Vertex v) const { return member_[v] != 0; }
  void insert(Vertex v) {
    if (!member_[v]) {
      member_[v] = 1;
      ++size_;
    }
  }
  void erase(Vertex v) {
    if (member_[v]) {
      member_[v] = 0;
      --size_;
    }
  }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::size_t universe() const { return member_.size(); }
  std::vector<Vertex> members() const;
  bool is_superset_of(const VertexSet& other) const;

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.member_ == b.member_; }

 private:
  std::vector<std::uint8_t> member_;
  std::size_t size_ = 0;
};

// --------------------------------------------------------------- step rules

// Heal: eta(x) = 0. Infect: eta(x) = 1 iff eta(x) = 1 or some neighbour is 1.
inline void step_eta(SpinConfig& eta, const Event& e, const FiniteGraph& g) {
  auto& v = eta.values;
  if (e.kind == EventKind::heal) {
    v[e.vertex] = 0;
    return;
  }
  if (v[e.vertex]) return;
  bool any = false;
  g.for_each_neighbor(e.vertex, [&](Vertex y) { any = any || v[y] != 0; });
  if (any) v[e.vertex] = 1;
}

// Heal: xi(x) = 0. Infect: xi(x) += sum of neighbours.
inline void step_xi(CountConfig& xi, const Event& e, const FiniteGraph& g) {
  auto& v = xi.values;
  if (e.kind == EventKind::heal) {
    v[e.vertex] = 0;
    return;
  }
  BigCount sum = 0;
  g.for_each_neighbor(e.vertex, [&](Vertex y) { sum += v[y]; });
  v[e.vertex] += sum;
}

// Drift-corrected linear system on an r-regular graph: between events
// d/dt zeta(x) = (1 - lambda*r) zeta(x); jumps as for xi.
class ZetaStepper {
 public:
  ZetaStepper(const FiniteGraph& g, double lambda);

  double drift_rate() const { return drift_; }
  void sync(RealConfig& z, Vertex x, double t) const {
    const double dt = t - z.last_update[x];
    if (dt > 0.0) {
      if (z.values[x] != 0.0) z.values[x] *= std::exp(drift_ * dt);
      z.last_update[x] = t;
    }
  }
  void sync_all(RealConfig& z, double t) const;
  double value_at(RealConfig& z, Vertex x, double t) const {
    sync(z, x, t);
    return z.values[x];
  }
  void operator()(RealConfig& z, const Event& e) const;

 private:
  const FiniteGraph* graph_;
  double drift_;
};

// One-shot form of ZetaStepper; validates regularity on every call.
void step_zeta(RealConfig& z, const Event& e, const FiniteGraph& g, double lambda);

// Heal: remove x. Infect with x in A: add all neighbours of x.
inline void step_dual(VertexSet& a, const Event& e, const FiniteGraph& g) {
  if (e.kind == EventKind::heal) {
    a.erase(e.vertex);
    return;
  }
  if (!a.contains(e.vertex)) return;
  g.for_each_neighbor(e.vertex, [&](Vertex y) { a.insert(y); });
}

// Heal: remove x. Infect with x in S: replace x by its oriented sons; a leaf
// at the truncation depth has none and is removed.
void step_branch(VertexSet& s, const Event& e, const FiniteGraph& g);

// ------------------------------------------------------------ process types

class EtaProcess {
 public:
  using State = SpinConfig;
  EtaProcess(const FiniteGraph& g, SpinConfig init) : graph_(&g), state_(std::move(init)) {}
  void apply(const Event& e) { step_eta(state_, e, *graph_); }
  const State& state() const { return state_; }
  State snapshot(double) const { return state_; }

 private:
  const FiniteGraph* graph_;
  State state_;
};

class XiProcess {
 public:
  using State = CountConfig;
  XiProcess(const FiniteGraph& g, CountConfig init) : graph_(&g), state_(std::move(init)) {}
  void apply(const Event& e) { step_xi(state_, e, *graph_); }
  const State& state() const { return state_; }
  State snapshot(double) const { return state_; }

 private:
  const FiniteGraph* graph_;
  State state_;
};

class ZetaProcess {
 public:
  using State = RealConfig;
  ZetaProcess(const FiniteGraph& g, double lambda, RealConfig init) : step_(g, lambda), state_(std::move(init)) {}
  void apply(const Event& e) { step_(state_, e); }
  const State& state() const { return state_; }
  // Values brought forward to time t.
  State snapshot(double t) {
    step_.sync_all(state_, t);
    return state_;
  }
  double value_at(Vertex x, double t) { return step_.value_at(state_, x, t); }

 private:
  ZetaStepper step_;
  State state_;
};

class DualProcess {
 public:
  using State = VertexSet;
  DualProcess(const FiniteGraph& g, VertexSet init) : graph_(&g), state_(std::move(init)) {}
  void apply(const Event& e) { step_dual(state_, e, *graph_); }
  const State& state() const { return state_; }
  State snapshot(double) const { return state_; }

 private:
  const FiniteGraph* graph_;
  State state_;
};

// Offspring bookkeeping for S_t: every heal or infect event that hits a
// member resolves it with 0 or n offspring.
struct BranchTally {
  std::uint64_t heals = 0;           // member removed, 0 offspring
  std::uint64_t branchings = 0;      // member replaced by its n sons
  std::uint64_t leaf_removals = 0;   // infect at a truncation leaf
};

class BranchProcess {
 public:
  using State = VertexSet;
  BranchProcess(const FiniteGraph& g, VertexSet init);
  void apply(const Event& e);
  const State& state() const { return state_; }
  State snapshot(double) const { return state_; }
  const BranchTally& tally() const { return tally_; }

 private:
  const FiniteGraph* graph_;
  State state_;
  BranchTally tally_;
};

// Applies events in order; after all events with time <= t_k, records the
// state for observation time t_k. Observation times must be sorted and lie in
// [0, horizon].
template <class Process>
std::vector<typename Process::State> run(Process& process, std::span<const Event> events,
                                         std::span<const double> observe_times, double horizon) {
  double prev = 0.0;
  for (double t : observe_times) {
    if (t < prev) throw std::invalid_argument("run: observation times must be sorted and nonnegative");
    if (t > horizon) throw std::invalid_argument("run: observation time beyond horizon");
    prev = t;
  }
  std::vector<typename Process::State> out;
  out.reserve(observe_times.size());
  std::size_t i = 0;
  for (double t : observe_times) {
    while (i < events.size() && events[i].time <= t) process.apply(events[i++]);
    out.push_back(process.snapshot(t));
  }
  return out;
}

template <class Process>
std::vector<typename Process::State> run(Process& process, const ClockSchedule& schedule,
                                         std::span<const double> observe_times) {
  return run(process, schedule.events(), observe_times, schedule.horizon());
}

// --------------------------------------------------------- coupled runs

// eta from all ones and xi from all ones on the same clocks; number of
// vertices with eta(x) != 1{xi(x) > 0} at each observation time.
std::vector<std::size_t> coupled_run_eta_xi(const ClockSchedule& schedule, const FiniteGraph& g,
                                            std::span<const double> observe_times);

// Same for eta against 1{zeta(x) > 0}.
std::vector<std::size_t> coupled_run_eta_zeta(const ClockSchedule& schedule, const FiniteGraph& g,
                                              std::span<const double> observe_times);

// A_t from {x} and S_t from {x} on the same clocks; true at an observation
// time iff A_t contains S_t.
std::vector<bool> coupled_run_dual_branch(const ClockSchedule& schedule, const FiniteGraph& g, Vertex x,
                                          std::span<const double> observe_times);

// eta from `upper` and from `lower` (lower <= upper pointwise) on the same
// clocks; true iff the order is preserved at each observation time.
std::vector<bool> coupled_run_attractive(const ClockSchedule& schedule, const FiniteGraph& g,
                                         const SpinConfig& upper, const SpinConfig& lower,
                                         std::span<const double> observe_times);

}  // namespace t1cp
