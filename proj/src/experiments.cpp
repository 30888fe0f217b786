#include "t1cp/experiments.hpp"

#include <algorithm>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "t1cp/clocks.hpp"
#include "t1cp/moments.hpp"
#include "t1cp/parallel.hpp"
#include "t1cp/processes.hpp"
#include "t1cp/rng.hpp"
#include "t1cp/walk.hpp"

namespace t1cp {

namespace {

// Sub-experiment tags for replica_seed.
constexpr std::uint64_t kTagEta = 0x65746100;
constexpr std::uint64_t kTagDual = 0x64756100;

constexpr std::int64_t kChunk = 128;

// Runs replicas [0, replicas) in fixed chunks; fn(i, acc) adds replica i to
// the chunk accumulator. Accumulators come back in chunk order.
template <class Acc, class F>
std::vector<Acc> run_chunked(std::int64_t replicas, F&& fn) {
  const std::int64_t chunks = (replicas + kChunk - 1) / kChunk;
  std::vector<Acc> acc(static_cast<std::size_t>(chunks));
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(replicas, begin + kChunk);
    for (std::int64_t i = begin; i < end; ++i) fn(i, acc[c]);
  });
  return acc;
}

void check_common(const FiniteGraph& g, double lambda, double t, Vertex x, std::int64_t replicas) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  if (x >= g.vertex_count()) throw std::invalid_argument("observed vertex out of range");
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
}

std::int64_t poisson_count(CounterRng& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  return boost::random::poisson_distribution<std::int64_t, double>(mean)(rng);
}

// eta from all ones on the superposed clock: in each observation interval a
// Poisson number of events, each at a uniform vertex, infect with
// probability lambda / (1 + lambda). Writes eta_{t_k}(x) to out[k].
void forward_eta(const FiniteGraph& g, double lambda, std::span<const double> times, Vertex x, CounterRng& rng,
                 std::vector<std::uint8_t>& eta, std::vector<std::uint8_t>& out) {
  const std::size_t n = g.vertex_count();
  eta.assign(n, 1);
  std::size_t ones = n;
  const double p_infect = lambda / (1.0 + lambda);
  const double rate = static_cast<double>(n) * (1.0 + lambda);
  double prev = 0.0;
  out.assign(times.size(), 0);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (ones > 0) {
      const auto events = poisson_count(rng, rate * (times[k] - prev));
      for (std::int64_t i = 0; i < events; ++i) {
        const auto v = static_cast<Vertex>(bounded_draw(rng, n));
        if (unit_draw(rng) < p_infect) {
          if (eta[v]) continue;
          bool any = false;
          g.for_each_neighbor(v, [&](Vertex y) { any = any || eta[y] != 0; });
          if (any) {
            eta[v] = 1;
            ++ones;
          }
        } else if (eta[v]) {
          eta[v] = 0;
          if (--ones == 0) break;
        }
      }
    }
    out[k] = ones > 0 ? eta[x] : 0;
    prev = times[k];
  }
}

// eta from all ones on the per-vertex clock streams of replica seed `seed`.
bool clocks_eta(const FiniteGraph& g, double lambda, double t, Vertex x, std::uint64_t seed) {
  LazyEventStream stream(g.vertex_count(), lambda, t, seed);
  EtaProcess eta(g, SpinConfig::all_ones(g.vertex_count()));
  while (auto e = stream.next()) eta.apply(*e);
  return eta.state().values[x] != 0;
}

// Per-thread membership scratch for A_t; pos[v] = slot in members or -1.
struct DualScratch {
  std::vector<std::int32_t> pos;
  std::vector<Vertex> members;
};

DualScratch& dual_scratch(std::size_t n) {
  thread_local DualScratch s;
  if (s.pos.size() < n) s.pos.assign(n, -1);
  return s;
}

enum class DualOutcome { died, survived, capped };

// A_t from {x}: only events at members change A, so the run draws events at
// total rate |A| (1 + lambda) on a uniform member.
DualOutcome dual_run(const FiniteGraph& g, double lambda, double t, Vertex x, CounterRng& rng, std::size_t cap) {
  auto& s = dual_scratch(g.vertex_count());
  auto& members = s.members;
  auto& pos = s.pos;
  members.clear();
  auto insert = [&](Vertex v) {
    if (pos[v] < 0) {
      pos[v] = static_cast<std::int32_t>(members.size());
      members.push_back(v);
    }
  };
  insert(x);
  const double p_infect = lambda / (1.0 + lambda);
  double now = 0.0;
  DualOutcome outcome = DualOutcome::survived;
  for (;;) {
    if (members.empty()) {
      outcome = DualOutcome::died;
      break;
    }
    if (cap > 0 && members.size() >= cap) {
      outcome = DualOutcome::capped;
      break;
    }
    now += exponential_draw(rng, static_cast<double>(members.size()) * (1.0 + lambda));
    if (now > t) break;
    const auto slot = bounded_draw(rng, members.size());
    const Vertex v = members[slot];
    if (unit_draw(rng) < p_infect) {
      g.for_each_neighbor(v, insert);
    } else {
      pos[members.back()] = static_cast<std::int32_t>(slot);
      members[slot] = members.back();
      members.pop_back();
      pos[v] = -1;
    }
  }
  for (Vertex v : members) pos[v] = -1;
  members.clear();
  return outcome;
}

struct Count {
  std::int64_t trials = 0;
  std::int64_t hits = 0;
};

Estimate reduce_counts(const std::vector<Count>& parts, std::uint64_t seed) {
  std::int64_t trials = 0, hits = 0;
  for (const auto& c : parts) {
    trials += c.trials;
    hits += c.hits;
  }
  return binomial_estimate(hits, trials, seed);
}

Estimate eta_side(const FiniteGraph& g, double lambda, double t, Vertex x, std::int64_t replicas, std::uint64_t seed,
                  SurvivalMethod method) {
  const std::uint64_t master = replica_seed(seed, kTagEta);
  const double times[1] = {t};
  auto parts = run_chunked<Count>(replicas, [&](std::int64_t i, Count& c) {
    ++c.trials;
    const auto rs = replica_seed(master, static_cast<std::uint64_t>(i));
    if (method == SurvivalMethod::clocks) {
      if (clocks_eta(g, lambda, t, x, rs)) ++c.hits;
      return;
    }
    thread_local std::vector<std::uint8_t> eta, out;
    CounterRng rng(rs);
    forward_eta(g, lambda, times, x, rng, eta, out);
    if (out[0]) ++c.hits;
  });
  return reduce_counts(parts, seed);
}

Estimate dual_side(const FiniteGraph& g, double lambda, double t, Vertex x, std::int64_t replicas, std::uint64_t seed,
                   std::size_t cap) {
  const std::uint64_t master = replica_seed(seed, kTagDual);
  auto parts = run_chunked<Count>(replicas, [&](std::int64_t i, Count& c) {
    ++c.trials;
    CounterRng rng(replica_seed(master, static_cast<std::uint64_t>(i)));
    if (dual_run(g, lambda, t, x, rng, cap) != DualOutcome::died) ++c.hits;
  });
  return reduce_counts(parts, seed);
}

struct Moments {
  std::vector<double> sum, sum_sq;
  std::int64_t count = 0;
};

std::vector<Estimate> reduce_moments(const std::vector<Moments>& parts, std::size_t k, std::uint64_t seed) {
  std::vector<double> sum(k, 0.0), sq(k, 0.0);
  std::int64_t n = 0;
  for (const auto& p : parts) {
    if (p.count == 0) continue;
    n += p.count;
    for (std::size_t j = 0; j < k; ++j) {
      sum[j] += p.sum[j];
      sq[j] += p.sum_sq[j];
    }
  }
  std::vector<Estimate> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double mean = sum[j] / n;
    const double var = n > 1 ? std::max(0.0, (sq[j] - n * mean * mean) / (n - 1)) : 0.0;
    out[j] = {mean, std::sqrt(var / n), n, seed};
  }
  return out;
}

void check_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= prev)) throw std::invalid_argument("observation times must be sorted and nonnegative");
    prev = t;
  }
}

}  // namespace

Estimate binomial_estimate(std::int64_t successes, std::int64_t replicas, std::uint64_t seed) {
  if (replicas < 1) throw std::invalid_argument("estimate needs at least one replica");
  const double p = static_cast<double>(successes) / static_cast<double>(replicas);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicas)), replicas, seed};
}

double z_score(const Estimate& a, const Estimate& b) {
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  const double diff = std::fabs(a.value - b.value);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

std::string to_string(SurvivalMethod m) {
  switch (m) {
    case SurvivalMethod::automatic: return "auto";
    case SurvivalMethod::forward: return "forward";
    case SurvivalMethod::clocks: return "clocks";
    case SurvivalMethod::dual: return "dual";
  }
  return "?";
}

SurvivalMethod resolve_method(const FiniteGraph& g, double lambda, double t, const SurvivalOptions& options) {
  if (options.method != SurvivalMethod::automatic) return options.method;
  const double cost = static_cast<double>(g.vertex_count()) * (1.0 + lambda) * t;
  return cost > options.forward_budget ? SurvivalMethod::dual : SurvivalMethod::forward;
}

Estimate survival_probability(const FiniteGraph& g, double lambda, double t, Vertex x, std::int64_t replicas,
                              std::uint64_t seed, SurvivalOptions options) {
  check_common(g, lambda, t, x, replicas);
  if (replicas < 100) throw std::invalid_argument("survival_probability needs at least 100 replicas");
  const auto method = resolve_method(g, lambda, t, options);
  if (method == SurvivalMethod::dual) return dual_side(g, lambda, t, x, replicas, seed, options.dual_cap);
  return eta_side(g, lambda, t, x, replicas, seed, method);
}

DualityResult duality_check(const FiniteGraph& g, Vertex x, double lambda, double t, std::int64_t replicas,
                            std::uint64_t seed) {
  check_common(g, lambda, t, x, replicas);
  if (replicas < 100) throw std::invalid_argument("duality_check needs at least 100 replicas per side");
  DualityResult r;
  r.p_eta = eta_side(g, lambda, t, x, replicas, seed, SurvivalMethod::forward);
  r.p_dual = dual_side(g, lambda, t, x, replicas, seed, 0);
  r.z = z_score(r.p_eta, r.p_dual);
  return r;
}

std::vector<Estimate> mean_xi(const FiniteGraph& g, double lambda, std::span<const double> times, Vertex x,
                              std::int64_t replicas, std::uint64_t seed) {
  check_common(g, lambda, 0.0, x, replicas);
  check_times(times);
  const std::size_t n = g.vertex_count();
  const std::size_t k = times.size();
  const double p_infect = lambda / (1.0 + lambda);
  const double rate = static_cast<double>(n) * (1.0 + lambda);
  const std::uint64_t master = replica_seed(seed, kTagEta);
  auto parts = run_chunked<Moments>(replicas, [&](std::int64_t i, Moments& m) {
    if (m.sum.empty()) m.sum.assign(k, 0.0), m.sum_sq.assign(k, 0.0);
    CounterRng rng(replica_seed(master, static_cast<std::uint64_t>(i)));
    auto xi = CountConfig::all_ones(n);
    double prev = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto events = poisson_count(rng, rate * (times[j] - prev));
      for (std::int64_t e = 0; e < events; ++e) {
        Event ev;
        ev.vertex = static_cast<Vertex>(bounded_draw(rng, n));
        ev.kind = unit_draw(rng) < p_infect ? EventKind::infect : EventKind::heal;
        step_xi(xi, ev, g);
      }
      const double v = static_cast<double>(xi.values[x]);
      m.sum[j] += v;
      m.sum_sq[j] += v * v;
      prev = times[j];
    }
    ++m.count;
  });
  return reduce_moments(parts, k, seed);
}

std::vector<Estimate> mean_zeta(const FiniteGraph& g, double lambda, std::span<const double> times, Vertex x,
                                std::int64_t replicas, std::uint64_t seed) {
  check_common(g, lambda, 0.0, x, replicas);
  check_times(times);
  const ZetaStepper stepper(g, lambda);
  const std::size_t n = g.vertex_count();
  const std::size_t k = times.size();
  const double p_infect = lambda / (1.0 + lambda);
  const double rate = static_cast<double>(n) * (1.0 + lambda);
  const std::uint64_t master = replica_seed(seed, kTagEta);
  auto parts = run_chunked<Moments>(replicas, [&](std::int64_t i, Moments& m) {
    if (m.sum.empty()) m.sum.assign(k, 0.0), m.sum_sq.assign(k, 0.0);
    CounterRng rng(replica_seed(master, static_cast<std::uint64_t>(i)));
    auto z = RealConfig::all_ones(n);
    double now = exponential_draw(rng, rate);
    for (std::size_t j = 0; j < k; ++j) {
      while (now <= times[j]) {
        Event ev;
        ev.time = now;
        ev.vertex = static_cast<Vertex>(bounded_draw(rng, n));
        ev.kind = unit_draw(rng) < p_infect ? EventKind::infect : EventKind::heal;
        stepper(z, ev);
        now += exponential_draw(rng, rate);
      }
      const double v = stepper.value_at(z, x, times[j]);
      m.sum[j] += v;
      m.sum_sq[j] += v * v;
    }
    ++m.count;
  });
  return reduce_moments(parts, k, seed);
}

// -------------------------------------------------------------- branching

namespace {

struct BranchAcc {
  std::int64_t trials = 0;
  std::int64_t alive = 0;
  std::int64_t capped = 0;
  std::uint64_t heals = 0, branchings = 0, leaf_removals = 0, leaf_heals = 0;
};

BranchingReport finish_branching(int n, int depth, double lambda, double t, std::uint64_t seed,
                                 const std::vector<BranchAcc>& parts) {
  BranchingReport r;
  r.n = n;
  r.depth = depth;
  r.lambda = lambda;
  r.t = t;
  BranchAcc total;
  for (const auto& p : parts) {
    total.trials += p.trials;
    total.alive += p.alive;
    total.capped += p.capped;
    total.heals += p.heals;
    total.branchings += p.branchings;
    total.leaf_removals += p.leaf_removals;
    total.leaf_heals += p.leaf_heals;
  }
  r.survival = binomial_estimate(total.alive, total.trials, seed);
  r.capped = total.capped;
  r.heals = total.heals;
  r.branchings = total.branchings;
  r.leaf_removals = total.leaf_removals;
  r.leaf_heals = total.leaf_heals;
  const double events = static_cast<double>(total.heals + total.branchings);
  if (events > 0) {
    const double p = static_cast<double>(total.branchings) / events;
    r.offspring_mean = n * p;
    r.offspring_se = n * std::sqrt(p * (1.0 - p) / events);
  }
  r.offspring_expected = n * lambda / (lambda + 1.0);
  return r;
}

void check_branching(int n, double lambda, double t, std::int64_t replicas) {
  if (n < 2) throw std::invalid_argument("branching: n must be >= 2");
  if (!(lambda >= 0.0)) throw std::invalid_argument("branching: lambda must be >= 0");
  if (!(t >= 0.0)) throw std::invalid_argument("branching: t must be >= 0");
  if (replicas < 1) throw std::invalid_argument("branching: replicas must be >= 1");
}

}  // namespace

BranchingReport branching_survival(int n, double lambda, double t, int depth, std::int64_t replicas,
                                   std::uint64_t seed) {
  check_branching(n, lambda, t, replicas);
  if (depth < 0) throw std::invalid_argument("branching: depth must be >= 0");
  const double p_infect = lambda / (1.0 + lambda);
  auto parts = run_chunked<BranchAcc>(replicas, [&](std::int64_t i, BranchAcc& acc) {
    CounterRng rng(replica_seed(seed, static_cast<std::uint64_t>(i)));
    std::vector<std::uint64_t> at_depth(depth + 1, 0);
    at_depth[0] = 1;
    std::uint64_t total = 1;
    double now = 0.0;
    ++acc.trials;
    while (total > 0) {
      now += exponential_draw(rng, static_cast<double>(total) * (1.0 + lambda));
      if (now > t) break;
      auto r = bounded_draw(rng, total);
      int k = 0;
      while (r >= at_depth[k]) r -= at_depth[k++];
      const bool infect = unit_draw(rng) < p_infect;
      --at_depth[k];
      --total;
      if (k == depth) {
        ++(infect ? acc.leaf_removals : acc.leaf_heals);
      } else if (infect) {
        ++acc.branchings;
        at_depth[k + 1] += static_cast<std::uint64_t>(n);
        total += static_cast<std::uint64_t>(n);
      } else {
        ++acc.heals;
      }
    }
    if (total > 0) ++acc.alive;
  });
  return finish_branching(n, depth, lambda, t, seed, parts);
}

BranchingReport branching_survival_untruncated(int n, double lambda, double t, std::int64_t replicas,
                                               std::uint64_t seed, std::uint64_t population_cap) {
  check_branching(n, lambda, t, replicas);
  if (population_cap < 1) throw std::invalid_argument("branching: population cap must be >= 1");
  const double p_infect = lambda / (1.0 + lambda);
  auto parts = run_chunked<BranchAcc>(replicas, [&](std::int64_t i, BranchAcc& acc) {
    CounterRng rng(replica_seed(seed, static_cast<std::uint64_t>(i)));
    std::uint64_t total = 1;
    double now = 0.0;
    ++acc.trials;
    while (total > 0 && total < population_cap) {
      now += exponential_draw(rng, static_cast<double>(total) * (1.0 + lambda));
      if (now > t) break;
      if (unit_draw(rng) < p_infect) {
        ++acc.branchings;
        total += static_cast<std::uint64_t>(n) - 1;
      } else {
        ++acc.heals;
        --total;
      }
    }
    if (total >= population_cap) ++acc.capped;
    if (total > 0) ++acc.alive;
  });
  return finish_branching(n, -1, lambda, t, seed, parts);
}

double branching_extinction_probability(int n, double lambda) {
  if (n < 1 || !(lambda >= 0.0)) throw std::invalid_argument("extinction probability: bad parameters");
  double q = 0.0;
  for (int i = 0; i < 10'000'000; ++i) {
    const double next = (1.0 + lambda * std::pow(q, n)) / (1.0 + lambda);
    if (std::fabs(next - q) < 1e-15) return next;
    q = next;
  }
  return q;
}

// ------------------------------------------------------------------ scan

ScanResult lambda_scan(const FiniteGraph& g, std::span<const double> grid, double t, Vertex x,
                       std::int64_t replicas, std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("lambda_scan: empty grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0)) throw std::invalid_argument("lambda_scan: rates must be >= 0");
    if (j > 0 && grid[j] < grid[j - 1]) throw std::invalid_argument("lambda_scan: grid must be sorted ascending");
  }
  check_common(g, grid.back(), t, x, replicas);
  const double top = grid.back();
  const std::size_t n = g.vertex_count();
  const std::size_t k = grid.size();
  std::vector<double> keep(k);
  for (std::size_t j = 0; j < k; ++j) keep[j] = top > 0.0 ? grid[j] / top : 1.0;
  const double p_infect = top / (1.0 + top);
  const double rate = static_cast<double>(n) * (1.0 + top);

  struct ScanAcc {
    std::vector<std::int64_t> hits;
    std::int64_t trials = 0;
    std::int64_t violations = 0;
  };
  const std::uint64_t master = replica_seed(seed, kTagEta);
  auto parts = run_chunked<ScanAcc>(replicas, [&](std::int64_t i, ScanAcc& acc) {
    if (acc.hits.empty()) acc.hits.assign(k, 0);
    CounterRng rng(replica_seed(master, static_cast<std::uint64_t>(i)));
    std::vector<std::vector<std::uint8_t>> eta(k, std::vector<std::uint8_t>(n, 1));
    std::vector<std::size_t> ones(k, n);
    std::size_t live = k;
    const auto events = poisson_count(rng, rate * t);
    for (std::int64_t e = 0; e < events && live > 0; ++e) {
      const auto v = static_cast<Vertex>(bounded_draw(rng, n));
      const double u = unit_draw(rng);
      const bool infect = u < p_infect;
      const double mark = u / p_infect;
      for (std::size_t j = 0; j < k; ++j) {
        if (ones[j] == 0) continue;
        auto& s = eta[j];
        if (infect) {
          if (mark >= keep[j] || s[v]) continue;
          bool any = false;
          g.for_each_neighbor(v, [&](Vertex y) { any = any || s[y] != 0; });
          if (any) {
            s[v] = 1;
            ++ones[j];
          }
        } else if (s[v]) {
          s[v] = 0;
          if (--ones[j] == 0) --live;
        }
      }
    }
    ++acc.trials;
    bool prev = false;
    for (std::size_t j = 0; j < k; ++j) {
      const bool alive = ones[j] > 0 && eta[j][x] != 0;
      if (alive) ++acc.hits[j];
      if (j > 0 && prev && !alive) ++acc.violations;
      prev = alive;
    }
  });
  ScanResult out;
  std::vector<std::int64_t> hits(k, 0);
  std::int64_t trials = 0;
  for (const auto& p : parts) {
    trials += p.trials;
    out.monotonicity_violations += p.violations;
    for (std::size_t j = 0; j < k && !p.hits.empty(); ++j) hits[j] += p.hits[j];
  }
  for (std::size_t j = 0; j < k; ++j) out.rows.push_back({grid[j], binomial_estimate(hits[j], trials, seed)});
  return out;
}

// -------------------------------------------------------------- critical

CriticalResult critical_estimate(const FiniteGraph& g, double lo, double hi, const CriticalOptions& o) {
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("critical_estimate: need 0 <= lo < hi");
  if (!(o.tol > 0.0)) throw std::invalid_argument("critical_estimate: tol must be > 0");
  if (!(o.threshold > 0.0 && o.threshold < 1.0)) throw std::invalid_argument("critical_estimate: threshold in (0,1)");
  const Vertex x = default_observed_vertex(g);
  CriticalResult r;
  r.threshold = o.threshold;
  r.t = o.t;
  r.method = resolve_method(g, hi, o.t, o.survival);
  SurvivalOptions so = o.survival;
  so.method = r.method;
  auto eval = [&](double lam) {
    const auto e = survival_probability(g, lam, o.t, x, o.replicas, o.seed, so);
    r.evaluations.push_back({lam, e});
    return e.value >= o.threshold;
  };
  const bool lo_above = eval(lo);
  const bool hi_above = eval(hi);
  if (lo_above || !hi_above) {
    std::ostringstream msg;
    msg << "critical_estimate: bracket invalid, survival at lo = " << r.evaluations[0].survival.value
        << " and at hi = " << r.evaluations[1].survival.value << " for threshold " << o.threshold;
    throw std::invalid_argument(msg.str());
  }
  while (hi - lo > o.tol) {
    const double mid = 0.5 * (lo + hi);
    (eval(mid) ? hi : lo) = mid;
  }
  r.lo = lo;
  r.hi = hi;
  r.estimate = 0.5 * (lo + hi);
  std::ostringstream note;
  note << "finite-size proxy: survival of the observed vertex at t = " << o.t << " on " << g.describe()
       << " crossing " << o.threshold << ", " << o.replicas << " replicas per point, method "
       << to_string(r.method);
  if (r.method == SurvivalMethod::dual && so.dual_cap > 0)
    note << ", dual runs reaching " << so.dual_cap << " members counted as surviving";
  r.disclaimer = note.str();
  return r;
}

// ---------------------------------------------------------------- bounds

BoundsRow lattice_bounds(int d, int green_terms) {
  if (d < 1) throw std::invalid_argument("lattice_bounds: d must be >= 1");
  BoundsRow row;
  row.family = "lattice";
  row.parameter = d;
  row.degree = 2 * d;
  row.scale = 2.0 * d;
  row.lower = 1.0 / (2.0 * d);
  row.scaled_lower = 1.0;
  const auto f = hitting_prob_e1(d, green_terms);
  row.f_e1 = f.value;
  if (const auto up = lambda_threshold(f.value, d)) {
    row.upper = *up;
    row.scaled_upper = row.scale * *up;
  } else {
    std::ostringstream msg;
    msg << "hypothesis fails: (d+1) F_d(e_1) = " << (d + 1) * f.value << " >= 1";
    row.upper_note = msg.str();
  }
  return row;
}

BoundsRow tree_bounds(int n) {
  if (n < 2) throw std::invalid_argument("tree_bounds: n must be >= 2");
  BoundsRow row;
  row.family = "tree";
  row.parameter = n;
  row.degree = n + 1;
  row.scale = n;
  row.lower = 1.0 / (n + 1.0);
  row.upper = 1.0 / (n - 1.0);
  row.scaled_lower = n * row.lower;
  row.scaled_upper = n * *row.upper;
  return row;
}

std::vector<BoundsRow> bounds_report(std::span<const int> lattice_d, std::span<const int> tree_n) {
  std::vector<BoundsRow> rows;
  for (int d : lattice_d) rows.push_back(lattice_bounds(d));
  for (int n : tree_n) rows.push_back(tree_bounds(n));
  return rows;
}

}  // namespace t1cp
