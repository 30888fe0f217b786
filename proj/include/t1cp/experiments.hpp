#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "t1cp/graphs.hpp"

namespace t1cp {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t replicas = 0;
  std::uint64_t seed = 0;
};

// Fraction with binomial standard error.
Estimate binomial_estimate(std::int64_t successes, std::int64_t replicas, std::uint64_t seed);

// |a - b| / sqrt(se_a^2 + se_b^2); 0 when both are exact and equal.
double z_score(const Estimate& a, const Estimate& b);

enum class SurvivalMethod {
  automatic,   // forward unless the graph makes it expensive, then dual
  forward,     // eta from all ones on the superposed clock of rate V(1 + lambda)
  clocks,      // eta from all ones on the per-vertex clock streams
  dual,        // A_t from {x}; equal in law by duality
};

struct SurvivalOptions {
  SurvivalMethod method = SurvivalMethod::automatic;
  // Dual runs stop once |A| reaches this and count as surviving; 0 = never.
  std::size_t dual_cap = 0;
  // automatic picks dual when V (1 + lambda) t exceeds this.
  double forward_budget = 2e6;
};

SurvivalMethod resolve_method(const FiniteGraph& g, double lambda, double t, const SurvivalOptions& options);

// P(eta_t(x) = 1) with eta_0 = all ones.
Estimate survival_probability(const FiniteGraph& g, double lambda, double t, Vertex x, std::int64_t replicas,
                              std::uint64_t seed, SurvivalOptions options = {});

struct DualityResult {
  Estimate p_eta;
  Estimate p_dual;
  double z = 0.0;
};

// Independent replica sets: eta forward from all ones, and A_t from {x}.
DualityResult duality_check(const FiniteGraph& g, Vertex x, double lambda, double t, std::int64_t replicas,
                            std::uint64_t seed);

// Mean of xi_t(x) (from all ones) and of zeta_t(x) (from all ones) at the
// given sorted times, sample standard error.
std::vector<Estimate> mean_xi(const FiniteGraph& g, double lambda, std::span<const double> times, Vertex x,
                              std::int64_t replicas, std::uint64_t seed);
std::vector<Estimate> mean_zeta(const FiniteGraph& g, double lambda, std::span<const double> times, Vertex x,
                                std::int64_t replicas, std::uint64_t seed);

struct BranchingReport {
  int n = 0;
  int depth = -1;             // -1 = untruncated
  double lambda = 0.0;
  double t = 0.0;
  Estimate survival;          // P(S_t != empty)
  std::uint64_t heals = 0;           // member resolved with 0 offspring
  std::uint64_t branchings = 0;      // member replaced by n sons
  std::uint64_t leaf_removals = 0;   // infect at a truncation leaf
  std::uint64_t leaf_heals = 0;
  // Offspring per resolved member above the truncation depth.
  double offspring_mean = 0.0;
  double offspring_se = 0.0;
  double offspring_expected = 0.0;   // n lambda / (lambda + 1)
  std::int64_t capped = 0;           // replicas stopped at the population cap
};

// S_t from the root of the son-only tree of the given depth. Members act
// independently, so the state is kept as a count per depth.
BranchingReport branching_survival(int n, double lambda, double t, int depth, std::int64_t replicas,
                                   std::uint64_t seed);

// Same process on the untruncated tree; a replica whose population reaches
// `population_cap` stops and counts as surviving.
BranchingReport branching_survival_untruncated(int n, double lambda, double t, std::int64_t replicas,
                                               std::uint64_t seed, std::uint64_t population_cap);

// Extinction probability of the embedded branching process: smallest root of
// q = (1 + lambda q^n) / (1 + lambda).
double branching_extinction_probability(int n, double lambda);

struct ScanRow {
  double lambda = 0.0;
  Estimate survival;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  // Replicas in which the survival indicator decreased along the grid.
  std::int64_t monotonicity_violations = 0;
};

// All grid points share each replica's clocks: infect events are drawn at the
// largest rate and thinned by their marks.
ScanResult lambda_scan(const FiniteGraph& g, std::span<const double> grid, double t, Vertex x,
                       std::int64_t replicas, std::uint64_t seed);

struct CriticalResult {
  double lo = 0.0;
  double hi = 0.0;
  double estimate = 0.0;
  double threshold = 0.0;
  double t = 0.0;
  SurvivalMethod method = SurvivalMethod::automatic;
  std::vector<ScanRow> evaluations;
  std::string disclaimer;
};

struct CriticalOptions {
  double t = 20.0;
  std::int64_t replicas = 2000;
  double threshold = 0.02;
  double tol = 0.01;
  std::uint64_t seed = 1;
  SurvivalOptions survival{SurvivalMethod::automatic, 20000, 2e6};
};

// Bisection on lambda for survival(t) crossing the threshold. Throws
// std::invalid_argument when the bracket ends are on the same side.
CriticalResult critical_estimate(const FiniteGraph& g, double lo, double hi, const CriticalOptions& options);

struct BoundsRow {
  std::string family;   // "lattice" or "tree"
  int parameter = 0;    // d or n
  int degree = 0;       // 2d or n + 1
  double lower = 0.0;
  std::optional<double> upper;
  std::string upper_note;          // reason when upper is absent
  std::optional<double> f_e1;      // lattice rows
  double scale = 0.0;              // 2d or n
  double scaled_lower = 0.0;
  std::optional<double> scaled_upper;
};

BoundsRow lattice_bounds(int d, int green_terms = 10000);
BoundsRow tree_bounds(int n);
std::vector<BoundsRow> bounds_report(std::span<const int> lattice_d, std::span<const int> tree_n);

std::string to_string(SurvivalMethod m);

}  // namespace t1cp
