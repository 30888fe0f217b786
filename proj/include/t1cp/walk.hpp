#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace t1cp {

using Rational = boost::multiprecision::cpp_rational;

// Simple random walk S_n on Z^d started at 0.

struct ExactLimits {
  // Exact arithmetic is refused when n*d exceeds this.
  std::int64_t max_n_times_d = 8192;
};

// P(S_2n = 0) exactly, for n = 1..n_max (element 0 is n = 1).
std::vector<Rational> return_series_exact(int d, int n_max, ExactLimits limits = {});
Rational p_return_exact(int d, int n, ExactLimits limits = {});

// sum over allocations of n steps to d axes of prod_i 1/m_i!, scaled by
// n!/d^n. Equals 1; it checks the allocation convolution used above.
Rational allocation_normalization(int d, int n, ExactLimits limits = {});

// P(S_2n = 0) in double precision for n = 1..n_max, from the recurrence
// r_k(n) = sum_j Binom(n, j; 1/k)^2 r_{k-1}(n - j), P = C(2n,n) 4^-n r_d(n).
std::vector<double> return_series(int d, int n_max);
double p_return(int d, int n);

enum class TailMode {
  local_clt,     // integral of 2 (d / (4 pi n))^{d/2} beyond the cutoff
  block_bounds,  // block bounds with M_k = (k+1)^k / (e^k k!)
};

struct ReturnSeries {
  int d = 0;
  int truncation = 0;               // N
  std::vector<double> terms;        // p(2n), n = 1..N
  double partial_sum = 0.0;         // compensated sum of terms
  double tail_estimate = 0.0;
  double tail_uncertainty = 0.0;
  TailMode tail_mode = TailMode::local_clt;
};

ReturnSeries return_series_with_tail(int d, int truncation, TailMode mode = TailMode::local_clt);

inline constexpr int kDefaultGreenTerms = 10000;

struct GreenResult {
  int d = 0;
  int terms = 0;
  double value = 0.0;        // 1 + partial + tail
  double tail = 0.0;
  double uncertainty = 0.0;  // on value
  TailMode mode = TailMode::local_clt;
};

// G_d(0,0); throws std::domain_error for d <= 2 (recurrent walk).
GreenResult green_function(int d, int terms = kDefaultGreenTerms, TailMode mode = TailMode::local_clt);

struct HittingResult {
  double value = 1.0;
  double uncertainty = 0.0;
  bool recurrent = false;
};

// F_d(e_1) = (G - 1) / G; 1 with the recurrent flag for d <= 2.
HittingResult hitting_prob_e1(int d, int terms = kDefaultGreenTerms);

// F_d(x) = P(walk from x ever hits 0), F(0) = 1, for |x|_inf <= radius.
class HittingTable {
 public:
  int dimension() const { return d_; }
  int radius() const { return radius_; }
  int steps() const { return steps_; }
  // Bound on |F_table(x) - F(x)| over the table.
  double tolerance() const { return tolerance_; }
  double green_origin() const { return green_origin_; }

  // x must satisfy |x|_inf <= radius.
  double at(std::span<const int> x) const;
  double green_at(std::span<const int> x) const;
  std::size_t distinct_classes() const { return f_.size(); }

 private:
  friend HittingTable hitting_table(int d, int radius, int steps);
  std::uint64_t key(std::span<const int> x) const;

  int d_ = 0;
  int radius_ = 0;
  int steps_ = 0;
  double tolerance_ = 0.0;
  double green_origin_ = 0.0;
  std::unordered_map<std::uint64_t, double> f_;
  std::unordered_map<std::uint64_t, double> g_;
};

inline constexpr int kDefaultTableRadius = 4;
inline constexpr int kDefaultTableSteps = 8000;

// G_d(x) = sum_k P(S_k = x) via per-axis displacement convolution over
// k <= steps plus a local CLT tail; F(x) = G(x)/G(0) for x != 0.
HittingTable hitting_table(int d, int radius = kDefaultTableRadius, int steps = kDefaultTableSteps);

struct TailBoundsReport {
  int d = 0;
  std::vector<double> L;                // L(n,d) = (2n-1)!!/(2d)^n for n = 1..L.size()
  bool L_decreasing_before_d = false;   // L(n+1) < L(n) for n < ceil(d)
  bool L_increasing_from_d = false;     // L(n+1) > L(n) for n >= ceil(d)
  bool L_halving_to_half_d = false;     // L(n) <= L(n-1)/2 for 2 <= n <= d/2
  std::vector<std::pair<int, double>> beta;  // (n, beta(n))
  std::vector<double> M;                // M_k for k = 0..M.size()-1
  bool M_decreasing_from_2 = false;     // M_{k+1} < M_k for 2 <= k < M.size()-1
  double M2 = 0.0;
  double H1 = 0.0;                      // sum_{n=2}^{d} P(S_2n = 0), exact
  double H1_L_sum = 0.0;                // sum_{n=2}^{d} L(n,d)
  double H1_bound = 0.0;                // 3/(2d^2) + 2d/(2e)^{floor(d/2)}
  double H2 = 0.0;                      // sum_{n=d+1}^{2d} P(S_2n = 0)
  double H2_bound = 0.0;                // 2d (2/e)^{2d}
  bool exact = false;                   // H1, H2 from rational arithmetic
};

double L_term(int n, int d);
double stirling_beta(int n);
double M_term(int k);

TailBoundsReport tail_bound_certificates(int d, ExactLimits limits = {});

struct McReturnEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::int64_t hits = 0;
  std::int64_t horizon = 0;
};

// Fraction of walks from e_1 that hit 0 within horizon_steps. A lower bound
// on F_d(e_1) in expectation. Runs of length D-1 from l1-distance D are
// sampled in one multinomial draw, since they cannot reach 0.
McReturnEstimate mc_return_oracle(int d, std::int64_t trials, std::int64_t horizon_steps, std::uint64_t seed);

}  // namespace t1cp
