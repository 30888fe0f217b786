#include "t1cp/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/random/binomial_distribution.hpp>

#include "t1cp/parallel.hpp"
#include "t1cp/rng.hpp"

namespace t1cp {

using boost::multiprecision::cpp_int;

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) carry += (sum - t) + x;
    else carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_exact_budget(int d, int n, const ExactLimits& limits) {
  if (d < 1) throw std::invalid_argument("return probability: d must be >= 1");
  if (n < 0) throw std::invalid_argument("return probability: n must be >= 0");
  if (static_cast<std::int64_t>(n) * d > limits.max_n_times_d)
    throw std::length_error("exact return probability: n*d = " + std::to_string(static_cast<std::int64_t>(n) * d) +
                            " exceeds the limit " + std::to_string(limits.max_n_times_d));
}

// c_k(m) = sum_j C(m,j)^power c_{k-1}(m-j), c_1 = 1; returns c_d(0..n_max).
std::vector<cpp_int> allocation_sums(int d, int n_max, int power) {
  std::vector<std::vector<cpp_int>> c(d + 1, std::vector<cpp_int>(n_max + 1));
  std::vector<cpp_int> row;
  for (int n = 0; n <= n_max; ++n) {
    row.assign(n + 1, cpp_int{1});
    for (int j = 1; j <= n; ++j) row[j] = row[j - 1] * (n - j + 1) / j;
    if (power == 2)
      for (auto& r : row) r *= r;
    c[1][n] = 1;
    for (int k = 2; k <= d; ++k) {
      cpp_int acc = 0;
      for (int j = 0; j <= n; ++j) acc += row[j] * c[k - 1][n - j];
      c[k][n] = std::move(acc);
    }
  }
  return std::move(c[d]);
}

cpp_int pow_int(cpp_int base, unsigned e) {
  cpp_int out = 1;
  while (e) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1u;
  }
  return out;
}

// Binomial(n, p) pmf over the window where pmf^2 >= cut * mode^2.
struct BinomialWindow {
  int lo = 0;
  std::vector<double> pmf;
};

void binomial_window(int n, double p, double rel_cut, BinomialWindow& w) {
  w.pmf.clear();
  if (n == 0 || p <= 0.0) {
    w.lo = 0;
    w.pmf.push_back(1.0);
    return;
  }
  if (p >= 1.0) {
    w.lo = n;
    w.pmf.push_back(1.0);
    return;
  }
  const int mode = std::min(n, static_cast<int>(std::floor((n + 1) * p)));
  const double log_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
                          mode * std::log(p) + (n - mode) * std::log1p(-p);
  const double pm = std::exp(log_mode);
  const double odds = p / (1.0 - p);
  const double cut = pm * rel_cut;
  // Downward from the mode, then upward.
  std::vector<double> below;
  double v = pm;
  int j = mode;
  while (j > 0) {
    v *= static_cast<double>(j) / (n - j + 1) / odds;
    --j;
    if (v < cut) break;
    below.push_back(v);
  }
  w.lo = mode - static_cast<int>(below.size());
  w.pmf.assign(below.rbegin(), below.rend());
  w.pmf.push_back(pm);
  v = pm;
  j = mode;
  while (j < n) {
    v *= static_cast<double>(n - j) / (j + 1) * odds;
    ++j;
    if (v < cut) break;
    w.pmf.push_back(v);
  }
}

// 2 (d / (4 pi n))^{d/2}
double clt_return(int d, double n) { return 2.0 * std::pow(d / (4.0 * kPi * n), d / 2.0); }

}  // namespace

std::vector<Rational> return_series_exact(int d, int n_max, ExactLimits limits) {
  check_exact_budget(d, n_max, limits);
  const auto c = allocation_sums(d, n_max, 2);
  std::vector<Rational> out;
  out.reserve(n_max);
  cpp_int central = 1;  // C(2n, n)
  for (int n = 1; n <= n_max; ++n) {
    central = central * (2 * n) * (2 * n - 1) / (static_cast<cpp_int>(n) * n);
    const cpp_int den = pow_int(cpp_int{4}, n) * pow_int(cpp_int{d}, 2u * n);
    out.emplace_back(central * c[n], den);
  }
  return out;
}

Rational p_return_exact(int d, int n, ExactLimits limits) {
  if (n < 1) throw std::invalid_argument("p_return_exact: n must be >= 1");
  return return_series_exact(d, n, limits).back();
}

Rational allocation_normalization(int d, int n, ExactLimits limits) {
  check_exact_budget(d, n, limits);
  const auto c = allocation_sums(d, n, 1);
  return Rational(c[n], pow_int(cpp_int{d}, n));
}

std::vector<double> return_series(int d, int n_max) {
  if (d < 1) throw std::invalid_argument("return_series: d must be >= 1");
  if (n_max < 0) throw std::invalid_argument("return_series: n_max must be >= 0");
  // r_k(n) = P(k independent multinomial allocations of n steps agree)
  std::vector<double> prev(n_max + 1, 1.0), cur(n_max + 1);
  BinomialWindow w;
  for (int k = 2; k <= d; ++k) {
    const double p = 1.0 / k;
    for (int n = 0; n <= n_max; ++n) {
      binomial_window(n, p, 1e-17, w);
      CompensatedSum s;
      for (std::size_t i = 0; i < w.pmf.size(); ++i) {
        const int j = w.lo + static_cast<int>(i);
        s.add(w.pmf[i] * w.pmf[i] * prev[n - j]);
      }
      cur[n] = s.value();
    }
    std::swap(prev, cur);
  }
  std::vector<double> out;
  out.reserve(n_max);
  double central = 1.0;  // C(2n,n) / 4^n
  for (int n = 1; n <= n_max; ++n) {
    central *= (2.0 * n - 1.0) / (2.0 * n);
    out.push_back(central * prev[n]);
  }
  return out;
}

double p_return(int d, int n) {
  if (n < 1) throw std::invalid_argument("p_return: n must be >= 1");
  return return_series(d, n).back();
}

namespace {

// Upper bound on P(S_2m = 0) from the most balanced allocation, m = kd + j.
double block_bound_term(int d, std::int64_t m) {
  const std::int64_t k = m / d;
  const std::int64_t j = m % d;
  const double log_central = std::lgamma(2.0 * m + 1.0) - 2.0 * std::lgamma(m + 1.0) - 2.0 * m * std::log(2.0);
  const double log_val = log_central + std::lgamma(m + 1.0) - m * std::log(static_cast<double>(d)) -
                         (d - j) * std::lgamma(k + 1.0) - j * std::lgamma(k + 2.0);
  return std::exp(log_val);
}

double block_bounds_tail(int d, int n_after) {
  // Explicit terms up to a cutoff, then the Stirling form of M_k^d per block.
  const std::int64_t cutoff = std::max<std::int64_t>(static_cast<std::int64_t>(n_after) * 10, 1'000'000);
  CompensatedSum s;
  for (std::int64_t m = n_after + 1; m <= cutoff; ++m) s.add(block_bound_term(d, m));
  const double kc = static_cast<double>(cutoff) / d;
  const double sd = d / 2.0;
  const double rest = 1.05 * std::sqrt(2.0) * d * std::pow(std::numbers::e / std::sqrt(2.0 * kPi), d) *
                      std::pow(kc, 1.0 - sd) / (sd - 1.0);
  return s.value() + rest;
}

}  // namespace

ReturnSeries return_series_with_tail(int d, int truncation, TailMode mode) {
  if (d <= 2) throw std::domain_error("series diverges: walk is recurrent for d <= 2");
  if (truncation < 1) throw std::invalid_argument("return series: truncation must be >= 1");
  ReturnSeries rs;
  rs.d = d;
  rs.truncation = truncation;
  rs.tail_mode = mode;
  rs.terms = return_series(d, truncation);
  CompensatedSum s;
  for (double t : rs.terms) s.add(t);
  rs.partial_sum = s.value();
  const double rounding = 1e-15 * truncation * rs.partial_sum;
  if (mode == TailMode::local_clt) {
    const double sd = d / 2.0;
    const double a = truncation + 0.5;
    const double tail = 2.0 * std::pow(d / (4.0 * kPi), sd) * std::pow(a, 1.0 - sd) / (sd - 1.0);
    const double last = rs.terms.back();
    const double rel = std::fabs(last / clt_return(d, truncation) - 1.0);
    const double midpoint = clt_return(d, a) * sd / a / 24.0;
    rs.tail_estimate = tail;
    rs.tail_uncertainty = 2.0 * (tail * rel + midpoint) + rounding;
  } else {
    rs.tail_estimate = block_bounds_tail(d, truncation);
    rs.tail_uncertainty = rs.tail_estimate + rounding;
  }
  return rs;
}

GreenResult green_function(int d, int terms, TailMode mode) {
  const auto rs = return_series_with_tail(d, terms, mode);
  GreenResult g;
  g.d = d;
  g.terms = terms;
  g.mode = mode;
  g.tail = rs.tail_estimate;
  g.value = 1.0 + rs.partial_sum + rs.tail_estimate;
  g.uncertainty = rs.tail_uncertainty;
  return g;
}

HittingResult hitting_prob_e1(int d, int terms) {
  if (d < 1) throw std::invalid_argument("hitting_prob_e1: d must be >= 1");
  if (d <= 2) return {1.0, 0.0, true};
  const auto g = green_function(d, terms);
  HittingResult h;
  h.value = (g.value - 1.0) / g.value;
  h.uncertainty = g.uncertainty / (g.value * g.value);
  return h;
}

// ------------------------------------------------------------ hitting table

std::uint64_t HittingTable::key(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("hitting table: wrong dimension");
  std::vector<int> a(x.begin(), x.end());
  for (auto& v : a) {
    v = std::abs(v);
    if (v > radius_) throw std::out_of_range("hitting table: point outside the radius");
  }
  std::sort(a.begin(), a.end());
  std::uint64_t code = 0;
  for (int v : a) code = code * static_cast<std::uint64_t>(radius_ + 1) + static_cast<std::uint64_t>(v);
  return code;
}

double HittingTable::at(std::span<const int> x) const { return f_.at(key(x)); }
double HittingTable::green_at(std::span<const int> x) const { return g_.at(key(x)); }

HittingTable hitting_table(int d, int radius, int steps) {
  if (d < 3) throw std::domain_error("hitting table needs a transient walk (d >= 3)");
  if (radius < 1) throw std::invalid_argument("hitting table: radius must be >= 1");
  if (steps < 4 * radius * radius) throw std::invalid_argument("hitting table: too few steps for the radius");
  if (d * std::log2(radius + 1.0) > 63.0) throw std::length_error("hitting table: key space too large");

  // Nondecreasing tuples of |x_i|, level m = tuple length.
  struct Node {
    int parent;  // index into the previous level, -1 at level 1
    int a;       // last coordinate
    int sum;     // sum of coordinates (parity)
    int sq;      // squared norm
    std::uint64_t code;
  };
  std::vector<std::vector<Node>> level(d + 1);
  for (int a = 0; a <= radius; ++a) level[1].push_back({-1, a, a, a * a, static_cast<std::uint64_t>(a)});
  for (int m = 2; m <= d; ++m)
    for (int p = 0; p < static_cast<int>(level[m - 1].size()); ++p) {
      const auto& par = level[m - 1][p];
      for (int a = par.a; a <= radius; ++a)
        level[m].push_back({p, a, par.sum + a, par.sq + a * a, par.code * (radius + 1) + a});
    }
  std::size_t stored = 0;
  for (int m = 1; m < d; ++m) stored += level[m].size();
  if (static_cast<double>(stored) * (steps + 1) > 2.5e7)
    throw std::length_error("hitting table: convolution storage exceeds the budget");

  // One-axis displacement law P1[j][a] = C(j, (j+a)/2) / 2^j.
  const int K = steps;
  std::vector<double> p1(static_cast<std::size_t>(K + 1) * (radius + 1), 0.0);
  auto P1 = [&](int j, int a) -> double& { return p1[static_cast<std::size_t>(j) * (radius + 1) + a]; };
  for (int j = 0; j <= K; ++j)
    for (int a = 0; a <= std::min(j, radius); ++a)
      if ((j + a) % 2 == 0)
        P1(j, a) = std::exp(std::lgamma(j + 1.0) - std::lgamma((j + a) / 2 + 1.0) - std::lgamma((j - a) / 2 + 1.0) -
                            j * std::log(2.0));

  // values[m][node][k] = P(first m coordinates of S_k equal the tuple | S_k
  // moves only along those m axes), for levels m < d.
  std::vector<std::vector<std::vector<double>>> values(d);
  for (int m = 1; m < d; ++m)
    values[m].assign(level[m].size(), std::vector<double>(K + 1, 0.0));
  std::vector<CompensatedSum> g_sum(level[d].size());
  std::vector<double> last_term(level[d].size(), 0.0);
  std::vector<int> last_k(level[d].size(), 0);

  BinomialWindow w;
  for (int k = 0; k <= K; ++k) {
    for (std::size_t i = 0; i < level[1].size(); ++i) values[1][i][k] = P1(k, level[1][i].a);
    for (int m = 2; m <= d; ++m) {
      binomial_window(k, 1.0 / m, 1e-16, w);
      for (std::size_t i = 0; i < level[m].size(); ++i) {
        const auto& node = level[m][i];
        if ((k - node.sum) % 2 != 0) continue;
        const auto& parent = values[m - 1][node.parent];
        const int a = node.a;
        // j steps on axis m with j = a mod 2
        int j0 = w.lo;
        if ((j0 - a) % 2 != 0) ++j0;
        double acc = 0.0;
        const int j_end = w.lo + static_cast<int>(w.pmf.size());
        for (int j = std::max(j0, a); j < j_end; j += 2) acc += w.pmf[j - w.lo] * parent[k - j] * P1(j, a);
        if (m < d) {
          values[m][i][k] = acc;
        } else {
          g_sum[i].add(acc);
          last_term[i] = acc;
          last_k[i] = k;
        }
      }
    }
  }

  HittingTable t;
  t.d_ = d;
  t.radius_ = radius;
  t.steps_ = K;
  const double s = d / 2.0;
  std::vector<double> g_val(level[d].size()), g_unc(level[d].size());
  for (std::size_t i = 0; i < level[d].size(); ++i) {
    const auto& node = level[d][i];
    const double a = d * node.sq / 2.0;
    const int k0 = last_k[i] + 2;  // first omitted parity-matching k
    const double A = k0 - 1.0;
    // (1/2) int_A^inf 2 (d/(2 pi k))^s e^{-a/k} dk, expanded in a/k
    double series = 0.0, coef = 1.0;
    for (int r = 0; r < 40; ++r) {
      const double term = coef * std::pow(A, 1.0 - s - r) / (s + r - 1.0);
      series += term;
      coef *= -a / (r + 1.0);
      if (std::fabs(term) < 1e-18 * std::fabs(series)) break;
    }
    const double tail = std::pow(d / (2.0 * kPi), s) * series;
    const double k_last = last_k[i];
    const double clt_last = 2.0 * std::pow(d / (2.0 * kPi * k_last), s) * std::exp(-a / k_last);
    const double rel = std::fabs(last_term[i] / clt_last - 1.0);
    const double midpoint = clt_last * s / k_last;
    g_val[i] = g_sum[i].value() + tail;
    g_unc[i] = 2.0 * (tail * rel + midpoint) + 1e-15 * K;
  }
  const double g0 = g_val[0];  // level[d][0] is the all-zero tuple
  const double u0 = g_unc[0];
  t.green_origin_ = g0;
  double tol = 0.0;
  for (std::size_t i = 0; i < level[d].size(); ++i) {
    const auto code = level[d][i].code;
    t.g_.emplace(code, g_val[i]);
    if (i == 0) {
      t.f_.emplace(code, 1.0);
      continue;
    }
    const double f = g_val[i] / g0;
    t.f_.emplace(code, f);
    tol = std::max(tol, (g_unc[i] + f * u0) / g0);
  }
  t.tolerance_ = tol + 1e-13;
  return t;
}

// ------------------------------------------------------------- tail bounds

double L_term(int n, int d) {
  double v = 1.0;
  for (int i = 1; i <= n; ++i) v *= (2.0 * i - 1.0) / (2.0 * d);
  return v;
}

double stirling_beta(int n) {
  if (n < 1) throw std::invalid_argument("stirling_beta: n must be >= 1");
  return std::exp(std::lgamma(n + 1.0) - 0.5 * std::log(2.0 * kPi * n) - n * (std::log(static_cast<double>(n)) - 1.0));
}

double M_term(int k) {
  if (k < 0) throw std::invalid_argument("M_term: k must be >= 0");
  return std::exp(k * std::log(k + 1.0) - k - std::lgamma(k + 1.0));
}

TailBoundsReport tail_bound_certificates(int d, ExactLimits limits) {
  if (d < 1) throw std::invalid_argument("tail_bound_certificates: d must be >= 1");
  TailBoundsReport r;
  r.d = d;
  const int n_max = 2 * d + 2;
  for (int n = 1; n <= n_max; ++n) r.L.push_back(L_term(n, d));
  r.L_decreasing_before_d = true;
  r.L_increasing_from_d = true;
  for (int n = 1; n < n_max; ++n) {
    const double now = r.L[n - 1], next = r.L[n];
    if (n < d && !(next < now)) r.L_decreasing_before_d = false;
    if (n >= d && !(next > now)) r.L_increasing_from_d = false;
  }
  r.L_halving_to_half_d = true;
  for (int n = 2; n <= d / 2; ++n)
    if (!(r.L[n - 1] <= 0.5 * r.L[n - 2])) r.L_halving_to_half_d = false;

  for (int n : {1, 2, 5, 10, 20, 50, 100, 1000}) r.beta.emplace_back(n, stirling_beta(n));
  for (int k = 0; k <= 20; ++k) r.M.push_back(M_term(k));
  r.M2 = r.M[2];
  r.M_decreasing_from_2 = true;
  for (int k = 2; k + 1 < static_cast<int>(r.M.size()); ++k)
    if (!(r.M[k + 1] < r.M[k])) r.M_decreasing_from_2 = false;

  std::vector<double> p;
  if (static_cast<std::int64_t>(2) * d * d <= limits.max_n_times_d) {
    for (const auto& q : return_series_exact(d, 2 * d, limits)) p.push_back(static_cast<double>(q));
    r.exact = true;
  } else {
    p = return_series(d, 2 * d);
  }
  CompensatedSum h1, l1, h2;
  for (int n = 2; n <= d; ++n) {
    h1.add(p[n - 1]);
    l1.add(r.L[n - 1]);
  }
  for (int n = d + 1; n <= 2 * d; ++n) h2.add(p[n - 1]);
  r.H1 = h1.value();
  r.H1_L_sum = l1.value();
  r.H2 = h2.value();
  r.H1_bound = 3.0 / (2.0 * d * d) + 2.0 * d / std::pow(2.0 * std::numbers::e, d / 2);
  r.H2_bound = 2.0 * d * std::pow(2.0 / std::numbers::e, 2 * d);
  return r;
}

// -------------------------------------------------------------- MC oracle

namespace {

struct McTally {
  std::int64_t trials = 0;
  std::int64_t hits = 0;
};

bool walk_hits_origin(int d, std::int64_t horizon, std::mt19937_64& rng, std::vector<std::int64_t>& pos) {
  std::fill(pos.begin(), pos.end(), 0);
  pos[0] = 1;
  std::int64_t dist = 1;
  std::int64_t t = 0;
  constexpr std::int64_t kJumpFrom = 6;
  while (t < horizon) {
    if (dist > horizon - t) return false;
    if (dist >= kJumpFrom) {
      // dist - 1 steps cannot reach 0; draw their net displacement at once.
      std::int64_t remaining = dist - 1;
      t += remaining;
      dist = 0;
      for (int i = 0; i < d; ++i) {
        std::int64_t on_axis = remaining;
        if (i + 1 < d && remaining > 0)
          on_axis = boost::random::binomial_distribution<std::int64_t>(remaining, 1.0 / (d - i))(rng);
        remaining -= on_axis;
        if (on_axis > 0) {
          const auto plus = boost::random::binomial_distribution<std::int64_t>(on_axis, 0.5)(rng);
          pos[i] += 2 * plus - on_axis;
        }
        dist += std::abs(pos[i]);
      }
      continue;
    }
    const auto r = rng();
    const int axis = static_cast<int>((r >> 1) % static_cast<std::uint64_t>(d));
    const std::int64_t before = std::abs(pos[axis]);
    pos[axis] += (r & 1u) ? 1 : -1;
    dist += std::abs(pos[axis]) - before;
    ++t;
    if (dist == 0) return true;
  }
  return false;
}

}  // namespace

McReturnEstimate mc_return_oracle(int d, std::int64_t trials, std::int64_t horizon_steps, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("mc_return_oracle: d must be >= 1");
  if (trials < 1) throw std::invalid_argument("mc_return_oracle: trials must be >= 1");
  if (horizon_steps < 0) throw std::invalid_argument("mc_return_oracle: horizon must be >= 0");
  constexpr std::int64_t kChunk = 1024;
  const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<McTally> tally(static_cast<std::size_t>(chunks));
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    std::mt19937_64 rng(replica_seed(seed, c));
    std::vector<std::int64_t> pos(d);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(trials, begin + kChunk);
    McTally& out = tally[c];
    for (std::int64_t i = begin; i < end; ++i) {
      ++out.trials;
      if (walk_hits_origin(d, horizon_steps, rng, pos)) ++out.hits;
    }
  });
  McReturnEstimate est;
  est.horizon = horizon_steps;
  for (const auto& t : tally) {
    est.trials += t.trials;
    est.hits += t.hits;
  }
  est.value = static_cast<double>(est.hits) / static_cast<double>(est.trials);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(est.trials));
  return est;
}

}  // namespace t1cp
