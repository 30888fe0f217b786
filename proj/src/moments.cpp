#include "t1cp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace t1cp {

double mean_xi_closed_form(double lambda, int r, double t) {
  if (t < 0.0) throw std::invalid_argument("mean_xi_closed_form: t must be >= 0");
  return std::exp(t * (lambda * r - 1.0));
}

// ------------------------------------------------------------------- box

Box::Box(int d, int radius) : d_(d), radius_(radius) {
  if (d < 1) throw std::invalid_argument("box: d must be >= 1");
  if (radius < 0) throw std::invalid_argument("box: radius must be >= 0");
  const double states = std::pow(2.0 * radius + 1.0, d);
  if (states > static_cast<double>(kMaxBoxStates))
    throw std::length_error("box: (2R+1)^d = " + std::to_string(states) + " exceeds the state budget");
  stride_.resize(d);
  std::size_t s = 1;
  for (int k = 0; k < d; ++k) {
    stride_[k] = s;
    s *= static_cast<std::size_t>(2 * radius + 1);
  }
  size_ = s;
  origin_ = 0;
  for (int k = 0; k < d; ++k) origin_ += static_cast<std::size_t>(radius) * stride_[k];
}

std::size_t Box::index(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("box: wrong dimension");
  std::size_t i = 0;
  for (int k = 0; k < d_; ++k) {
    if (std::abs(x[k]) > radius_) throw std::out_of_range("box: point outside");
    i += static_cast<std::size_t>(x[k] + radius_) * stride_[k];
  }
  return i;
}

std::vector<int> Box::point(std::size_t i) const {
  std::vector<int> x(d_);
  const auto side = static_cast<std::size_t>(2 * radius_ + 1);
  for (int k = 0; k < d_; ++k) {
    x[k] = static_cast<int>(i % side) - radius_;
    i /= side;
  }
  return x;
}

int Box::sup_norm(std::size_t i) const {
  int m = 0;
  const auto side = static_cast<std::size_t>(2 * radius_ + 1);
  for (int k = 0; k < d_; ++k) {
    m = std::max(m, std::abs(static_cast<int>(i % side) - radius_));
    i /= side;
  }
  return m;
}

std::optional<std::size_t> Box::shifted(std::size_t i, int axis, int delta) const {
  const auto side = static_cast<std::size_t>(2 * radius_ + 1);
  const int c = static_cast<int>((i / stride_[axis]) % side) - radius_ + delta;
  if (std::abs(c) > radius_) return std::nullopt;
  return static_cast<std::size_t>(static_cast<std::int64_t>(i) + static_cast<std::int64_t>(delta) *
                                                                     static_cast<std::int64_t>(stride_[axis]));
}

// ------------------------------------------------------------------- Q

double TruncatedQ::norm_bound() const {
  const double d = dimension();
  return 1.0 + 8.0 * lambda_ * d + 4.0 * lambda_ * d * d;
}

double TruncatedQ::norm_inf() const {
  double m = 0.0;
  for (std::size_t r = 0; r < size(); ++r) {
    double s = 0.0;
    for_each_in_row(r, [&](std::size_t, double v) { s += std::fabs(v); });
    m = std::max(m, s);
  }
  return m;
}

double TruncatedQ::entry(std::size_t row, std::size_t col) const {
  double out = 0.0;
  for_each_in_row(row, [&](std::size_t c, double v) {
    if (c == col) out += v;
  });
  return out;
}

double TruncatedQ::row_sum(std::size_t row) const {
  double s = 0.0;
  for_each_in_row(row, [&](std::size_t, double v) { s += v; });
  return s;
}

void TruncatedQ::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != size() || out.size() != size()) throw std::invalid_argument("TruncatedQ::apply: size mismatch");
  for (std::size_t r = 0; r < size(); ++r) {
    double s = 0.0;
    for (auto k = offsets_[r]; k < offsets_[r + 1]; ++k) s += vals_[k] * v[cols_[k]];
    out[r] = s;
  }
}

std::vector<double> TruncatedQ::apply(std::span<const double> v) const {
  std::vector<double> out(size());
  apply(v, out);
  return out;
}

TruncatedQ build_q(int d, double lambda, int radius) {
  if (d < 1) throw std::invalid_argument("build_q: d must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("build_q: lambda must be > 0");
  if (radius < 2) throw std::invalid_argument("build_q: radius must be >= 2 (row 0 reaches distance 2)");
  TruncatedQ q(Box(d, radius), lambda);
  const Box& box = q.box_;
  const std::size_t n = box.size();
  q.offsets_.reserve(n + 1);
  q.offsets_.push_back(0);
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::size_t x = 0; x < n; ++x) {
    row.clear();
    if (x != box.origin()) {
      row.emplace_back(static_cast<std::uint32_t>(x), -4.0 * lambda * d);
      for (int k = 0; k < d; ++k)
        for (int s : {-1, 1})
          if (auto y = box.shifted(x, k, s)) row.emplace_back(static_cast<std::uint32_t>(*y), 2.0 * lambda);
    } else {
      row.emplace_back(static_cast<std::uint32_t>(x), 1.0 - 2.0 * lambda * d);
      for (int k = 0; k < d; ++k)
        for (int s : {-1, 1}) {
          const auto y = *box.shifted(x, k, s);
          row.emplace_back(static_cast<std::uint32_t>(y), 2.0 * lambda);
          row.emplace_back(static_cast<std::uint32_t>(*box.shifted(y, k, s)), lambda);
          for (int k2 = k + 1; k2 < d; ++k2)
            for (int s2 : {-1, 1})
              row.emplace_back(static_cast<std::uint32_t>(*box.shifted(y, k2, s2)), 2.0 * lambda);
        }
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      q.cols_.push_back(c);
      q.vals_.push_back(v);
    }
    q.offsets_.push_back(q.cols_.size());
  }
  return q;
}

// ------------------------------------------------------------------ expm

std::vector<double> expm_apply(const TruncatedQ& q, std::span<const double> v, double t) {
  if (v.size() != q.size()) throw std::invalid_argument("expm_apply: vector size mismatch");
  if (!(t >= 0.0)) throw std::invalid_argument("expm_apply: t must be >= 0");
  std::vector<double> acc(v.begin(), v.end());
  if (t == 0.0) return acc;
  const double c = q.shift();
  const double beta = q.norm_inf() + c;  // bound on the norm of Q + cI
  const double step_norm = 2.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(t * beta / step_norm)));
  const double h = t / steps;
  const double hb = h * beta;
  const double damp = std::exp(-c * h);
  const std::size_t n = q.size();
  std::vector<double> term(n), next(n);
  auto sup = [](const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::fabs(x));
    return m;
  };
  for (int s = 0; s < steps; ++s) {
    term = acc;
    for (int m = 1;; ++m) {
      // term <- h (Q + cI) term / m
      q.apply(term, next);
      for (std::size_t i = 0; i < n; ++i) next[i] = h * (next[i] + c * term[i]) / m;
      std::swap(term, next);
      for (std::size_t i = 0; i < n; ++i) acc[i] += term[i];
      const double tn = sup(term);
      const double ratio = hb / (m + 1);
      if (ratio < 1.0) {
        const double remainder = tn * ratio / (1.0 - ratio);
        if (remainder <= 1e-17 * sup(acc) || tn == 0.0) break;
      }
      if (m > 200) throw std::runtime_error("expm_apply: series failed to converge");
    }
    for (double& x : acc) x *= damp;
  }
  return acc;
}

// ------------------------------------------------------- second moment

std::vector<SecondMomentRow> integrate_second_moment(const TruncatedQ& q, std::span<const double> times) {
  const Box& box = q.box();
  std::vector<double> ones(q.size(), 1.0), shells(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i)
    if (box.sup_norm(i) >= box.radius() - 1) shells[i] = 1.0;
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
  std::vector<SecondMomentRow> rows(times.size());
  double now = 0.0;
  for (auto k : order) {
    const double t = times[k];
    if (!(t >= 0.0)) throw std::invalid_argument("integrate_second_moment: times must be >= 0");
    if (t > now) {
      ones = expm_apply(q, ones, t - now);
      shells = expm_apply(q, shells, t - now);
      now = t;
    }
    rows[k] = {t, ones[box.origin()], shells[box.origin()]};
  }
  return rows;
}

std::vector<SecondMomentRow> integrate_second_moment(int d, double lambda, int radius, std::span<const double> times) {
  return integrate_second_moment(build_q(d, lambda, radius), times);
}

// -------------------------------------------------------------- harmonic

double hypothesis_margin(double f_e1, int d) { return 1.0 - (d + 1.0) * f_e1; }

std::optional<double> lambda_threshold(double f_e1, int d) {
  const double m = hypothesis_margin(f_e1, d);
  if (!(m > 0.0)) return std::nullopt;
  return 1.0 / (4.0 * d * m);
}

double b_lambda(double f_e1, int d, double lambda) {
  return (4.0 * d * lambda * hypothesis_margin(f_e1, d) - 1.0) / (1.0 + 4.0 * d * d * lambda);
}

HarmonicH build_h(int d, double lambda, const HittingTable& table, int radius) {
  if (table.dimension() != d) throw std::invalid_argument("build_h: table dimension mismatch");
  if (table.radius() < radius) throw std::invalid_argument("build_h: table radius smaller than the box");
  std::vector<int> e1(d, 0);
  e1[0] = 1;
  HarmonicH h;
  h.d = d;
  h.lambda = lambda;
  h.radius = radius;
  h.f_e1 = table.at(e1);
  h.table_tolerance = table.tolerance();
  const double margin = hypothesis_margin(h.f_e1, d);
  if (!(margin > 0.0))
    throw HypothesisError("hypothesis fails at d = " + std::to_string(d) + ": (d+1) F_d(e_1) = " +
                          std::to_string((d + 1.0) * h.f_e1) + " >= 1");
  h.b = b_lambda(h.f_e1, d, lambda);
  if (!(h.b > 0.0))
    throw HypothesisError("hypothesis fails: lambda = " + std::to_string(lambda) + " is not above " +
                          std::to_string(*lambda_threshold(h.f_e1, d)));
  const Box box(d, radius);
  h.values.resize(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) h.values[i] = table.at(box.point(i)) + h.b;
  return h;
}

HarmonicReport check_harmonic(const TruncatedQ& q, const HarmonicH& h, int interior_radius) {
  if (h.values.size() != q.size()) throw std::invalid_argument("check_harmonic: h and Q boxes differ");
  if (interior_radius > q.radius() - 2 || interior_radius < 0)
    throw std::invalid_argument("check_harmonic: interior radius must lie in [0, R-2]");
  const int d = q.dimension();
  const double lam = q.lambda();
  const auto qh = q.apply(h.values);
  HarmonicReport r;
  r.interior_radius = interior_radius;
  const Box& box = q.box();
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (box.sup_norm(i) > interior_radius) continue;
    if (std::fabs(qh[i]) > r.max_residual || r.worst_point.empty()) {
      r.max_residual = std::max(r.max_residual, std::fabs(qh[i]));
      r.worst_point = box.point(i);
    }
  }
  r.origin_residual = qh[box.origin()];
  r.row0_identity = (1.0 + 4.0 * lam * d * d) * h.b + 1.0 - 4.0 * lam * d * hypothesis_margin(h.f_e1, d);
  r.tolerance = 10.0 * h.table_tolerance * (1.0 + 4.0 * lam * d * d);
  r.within_tolerance = r.max_residual <= r.tolerance;
  return r;
}

double second_moment_bound(const HarmonicH& h) {
  if (!(h.b > 0.0)) throw HypothesisError("second_moment_bound: b_lambda must be positive");
  return (1.0 + h.b) / h.b;
}

}  // namespace t1cp
