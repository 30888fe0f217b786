#include "t1cp/clocks.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace t1cp {

namespace {

constexpr char kMagic[8] = {'T', '1', 'C', 'P', 'S', 'C', 'H', 'D'};
constexpr std::uint32_t kVersion = 1;

void check_rates(double lambda, double horizon) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("schedule: lambda must be >= 0");
  if (!(horizon >= 0.0)) throw std::invalid_argument("schedule: horizon must be >= 0");
}

template <class T>
void put_le(std::ostream& out, T value) {
  std::uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    bits = std::bit_cast<std::uint64_t>(static_cast<double>(value));
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(buf, sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw std::runtime_error("schedule dump: truncated");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  if constexpr (std::is_floating_point_v<T>) {
    return std::bit_cast<double>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace

VertexClock::VertexClock(std::uint64_t seed, Vertex v, EventKind kind, double rate)
    : rng_(stream_key(seed, v, static_cast<std::uint64_t>(kind))), vertex_(v), kind_(kind), rate_(rate) {}

Event VertexClock::next() {
  if (rate_ <= 0.0) return {std::numeric_limits<double>::infinity(), vertex_, kind_, 0.0};
  time_ += exponential_draw(rng_, rate_);
  const double mark = kind_ == EventKind::infect ? unit_draw(rng_) : 0.0;
  return {time_, vertex_, kind_, mark};
}

ClockSchedule::ClockSchedule(std::size_t vertex_count, std::string graph_id, double lambda, double horizon,
                             std::uint64_t seed, std::vector<Event> events)
    : vertex_count_(vertex_count),
      graph_id_(std::move(graph_id)),
      lambda_(lambda),
      horizon_(horizon),
      seed_(seed),
      events_(std::move(events)) {}

ClockSchedule ClockSchedule::thinned(double new_lambda) const {
  if (!(new_lambda >= 0.0) || new_lambda > lambda_)
    throw std::invalid_argument("thinned: rate must lie in [0, lambda]");
  const double keep = lambda_ > 0.0 ? new_lambda / lambda_ : 0.0;
  std::vector<Event> kept;
  kept.reserve(events_.size());
  for (const auto& e : events_)
    if (e.kind == EventKind::heal || e.mark < keep) kept.push_back(e);
  return {vertex_count_, graph_id_, new_lambda, horizon_, seed_, std::move(kept)};
}

ClockSchedule build_schedule(const FiniteGraph& graph, double lambda, double horizon, std::uint64_t seed) {
  check_rates(lambda, horizon);
  const auto n = graph.vertex_count();
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(static_cast<double>(n) * (1.0 + lambda) * horizon * 1.1) + 16);
  for (Vertex v = 0; v < n; ++v) {
    for (auto kind : {EventKind::heal, EventKind::infect}) {
      const double rate = kind == EventKind::heal ? 1.0 : lambda;
      if (rate <= 0.0) continue;
      VertexClock clock(seed, v, kind, rate);
      for (auto e = clock.next(); e.time <= horizon; e = clock.next()) events.push_back(e);
    }
  }
  std::sort(events.begin(), events.end(), event_before);
  return {n, graph.describe(), lambda, horizon, seed, std::move(events)};
}

LazyEventStream::LazyEventStream(std::size_t vertex_count, double lambda, double horizon, std::uint64_t seed)
    : horizon_(horizon) {
  check_rates(lambda, horizon);
  clocks_.reserve(2 * vertex_count);
  for (Vertex v = 0; v < vertex_count; ++v) {
    for (auto kind : {EventKind::heal, EventKind::infect}) {
      const double rate = kind == EventKind::heal ? 1.0 : lambda;
      if (rate <= 0.0) continue;
      clocks_.emplace_back(seed, v, kind, rate);
      const auto e = clocks_.back().next();
      if (e.time <= horizon_) heap_.push({e, clocks_.size() - 1});
    }
  }
}

std::optional<Event> LazyEventStream::next() {
  if (heap_.empty()) return std::nullopt;
  const auto top = heap_.top();
  heap_.pop();
  const auto e = clocks_[top.clock].next();
  if (e.time <= horizon_) heap_.push({e, top.clock});
  return top.event;
}

void write_schedule(std::ostream& out, const ClockSchedule& s) {
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, s.vertex_count());
  put_le<std::uint64_t>(out, s.seed());
  put_le<double>(out, s.lambda());
  put_le<double>(out, s.horizon());
  put_le<std::uint64_t>(out, s.size());
  for (const auto& e : s.events()) {
    put_le<double>(out, e.time);
    put_le<std::uint32_t>(out, e.vertex);
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(e.kind));
    put_le<double>(out, e.mark);
  }
}

ClockSchedule read_schedule(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("schedule dump: bad magic");
  if (get_le<std::uint32_t>(in) != kVersion) throw std::runtime_error("schedule dump: unsupported version");
  (void)get_le<std::uint32_t>(in);
  const auto vertex_count = get_le<std::uint64_t>(in);
  const auto seed = get_le<std::uint64_t>(in);
  const auto lambda = get_le<double>(in);
  const auto horizon = get_le<double>(in);
  const auto count = get_le<std::uint64_t>(in);
  std::vector<Event> events;
  events.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Event e;
    e.time = get_le<double>(in);
    e.vertex = get_le<std::uint32_t>(in);
    const auto kind = get_le<std::uint8_t>(in);
    if (kind > 1) throw std::runtime_error("schedule dump: bad event kind");
    e.kind = static_cast<EventKind>(kind);
    e.mark = get_le<double>(in);
    events.push_back(e);
  }
  return {vertex_count, std::string{}, lambda, horizon, seed, std::move(events)};
}

}  // namespace t1cp
