#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "t1cp/graphs.hpp"
#include "t1cp/rng.hpp"

namespace t1cp {

enum class EventKind : std::uint8_t { heal = 0, infect = 1 };

// One ring of N_x (heal, rate 1) or Y_x (infect, rate lambda). `mark` is a
// uniform [0,1) label carried by infect events; thinning to a lower rate
// lambda' keeps the events with mark < lambda'/lambda.
struct Event {
  double time = 0.0;
  Vertex vertex = 0;
  EventKind kind = EventKind::heal;
  double mark = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

// Global event order: (time, vertex, heal before infect).
inline bool event_before(const Event& a, const Event& b) noexcept {
  if (a.time != b.time) return a.time < b.time;
  if (a.vertex != b.vertex) return a.vertex < b.vertex;
  return a.kind < b.kind;
}

// Per-vertex generator for one clock kind; draws the stream keyed by
// stream_key(seed, vertex, kind).
class VertexClock {
 public:
  VertexClock(std::uint64_t seed, Vertex v, EventKind kind, double rate);
  // Next event time strictly after the previous one; infinity for rate 0.
  Event next();

 private:
  CounterRng rng_;
  Vertex vertex_;
  EventKind kind_;
  double rate_;
  double time_ = 0.0;
};

// Materialised graphical construction over [0, horizon].
class ClockSchedule {
 public:
  ClockSchedule(std::size_t vertex_count, std::string graph_id, double lambda, double horizon,
                std::uint64_t seed, std::vector<Event> events);

  std::size_t vertex_count() const { return vertex_count_; }
  const std::string& graph_id() const { return graph_id_; }
  double lambda() const { return lambda_; }
  double horizon() const { return horizon_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const Event> events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  // Thinned copy at rate new_lambda <= lambda(): same heal events, infect
  // events kept iff mark < new_lambda / lambda().
  ClockSchedule thinned(double new_lambda) const;

  friend bool operator==(const ClockSchedule&, const ClockSchedule&) = default;

 private:
  std::size_t vertex_count_;
  std::string graph_id_;
  double lambda_;
  double horizon_;
  std::uint64_t seed_;
  std::vector<Event> events_;
};

ClockSchedule build_schedule(const FiniteGraph& graph, double lambda, double horizon, std::uint64_t seed);

// Same events as build_schedule, produced on demand by a k-way merge of the
// per-vertex clocks. Memory is O(vertex_count) regardless of horizon.
class LazyEventStream {
 public:
  LazyEventStream(std::size_t vertex_count, double lambda, double horizon, std::uint64_t seed);
  std::optional<Event> next();

 private:
  struct Pending {
    Event event;
    std::size_t clock;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const { return event_before(b.event, a.event); }
  };
  std::vector<VertexClock> clocks_;
  std::priority_queue<Pending, std::vector<Pending>, Later> heap_;
  double horizon_;
};

inline std::span<const Event> merged_events(const ClockSchedule& s) { return s.events(); }

// Binary dump, little-endian:
//   "T1CPSCHD" | u32 version=1 | u32 0 | u64 vertex_count | u64 seed |
//   f64 lambda | f64 horizon | u64 event_count |
//   event_count x (f64 time | u32 vertex | u8 kind | f64 mark)
// The graph id string is not stored.
void write_schedule(std::ostream& out, const ClockSchedule& s);
ClockSchedule read_schedule(std::istream& in);

}  // namespace t1cp
