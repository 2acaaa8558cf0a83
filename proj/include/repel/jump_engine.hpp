#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "repel/rng.hpp"
#include "repel/tree.hpp"

namespace repel {

inline constexpr double kInfTime = std::numeric_limits<double>::infinity();

enum class EventCause { RateClock, Resurrect, PercolationOpen, PercolationClose };
enum class TerminalCause { None, RootTimeExhausted, ExplosionCap, Killed, TimeCap };

const char* cause_name(EventCause c);
const char* terminal_name(TerminalCause c);

struct Event {
  double time;
  Vertex from;
  Vertex to;
  EventCause cause;
};

struct EventLog {
  std::vector<Event> events;
  TerminalCause terminal = TerminalCause::None;

  std::size_t count(EventCause c) const;
  // One line per event: run_id,time,from,to,cause
  std::string to_lines(std::size_t run_id, const RootedTree& tree) const;
};

// Jump clock from the current state; s is the time elapsed since the state was entered.
struct Clock {
  Vertex target = kNoVertex;
  int tag = 0;                                   // process-defined meaning
  std::function<double(double)> rate;            // r(s), required
  std::function<double(double)> hazard;          // ∫_0^s r, optional
  std::function<double(double)> inverse;         // hazard^{-1}(γ), optional; +inf if never reached

  static Clock constant(Vertex target, double c, int tag = 0);
};

struct Sojourn {
  double horizon = kInfTime;  // time until the stopping time if no clock fires
  std::vector<Clock> clocks;
};

struct FireResult {
  EventCause cause = EventCause::RateClock;
  Vertex to = kNoVertex;  // walker position after the event
  bool moved = true;
};

// A process with T-terminated jump rates. The engine owns time; the process owns state.
class TerminatedRates {
 public:
  virtual ~TerminatedRates() = default;
  virtual Vertex current() const = 0;
  virtual Vertex root() const { return 0; }
  virtual Sojourn sojourn() const = 0;
  // Commit dt of holding at the current vertex.
  virtual void advance(double dt) = 0;
  // Apply the firing of `clock` (after advance).
  virtual FireResult fire(const Clock& clock, Rng& rng) = 0;
  // Jump to the parent after exhaustion away from the root.
  virtual Vertex resurrect() { return kNoVertex; }
};

struct Caps {
  std::size_t max_jumps = 10'000'000;
  double max_time = kInfTime;
};

struct EngineRun {
  PathRecord path;
  EventLog log;
};

// Adaptive Gauss–Kronrod 7/15 integral; throws NumericalInversionFailure on a
// non-finite integrand or failure to converge.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-11);

double clock_hazard(const Clock& clock, double s);
// Time at which the clock's integrated hazard reaches gamma, or +inf if not before `horizon`.
double invert_clock(const Clock& clock, double gamma, double horizon);

EngineRun run_terminated(TerminatedRates& process, Rng& rng, const Caps& caps = {});
EngineRun run_with_resurrection(TerminatedRates& process, Rng& rng, const Caps& caps = {});

// log density of `path` on [0, horizon] (jumps at path times; no jump in the remainder).
// `process` must be in its initial state and is consumed by the replay.
double path_log_density(TerminatedRates& process, const PathRecord& path, double horizon);

}  // namespace repel
