#include "repel/jump_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "repel/errors.hpp"

namespace repel {

const char* cause_name(EventCause c) {
  switch (c) {
    case EventCause::RateClock: return "rate-clock";
    case EventCause::Resurrect: return "resurrect";
    case EventCause::PercolationOpen: return "percolation-open";
    case EventCause::PercolationClose: return "percolation-close";
  }
  return "?";
}

const char* terminal_name(TerminalCause c) {
  switch (c) {
    case TerminalCause::None: return "none";
    case TerminalCause::RootTimeExhausted: return "root-time-exhausted";
    case TerminalCause::ExplosionCap: return "explosion-cap";
    case TerminalCause::Killed: return "killed";
    case TerminalCause::TimeCap: return "time-cap";
  }
  return "?";
}

std::size_t EventLog::count(EventCause c) const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [c](const Event& e) { return e.cause == c; }));
}

std::string EventLog::to_lines(std::size_t run_id, const RootedTree& tree) const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& e : events)
    os << run_id << ',' << e.time << ',' << tree.id(e.from) << ',' << tree.id(e.to) << ',' << cause_name(e.cause) << '\n';
  return os.str();
}

Clock Clock::constant(Vertex target, double c, int tag) {
  Clock k;
  k.target = target;
  k.tag = tag;
  k.rate = [c](double) { return c; };
  k.hazard = [c](double s) { return c * s; };
  k.inverse = [c](double g) { return c > 0.0 ? g / c : kInfTime; };
  return k;
}

namespace {

constexpr std::array<double, 8> kXk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  if (!std::isfinite(fc)) throw NumericalInversionFailure("non-finite rate inside integration range");
  double k = fc * kWk[7], g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    if (!std::isfinite(f1) || !std::isfinite(f2)) throw NumericalInversionFailure("non-finite rate inside integration range");
    k += kWk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  result = k * h;
  err = std::abs((k - g) * h);
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double err, double tol,
             int depth) {
  if (err <= tol || std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a))) return whole;
  if (depth > 60) throw NumericalInversionFailure("quadrature failed to converge (rate singularity?)");
  const double m = 0.5 * (a + b);
  double r1, e1, r2, e2;
  gk15(f, a, m, r1, e1);
  gk15(f, m, b, r2, e2);
  return adapt(f, a, m, r1, e1, 0.5 * tol, depth + 1) + adapt(f, m, b, r2, e2, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (b <= a) return 0.0;
  double r, e;
  gk15(f, a, b, r, e);
  const double tol = std::max(rel_tol * std::abs(r), 1e-14);
  return adapt(f, a, b, r, e, tol, 0);
}

double clock_hazard(const Clock& clock, double s) {
  if (s <= 0.0) return 0.0;
  if (clock.hazard) return clock.hazard(s);
  return integrate(clock.rate, 0.0, s);
}

namespace {

// Solve F(s) = gamma on [lo, hi] where F increases, F(lo) <= gamma < F(hi).
double solve_monotone(const std::function<double(double)>& F, const std::function<double(double)>& dF, double gamma,
                      double lo, double hi) {
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double v = F(s) - gamma;
    if (v == 0.0) return s;
    if (v < 0.0) lo = s;
    else hi = s;
    if (hi - lo <= 1e-13 * std::max(hi, 1e-300)) break;
    double next = 0.5 * (lo + hi);
    if (dF) {
      const double d = dF(s);
      if (d > 0.0 && std::isfinite(d)) {
        const double n = s - v / d;
        if (n > lo && n < hi) next = n;
      }
    }
    if (next == s) break;
    s = next;
  }
  return s;
}

double invert_by_quadrature(const Clock& clock, double gamma, double horizon) {
  // March panels forward, shrinking them when a panel cannot be integrated.
  double a = 0.0, acc = 0.0;
  double width = std::isfinite(horizon) ? horizon / 16.0 : 1.0;
  for (int guard = 0; guard < 100000; ++guard) {
    double b = a + width;
    bool last = false;
    if (std::isfinite(horizon) && b >= horizon) {
      b = horizon;
      last = true;
    }
    double piece;
    try {
      piece = integrate(clock.rate, a, b, 1e-12);
    } catch (const NumericalInversionFailure&) {
      width *= 0.5;
      if (width <= 1e-14 * std::max(1.0, b))
        throw NumericalInversionFailure("rate singularity reached before the clock level was bracketed");
      continue;
    }
    if (acc + piece >= gamma) {
      const double base = acc, left = a;
      auto F = [&](double s) { return base + integrate(clock.rate, left, s, 1e-12); };
      return solve_monotone(F, clock.rate, gamma, a, b);
    }
    acc += piece;
    a = b;
    if (last) return kInfTime;
    if (!std::isfinite(horizon)) {
      width *= 2.0;
      if (a > 1e300) return kInfTime;
    }
  }
  throw NumericalInversionFailure("clock inversion did not terminate");
}

}  // namespace

double invert_clock(const Clock& clock, double gamma, double horizon) {
  if (clock.inverse) {
    const double s = clock.inverse(gamma);
    return (std::isnan(s) || s >= horizon) ? kInfTime : s;
  }
  if (clock.hazard) {
    double hi = horizon;
    if (!std::isfinite(hi)) {
      hi = 1.0;
      while (clock.hazard(hi) <= gamma) {
        hi *= 2.0;
        if (hi > 1e300) return kInfTime;
      }
    } else {
      const double top = clock.hazard(horizon);
      if (!(top > gamma)) return kInfTime;
    }
    return solve_monotone(clock.hazard, clock.rate, gamma, 0.0, hi);
  }
  return invert_by_quadrature(clock, gamma, horizon);
}

namespace {

EngineRun run_impl(TerminatedRates& proc, Rng& rng, const Caps& caps, bool resurrect) {
  EngineRun out;
  out.path.start = proc.current();
  double t = 0.0;
  for (;;) {
    if (out.log.events.size() >= caps.max_jumps) {
      out.log.terminal = TerminalCause::ExplosionCap;
      break;
    }
    Sojourn soj = proc.sojourn();
    double best = kInfTime;
    std::size_t win = 0;
    for (std::size_t i = 0; i < soj.clocks.size(); ++i) {
      const double s = invert_clock(soj.clocks[i], exp1(rng), soj.horizon);
      if (s < best || (s == best && std::isfinite(s) && soj.clocks[i].target < soj.clocks[win].target)) {
        best = s;
        win = i;
      }
    }
    const double hold = std::min(best, soj.horizon);
    if (t + hold > caps.max_time) {
      proc.advance(caps.max_time - t);
      t = caps.max_time;
      out.log.terminal = TerminalCause::TimeCap;
      break;
    }
    if (!std::isfinite(hold)) {
      out.log.terminal = TerminalCause::TimeCap;
      t = kInfTime;
      break;
    }
    proc.advance(hold);
    t += hold;
    const Vertex from = proc.current();
    if (std::isfinite(best) && best < soj.horizon) {
      const FireResult fr = proc.fire(soj.clocks[win], rng);
      out.log.events.push_back({t, from, fr.to, fr.cause});
      if (fr.moved) out.path.jumps.push_back({t, fr.to});
      continue;
    }
    // Horizon reached with no clock firing.
    if (from == proc.root()) {
      out.log.terminal = TerminalCause::RootTimeExhausted;
      break;
    }
    if (!resurrect) {
      out.log.terminal = TerminalCause::Killed;
      out.path.killed = true;
      break;
    }
    const Vertex to = proc.resurrect();
    if (to == kNoVertex) throw StateError("process cannot resurrect");
    out.log.events.push_back({t, from, to, EventCause::Resurrect});
    out.path.jumps.push_back({t, to});
  }
  out.path.lifetime = t;
  return out;
}

}  // namespace

EngineRun run_terminated(TerminatedRates& process, Rng& rng, const Caps& caps) {
  return run_impl(process, rng, caps, false);
}

EngineRun run_with_resurrection(TerminatedRates& process, Rng& rng, const Caps& caps) {
  return run_impl(process, rng, caps, true);
}

double path_log_density(TerminatedRates& proc, const PathRecord& path, double horizon) {
  if (proc.current() != path.start) throw DomainError("path does not start at the process state");
  Rng dummy(0);
  double t = 0.0, logd = 0.0;
  for (const auto& j : path.jumps) {
    const double dt = j.time - t;
    if (dt < 0.0 || j.time > horizon) throw DomainError("path jump times out of order or beyond horizon");
    Sojourn soj = proc.sojourn();
    if (dt > soj.horizon) return -kInfTime;
    double rate = 0.0;
    const Clock* hit = nullptr;
    for (const auto& c : soj.clocks) {
      logd -= clock_hazard(c, dt);
      if (c.target == j.target) {
        rate += c.rate(dt);
        if (!hit) hit = &c;
      }
    }
    if (!hit || !(rate > 0.0)) return -kInfTime;
    logd += std::log(rate);
    proc.advance(dt);
    const FireResult fr = proc.fire(*hit, dummy);
    if (!fr.moved || fr.to != j.target) throw DomainError("path jump is not a walker move of this process");
    t = j.time;
  }
  const double rest = horizon - t;
  Sojourn soj = proc.sojourn();
  if (rest > soj.horizon) return -kInfTime;
  for (const auto& c : soj.clocks) logd -= clock_hazard(c, rest);
  return logd;
}

}  // namespace repel
