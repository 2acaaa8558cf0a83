#include "repel/percolation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "repel/errors.hpp"
#include "repel/special_functions.hpp"

namespace repel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double arg(double c, double lx, double ly) { return 2.0 * c * std::sqrt(lx * ly); }

// log of (2/π) sin(απ); I_{−ν} − I_ν = (2/π) sin(νπ) K_ν
double log_reflection(double alpha) { return std::log(2.0 / std::numbers::pi * std::sin(std::numbers::pi * alpha)); }

// 1 − I_{1−α}(z)/I_{α−1}(z)
double close_given_parent_jump(double alpha, double z) {
  if (z == 0.0) return 1.0;
  return std::exp(log_reflection(alpha) + log_bessel_k(1.0 - alpha, z) - log_bessel_i(alpha - 1.0, z));
}

// 1 − I_α(z)/I_{−α}(z)
double close_given_child_clock(double alpha, double z) {
  if (z == 0.0) return 1.0;
  return std::exp(log_reflection(alpha) + log_bessel_k(alpha, z) - log_bessel_i(-alpha, z));
}

double log_potential(double expo, double order, double c, double lam, double lam_y) {
  if (lam > 0.0) return expo * std::log(lam) + log_bessel_i(order, arg(c, lam, lam_y));
  const double power = expo + 0.5 * order;
  if (power > 1e-15) return -kInf;
  if (power < -1e-15) return kInf;
  return order * std::log(c * std::sqrt(lam_y)) - log_gamma(order + 1.0);
}

}  // namespace

void check_percolation_inputs(const RootedTree& tree, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("percolation requires 0 < alpha < 1");
  if (!tree.is_symmetric()) throw DomainError("percolation requires symmetric conductances");
}

double open_probability(double c, double lx, double ly, double alpha) {
  return bessel_i_ratio(1.0 - alpha, alpha - 1.0, arg(c, lx, ly));
}

EdgeConfiguration sample_config_given_field(const RootedTree& tree, const LocalTimeField& ell, double alpha, Rng& rng) {
  check_percolation_inputs(tree, alpha);
  EdgeConfiguration o(tree.size(), 0);
  for (Vertex v = 1; v < tree.size(); ++v) {
    const double p = open_probability(tree.c_down(v), ell[tree.parent(v)], ell[v], alpha);
    o[v] = uniform01(rng) < p ? 1 : 0;
  }
  return o;
}

double closure_prob_no_crossing(double c, double lx, double ly, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("percolation requires 0 < alpha < 1");
  return bessel_kk(1.0 - alpha, arg(c, lx, ly));
}

double no_crossing_probability(double c, double lx, double ly, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("percolation requires 0 < alpha < 1");
  return bessel_pmf(alpha - 1.0, arg(c, lx, ly), 0);
}

double opening_rate(double c, double phi_x, double phi_y, double alpha) {
  if (!(phi_y > 0.0)) return 0.0;
  const double z = arg(c, phi_x, phi_y);
  return c * std::sqrt(phi_y / phi_x) * std::exp(log_bessel_k(alpha, z) - log_bessel_k(1.0 - alpha, z));
}

ReverseRates percolation_reverse_rates(double c, double lam_x, double lam_y, double alpha) {
  ReverseRates r;
  const double z = arg(c, lam_x, lam_y);
  const double pre = c * std::sqrt(lam_y / lam_x);
  const double li_a = log_bessel_i(alpha, z), li_1ma = log_bessel_i(1.0 - alpha, z);
  r.parent_keep = pre * std::exp(li_1ma - li_a);
  r.parent_close = pre * std::exp(log_reflection(alpha) + log_bessel_k(1.0 - alpha, z) - li_a);
  r.child_keep = pre * std::exp(li_a - li_1ma);
  r.child_close = pre * std::exp(log_reflection(alpha) + log_bessel_k(alpha, z) - li_1ma);
  return r;
}

namespace {

enum ForwardTag { kMove = 0, kOpen = 1 };
enum ReverseTag { kParent = 2, kChild = 3 };

class ForwardProcess : public TerminatedRates {
 public:
  ForwardProcess(const RootedTree& tree, double alpha, double u, LocalTimeField phi, EdgeConfiguration o)
      : tree_(&tree), alpha_(alpha), u_(u), phi_(std::move(phi)), o_(std::move(o)) {}

  Vertex current() const override { return x_; }

  Sojourn sojourn() const override {
    Sojourn s;
    if (x_ == 0) s.horizon = u_ - root_time_;
    const double px = phi_[x_];
    for (Vertex y : tree_->neighbours(x_)) {
      const double c = tree_->conductance(x_, y);
      s.clocks.push_back(Clock::constant(y, c, kMove));
      const Vertex e = tree_->edge_child(x_, y);
      const double py = phi_[y];
      if (o_[e] || !(py > 0.0)) continue;
      const double cs = tree_->cstar(x_, y), nu = 1.0 - alpha_, a = alpha_;
      const double l0 = log_bessel_kk(nu, arg(cs, px, py));
      Clock k;
      k.target = y;
      k.tag = kOpen;
      k.rate = [=](double t) { return opening_rate(cs, px + t, py, a); };
      k.hazard = [=](double t) { return l0 - log_bessel_kk(nu, arg(cs, px + t, py)); };
      s.clocks.push_back(std::move(k));
    }
    return s;
  }

  void advance(double dt) override {
    phi_[x_] += dt;
    if (x_ == 0) root_time_ += dt;
    clock_ += dt;
  }

  FireResult fire(const Clock& clock, Rng&) override {
    const Vertex e = tree_->edge_child(x_, clock.target);
    if (clock.tag == kOpen) {
      o_[e] = 1;
      changes.push_back({clock_, e, true, false});
      return {EventCause::PercolationOpen, x_, false};
    }
    if (!o_[e]) {
      o_[e] = 1;
      changes.push_back({clock_, e, true, true});
    }
    x_ = clock.target;
    return {EventCause::RateClock, x_, true};
  }

  const LocalTimeField& field() const { return phi_; }
  const EdgeConfiguration& config() const { return o_; }
  std::vector<ConfigChange> changes;

 private:
  const RootedTree* tree_;
  double alpha_, u_;
  LocalTimeField phi_;
  EdgeConfiguration o_;
  Vertex x_ = 0;
  double root_time_ = 0.0, clock_ = 0.0;
};

class ReverseProcess : public TerminatedRates {
 public:
  ReverseProcess(const RootedTree& tree, LocalTimeField lambda, EdgeConfiguration o, double alpha)
      : tree_(&tree), alpha_(alpha), lam_(std::move(lambda)), o_(std::move(o)) {}

  Vertex current() const override { return x_; }

  Sojourn sojourn() const override {
    Sojourn s;
    const double lx = lam_[x_];
    s.horizon = lx;
    const double a = alpha_;
    for (Vertex y : tree_->neighbours(x_)) {
      const bool up = x_ != 0 && tree_->parent(x_) == y;
      const Vertex e = tree_->edge_child(x_, y);
      if (!o_[e]) {
        if (up) throw StateError("parent edge of the walker is closed");
        continue;
      }
      const double ly = lam_[y], c = tree_->cstar(x_, y);
      // parent: Λ^{α/2} I_α ; open child: Λ^{(1−α)/2} I_{1−α}
      const double expo = up ? 0.5 * a : 0.5 * (1.0 - a);
      const double order = up ? a : 1.0 - a;
      const double l0 = log_potential(expo, order, c, lx, ly);
      Clock k;
      k.target = y;
      k.tag = up ? kParent : kChild;
      k.rate = [=](double t) {
        const double l = lx - t;
        const double pre = c * std::sqrt(ly / l), z = arg(c, l, ly);
        return up ? pre * bessel_i_ratio(a - 1.0, a, z) : pre * bessel_i_ratio(-a, 1.0 - a, z);
      };
      k.hazard = [=](double t) {
        const double rem = lx - t;
        return l0 - log_potential(expo, order, c, rem > 0.0 ? rem : 0.0, ly);
      };
      s.clocks.push_back(std::move(k));
    }
    return s;
  }

  void advance(double dt) override {
    double& l = lam_[x_];
    l = dt >= l ? 0.0 : l - dt;
    clock_ += dt;
  }

  FireResult fire(const Clock& clock, Rng& rng) override {
    const Vertex y = clock.target;
    const Vertex e = tree_->edge_child(x_, y);
    const double z = arg(tree_->cstar(x_, y), lam_[x_], lam_[y]);
    if (clock.tag == kParent) {
      const bool close = uniform01(rng) < close_given_parent_jump(alpha_, z);
      x_ = y;
      if (close) {
        o_[e] = 0;
        changes.push_back({clock_, e, false, true});
        return {EventCause::PercolationClose, x_, true};
      }
      return {EventCause::RateClock, x_, true};
    }
    if (uniform01(rng) < close_given_child_clock(alpha_, z)) {
      o_[e] = 0;
      changes.push_back({clock_, e, false, false});
      return {EventCause::PercolationClose, x_, false};
    }
    x_ = y;
    return {EventCause::RateClock, x_, true};
  }

  const LocalTimeField& remaining() const { return lam_; }
  const EdgeConfiguration& config() const { return o_; }
  std::vector<ConfigChange> changes;

 private:
  const RootedTree* tree_;
  double alpha_;
  LocalTimeField lam_;
  EdgeConfiguration o_;
  Vertex x_ = 0;
  double clock_ = 0.0;
};

}  // namespace

ForwardPercolation run_forward_percolation(const RootedTree& tree, double alpha, double u, Rng& rng) {
  check_percolation_inputs(tree, alpha);
  if (!(u > 0.0)) throw DomainError("u must be positive");
  ForwardPercolation out;
  RayKnightTriple& tr = out.triple;
  tr.alpha = alpha;
  tr.u = u;
  std::tie(tr.phi0, tr.n0) = sample_loop_field_and_network(tree, alpha, 0.0, rng);
  out.run.initial = sample_config_given_field(tree, tr.phi0, alpha, rng);
  ForwardProcess proc(tree, alpha, u, tr.phi0, out.run.initial);
  EngineRun er = run_terminated(proc, rng);
  if (er.log.terminal != TerminalCause::RootTimeExhausted) throw NumericalError("forward percolation did not reach tau_u");
  out.run.path = er.path;
  out.run.log = std::move(er.log);
  out.run.terminal = proc.config();
  out.run.terminal_field = proc.field();
  out.run.terminal_field[0] = u;
  out.run.changes = proc.changes;
  tr.path = std::move(er.path);
  tr.phiU = out.run.terminal_field;
  tr.nU = tr.n0 + crossing_network(tree, tr.path);
  return out;
}

PercRun run_percolation_vertex_repelling(const RootedTree& tree, const LocalTimeField& lambda,
                                         const EdgeConfiguration& config, double alpha, Rng& rng) {
  check_percolation_inputs(tree, alpha);
  check_admissible(tree, lambda, alpha);
  if (config.size() != tree.size()) throw DomainError("configuration size does not match the tree");
  ReverseProcess proc(tree, lambda, config, alpha);
  EngineRun er = run_terminated(proc, rng);
  PercRun out;
  out.path = std::move(er.path);
  out.log = std::move(er.log);
  out.initial = config;
  out.terminal = proc.config();
  out.terminal_field = proc.remaining();
  out.changes = proc.changes;
  return out;
}

}  // namespace repel
