#include "repel/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "repel/errors.hpp"
#include "repel/forward_sim.hpp"
#include "repel/inversion.hpp"
#include "repel/jump_engine.hpp"
#include "repel/mesh.hpp"
#include "repel/networks.hpp"
#include "repel/parallel.hpp"
#include "repel/percolation.hpp"
#include "repel/rng.hpp"
#include "repel/special_functions.hpp"
#include "repel/tree.hpp"

namespace repel {

bool CheckResult::pass() const { return !reports.empty() && all_pass(reports); }

namespace {

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::size_t reps_or(const VerifyOptions& opt, std::size_t fallback) { return opt.reps ? opt.reps : fallback; }

template <class T, class F>
std::vector<T> replicate(std::size_t n, const VerifyOptions& opt, std::uint64_t salt, F&& fn) {
  std::vector<T> out(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        Rng rng = make_rng(opt.seed, i, salt);
        out[i] = fn(rng);
      },
      opt.threads);
  return out;
}

void stamp(std::vector<TestReport>& reports, std::uint64_t seed) {
  for (auto& r : reports) r.seed = seed;
}

RootedTree two_vertex(double c = 1.0) { return make_path_tree(2, c); }

// ---------------------------------------------------------------- special functions

std::vector<TestReport> special_function_reports() {
  std::vector<TestReport> out;
  const double nus[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const double zs[] = {0.01, 1.0, 10.0, 100.0};

  double worst = 0.0;
  for (double nu : nus)
    for (double z : zs) {
      const auto top = static_cast<std::int64_t>(z + 60.0 * std::sqrt(z) + 200.0);
      double s = 0.0;
      for (std::int64_t n = 0; n <= top; ++n) s += bessel_pmf(nu, z, n);
      worst = std::max(worst, std::abs(s - 1.0));
    }
  out.push_back(tolerance_report("pmf-normalization", worst, 1e-12));

  worst = 0.0;
  for (double z : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 30.0, 35.0, 50.0, 100.0, 300.0, 700.0}) {
    const double r = bessel_i_ratio(0.5, -0.5, z);
    worst = std::max(worst, std::abs(r - std::tanh(z)) / std::tanh(z));
  }
  out.push_back(tolerance_report("ratio-half-order-tanh", worst, 1e-10));

  worst = 0.0;
  for (double z : {1e-6, 0.01, 0.1, 1.0, 2.0, 3.0, 10.0, 30.0, 100.0})
    worst = std::max(worst, std::abs(std::expm1(log_bessel_kk(0.5, z) + z)));
  out.push_back(tolerance_report("kk-half-order-exp", worst, 1e-10));

  // I_{nu-1} - I_{nu+1} = (2 nu / z) I_nu; I_{-3/2} lies outside the supported orders
  worst = 0.0;
  for (double nu : nus) {
    if (nu == -0.5) continue;
    for (double z : zs) {
      const double l0 = log_bessel_i(nu, z);
      const double lm = std::exp(log_bessel_i(nu - 1.0, z) - l0);
      const double lp = std::exp(log_bessel_i(nu + 1.0, z) - l0);
      const double err = std::abs(lm - lp - 2.0 * nu / z) / std::max(lm, lp);
      worst = std::max(worst, err);
    }
  }
  out.push_back(tolerance_report("bessel-recurrence", worst, 1e-9));

  worst = 0.0;
  for (double nu : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5})
    for (double z = 25.0; z <= 35.0; z += 1.0)
      worst = std::max(worst, std::abs(std::expm1(detail::log_bessel_i_series(nu, z) -
                                                  detail::log_bessel_i_asymptotic(nu, z))));
  out.push_back(tolerance_report("series-asymptotic-overlap", worst, 1e-9));

  worst = 0.0;
  for (double a : {-1.0, -0.3, 0.0, 0.5})
    for (double z : {0.01, 1.0, 10.0, 100.0})
      worst = std::max(worst, std::abs(bessel_i_ratio(a, a + 1.0, z) * bessel_i_ratio(a + 1.0, a, z) - 1.0));
  out.push_back(tolerance_report("ratio-reciprocity", worst, 1e-12));
  return out;
}

// ---------------------------------------------------------------- crossings

std::vector<TestReport> poisson_gamma_reports() {
  double worst = 0.0;
  std::size_t points = 0;
  const std::pair<double, double> conds[] = {{1.0, 1.0}, {0.5, 2.0}};
  for (auto [c, cp] : conds)
    for (double u : {0.3, 1.0, 4.0})
      for (double ell : {0.2, 1.0, 5.0})
        for (double alpha : {0.0, 0.5, 2.0}) {
          const double z = 2.0 * std::sqrt(c * cp) * std::sqrt(u * ell);
          for (std::int64_t n = 0; n <= 30; ++n) {
            const double a = std::exp(poisson_gamma_conditional_log_pmf(u, ell, c, cp, alpha, n));
            const double b = bessel_pmf(alpha - 1.0, z, n);
            worst = std::max(worst, std::abs(a - b));
            ++points;
          }
        }
  TestReport r = tolerance_report("poisson-gamma-vs-bessel-pmf", worst, 1e-10);
  r.n1 = points;
  return {r};
}

// All remaining-crossing states with walker at x: parent-direction edges on the path
// from x to the root carry one extra upward crossing.
void enumerate_states(const RootedTree& tree, Vertex x, std::int64_t budget,
                      const std::function<void(const CrossingNetwork&)>& visit) {
  CrossingNetwork n(tree.size());
  std::int64_t base = 0;
  for (Vertex v = x; v != tree.root(); v = tree.parent(v)) {
    n.up[v] = 1;
    ++base;
  }
  if (base > budget) return;
  std::function<void(Vertex, std::int64_t)> rec = [&](Vertex v, std::int64_t left) {
    if (v == tree.size()) {
      visit(n);
      return;
    }
    const std::int64_t extra = n.up[v];
    for (std::int64_t d = 0; 2 * d <= left; ++d) {
      n.down[v] = d;
      n.up[v] = d + extra;
      rec(v + 1, left - 2 * d);
    }
    n.down[v] = 0;
    n.up[v] = extra;
  };
  rec(1, budget - base);
}

std::vector<TestReport> jump_chain_reports() {
  std::vector<std::pair<std::string, RootedTree>> trees = {
      {"two-vertex", two_vertex()},
      {"path-3", make_path_tree(3)},
      {"star-3", make_star_tree(2)},
      {"path-4", make_path_tree(4)},
      {"star-4", make_star_tree(3)},
  };
  std::vector<TestReport> out;
  for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
    double worst = 0.0;
    std::size_t states = 0, skipped = 0;
    for (const auto& [name, tree] : trees)
      for (Vertex x = 0; x < tree.size(); ++x)
        enumerate_states(tree, x, 8, [&](const CrossingNetwork& theta) {
          if (theta.out_degree(tree, x) == 0) return;
          const auto oracle = pairing_oracle_first_step(tree, theta, x, alpha);
          if (oracle.empty()) {
            ++skipped;
            return;
          }
          const auto chain = jump_chain_probabilities(tree, theta, x, alpha);
          std::map<Vertex, double> diff;
          for (auto& [y, p] : oracle) diff[y] += p;
          for (auto& [y, p] : chain) diff[y] -= p;
          for (auto& [y, d] : diff) worst = std::max(worst, std::abs(d));
          ++states;
        });
    TestReport r = tolerance_report("jump-chain-vs-pairing-oracle alpha=" + fmt("%g", alpha), worst, 1e-12);
    r.n1 = states;
    r.detail += " states=" + std::to_string(states) + " skipped=" + std::to_string(skipped);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------- ray-knight

std::vector<TestReport> ray_knight_reports(const VerifyOptions& opt) {
  std::vector<TestReport> out;
  const std::size_t n = reps_or(opt, 100000);
  const RootedTree tree = make_path_tree(4);
  const double u = 1.0;
  std::uint64_t salt = 300;
  for (double alpha : {0.0, 0.5, 1.0}) {
    auto tri = replicate<LocalTimeField>(n, opt, salt++, [&](Rng& rng) { return make_triple(tree, alpha, u, rng).phiU; });
    auto dir = replicate<LocalTimeField>(n, opt, salt++, [&](Rng& rng) {
      return sample_loop_field_and_network(tree, alpha, u, rng).first;
    });
    for (Vertex v = 1; v < tree.size(); ++v) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = tri[i][v];
        b[i] = dir[i][v];
      }
      out.push_back(ks_two_sample(std::move(a), std::move(b),
                                  "phiU-" + tree.id(v) + " alpha=" + fmt("%g", alpha)));
    }
  }

  // calibration: the two-vertex version over 100 independent seeds
  const RootedTree small = two_vertex();
  const std::size_t m = std::max<std::size_t>(n / 50, 500);
  std::vector<int> ok(100, 0);
  parallel_for(
      100,
      [&](std::size_t s) {
        std::vector<double> a(m), b(m);
        Rng r1 = make_rng(opt.seed, s, 390), r2 = make_rng(opt.seed, s, 391);
        for (std::size_t i = 0; i < m; ++i) {
          a[i] = make_triple(small, 0.5, u, r1).phiU[1];
          b[i] = sample_loop_field_and_network(small, 0.5, u, r2).first[1];
        }
        ok[s] = ks_two_sample(std::move(a), std::move(b)).verdict == Verdict::Pass;
      },
      opt.threads);
  const int passed = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
  TestReport cal = bool_report("two-vertex-calibration", passed >= 95, std::to_string(passed) + "/100 seeds PASS");
  cal.statistic = passed;
  cal.n1 = m;
  out.push_back(cal);
  return out;
}

// ---------------------------------------------------------------- inversion

double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

std::vector<TestReport> holding_time_reports(const VerifyOptions& opt) {
  std::vector<TestReport> out;
  const std::size_t n = reps_or(opt, 100000);
  const RootedTree tree = two_vertex();
  const LocalTimeField lambda{1.0, 1.5};
  const std::int64_t m = 3;
  CrossingNetwork net(2);
  net.down[1] = m;
  net.up[1] = m;
  std::uint64_t salt = 500;
  for (double alpha : {0.0, 0.5}) {
    auto runs = replicate<InversionRun>(n, opt, salt++, [&](Rng& rng) {
      return run_vertex_edge_repelling(tree, lambda, net, alpha, rng);
    });
    // root local time at each departure from the root; first holding at the leaf
    std::vector<std::vector<double>> epochs(m);
    std::vector<double> first_leaf;
    for (const auto& run : runs) {
      double root_time = 0.0, last = 0.0;
      Vertex cur = 0;
      int k = 0;
      bool seen_leaf = false;
      for (const auto& j : run.path.jumps) {
        if (cur == 0) {
          root_time += j.time - last;
          if (k < m) epochs[k++].push_back(root_time / lambda[0]);
        } else if (!seen_leaf) {
          first_leaf.push_back((j.time - last) / lambda[1]);
          seen_leaf = true;
        }
        cur = j.target;
        last = j.time;
      }
    }
    for (std::int64_t k = 0; k < m; ++k) {
      const double a = static_cast<double>(k + 1), b = static_cast<double>(m - k);
      out.push_back(ks_one_sample(epochs[k], [=](double x) { return beta_cdf(a, b, x); },
                                  "root-departure-" + std::to_string(k + 1) + " alpha=" + fmt("%g", alpha)));
    }
    const double mm = static_cast<double>(m) + alpha - 1.0;
    out.push_back(ks_one_sample(first_leaf, [=](double x) { return beta_cdf(1.0, mm, x); },
                                "first-leaf-holding alpha=" + fmt("%g", alpha)));
  }
  return out;
}

std::vector<TestReport> equivalence_reports(const VerifyOptions& opt) {
  std::vector<TestReport> out;
  const std::size_t n = reps_or(opt, 100000);
  struct Case {
    std::string name;
    RootedTree tree;
    LocalTimeField lambda;
  };
  const std::vector<Case> cases = {
      {"two-vertex", two_vertex(), {1.0, 0.8}},
      {"path-3", make_path_tree(3), {1.0, 0.7, 0.5}},
  };
  std::uint64_t salt = 600;
  for (const auto& cs : cases)
    for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
      auto mix = replicate<InversionRun>(n, opt, salt++, [&](Rng& rng) {
        return run_vertex_repelling_mixture(cs.tree, cs.lambda, alpha, rng);
      });
      auto dir = replicate<InversionRun>(n, opt, salt++, [&](Rng& rng) {
        return run_vertex_repelling_direct(cs.tree, cs.lambda, alpha, rng);
      });
      const std::string tag = " " + cs.name + " alpha=" + fmt("%g", alpha);
      std::vector<std::int64_t> ja(n), jb(n);
      std::vector<double> la(n), lb(n);
      double total = 0.0;
      for (double v : cs.lambda) total += v;
      double worst_life = 0.0;
      std::size_t resurrects = 0, caps = 0;
      double worst_left = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ja[i] = static_cast<std::int64_t>(mix[i].jump_count());
        jb[i] = static_cast<std::int64_t>(dir[i].jump_count());
        // a 1e-9 grid keeps summation roundoff out of the comparison
        la[i] = std::round(mix[i].path.lifetime * 1e9) / 1e9;
        lb[i] = std::round(dir[i].path.lifetime * 1e9) / 1e9;
        worst_life = std::max({worst_life, std::abs(mix[i].path.lifetime - total),
                               std::abs(dir[i].path.lifetime - total)});
        resurrects += mix[i].resurrect_count() + dir[i].resurrect_count();
        caps += (mix[i].log.terminal == TerminalCause::ExplosionCap) + (dir[i].log.terminal == TerminalCause::ExplosionCap);
        if (alpha == 0.0)
          for (double v : mix[i].terminal_lambda) worst_left = std::max(worst_left, std::abs(v));
        if (alpha == 0.0)
          for (double v : dir[i].terminal_lambda) worst_left = std::max(worst_left, std::abs(v));
      }
      out.push_back(chi_square_two_sample(ja, jb, "jump-count" + tag));
      out.push_back(ks_two_sample(la, lb, "lifetime" + tag));
      if (alpha > 0.0) {
        for (Vertex v = 1; v < cs.tree.size(); ++v) {
          std::vector<double> ta(n), tb(n);
          for (std::size_t i = 0; i < n; ++i) {
            ta[i] = mix[i].terminal_lambda[v];
            tb[i] = dir[i].terminal_lambda[v];
          }
          out.push_back(ks_two_sample(ta, tb, "terminal-lambda-" + cs.tree.id(v) + tag));
        }
        out.push_back(bool_report("no-resurrect" + tag, resurrects == 0, std::to_string(resurrects) + " resurrects"));
      } else {
        out.push_back(tolerance_report("terminal-lambda-zero" + tag, worst_left, 1e-9));
        out.push_back(tolerance_report("lifetime-equals-total" + tag, worst_life, 1e-9));
      }
      out.push_back(bool_report("no-explosion-cap" + tag, caps == 0, std::to_string(caps) + " capped runs"));
    }
  return out;
}

std::vector<TestReport> round_trip_reports(const VerifyOptions& opt) {
  const std::size_t n = reps_or(opt, 1000000);
  const RootedTree tree = two_vertex();
  const double u = 1.0, ell = 1.0, half = 0.025;
  struct Fwd {
    double ell;
    std::int64_t crossings;
  };
  auto fwd = replicate<Fwd>(n, opt, 700, [&](Rng& rng) {
    const PathRecord p = simulate_ctmc_to_tau_u(tree, u, rng);
    return Fwd{local_times(p, 2)[1], crossing_network(tree, p).down[1]};
  });
  std::vector<double> kept;
  std::vector<std::int64_t> a;
  for (const auto& f : fwd)
    if (std::abs(f.ell - ell) <= half * ell) {
      kept.push_back(f.ell);
      a.push_back(f.crossings);
    }
  VerifyOptions sub = opt;
  std::vector<std::int64_t> b(kept.size());
  parallel_for(
      kept.size(),
      [&](std::size_t i) {
        Rng rng = make_rng(opt.seed, i, 701);
        const InversionRun run = run_vertex_repelling_direct(tree, {u, kept[i]}, 0.0, rng);
        b[i] = crossing_network(tree, run.path).down[1];
      },
      sub.threads);
  TestReport r = chi_square_two_sample(a, b, "round-trip-crossings bin=[0.975,1.025]");
  r.detail += " forward=" + std::to_string(n);
  return {r};
}

// ---------------------------------------------------------------- percolation

std::vector<TestReport> percolation_identity_reports(const VerifyOptions& opt) {
  std::vector<TestReport> out;
  const std::size_t n = reps_or(opt, 100000);
  const double u = 1.0;

  double worst = 0.0;
  for (double l1 : {0.01, 0.3, 1.0, 4.0})
    for (double l2 : {0.02, 0.5, 2.0})
      worst = std::max(worst, std::abs(open_probability(1.0, l1, l2, 0.5) - std::tanh(2.0 * std::sqrt(l1 * l2))));
  out.push_back(tolerance_report("open-probability-half-order-tanh", worst, 1e-12));

  struct Case {
    std::string name;
    RootedTree tree;
    double alpha;
  };
  const std::vector<Case> cases = {
      {"two-vertex", two_vertex(), 0.5}, {"path-3", make_path_tree(3), 0.5}, {"two-vertex", two_vertex(), 0.3}};
  std::uint64_t salt = 800;
  for (const auto& cs : cases) {
    const std::string tag = " " + cs.name + " alpha=" + fmt("%g", cs.alpha);
    auto runs = replicate<ForwardPercolation>(n, opt, salt++, [&](Rng& rng) {
      return run_forward_percolation(cs.tree, cs.alpha, u, rng);
    });
    for (Vertex v = 1; v < cs.tree.size(); ++v) {
      double open = 0.0, expect = 0.0, var = 0.0;
      struct Obs {
        double z, p;
        int o;
      };
      std::vector<Obs> obs(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& f = runs[i].run.terminal_field;
        const double p = open_probability(cs.tree.cstar_edge(v), f[cs.tree.parent(v)], f[v], cs.alpha);
        const int o = runs[i].run.terminal[v];
        open += o;
        expect += p;
        var += p * (1.0 - p);
        obs[i] = {edge_argument(cs.tree, f, v), p, o};
      }
      out.push_back(z_report("open-count-" + cs.tree.id(v) + tag, open, expect, std::sqrt(var)));
      if (cs.alpha == 0.5 && cs.tree.size() == 2) {
        // fixed binned fields: ten equal-count bins of the edge argument
        std::sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) { return a.z < b.z; });
        const std::size_t bins = 10;
        for (std::size_t k = 0; k < bins; ++k) {
          const std::size_t lo = k * n / bins, hi = (k + 1) * n / bins;
          double o = 0.0, e = 0.0, vv = 0.0;
          for (std::size_t i = lo; i < hi; ++i) {
            const double p = std::tanh(obs[i].z);
            o += obs[i].o;
            e += p;
            vv += p * (1.0 - p);
          }
          TestReport r = z_report("tanh-bin-" + std::to_string(k) + tag, o / (hi - lo), e / (hi - lo),
                                  std::sqrt(vv) / (hi - lo));
          r.detail += fmt2(" z in [%.4g,%.4g]", obs[lo].z, obs[hi - 1].z);
          out.push_back(r);
        }
      }
    }
    if (cs.alpha == 0.5) {
      auto dir = replicate<LocalTimeField>(n, opt, salt++, [&](Rng& rng) {
        return sample_loop_field_and_network(cs.tree, cs.alpha, u, rng).first;
      });
      for (Vertex v = 1; v < cs.tree.size(); ++v) {
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = runs[i].run.terminal_field[v];
          b[i] = dir[i][v];
        }
        out.push_back(ks_two_sample(std::move(a), std::move(b), "terminal-field-" + cs.tree.id(v) + tag));
      }
    }
  }
  return out;
}

std::vector<TestReport> percolation_inversion_reports(const VerifyOptions& opt) {
  std::vector<TestReport> out;
  const std::size_t n = reps_or(opt, 100000);
  const double u = 1.0;
  struct Case {
    std::string name;
    RootedTree tree;
    double alpha;
  };
  const std::vector<Case> cases = {
      {"two-vertex", two_vertex(), 0.3}, {"two-vertex", two_vertex(), 0.5}, {"path-3", make_path_tree(3), 0.5}};
  std::uint64_t salt = 900;
  for (const auto& cs : cases) {
    const std::string tag = " " + cs.name + " alpha=" + fmt("%g", cs.alpha);
    const RootedTree& tree = cs.tree;
    auto fwd = replicate<ForwardPercolation>(n, opt, salt++,
                                             [&](Rng& rng) { return run_forward_percolation(tree, cs.alpha, u, rng); });
    // reversed forward run: lifetime tau_u, closures at tau_u minus opening times
    std::vector<double> la(n), lb(n);
    std::vector<std::int64_t> ca(n), cb(n);
    std::vector<std::vector<double>> ta(n), tb(n);
    const std::uint64_t rsalt = salt++;
    parallel_for(
        n,
        [&](std::size_t i) {
          const PercRun& f = fwd[i].run;
          la[i] = f.path.lifetime;
          for (const auto& c : f.changes)
            if (c.open) ta[i].push_back(f.path.lifetime - c.time);
          ca[i] = static_cast<std::int64_t>(ta[i].size());
          Rng rng = make_rng(opt.seed, i, rsalt);
          const PercRun r = run_percolation_vertex_repelling(tree, f.terminal_field, f.terminal, cs.alpha, rng);
          lb[i] = r.path.lifetime;
          for (const auto& c : r.changes)
            if (!c.open) tb[i].push_back(c.time);
          cb[i] = static_cast<std::int64_t>(tb[i].size());
        },
        opt.threads);
    std::vector<double> fa, fb;
    for (std::size_t i = 0; i < n; ++i) {
      fa.insert(fa.end(), ta[i].begin(), ta[i].end());
      fb.insert(fb.end(), tb[i].begin(), tb[i].end());
    }
    out.push_back(ks_two_sample(la, lb, "reversed-lifetime" + tag));
    out.push_back(chi_square_two_sample(ca, cb, "closure-count" + tag));
    out.push_back(ks_two_sample(fa, fb, "closure-times" + tag));
  }

  // rate algebra
  double worst_sum = 0.0, worst_close = 0.0, worst_child = 0.0, worst_neg = 0.0;
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9})
    for (double lx : {0.05, 0.5, 1.0, 3.0})
      for (double ly : {0.02, 0.4, 1.0, 5.0})
        for (double c : {0.5, 1.0, 2.0}) {
          const ReverseRates r = percolation_reverse_rates(c, lx, ly, alpha);
          const double up = vertex_repelling_rate(c, lx, ly, alpha, true);
          const double down = vertex_repelling_rate(c, lx, ly, alpha, false);
          const double open = open_probability(c, lx, ly, alpha);
          worst_sum = std::max(worst_sum, std::abs(r.parent_keep + r.parent_close - up) / up);
          worst_close = std::max(worst_close, std::abs(r.parent_close - up * (1.0 - open)) / up);
          worst_child = std::max(worst_child, std::abs(open * r.child_keep - down) / down);
        }
  for (double alpha = 0.1; alpha < 0.95; alpha += 0.1)
    for (double z : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
      const double l = z / 2.0;  // C = 1, equal fields
      const ReverseRates r = percolation_reverse_rates(1.0, l, l, alpha);
      for (double v : {r.parent_keep, r.parent_close, r.child_keep, r.child_close})
        if (!(v >= 0.0)) worst_neg = std::max(worst_neg, std::isnan(v) ? 1.0 : -v);
    }
  out.push_back(tolerance_report("parent-rate-split", worst_sum, 1e-10));
  out.push_back(tolerance_report("parent-close-weight", worst_close, 1e-10));
  out.push_back(tolerance_report("open-child-rate", worst_child, 1e-10));
  out.push_back(tolerance_report("rate-nonnegativity", worst_neg, 0.0));
  return out;
}

// ---------------------------------------------------------------- engine

using ClockFactory = std::function<Clock(std::size_t, Vertex, double)>;

// Star rooted at 0: root clocks depend on absolute time, leaves return at a constant rate;
// everything stops at absolute time `stop`.
class ClockedStar : public TerminatedRates {
 public:
  ClockedStar(const RootedTree& tree, ClockFactory root_clock, double back, double stop, double offset = 0.0)
      : tree_(&tree), root_clock_(std::move(root_clock)), back_(back), stop_(stop), now_(offset) {}
  Vertex current() const override { return cur_; }
  Sojourn sojourn() const override {
    Sojourn s;
    s.horizon = stop_ - now_;
    if (cur_ == 0) {
      for (std::size_t i = 0; i < tree_->children(0).size(); ++i)
        s.clocks.push_back(root_clock_(i, tree_->children(0)[i], now_));
    } else {
      s.clocks.push_back(Clock::constant(0, back_));
    }
    return s;
  }
  void advance(double dt) override { now_ += dt; }
  FireResult fire(const Clock& c, Rng&) override {
    cur_ = c.target;
    return {EventCause::RateClock, cur_, true};
  }

 private:
  const RootedTree* tree_;
  ClockFactory root_clock_;
  double back_, stop_, now_;
  Vertex cur_ = 0;
};

Clock varied_clock(std::size_t i, Vertex target, double t0) {
  switch (i % 3) {
    case 0: {
      Clock c;
      c.target = target;
      c.rate = [t0](double s) { return 0.5 + t0 + s; };
      c.hazard = [t0](double s) { return (0.5 + t0) * s + 0.5 * s * s; };
      return c;
    }
    case 1:
      return Clock::constant(target, 0.7);
    default: {
      Clock c;
      c.target = target;
      c.rate = [t0](double s) { return 1.5 * std::exp(-(t0 + s)); };
      return c;
    }
  }
}

double star_rate(std::size_t i, double t) {
  switch (i % 3) {
    case 0: return 0.5 + t;
    case 1: return 0.7;
    default: return 1.5 * std::exp(-t);
  }
}

std::vector<TestReport> engine_reports(const VerifyOptions& opt) {
  std::vector<TestReport> out;
  const std::size_t n = reps_or(opt, 1000000);
  const RootedTree star = make_star_tree(3);
  const double stop = 1.5;
  struct First {
    double time;
    int target;  // -1 when no jump
  };
  auto firsts = replicate<First>(n, opt, 1000, [&](Rng& rng) {
    ClockedStar p(star, varied_clock, 1.0, stop);
    Caps caps;
    caps.max_jumps = 1;
    const EngineRun r = run_terminated(p, rng, caps);
    if (r.path.jumps.empty()) return First{r.path.lifetime, -1};
    return First{r.path.jumps[0].time, static_cast<int>(r.path.jumps[0].target) - 1};
  });

  // first-jump bins against the integrated path density
  const int bins = 10;
  std::vector<double> observed(3 * bins + 1, 0.0), probs(3 * bins + 1, 0.0);
  for (const auto& f : firsts) {
    if (f.target < 0) {
      observed.back() += 1.0;
      continue;
    }
    const int b = std::min(bins - 1, static_cast<int>(f.time / stop * bins));
    observed[static_cast<std::size_t>(f.target * bins + b)] += 1.0;
  }
  for (int y = 0; y < 3; ++y)
    for (int b = 0; b < bins; ++b) {
      auto dens = [&](double s) {
        ClockedStar p(star, varied_clock, 1.0, stop);
        PathRecord path;
        path.jumps.push_back({s, static_cast<Vertex>(y + 1)});
        path.lifetime = s;
        return std::exp(path_log_density(p, path, s));
      };
      probs[static_cast<std::size_t>(y * bins + b)] = integrate(dens, stop * b / bins, stop * (b + 1) / bins, 1e-12);
    }
  {
    ClockedStar p(star, varied_clock, 1.0, stop);
    PathRecord none;
    none.lifetime = stop;
    probs.back() = std::exp(path_log_density(p, none, stop));
  }
  double mass = 0.0;
  for (double p : probs) mass += p;
  out.push_back(tolerance_report("first-jump-density-mass", std::abs(mass - 1.0), 1e-8));
  out.push_back(chi_square_counts(observed, probs, "first-jump-bins-vs-density"));

  // one-jump bracket over short windows, conditional on no jump before t
  const double dt = 0.05;
  for (double t : {0.0, 0.5, 1.0}) {
    std::size_t alive = 0;
    std::vector<std::size_t> hit(3, 0);
    for (const auto& f : firsts)
      if (f.target < 0 || f.time > t) {
        ++alive;
        if (f.target >= 0 && f.time <= t + dt) ++hit[static_cast<std::size_t>(f.target)];
      }
    std::vector<double> R(3);
    for (std::size_t z = 0; z < 3; ++z) R[z] = std::exp(-integrate([&](double s) { return star_rate(z, s); }, t, t + dt));
    double worst = -kInfTime;
    std::string detail;
    for (std::size_t y = 0; y < 3; ++y) {
      double lo = 1.0 - R[y];
      for (std::size_t z = 0; z < 3; ++z)
        if (z != y) lo *= R[z];
      const double hi = 1.0 - R[y];
      const double p = static_cast<double>(hit[y]) / static_cast<double>(alive);
      const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(alive));
      worst = std::max({worst, (lo - p) / se, (p - hi) / se});
      char buf[96];
      std::snprintf(buf, sizeof buf, " %.5f<=%.5f<=%.5f", lo, p, hi);
      detail += buf;
    }
    TestReport r;
    r.name = "one-jump-bracket t=" + fmt("%g", t);
    r.statistic = worst;
    r.sigma = std::max(0.0, worst);
    r.n1 = alive;
    r = finalize(r);
    r.detail = "margin " + fmt("%.2f", worst) + " se;" + detail;
    out.push_back(r);
  }

  // renewal: continuation after S from the root vs a fresh shifted run
  {
    const RootedTree two = two_vertex();
    const double S = 0.4, stop2 = 2.0;
    const std::size_t m = std::max<std::size_t>(n / 10, 1000);
    auto next_a = replicate<double>(m, opt, 1001, [&](Rng& rng) {
      for (;;) {
        ClockedStar p(two, varied_clock, 1.0, stop2);
        const EngineRun r = run_terminated(p, rng);
        if (r.path.at(S) != 0) continue;
        for (const auto& j : r.path.jumps)
          if (j.time > S) return j.time - S;
        return r.path.lifetime - S;
      }
    });
    auto next_b = replicate<double>(m, opt, 1002, [&](Rng& rng) {
      ClockedStar p(two, varied_clock, 1.0, stop2, S);
      Caps caps;
      caps.max_jumps = 1;
      const EngineRun r = run_terminated(p, rng, caps);
      return r.path.jumps.empty() ? r.path.lifetime : r.path.jumps[0].time;
    });
    out.push_back(ks_two_sample(next_a, next_b, "renewal-next-jump"));
  }

  // normalisation: <= 2 jumps on the two-vertex tree with constant rates a (out) and b (back)
  {
    const RootedTree two = two_vertex();
    const double a = 1.0, b = 2.0, t = 1.0;
    ClockFactory constant = [a](std::size_t, Vertex target, double) { return Clock::constant(target, a); };
    auto density = [&](const std::vector<double>& times) {
      ClockedStar p(two, constant, b, kInfTime);
      PathRecord path;
      Vertex cur = 0;
      for (double s : times) {
        cur = 1 - cur;
        path.jumps.push_back({s, cur});
      }
      path.lifetime = t;
      return std::exp(path_log_density(p, path, t));
    };
    const double p0 = density({});
    const double p1 = integrate([&](double s) { return density({s}); }, 0.0, t, 1e-12);
    const double p2 = integrate(
        [&](double s2) { return integrate([&](double s1) { return density({s1, s2}); }, 0.0, s2, 1e-12); }, 0.0, t,
        1e-11);
    const double e0 = std::exp(-a * t);
    const double e1 = a * std::exp(-b * t) * std::expm1((b - a) * t) / (b - a);
    const double e2 = a * b / (b - a) * std::exp(-a * t) * (t - std::expm1((a - b) * t) / (a - b));
    TestReport norm =
        tolerance_report("two-jump-density-normalisation", std::abs(p0 + p1 + p2 - (e0 + e1 + e2)), 1e-3);
    norm.detail += fmt2(" quadrature=%.15g exact=%.15g", p0 + p1 + p2, e0 + e1 + e2);
    out.push_back(norm);
    const std::size_t m = std::max<std::size_t>(n / 10, 1000);
    auto few = replicate<int>(m, opt, 1003, [&](Rng& rng) {
      ClockedStar p(two, constant, b, kInfTime);
      Caps caps;
      caps.max_jumps = 3;
      caps.max_time = t;
      const EngineRun r = run_terminated(p, rng, caps);
      return static_cast<int>(r.log.terminal == TerminalCause::TimeCap && r.path.jumps.size() <= 2);
    });
    std::size_t k = 0;
    for (int f : few) k += static_cast<std::size_t>(f);
    out.push_back(binomial_report("absorbing-cap-two-jumps", k, m, p0 + p1 + p2));
  }
  return out;
}

// ---------------------------------------------------------------- mesh

std::vector<TestReport> mesh_reports(const VerifyOptions& opt, std::string* text) {
  const std::size_t n = reps_or(opt, 10000);
  std::vector<int> levels = opt.levels;
  if (levels.empty()) levels = {3, 4, 5, 6, 7};
  const LambdaFunction tent = tent_lambda();
  std::map<int, std::vector<MeshSummary>> by_level;
  for (int k : levels) {
    const DyadicGrid grid = build_dyadic_grid(k, 1.0);
    by_level[k] = replicate<MeshSummary>(n, opt, 1100 + static_cast<std::uint64_t>(k), [&](Rng& rng) {
      return summarize_mesh_run(grid, run_mesh_repelling(grid, tent, 0.0, rng));
    });
  }
  const DiagnosticsReport d = convergence_diagnostics(by_level);
  if (text) *text = d.text();
  std::vector<TestReport> out;
  for (const auto& st : d.stats) {
    std::string w;
    for (double x : st.w1) w += fmt("%.4g ", x);
    TestReport r;
    if (st.gating) {
      r = bool_report("w1-decreasing-" + st.name, st.decreasing, "W1: " + w);
    } else {
      r = bool_report("w1-trend-" + st.name, true, std::string(st.decreasing ? "decreasing" : "not monotone") +
                                                      " (informative) W1: " + w);
    }
    r.n1 = n;
    out.push_back(r);
  }
  return out;
}

template <class F>
CheckResult timed(int number, std::string title, const VerifyOptions& opt, F&& body) {
  CheckResult res;
  res.number = number;
  res.title = std::move(title);
  const auto t0 = std::chrono::steady_clock::now();
  res.reports = body();
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stamp(res.reports, opt.seed);
  return res;
}

}  // namespace

CheckResult check_special_functions(const VerifyOptions& opt) {
  return timed(1, "special-function kernel", opt, [&] { return special_function_reports(); });
}

CheckResult check_poisson_gamma_identity(const VerifyOptions& opt) {
  return timed(2, "Poisson-Gamma conditional equals Bessel law", opt, [&] { return poisson_gamma_reports(); });
}

CheckResult check_ray_knight(const VerifyOptions& opt) {
  return timed(3, "Ray-Knight identity", opt, [&] { return ray_knight_reports(opt); });
}

CheckResult check_jump_chain_law(const VerifyOptions& opt) {
  return timed(4, "jump-chain law vs pairing oracle", opt, [&] { return jump_chain_reports(); });
}

CheckResult check_holding_times(const VerifyOptions& opt) {
  return timed(5, "holding times", opt, [&] { return holding_time_reports(opt); });
}

CheckResult check_inversion_equivalence(const VerifyOptions& opt) {
  return timed(6, "mixture vs direct vertex repelling", opt, [&] { return equivalence_reports(opt); });
}

CheckResult check_round_trip(const VerifyOptions& opt) {
  return timed(7, "round trip at alpha=0", opt, [&] { return round_trip_reports(opt); });
}

CheckResult check_percolation_identity(const VerifyOptions& opt) {
  return timed(8, "percolation identity", opt, [&] { return percolation_identity_reports(opt); });
}

CheckResult check_percolation_inversion(const VerifyOptions& opt) {
  return timed(9, "percolation inversion", opt, [&] { return percolation_inversion_reports(opt); });
}

CheckResult check_engine(const VerifyOptions& opt) {
  return timed(10, "jump engine", opt, [&] { return engine_reports(opt); });
}

CheckResult check_mesh(const VerifyOptions& opt) {
  return timed(11, "mesh diagnostics", opt, [&] { return mesh_reports(opt, nullptr); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"specfun",     "crossings", "ray-knight", "inversion",
                                                 "percolation", "mesh",      "engine",     "all"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& opt) {
  using Fn = CheckResult (*)(const VerifyOptions&);
  static const std::map<std::string, std::vector<Fn>> table = {
      {"specfun", {check_special_functions}},
      {"crossings", {check_poisson_gamma_identity, check_jump_chain_law}},
      {"ray-knight", {check_ray_knight}},
      {"inversion", {check_holding_times, check_inversion_equivalence, check_round_trip}},
      {"percolation", {check_percolation_identity, check_percolation_inversion}},
      {"mesh", {check_mesh}},
      {"engine", {check_engine}},
      {"all",
       {check_special_functions, check_poisson_gamma_identity, check_ray_knight, check_jump_chain_law,
        check_holding_times, check_inversion_equivalence, check_round_trip, check_percolation_identity,
        check_percolation_inversion, check_engine, check_mesh}},
  };
  auto it = table.find(suite);
  if (it == table.end()) throw ValidationError("unknown suite '" + suite + "'");
  std::vector<CheckResult> out;
  for (Fn f : it->second) out.push_back(f(opt));
  return out;
}

}  // namespace repel
