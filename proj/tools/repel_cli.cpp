// repel: batch driver for triples, inversions, percolation, mesh runs and verification suites.
//
// Exit codes: 0 success / all PASS, 1 statistical FAIL, 2 usage or validation, 3 numerical failure.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "repel/errors.hpp"
#include "repel/forward_sim.hpp"
#include "repel/inversion.hpp"
#include "repel/io.hpp"
#include "repel/mesh.hpp"
#include "repel/networks.hpp"
#include "repel/parallel.hpp"
#include "repel/percolation.hpp"
#include "repel/rng.hpp"
#include "repel/special_functions.hpp"
#include "repel/stats.hpp"
#include "repel/tree.hpp"
#include "repel/verify.hpp"

namespace fs = std::filesystem;
using namespace repel;

namespace {

struct RunConfig {
  std::string tree_path;
  double alpha = 0.0;
  double u = 1.0;
  std::size_t reps = 1;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out;

  std::string mode;
  std::string lambda;
  std::string triple;
  std::string network;
  std::string config;
  std::string levels = "3..7";
  double span = 1.0;
  std::string suite;
};

std::uint64_t seed_of(const RunConfig& c) { return c.seed.value_or(0); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Writes `text` to out/name, or to stdout when no output directory is given.
void emit(const RunConfig& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(c.out);
  write_text_file((fs::path(c.out) / name).string(), text);
}

RootedTree load_tree(const RunConfig& c, bool need_recurrent) {
  if (c.tree_path.empty()) throw ValidationError("--tree is required");
  RootedTree t = load_tree_spec(c.tree_path);
  if (need_recurrent && !t.is_recurrent()) {
    std::cerr << "notice: tree has killing off the root; using its h-transform\n";
    t = h_transform(t);
  }
  return t;
}

LocalTimeField load_lambda(const RunConfig& c, const RootedTree& tree) {
  if (!c.triple.empty()) return triple_from_json(tree, read_json_file(c.triple)).phiU;
  if (c.lambda.empty()) throw ValidationError("--lambda or --triple is required");
  return field_from_json(tree, read_json_file(c.lambda));
}

std::string replica_name(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06zu.%s", stem, i, ext);
  return buf;
}

int cmd_triple(const RunConfig& c) {
  const RootedTree tree = load_tree(c, true);
  if (!(c.alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  if (!(c.u > 0.0)) throw DomainError("u must be positive");
  std::vector<RayKnightTriple> out(c.reps);
  parallel_for(c.reps, [&](std::size_t i) {
    Rng rng = make_rng(seed_of(c), i);
    out[i] = make_triple(tree, c.alpha, c.u, rng);
  });
  std::ostringstream csv;
  csv << "replica,tau_u,jumps";
  for (Vertex v = 0; v < tree.size(); ++v) csv << ",phiU_" << tree.id(v);
  csv << '\n';
  for (std::size_t i = 0; i < c.reps; ++i) {
    csv << i << ',' << num(out[i].path.lifetime) << ',' << out[i].path.jumps.size();
    for (double x : out[i].phiU) csv << ',' << num(x);
    csv << '\n';
    if (!c.out.empty()) emit(c, replica_name("triple", i, "json"), triple_to_json(tree, out[i]).dump(1) + "\n");
  }
  emit(c, "triples.csv", csv.str());
  return 0;
}

int cmd_invert(const RunConfig& c) {
  const RootedTree tree = load_tree(c, false);
  const LocalTimeField lambda = load_lambda(c, tree);
  const InversionMode mode = parse_mode(c.mode.empty() ? "direct" : c.mode);
  std::optional<CrossingNetwork> net;
  if (!c.network.empty()) net = network_from_json(tree, read_json_file(c.network));
  if (mode == InversionMode::VertexEdge && !net) throw ValidationError("--mode vertex-edge needs --network");
  std::vector<InversionRun> runs(c.reps);
  parallel_for(c.reps, [&](std::size_t i) {
    Rng rng = make_rng(seed_of(c), i);
    runs[i] = run_inversion(mode, tree, lambda, c.alpha, rng, net ? &*net : nullptr);
  });
  std::ostringstream sum, ev;
  sum << "replica,mode,jumps,resurrects,lifetime,terminal\n";
  ev << "run_id,time,from,to,cause\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    sum << i << ',' << mode_name(r.mode) << ',' << r.jump_count() << ',' << r.resurrect_count() << ','
        << num(r.path.lifetime) << ',' << terminal_name(r.log.terminal) << '\n';
    ev << r.log.to_lines(i, tree);
  }
  emit(c, "runs.csv", sum.str());
  if (!c.out.empty()) emit(c, "events.csv", ev.str());
  return 0;
}

std::string changes_csv(const RootedTree& tree, std::size_t run, const PercRun& r) {
  std::ostringstream os;
  for (const auto& ch : r.changes)
    os << run << ',' << num(ch.time) << ',' << tree.id(tree.parent(ch.edge)) << '-' << tree.id(ch.edge) << ','
       << (ch.open ? "open" : "close") << ',' << (ch.with_jump ? 1 : 0) << '\n';
  return os.str();
}

int cmd_percolation(const RunConfig& c) {
  const std::string mode = c.mode.empty() ? "forward" : c.mode;
  const RootedTree tree = load_tree(c, mode == "forward");
  check_percolation_inputs(tree, c.alpha);
  std::ostringstream sum, chg;
  chg << "run_id,time,edge,state,with_jump\n";
  if (mode == "config-only") {
    const LocalTimeField ell = load_lambda(c, tree);
    std::vector<EdgeConfiguration> cfg(c.reps);
    parallel_for(c.reps, [&](std::size_t i) {
      Rng rng = make_rng(seed_of(c), i);
      cfg[i] = sample_config_given_field(tree, ell, c.alpha, rng);
    });
    sum << "replica";
    for (Vertex v = 1; v < tree.size(); ++v) sum << ',' << tree.id(tree.parent(v)) << '-' << tree.id(v);
    sum << '\n';
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      sum << i;
      for (Vertex v = 1; v < tree.size(); ++v) sum << ',' << static_cast<int>(cfg[i][v]);
      sum << '\n';
    }
    emit(c, "configs.csv", sum.str());
    return 0;
  }
  std::vector<PercRun> runs(c.reps);
  if (mode == "forward") {
    if (!(c.u > 0.0)) throw DomainError("u must be positive");
    parallel_for(c.reps, [&](std::size_t i) {
      Rng rng = make_rng(seed_of(c), i);
      runs[i] = run_forward_percolation(tree, c.alpha, c.u, rng).run;
    });
  } else if (mode == "invert") {
    const LocalTimeField lambda = load_lambda(c, tree);
    if (c.config.empty()) throw ValidationError("--mode invert needs --config");
    const EdgeConfiguration cfg = config_from_json(tree, read_json_file(c.config));
    parallel_for(c.reps, [&](std::size_t i) {
      Rng rng = make_rng(seed_of(c), i);
      runs[i] = run_percolation_vertex_repelling(tree, lambda, cfg, c.alpha, rng);
    });
  } else {
    throw ValidationError("unknown percolation mode '" + mode + "'");
  }
  sum << "replica,jumps,lifetime,changes";
  for (Vertex v = 1; v < tree.size(); ++v) sum << ",final_" << tree.id(tree.parent(v)) << '-' << tree.id(v);
  sum << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    sum << i << ',' << r.path.jumps.size() << ',' << num(r.path.lifetime) << ',' << r.changes.size();
    for (Vertex v = 1; v < tree.size(); ++v) sum << ',' << static_cast<int>(r.terminal[v]);
    sum << '\n';
    chg << changes_csv(tree, i, r);
  }
  emit(c, "runs.csv", sum.str());
  if (!c.out.empty()) emit(c, "changes.csv", chg.str());
  return 0;
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  try {
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
      const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
      for (int k = a; k <= b; ++k) out.push_back(k);
    } else {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    }
  } catch (const std::exception&) {
    throw ValidationError("cannot parse levels '" + s + "'");
  }
  if (out.empty()) throw ValidationError("no levels given");
  return out;
}

LambdaFunction parse_lambda_source(const std::string& s) {
  if (s.empty() || s == "tent") return tent_lambda();
  if (s.rfind("const:", 0) == 0) return constant_lambda(std::stod(s.substr(6)));
  if (s.rfind("table:", 0) == 0) return load_lambda_table(s.substr(6));
  throw ValidationError("lambda source must be tent, const:V or table:FILE");
}

int cmd_mesh(const RunConfig& c) {
  const std::vector<int> levels = parse_levels(c.levels);
  const LambdaFunction lambda = parse_lambda_source(c.lambda);
  const InversionMode mode = parse_mode(c.mode.empty() ? "mixture" : c.mode);
  std::map<int, std::vector<MeshSummary>> by_level;
  std::ostringstream csv;
  csv << "level,replica,lifetime,sup_displacement,occupation_half,hitting_half\n";
  for (int k : levels) {
    const DyadicGrid grid = build_dyadic_grid(k, c.span);
    auto& v = by_level[k];
    v.resize(c.reps);
    parallel_for(c.reps, [&](std::size_t i) {
      Rng rng = make_rng(seed_of(c), i, static_cast<std::uint64_t>(k));
      v[i] = summarize_mesh_run(grid, run_mesh_repelling(grid, lambda, c.alpha, rng, mode));
    });
    for (std::size_t i = 0; i < v.size(); ++i)
      csv << k << ',' << i << ',' << num(v[i].lifetime) << ',' << num(v[i].sup_displacement) << ','
          << num(v[i].occupation_half) << ',' << num(v[i].hitting_half) << '\n';
  }
  emit(c, "mesh_runs.csv", csv.str());
  if (levels.size() >= 3) {
    const DiagnosticsReport d = convergence_diagnostics(by_level);
    emit(c, "diagnostics.csv", d.csv());
    std::cerr << d.text();
  }
  return 0;
}

int cmd_verify(const RunConfig& c) {
  if (!c.seed) throw ValidationError("verify requires --seed");
  VerifyOptions opt;
  opt.seed = *c.seed;
  opt.reps = c.reps;
  opt.threads = c.threads;
  opt.levels = parse_levels(c.levels);
  const auto results = run_suite(c.suite, opt);
  std::vector<TestReport> all;
  bool pass = true;
  for (const auto& r : results) {
    std::printf("check %2d %s  %s (%.1fs)\n", r.number, r.pass() ? "PASS" : "FAIL", r.title.c_str(), r.seconds);
    std::cout << reports_table(r.reports);
    all.insert(all.end(), r.reports.begin(), r.reports.end());
    pass = pass && r.pass();
  }
  if (!c.out.empty()) emit(c, "reports.csv", reports_csv(all));
  return pass ? 0 : 1;
}

int cmd_specfun_table(const RunConfig& c) {
  std::ostringstream os;
  os << "function,nu,z,n,value\n";
  const double zs[] = {0.01, 0.1, 1.0, 2.0, 10.0, 30.0, 100.0};
  for (double nu : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5})
    for (double z : zs) os << "log_bessel_i," << nu << ',' << z << ",," << num(log_bessel_i(nu, z)) << '\n';
  for (double nu : {0.25, 0.5, 0.75})
    for (double z : zs) {
      os << "log_bessel_k," << nu << ',' << z << ",," << num(log_bessel_k(nu, z)) << '\n';
      os << "log_bessel_kk," << nu << ',' << z << ",," << num(log_bessel_kk(nu, z)) << '\n';
    }
  for (double nu : {-1.0, 0.0, 0.5})
    for (double z : {0.5, 2.0, 10.0})
      for (int n = 0; n <= 10; ++n) os << "bessel_pmf," << nu << ',' << z << ',' << n << ',' << num(bessel_pmf(nu, z, n)) << '\n';
  emit(c, "specfun.csv", os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex-repelling inversions of Ray-Knight identities on trees"};
  app.require_subcommand(1);
  RunConfig c;
  std::uint64_t seed_value = 0;

  auto common = [&](CLI::App* s, bool needs_tree) {
    auto* t = s->add_option("--tree", c.tree_path, "tree spec (JSON)");
    if (needs_tree) t->required();
    s->add_option("--alpha", c.alpha, "loop-soup intensity");
    s->add_option("--u", c.u, "root local time");
    s->add_option("--reps", c.reps, "replicas");
    s->add_option("--seed", seed_value, "master seed");
    s->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    s->add_option("--out", c.out, "output directory");
  };

  auto* triple = app.add_subcommand("triple", "sample Ray-Knight triples");
  common(triple, true);

  auto* invert = app.add_subcommand("invert", "run an inversion from a local-time field");
  common(invert, true);
  invert->add_option("--lambda", c.lambda, "field document (JSON vertex -> value)");
  invert->add_option("--triple", c.triple, "take the field phiU of a triple document");
  invert->add_option("--mode", c.mode, "chain | vertex-edge | mixture | direct");
  invert->add_option("--network", c.network, "crossing network document for vertex-edge mode");

  auto* perc = app.add_subcommand("percolation", "percolation forward runs, inversions or configurations");
  common(perc, true);
  perc->add_option("--mode", c.mode, "forward | invert | config-only");
  perc->add_option("--lambda", c.lambda, "field document");
  perc->add_option("--triple", c.triple, "take the field phiU of a triple document");
  perc->add_option("--config", c.config, "edge configuration document for invert mode");

  auto* mesh = app.add_subcommand("mesh", "dyadic mesh runs and convergence diagnostics");
  common(mesh, false);
  mesh->add_option("--levels", c.levels, "levels, e.g. 3..7 or 3,5,7");
  mesh->add_option("--lambda", c.lambda, "tent | const:V | table:FILE");
  mesh->add_option("--span", c.span, "interval length");
  mesh->add_option("--mode", c.mode, "mixture | direct | vertex-edge | chain");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify, false);
  verify->add_option("--suite", c.suite, "specfun | crossings | ray-knight | inversion | percolation | mesh | engine | all")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--levels", c.levels, "mesh levels");

  auto* specfun = app.add_subcommand("specfun-table", "dump special-function values as CSV");
  common(specfun, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) c.seed = seed_value;
  if (verify->parsed() && !verify->count("--reps")) c.reps = 0;
  if (c.threads) set_default_threads(c.threads);

  try {
    if (triple->parsed()) return cmd_triple(c);
    if (invert->parsed()) return cmd_invert(c);
    if (perc->parsed()) return cmd_percolation(c);
    if (mesh->parsed()) return cmd_mesh(c);
    if (verify->parsed()) return cmd_verify(c);
    if (specfun->parsed()) return cmd_specfun_table(c);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const StateError& e) {
    std::cerr << "internal state error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
