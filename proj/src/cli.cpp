#include "lapreg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lapreg/errors.hpp"
#include "lapreg/experiments.hpp"
#include "lapreg/graph.hpp"
#include "lapreg/partition.hpp"
#include "lapreg/regularized_sdp.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

Graph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open graph file " + path);
  return read_edge_list(f);
}

json matrix_json(const Eigen::MatrixXd& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

// Everything a command needs to produce its outputs; filled in by CLI11.
struct Options {
  int width = 6, height = 7;
  std::int64_t swaps = 0;
  std::optional<std::uint64_t> seed;
  std::string out, graph, penalty = "logdet", which, manifest, method = "sweep";
  std::string norm = "frobenius";
  std::optional<double> eta;
  int replicates = 0;
  int workers = 1;
  std::vector<std::int64_t> swap_list{4};
  std::vector<double> m_list{1.0};
  double eta_min = 1e-2, eta_max = 1e2;
  int eta_points = 50;
  double threshold = 0.0;
  int node = 0;
};

void write_manifest(const std::string& out_path, const std::string& command,
                    const std::vector<std::string>& args, const CLI::App& sub,
                    const Options& opt) {
  json config = json::object();
  for (const CLI::Option* o : sub.get_options()) {
    const std::string name = o->get_single_name();
    if (name.empty() || name == "help") continue;
    if (o->count() > 0) {
      const auto& r = o->results();
      config[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!o->get_default_str().empty()) {
      config[name] = o->get_default_str();
    }
  }
  json m{{"tool", "lapreg"},
         {"version", kVersion},
         {"command", command},
         {"argv", args},
         {"base_seed", opt.seed ? json(*opt.seed) : json(nullptr)},
         {"config", config},
         {"outputs", json::array({out_path})}};
  write_atomic(out_path + ".manifest.json", m.dump(2) + "\n");
}

std::string cmd_generate(const Options& o) {
  if (o.swaps < 0) throw UsageError("--swaps must be >= 0");
  if (o.swaps > 0 && !o.seed) throw UsageError("--seed is required when --swaps > 0");
  Graph g = generate_lattice(o.width, o.height);
  if (o.swaps > 0) {
    Rng rng = make_rng(*o.seed, {});
    g = edge_swap(g, o.swaps, rng);
  }
  std::ostringstream s;
  write_edge_list(s, g);
  return s.str();
}

std::string cmd_spectrum(const Options& o) {
  const Graph g = load_graph(o.graph);
  const Spectrum s = eig_sym(normalized_laplacian(g));
  const SymMatrix plus = pseudoinverse(s);
  const double tau = plus.trace();
  Eigen::VectorXd theta = eig_sym(plus).values / tau;
  std::sort(theta.data(), theta.data() + theta.size(), std::greater<>());
  json j{{"n", g.num_nodes()},
         {"edges", g.num_edges()},
         {"connected", g.is_connected()},
         {"eigenvalues", vector_json(s.values)},
         {"tau", tau},
         {"theta_eigenvalues", vector_json(theta)}};
  return j.dump(2) + "\n";
}

std::string cmd_estimate(const Options& o) {
  const Graph g = load_graph(o.graph);
  const SymMatrix L = normalized_laplacian(g);
  const Eigen::VectorXd d = g.degrees();
  RegSolution sol;
  if (o.penalty == "none") {
    sol = solve_unregularized(L, d);
  } else {
    if (!o.eta) throw UsageError("--eta is required for penalty " + o.penalty);
    if (!(*o.eta > 0.0) || !std::isfinite(*o.eta)) throw UsageError("--eta must be > 0");
    sol = o.penalty == "logdet" ? solve_logdet(L, d, *o.eta) : solve_entropy(L, d, *o.eta);
  }
  json j{{"penalty", penalty_name(sol.penalty)},
         {"n", g.num_nodes()},
         {"eta", std::isfinite(sol.eta) ? json(sol.eta) : json(nullptr)},
         {"nu", sol.nu},
         {"trace", sol.theta_hat.trace()},
         {"disconnected", sol.disconnected},
         {"theta", matrix_json(sol.theta_hat.matrix())}};
  if (sol.disconnected) {
    j["warning"] = "input graph is disconnected; the solution mixes components";
  }
  return j.dump(2) + "\n";
}

std::string cmd_partition(const Options& o) {
  const Graph g = load_graph(o.graph);
  const Spectrum s = eig_sym(normalized_laplacian(g));
  json j{{"method", o.method}, {"threshold", o.threshold}};
  if (o.method == "local") {
    if (o.node < 0 || o.node >= g.num_nodes()) throw UsageError("--node out of range");
    j["node"] = o.node;
    j["members"] = local_partition(pseudoinverse(s), o.node, o.threshold);
    return j.dump(2) + "\n";
  }
  if (s.size() < 2) throw UsageError("graph needs at least two nodes");
  Eigen::VectorXd x = s.vectors.col(1);
  // Fix the eigenvector sign so output does not depend on the solver.
  Eigen::Index top = 0;
  x.cwiseAbs().maxCoeff(&top);
  if (x(top) < 0.0) x = -x;
  const Cut cut = o.method == "best" ? best_sweep_cut(g, x) : sweep_cut(g, x, o.threshold);
  j["side_c"] = cut.side_c;
  j["side_complement"] = cut.side_complement;
  j["conductance"] = cut.conductance ? json(*cut.conductance) : json(nullptr);
  j["vector"] = vector_json(x);
  return j.dump(2) + "\n";
}

std::string run_plan(const FigurePlan& plan) {
  std::ostringstream s;
  const ExperimentConfig& c = plan.config;
  switch (plan.kind) {
    case FigureKind::kOrderStats: {
      Rng rng = make_rng(c.base_seed, {0x317061});
      write_order_stats_csv(s, run_prior_order_stats(plan.shape_grid, plan.k, c.replicates, rng));
      break;
    }
    case FigureKind::kThetaSpectrum:
      write_theta_spectrum_csv(s, run_theta_spectrum(c), c.num_edges());
      break;
    case FigureKind::kErrorSweep:
      write_sweep_csv(s, run_error_sweep(c));
      break;
    case FigureKind::kOptimalEta:
      write_optimal_eta_csv(s, run_optimal_eta(c));
      break;
  }
  return s.str();
}

std::string cmd_figure(const Options& o) {
  if (!o.seed) throw UsageError("--seed is required for experiment commands");
  FigurePlan plan;
  try {
    plan = figure_plan(o.which, o.replicates, *o.seed, o.workers);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  return run_plan(plan);
}

std::string cmd_sweep(const Options& o) {
  if (!o.seed) throw UsageError("--seed is required for experiment commands");
  ExperimentConfig c;
  c.width = o.width;
  c.height = o.height;
  c.swap_counts = o.swap_list;
  c.m_over_mu = o.m_list;
  c.eta_grid = log_grid(o.eta_min, o.eta_max, o.eta_points);
  c.replicates = o.replicates > 0 ? o.replicates : 100;
  c.base_seed = *o.seed;
  c.norm = o.norm == "spectral" ? ErrorNorm::kSpectral : ErrorNorm::kFrobenius;
  c.workers = o.workers;
  std::ostringstream s;
  write_sweep_csv(s, run_error_sweep(c));
  return s.str();
}

int emit_error(std::ostream& err, const std::string& kind, const std::string& message,
               int code) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Regularized Laplacian estimation toolkit", "lapreg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "base RNG seed"); };
  auto add_out = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--out", o.out, "output path ('-' for stdout)");
    if (required) opt->required();
  };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", o.workers, "replicate worker threads")
        ->envname("LAPREG_WORKERS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* gen = app.add_subcommand("generate", "write a (swapped) lattice edge list");
  gen->add_option("--width", o.width)->check(CLI::Range(2, 100000))->capture_default_str();
  gen->add_option("--height", o.height)->check(CLI::Range(2, 100000))->capture_default_str();
  gen->add_option("--swaps", o.swaps, "accepted degree-preserving swaps")->capture_default_str();
  add_seed(gen);
  add_out(gen, true);

  auto* spectrum = app.add_subcommand("spectrum", "normalized Laplacian and Theta spectra");
  spectrum->add_option("--graph", o.graph)->required();
  add_out(spectrum, false);

  auto* est = app.add_subcommand("estimate", "solve the regularized SDP for a graph");
  est->add_option("--graph", o.graph)->required();
  est->add_option("--penalty", o.penalty)
      ->check(CLI::IsMember({"logdet", "entropy", "none"}))
      ->capture_default_str();
  est->add_option("--eta", o.eta);
  add_out(est, true);

  auto* sweep = app.add_subcommand("sweep", "relative error over an eta grid");
  sweep->add_option("--width", o.width)->check(CLI::Range(2, 1000))->capture_default_str();
  sweep->add_option("--height", o.height)->check(CLI::Range(2, 1000))->capture_default_str();
  sweep->add_option("--swaps", o.swap_list, "swap counts s")->capture_default_str();
  sweep->add_option("--m-over-mu", o.m_list, "sampling ratios")->capture_default_str();
  sweep->add_option("--eta-min", o.eta_min)->capture_default_str();
  sweep->add_option("--eta-max", o.eta_max)->capture_default_str();
  sweep->add_option("--eta-points", o.eta_points)->check(CLI::Range(2, 100000))->capture_default_str();
  sweep->add_option("--replicates", o.replicates)->check(CLI::PositiveNumber);
  sweep->add_option("--norm", o.norm)
      ->check(CLI::IsMember({"frobenius", "spectral"}))
      ->capture_default_str();
  add_seed(sweep);
  add_workers(sweep);
  add_out(sweep, true);

  auto* fig = app.add_subcommand("figure", "regenerate the data behind a figure panel");
  fig->add_option("--which", o.which, "1a, 1b, 2a-2f or 3a-3f")->required();
  fig->add_option("--replicates", o.replicates)->check(CLI::PositiveNumber);
  add_seed(fig);
  add_workers(fig);
  add_out(fig, true);

  auto* part = app.add_subcommand("partition", "sweep cut or local partition");
  part->add_option("--graph", o.graph)->required();
  part->add_option("--method", o.method)
      ->check(CLI::IsMember({"sweep", "best", "local"}))
      ->capture_default_str();
  part->add_option("--threshold", o.threshold)->capture_default_str();
  part->add_option("--node", o.node)->capture_default_str();
  add_out(part, false);

  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("--manifest", o.manifest)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForVersion&) {
      out << kVersion << "\n";
      return 0;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }

    if (replay->parsed()) {
      std::ifstream f(o.manifest);
      if (!f) throw UsageError("cannot open manifest " + o.manifest);
      const json m = json::parse(f);
      return run(m.at("argv").get<std::vector<std::string>>(), out, err);
    }

    CLI::App* sub = app.get_subcommands().front();
    std::string result;
    if (sub == gen) result = cmd_generate(o);
    else if (sub == spectrum) result = cmd_spectrum(o);
    else if (sub == est) result = cmd_estimate(o);
    else if (sub == sweep) result = cmd_sweep(o);
    else if (sub == fig) result = cmd_figure(o);
    else result = cmd_partition(o);

    if (o.out.empty() || o.out == "-") {
      out << result;
    } else {
      write_atomic(o.out, result);
      write_manifest(o.out, sub->get_name(), args, *sub, o);
    }
    return 0;
  } catch (const UsageError& e) {
    return emit_error(err, "usage", e.what(), 2);
  } catch (const ParameterError& e) {
    return emit_error(err, "parameter", e.what(), 2);
  } catch (const AmbiguityError& e) {
    return emit_error(err, "ambiguity", e.what(), 1);
  } catch (const DomainError& e) {
    return emit_error(err, "domain", e.what(), 1);
  } catch (const ConvergenceError& e) {
    return emit_error(err, "convergence", e.what(), 1);
  } catch (const nlohmann::json::exception& e) {
    return emit_error(err, "manifest", e.what(), 2);
  } catch (const std::exception& e) {
    return emit_error(err, "runtime", e.what(), 1);
  }
}

}  // namespace lapreg::cli
