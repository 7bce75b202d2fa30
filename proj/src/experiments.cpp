#include "lapreg/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "lapreg/bayes.hpp"
#include "lapreg/errors.hpp"
#include "lapreg/graph.hpp"
#include "lapreg/parallel.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg {
namespace {

// Stream tags keep the population, sample and spectrum streams apart.
constexpr std::uint64_t kPopulationStream = 0x706f70;
constexpr std::uint64_t kSampleStream = 0x73616d;
constexpr std::uint64_t kSpectrumStream = 0x737063;
constexpr int kMaxDegenerateAttempts = 1000;

double norm_of(const Eigen::MatrixXd& a, ErrorNorm norm) {
  if (norm == ErrorNorm::kFrobenius) return a.norm();
  return spectral_norm(SymMatrix(a));
}

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

SymMatrix assemble(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights) {
  return SymMatrix(basis * weights.asDiagonal() * basis.transpose());
}

Graph swapped_lattice(const ExperimentConfig& c, std::int64_t s, std::uint64_t tag,
                      std::size_t rep) {
  Graph g = generate_lattice(c.width, c.height);
  if (s == 0) return g;
  Rng rng = make_rng(c.base_seed, {tag, static_cast<std::uint64_t>(s), rep});
  return edge_swap(g, s, rng);
}

struct Population {
  Graph graph;
  SymMatrix theta;
  double tau = 0.0;
};

Population make_population(const ExperimentConfig& c, std::int64_t s, std::size_t rep) {
  Population p;
  p.graph = swapped_lattice(c, s, kPopulationStream, rep);
  const SymMatrix plus = pseudoinverse(normalized_laplacian(p.graph));
  p.tau = plus.trace();
  p.theta = SymMatrix(plus.matrix() / p.tau);
  return p;
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::string_view norm_name(ErrorNorm norm) {
  return norm == ErrorNorm::kFrobenius ? "frobenius" : "spectral";
}

double relative_error(const SymMatrix& theta_pop, const SymMatrix& theta_reg,
                      const SymMatrix& theta_unreg, ErrorNorm norm) {
  if (theta_pop.order() != theta_reg.order() || theta_pop.order() != theta_unreg.order()) {
    throw ParameterError("relative_error: dimension mismatch");
  }
  const double den = norm_of(theta_pop.matrix() - theta_unreg.matrix(), norm);
  if (!(den > 0.0)) throw DomainError("relative_error: unregularized estimate equals target");
  return norm_of(theta_pop.matrix() - theta_reg.matrix(), norm) / den;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw ParameterError("log_grid: bad range");
  std::vector<double> out(points);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) {
    out[i] = std::exp(a + (b - a) * i / (points - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

void ExperimentConfig::validate() const {
  if (width < 2 || height < 2) throw ParameterError("grid dimensions must be >= 2");
  if (replicates < 1) throw ParameterError("replicates must be >= 1");
  if (workers < 1) throw ParameterError("workers must be >= 1");
  if (eta_grid.empty()) throw ParameterError("eta grid is empty");
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] > 0.0) || (i > 0 && !(eta_grid[i] > eta_grid[i - 1]))) {
      throw ParameterError("eta grid must be strictly positive and ascending");
    }
  }
  for (auto s : swap_counts) {
    if (s < 0) throw ParameterError("swap counts must be >= 0");
  }
  for (double m : m_over_mu) {
    if (!(m > 0.0)) throw ParameterError("m/mu values must be > 0");
  }
}

std::vector<OrderStatsRow> run_prior_order_stats(const std::vector<double>& shape_grid, int k,
                                                 int replicates, Rng& rng) {
  if (replicates < 1) throw ParameterError("replicates must be >= 1");
  std::vector<OrderStatsRow> rows;
  for (double alpha : shape_grid) {
    if (!(alpha > 0.0)) throw ParameterError("Dirichlet shapes must be > 0");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(k);
    for (int r = 0; r < replicates; ++r) {
      Eigen::VectorXd x = sample_dirichlet(alpha, k, rng);
      std::sort(x.data(), x.data() + k, std::greater<>());
      acc += x;
    }
    rows.push_back({alpha, acc / replicates});
  }
  return rows;
}

std::vector<ThetaSpectrumRow> run_theta_spectrum(const ExperimentConfig& config) {
  config.validate();
  const int n = config.width * config.height;
  std::vector<ThetaSpectrumRow> rows;
  for (std::int64_t s : config.swap_counts) {
    std::vector<Eigen::VectorXd> spectra(config.replicates);
    parallel_for(spectra.size(), config.workers, [&](std::size_t r) {
      const Graph g = swapped_lattice(config, s, kSpectrumStream, r);
      const SymMatrix plus = pseudoinverse(normalized_laplacian(g));
      Eigen::VectorXd vals = eig_sym(plus).values / plus.trace();
      std::sort(vals.data(), vals.data() + n, std::greater<>());
      spectra[r] = vals.head(n - 1);
    });
    ThetaSpectrumRow row;
    row.s = s;
    row.mean = Eigen::VectorXd::Zero(n - 1);
    std::vector<double> gaps;
    for (const auto& v : spectra) {
      row.mean += v;
      gaps.push_back(v(0) - v(2));
    }
    row.mean /= config.replicates;
    for (double g : gaps) row.gap_mean += g;
    row.gap_mean /= config.replicates;
    row.gap_std = sample_std(gaps, row.gap_mean);
    Eigen::VectorXd var = Eigen::VectorXd::Zero(n - 1);
    for (const auto& v : spectra) var += (v - row.mean).cwiseAbs2();
    row.max_variance = var.maxCoeff() / config.replicates;
    rows.push_back(std::move(row));
  }
  return rows;
}

SymMatrix unregularized_theta(const ReducedLaplacian& reduced) {
  if (reduced.values.size() == 0) throw DomainError("sample Laplacian is zero");
  const Eigen::VectorXd inv = reduced.values.cwiseInverse();
  return assemble(reduced.basis, inv / inv.sum());
}

SymMatrix regularized_theta(const ReducedLaplacian& reduced, double eta) {
  if (reduced.values.size() == 0) throw DomainError("sample Laplacian is zero");
  const double tau_hat = reduced.values.cwiseInverse().sum();
  if (eta >= tau_hat) return unregularized_theta(reduced);
  return solve_logdet(reduced, eta).theta_hat;
}

std::vector<SweepRecord> run_error_sweep(const ExperimentConfig& config) {
  config.validate();
  const int mu = config.num_edges();
  const std::size_t reps = config.replicates;
  const std::size_t grid = config.eta_grid.size();
  std::vector<SweepRecord> out;
  for (std::int64_t s : config.swap_counts) {
    std::vector<Population> pops(reps);
    parallel_for(reps, config.workers,
                 [&](std::size_t r) { pops[r] = make_population(config, s, r); });
    double tau_bar = 0.0;
    for (const auto& p : pops) tau_bar += p.tau;
    tau_bar /= static_cast<double>(reps);

    for (double ratio : config.m_over_mu) {
      const int m = std::max(1, static_cast<int>(std::lround(ratio * mu)));
      std::vector<std::vector<double>> errs(reps, std::vector<double>(grid));
      std::vector<std::int64_t> rejected(reps, 0);
      parallel_for(reps, config.workers, [&](std::size_t r) {
        const Population& pop = pops[r];
        for (int attempt = 0;; ++attempt) {
          if (attempt == kMaxDegenerateAttempts) {
            throw ConvergenceError("run_error_sweep: every sample was degenerate",
                                   static_cast<double>(attempt));
          }
          Rng rng = make_rng(config.base_seed,
                             {kSampleStream, static_cast<std::uint64_t>(s),
                              static_cast<std::uint64_t>(m), r,
                              static_cast<std::uint64_t>(attempt)});
          const SampleDraw draw = sample_edges(pop.graph, m, rng, config.isolated);
          rejected[r] += draw.rejected;
          const SymMatrix L = sample_laplacian(draw, config.isolated);
          const ReducedLaplacian red =
              reduce_laplacian(L, draw.graph.degrees(), Support::kRange);
          const double den =
              norm_of(pop.theta.matrix() - unregularized_theta(red).matrix(), config.norm);
          if (!(den > 0.0)) {
            ++rejected[r];
            continue;
          }
          for (std::size_t k = 0; k < grid; ++k) {
            const SymMatrix est = regularized_theta(red, config.eta_grid[k] * tau_bar);
            errs[r][k] = norm_of(pop.theta.matrix() - est.matrix(), config.norm) / den;
          }
          return;
        }
      });
      std::int64_t total_rejected = 0;
      for (auto x : rejected) total_rejected += x;
      for (std::size_t k = 0; k < grid; ++k) {
        std::vector<double> xs(reps);
        double sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r) sum += (xs[r] = errs[r][k]);
        SweepRecord rec;
        rec.s = s;
        rec.m_over_mu = ratio;
        rec.eta_over_tau = config.eta_grid[k];
        rec.mean_rel_err = sum / static_cast<double>(reps);
        rec.std_rel_err = sample_std(xs, rec.mean_rel_err);
        rec.n_reps = config.replicates;
        rec.n_rejected = total_rejected;
        out.push_back(rec);
      }
    }
  }
  return out;
}

std::vector<OptimalEtaRow> optimal_eta(const std::vector<SweepRecord>& records, int num_edges) {
  std::vector<OptimalEtaRow> rows;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    while (j < records.size() && records[j].s == records[i].s &&
           records[j].m_over_mu == records[i].m_over_mu) {
      ++j;
    }
    std::size_t best = i;
    for (std::size_t k = i; k < j; ++k) {
      if (records[k].mean_rel_err < records[best].mean_rel_err) best = k;
    }
    if (best == i || best == j - 1) {
      throw DomainError("optimal_eta: minimum on the grid boundary at s=" +
                        std::to_string(records[i].s) + ", m/mu=" +
                        num(records[i].m_over_mu) + "; widen the eta grid and rerun");
    }
    rows.push_back({records[i].m_over_mu, records[i].s,
                    static_cast<double>(records[i].s) / num_edges, records[best].eta_over_tau,
                    records[best].mean_rel_err});
    i = j;
  }
  return rows;
}

std::vector<OptimalEtaRow> run_optimal_eta(const ExperimentConfig& config) {
  return optimal_eta(run_error_sweep(config), config.num_edges());
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "s,m_over_mu,eta_over_tau,mean_rel_err,std_rel_err,n_reps,n_rejected\n";
  for (const auto& r : records) {
    out << r.s << ',' << num(r.m_over_mu) << ',' << num(r.eta_over_tau) << ','
        << num(r.mean_rel_err) << ',' << num(r.std_rel_err) << ',' << r.n_reps << ','
        << r.n_rejected << '\n';
  }
}

void write_order_stats_csv(std::ostream& out, const std::vector<OrderStatsRow>& rows) {
  out << "alpha,rank,mean\n";
  for (const auto& row : rows) {
    for (Eigen::Index i = 0; i < row.mean.size(); ++i) {
      out << num(row.alpha) << ',' << i + 1 << ',' << num(row.mean(i)) << '\n';
    }
  }
}

void write_theta_spectrum_csv(std::ostream& out, const std::vector<ThetaSpectrumRow>& rows,
                              int num_edges) {
  out << "s,s_over_mu,rank,mean\n";
  for (const auto& row : rows) {
    const std::string ratio = num(static_cast<double>(row.s) / num_edges);
    for (Eigen::Index i = 0; i < row.mean.size(); ++i) {
      out << row.s << ',' << ratio << ',' << i + 1 << ',' << num(row.mean(i)) << '\n';
    }
  }
}

void write_optimal_eta_csv(std::ostream& out, const std::vector<OptimalEtaRow>& rows) {
  out << "m_over_mu,s,s_over_mu,eta_star_over_tau,min_mean_rel_err\n";
  for (const auto& r : rows) {
    out << num(r.m_over_mu) << ',' << r.s << ',' << num(r.s_over_mu) << ','
        << num(r.eta_star_over_tau) << ',' << num(r.min_mean_rel_err) << '\n';
  }
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"1a", "1b", "2a", "2b", "2c", "2d", "2e",
                                            "2f", "3a", "3b", "3c", "3d", "3e", "3f"};
  return ids;
}

FigurePlan figure_plan(const std::string& id, int replicates, std::uint64_t seed, int workers) {
  struct Panel {
    const char* id;
    std::int64_t s;
    double m_over_mu;
    ErrorNorm norm;
  };
  static const Panel panels[] = {
      {"2a", 4, 0.2, ErrorNorm::kFrobenius}, {"2b", 4, 1.0, ErrorNorm::kFrobenius},
      {"2c", 4, 2.0, ErrorNorm::kFrobenius}, {"2d", 0, 2.0, ErrorNorm::kFrobenius},
      {"2e", 32, 2.0, ErrorNorm::kFrobenius}, {"3a", 0, 0.2, ErrorNorm::kSpectral},
      {"3b", 4, 0.2, ErrorNorm::kSpectral},  {"3c", 32, 0.2, ErrorNorm::kSpectral},
      {"3d", 0, 2.0, ErrorNorm::kSpectral},  {"3e", 4, 2.0, ErrorNorm::kSpectral},
      {"3f", 32, 2.0, ErrorNorm::kSpectral},
  };
  FigurePlan plan;
  plan.id = id;
  plan.config.base_seed = seed;
  plan.config.workers = workers;
  auto reps = [&](int fallback) { return replicates > 0 ? replicates : fallback; };
  if (id == "1a") {
    plan.kind = FigureKind::kOrderStats;
    plan.shape_grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 50, 100};
    plan.k = 41;
    plan.config.replicates = reps(500);
    return plan;
  }
  if (id == "1b") {
    plan.kind = FigureKind::kThetaSpectrum;
    plan.config.swap_counts = {0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048};
    plan.config.replicates = reps(1000);
    return plan;
  }
  if (id == "2f") {
    plan.kind = FigureKind::kOptimalEta;
    plan.config.swap_counts = {0, 4, 32};
    plan.config.m_over_mu = {0.5, 1.0, 2.0, 5.0, 10.0};
    plan.config.replicates = reps(100);
    return plan;
  }
  for (const Panel& p : panels) {
    if (id != p.id) continue;
    plan.kind = FigureKind::kErrorSweep;
    plan.config.swap_counts = {p.s};
    plan.config.m_over_mu = {p.m_over_mu};
    plan.config.norm = p.norm;
    plan.config.replicates = reps(100);
    return plan;
  }
  std::string known;
  for (const auto& f : figure_ids()) known += (known.empty() ? "" : ", ") + f;
  throw ParameterError("unknown figure id '" + id + "' (expected one of " + known + ")");
}

}  // namespace lapreg
