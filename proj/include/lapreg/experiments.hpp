#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lapreg/regularized_sdp.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/sampling.hpp"
#include "lapreg/sym_matrix.hpp"

namespace lapreg {

enum class ErrorNorm { kFrobenius, kSpectral };

std::string_view norm_name(ErrorNorm norm);

// |theta_pop - theta_reg| / |theta_pop - theta_unreg|. Throws DomainError
// when the denominator is zero (degenerate replicate).
double relative_error(const SymMatrix& theta_pop, const SymMatrix& theta_reg,
                      const SymMatrix& theta_unreg, ErrorNorm norm);

// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

struct ExperimentConfig {
  int width = 6;
  int height = 7;
  std::vector<std::int64_t> swap_counts{4};
  std::vector<double> m_over_mu{1.0};
  std::vector<double> eta_grid = log_grid(1e-2, 1e2, 50);  // eta / tau_bar
  int replicates = 100;
  std::uint64_t base_seed = 0;
  ErrorNorm norm = ErrorNorm::kFrobenius;
  IsolatedNodes isolated = IsolatedNodes::kKeep;
  int workers = 1;

  // Throws ParameterError on the first violated constraint.
  void validate() const;
  int num_edges() const { return 2 * width * height - width - height; }
};

struct OrderStatsRow {
  double alpha = 0.0;
  Eigen::VectorXd mean;  // descending order statistics, averaged
};

std::vector<OrderStatsRow> run_prior_order_stats(const std::vector<double>& shape_grid, int k,
                                                 int replicates, Rng& rng);

struct ThetaSpectrumRow {
  std::int64_t s = 0;
  Eigen::VectorXd mean;  // n-1 largest eigenvalues of Theta, descending, averaged
  double gap_mean = 0.0;  // lambda_(1) - lambda_(3)
  double gap_std = 0.0;
  double max_variance = 0.0;  // largest per-rank variance across replicates
};

std::vector<ThetaSpectrumRow> run_theta_spectrum(const ExperimentConfig& config);

struct SweepRecord {
  std::int64_t s = 0;
  double m_over_mu = 0.0;
  double eta_over_tau = 0.0;
  double mean_rel_err = 0.0;
  double std_rel_err = 0.0;
  int n_reps = 0;
  std::int64_t n_rejected = 0;  // isolated-node redraws plus degenerate replicates
};

// Cells are ordered by s, then m/mu, then eta.
std::vector<SweepRecord> run_error_sweep(const ExperimentConfig& config);

struct OptimalEtaRow {
  double m_over_mu = 0.0;
  std::int64_t s = 0;
  double s_over_mu = 0.0;
  double eta_star_over_tau = 0.0;
  double min_mean_rel_err = 0.0;
};

// Argmin over each (s, m/mu) cell of a sweep. Throws DomainError when a
// minimum sits on the grid boundary (widen the grid and rerun).
std::vector<OptimalEtaRow> optimal_eta(const std::vector<SweepRecord>& records, int num_edges);
std::vector<OptimalEtaRow> run_optimal_eta(const ExperimentConfig& config);

// Theta_hat_eta used by the sweeps. The problem is solved on range(L) minus
// the trivial direction; when eta >= Tr(L^+) the trace constraint can only be
// met with nu <= 0 (gamma -> 0), and the estimate is L^+ / Tr(L^+).
SymMatrix regularized_theta(const ReducedLaplacian& reduced, double eta);

// Trace-normalized pseudoinverse of the reduced matrix.
SymMatrix unregularized_theta(const ReducedLaplacian& reduced);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_order_stats_csv(std::ostream& out, const std::vector<OrderStatsRow>& rows);
void write_theta_spectrum_csv(std::ostream& out, const std::vector<ThetaSpectrumRow>& rows,
                              int num_edges);
void write_optimal_eta_csv(std::ostream& out, const std::vector<OptimalEtaRow>& rows);

// Fixed parameter sets for the figure panels: 1a, 1b, 2a-2f, 3a-3f.
enum class FigureKind { kOrderStats, kThetaSpectrum, kErrorSweep, kOptimalEta };

struct FigurePlan {
  std::string id;
  FigureKind kind = FigureKind::kErrorSweep;
  ExperimentConfig config;
  std::vector<double> shape_grid;  // order statistics only
  int k = 41;                      // order statistics only
};

const std::vector<std::string>& figure_ids();
// Throws ParameterError for an unknown id. replicates <= 0 keeps the panel's
// default count.
FigurePlan figure_plan(const std::string& id, int replicates, std::uint64_t seed, int workers);

}  // namespace lapreg
