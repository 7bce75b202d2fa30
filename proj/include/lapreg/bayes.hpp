#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "lapreg/graph.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/sym_matrix.hpp"

namespace lapreg {

// Wishart likelihood p(L | Lpop) with scale m, symmetric Dirichlet(alpha_shape)
// prior on the spectrum of Theta = Lpop^+ / Tr(Lpop^+), and a flat prior for
// tau = Tr(Lpop^+) on [tau_min, tau_max]. All densities are unnormalized: the
// constants depending only on m, n, alpha_shape and the observed matrix are
// dropped.
struct BayesModel {
  double m = 0.0;
  double alpha_shape = 1.0;
  Eigen::VectorXd degrees;  // of the observed graph; fixes the support
  double tau_min = 1e-12;
  double tau_max = 1e12;

  // Throws ParameterError unless m >= n-1, alpha_shape > 0 and the tau
  // interval is nonempty.
  void validate() const;
};

struct ThetaDecomp {
  double tau = 0.0;  // Tr(L^+)
  SymMatrix theta;   // L^+ / tau
};

// Throws DomainError for a matrix with no nonzero eigenvalue.
ThetaDecomp theta_of(const SymMatrix& laplacian);

// -(m/2) Tr(Lobs Lpop^+) - (m/2) log|Lpop|. Throws DomainError when Lobs does
// not vanish on the nullspace of Lpop.
double wishart_log_density(const SymMatrix& lobs, const SymMatrix& lpop, double m);

// Average of m outer products of N(0, Lpop) vectors. Throws ParameterError
// for m < n-1.
SymMatrix sample_wishart(const SymMatrix& lpop, int m, Rng& rng);

// Symmetric Dirichlet log density on the open simplex, normalizer included.
// Throws DomainError outside the simplex (tolerance 1e-9 on the sum).
double dirichlet_log_density(const Eigen::VectorXd& lambda, double alpha_shape);

// Gamma-ratio construction, done in log space so tiny shapes do not
// underflow to an all-zero draw.
Eigen::VectorXd sample_dirichlet(double alpha_shape, int k, Rng& rng);

// -U(Lpop) = (alpha-1) log|Theta| + log p(tau); -inf outside the tau interval.
double prior_log_density(const SymMatrix& lpop, const BayesModel& model);

// Likelihood plus prior. Throws DomainError when Lpop is not in the support
// {X >= 0, X D^{1/2}1 = 0, rank n-1} for the model's degree vector.
double posterior_log_density(const SymMatrix& lpop, const SymMatrix& lobs,
                             const BayesModel& model);

// eta = m tau_hat / (m + 2(alpha - 1)).
double eta_map(double m, double alpha_shape, double tau_hat);

// eta = m tau_hat / (2 q(tau_hat)) for priors of the form
// p(tau) |Theta|^{-m/2} exp{-q(tau) G(Theta)}.
double eta_map_general(double m, double tau_hat, const std::function<double(double)>& q);

struct IncidenceDraw {
  int edge = 0;  // index into the weight graph's edge list
  int sign = 1;  // +1 or -1
};

struct IncidenceSample {
  SymMatrix l0_hat;  // (1/m) sum x_i x_i'
  std::vector<IncidenceDraw> draws;
};

// Signed incidence vector x with x(u) = +s, x(v) = -s for draw edge (u, v).
Eigen::VectorXd incidence_vector(const Graph& omega, const IncidenceDraw& draw);

// Draws m edges i.i.d. with probabilities given by omega's weights (which
// must sum to one) and random signs.
IncidenceSample sample_edge_incidence(const Graph& omega, int m, Rng& rng);

// (1/m) sum of Gaussian outer products with covariance l0pop. Throws
// ParameterError when m < rank(l0pop).
SymMatrix gaussian_surrogate(const SymMatrix& l0pop, int m, Rng& rng);

}  // namespace lapreg
