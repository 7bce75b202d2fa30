#pragma once

#include <limits>
#include <string_view>

#include <Eigen/Dense>

#include "lapreg/spectral.hpp"
#include "lapreg/sym_matrix.hpp"

namespace lapreg {

// Closed-form and numerical solvers for
//
//   minimize   Tr(L X) + (1/eta) G(X)
//   subject to X >= 0, Tr X = 1, X D^{1/2} 1 = 0
//
// with G(X) = -log|X| (pseudodeterminant) or the generalized entropy
// Tr(X log X) - Tr(X). The log-det solution is (1/eta)(L + nu I)^+ on the
// complement of D^{1/2}1, where nu solves sum_i 1/(eta (lambda_i + nu)) = 1.

enum class Penalty { kLogDet, kEntropy, kNone, kOracle };

std::string_view penalty_name(Penalty p);

// Subspace the solvers optimize over.
enum class Support {
  // Whole complement of D^{1/2}1. Extra zero eigenvalues (disconnected
  // graphs) stay in the problem and are flagged.
  kComplement,
  // Complement of D^{1/2}1 intersected with range(L); directions L maps to
  // zero are excluded, matching what the pseudoinverse does.
  kRange,
};

struct RegSolution {
  SymMatrix theta_hat;
  double eta = 0.0;
  // Multiplier of the trace constraint: the shift in (L + nu I)^+ for
  // log-det, log of the partition function over eta for entropy.
  double nu = 0.0;
  Penalty penalty = Penalty::kLogDet;
  bool disconnected = false;
  int iterations = 0;     // oracle only
  double residual = 0.0;  // oracle only: final projected-gradient norm
};

// L restricted to an orthonormal basis of the chosen subspace, already
// diagonalized: L = basis diag(values) basis' on that subspace.
struct ReducedLaplacian {
  Eigen::MatrixXd basis;   // n x k, orthonormal columns
  Eigen::VectorXd values;  // ascending
  bool disconnected = false;
};

// Throws DomainError unless L annihilates D^{1/2}1 (relative 1e-8).
ReducedLaplacian reduce_laplacian(const SymMatrix& L, const Eigen::VectorXd& degrees,
                                  Support support = Support::kComplement);

// Root t = lambda_min + nu of sum_i 1/(eta (values_i - values_0 + t)) = 1,
// by bisection on [1/eta, k/eta] followed by two Newton steps.
double solve_shift(const Eigen::VectorXd& values, double eta);

RegSolution solve_logdet(const SymMatrix& L, const Eigen::VectorXd& degrees, double eta,
                         Support support = Support::kComplement);
RegSolution solve_logdet(const ReducedLaplacian& reduced, double eta);

RegSolution solve_entropy(const SymMatrix& L, const Eigen::VectorXd& degrees, double eta,
                          Support support = Support::kComplement);

// X = u u' for the smallest nontrivial eigenvector u. Throws AmbiguityError
// when that eigenvalue is not simple.
RegSolution solve_unregularized(const SymMatrix& L, const Eigen::VectorXd& degrees);

struct OracleOptions {
  int max_iterations = 30000;
  double tolerance = 1e-12;  // on the projected-gradient norm
  // Accepted instead when the budget runs out or the line search stalls in
  // double precision (entropy at large eta has eigenvalues near e^-2eta).
  double floor_tolerance = 1e-8;
};

// Spectral projected gradient over {Y >= 0, Tr Y = 1} in a basis of the
// complement of D^{1/2}1. Test-sized problems only (n <= 30). Throws
// ConvergenceError (carrying the residual) if the iteration budget runs out.
RegSolution solve_numeric_oracle(const SymMatrix& L, const Eigen::VectorXd& degrees,
                                 double eta, Penalty penalty, OracleOptions options = {});

// Objective values on the full n x n matrix X.
double logdet_objective(const SymMatrix& L, const SymMatrix& x, double eta);
double entropy_objective(const SymMatrix& L, const SymMatrix& x, double eta);

// gamma = nu / (1 + nu) and back. With this map the trace-normalized
// projection of the symmetrized PageRank matrix equals solve_logdet's X for
// any eta whose shift is nu > 0.
double gamma_for_nu(double nu);
double nu_for_gamma(double gamma);

// P A P / Tr(P A P) with P projecting out D^{1/2}1.
SymMatrix project_and_normalize(const SymMatrix& a, const Eigen::VectorXd& degrees);

struct Feasibility {
  double trace_error = 0.0;          // |Tr X - 1|
  double nullspace_residual = 0.0;   // |X D^{1/2}1|_inf / |D^{1/2}1|_2
  double min_eigenvalue = 0.0;
  int rank = 0;
};

Feasibility check_feasibility(const SymMatrix& x, const Eigen::VectorXd& degrees);

}  // namespace lapreg
