#pragma once

#include <Eigen/Dense>

#include "lapreg/sym_matrix.hpp"

namespace lapreg {

// Eigenvalues at or below kRankTol * max|eigenvalue| count as zero.
inline constexpr double kRankTol = 1e-10;

// Eigenvalues ascending; column i of `vectors` pairs with values(i).
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Eigen::Index size() const { return values.size(); }
  double max_abs() const;
  // Reassembles V diag(f(lambda)) V'.
  template <typename F>
  SymMatrix apply(F&& f) const {
    Eigen::VectorXd mapped = values.unaryExpr(f);
    return SymMatrix(vectors * mapped.asDiagonal() * vectors.transpose());
  }
};

// Throws ParameterError on non-finite entries.
Spectrum eig_sym(const SymMatrix& a);

SymMatrix pseudoinverse(const SymMatrix& a, double tol = kRankTol);
SymMatrix pseudoinverse(const Spectrum& s, double tol = kRankTol);

int numerical_rank(const Spectrum& s, double tol = kRankTol);

// Log of the product of the retained (positive) eigenvalues. Rank zero gives
// the empty product, log = 0.
struct PseudoDeterminant {
  double log_value = 0.0;
  int rank = 0;

  double value() const;
};

PseudoDeterminant pseudodeterminant(const SymMatrix& a, double tol = kRankTol);
PseudoDeterminant pseudodeterminant(const Spectrum& s, double tol = kRankTol);

// I - v v' / |v|^2. Throws ParameterError for v = 0.
SymMatrix projector_complement(const Eigen::VectorXd& v);

// Orthonormal n x (n-1) basis of the complement of v (v != 0).
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& v);

// exp(t A) = V exp(t Lambda) V'.
SymMatrix matrix_exp_sym(const SymMatrix& a, double t);
SymMatrix matrix_exp_sym(const Spectrum& s, double t);

struct Norms {
  double frobenius = 0.0;
  double spectral = 0.0;
};

Norms norms(const SymMatrix& a);
double frobenius_norm(const Eigen::MatrixXd& a);
double spectral_norm(const SymMatrix& a);

}  // namespace lapreg
