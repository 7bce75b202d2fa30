#include "lapreg/spectral.hpp"

#include <cmath>

#include "lapreg/errors.hpp"

namespace lapreg {

double Spectrum::max_abs() const {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

Spectrum eig_sym(const SymMatrix& a) {
  if (!a.all_finite()) throw ParameterError("eig_sym: non-finite matrix entry");
  if (a.order() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eig_sym: eigensolver did not converge", 0.0);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

int numerical_rank(const Spectrum& s, double tol) {
  const double cut = tol * s.max_abs();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (std::abs(s.values(i)) > cut) ++rank;
  }
  return rank;
}

SymMatrix pseudoinverse(const Spectrum& s, double tol) {
  const double cut = tol * s.max_abs();
  return s.apply([cut](double l) { return std::abs(l) > cut ? 1.0 / l : 0.0; });
}

SymMatrix pseudoinverse(const SymMatrix& a, double tol) {
  return pseudoinverse(eig_sym(a), tol);
}

double PseudoDeterminant::value() const { return std::exp(log_value); }

PseudoDeterminant pseudodeterminant(const Spectrum& s, double tol) {
  const double cut = tol * s.max_abs();
  PseudoDeterminant out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.values(i) > cut) {
      out.log_value += std::log(s.values(i));
      ++out.rank;
    }
  }
  return out;
}

PseudoDeterminant pseudodeterminant(const SymMatrix& a, double tol) {
  return pseudodeterminant(eig_sym(a), tol);
}

SymMatrix projector_complement(const Eigen::VectorXd& v) {
  const double sq = v.squaredNorm();
  if (!(sq > 0.0)) throw ParameterError("projector_complement: zero vector");
  const Eigen::Index n = v.size();
  return SymMatrix(Eigen::MatrixXd::Identity(n, n) - v * v.transpose() / sq);
}

Eigen::MatrixXd complement_basis(const Eigen::VectorXd& v) {
  if (!(v.squaredNorm() > 0.0)) throw ParameterError("complement_basis: zero vector");
  const Eigen::Index n = v.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

SymMatrix matrix_exp_sym(const Spectrum& s, double t) {
  return s.apply([t](double l) { return std::exp(t * l); });
}

SymMatrix matrix_exp_sym(const SymMatrix& a, double t) {
  return matrix_exp_sym(eig_sym(a), t);
}

double frobenius_norm(const Eigen::MatrixXd& a) { return a.norm(); }

double spectral_norm(const SymMatrix& a) {
  if (a.order() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Norms norms(const SymMatrix& a) {
  return {frobenius_norm(a.matrix()), spectral_norm(a)};
}

}  // namespace lapreg
