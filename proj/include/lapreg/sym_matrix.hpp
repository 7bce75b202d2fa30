#pragma once

#include <Eigen/Dense>

namespace lapreg {

// Dense symmetric matrix. Construction mirrors the input through its
// transpose, so A(u,v) and A(v,u) are the same double bit for bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::Index n) : m_(Eigen::MatrixXd::Zero(n, n)) {}
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix identity(Eigen::Index n) {
    return SymMatrix(Eigen::MatrixXd::Identity(n, n));
  }

  Eigen::Index order() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double trace() const { return m_.trace(); }
  bool all_finite() const { return m_.allFinite(); }

 private:
  Eigen::MatrixXd m_;
};

}  // namespace lapreg
