#include "lapreg/sym_matrix.hpp"

#include "lapreg/errors.hpp"

namespace lapreg {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ParameterError("SymMatrix: matrix is not square");
  // (a + b) == (b + a) in IEEE arithmetic, so the result is exactly symmetric.
  m_ = 0.5 * (m + m.transpose());
}

}  // namespace lapreg
