#include "ppe/linalg.hpp"

#include <bit>
#include <stdexcept>

namespace ppe {

RealVector hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigenvalues: non-square input");
  if (m.rows() == 0) return RealVector();
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: solver failed");
  return solver.eigenvalues();
}

HermitianEigen hermitian_eigensystem(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigensystem: non-square input");
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigensystem: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& high, const Matrix& low) {
  Matrix out(high.rows() * low.rows(), high.cols() * low.cols());
  for (Eigen::Index i = 0; i < high.rows(); ++i)
    for (Eigen::Index j = 0; j < high.cols(); ++j)
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
  return out;
}

Matrix replica_swap(int d) {
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  Matrix swap = Matrix::Zero(dd, dd);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) swap(a * d + b, b * d + a) = 1.0;
  return swap;
}

bool is_power_of_two(long long d) { return d > 0 && std::has_single_bit(static_cast<unsigned long long>(d)); }

int log2_exact(long long d) {
  if (!is_power_of_two(d)) throw std::invalid_argument("log2_exact: not a power of two");
  return std::countr_zero(static_cast<unsigned long long>(d));
}

}  // namespace ppe
