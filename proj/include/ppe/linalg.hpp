#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ppe {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Eigenvalues (ascending) of (M + M^dagger)/2.
RealVector hermitian_eigenvalues(const Matrix& m);

struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};
HermitianEigen hermitian_eigensystem(const Matrix& m);

// max_ij |M_ij - M^dagger_ij|
double hermiticity_defect(const Matrix& m);
// max_ij |(U^dagger U - I)_ij|
double unitarity_defect(const Matrix& u);

// Kronecker product; `high` occupies the high-order index bits.
Matrix kron(const Matrix& high, const Matrix& low);

// SWAP on C^d (x) C^d in Kronecker layout: |a b> -> |b a>.
Matrix replica_swap(int d);

bool is_power_of_two(long long d);
int log2_exact(long long d);

}  // namespace ppe
