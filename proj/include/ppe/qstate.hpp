#pragma once

// Dense statevector core.
//
// Bit convention (used by every module): qubit j is bit j of the flat basis
// index, so qubit 0 is the least significant bit. Whenever a subset of qubits
// is flattened into a sub-index, the listed qubits fill the sub-index from
// the least significant bit upwards in list order.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ppe/linalg.hpp"
#include "ppe/rng.hpp"

namespace ppe {

inline constexpr int kMaxQubits = 26;  // 2^26 amplitudes = 1 GiB

class PureState {
 public:
  // |0...0> on n qubits.
  explicit PureState(int n_qubits);
  PureState(int n_qubits, Vector amplitudes);

  static PureState basis(int n_qubits, std::uint64_t index);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Vector& amplitudes() noexcept { return amplitudes_; }
  cplx operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

  double norm_squared() const { return amplitudes_.squaredNorm(); }
  void normalize();

 private:
  int n_qubits_;
  Vector amplitudes_;
};

// Kronecker product |high> (x) |low>; `low` keeps qubits 0..n_low-1.
PureState tensor(const PureState& high, const PureState& low);

// Computational-basis measurement record on an ordered qubit list:
// bit i of `bits` is the outcome on the i-th listed qubit.
struct Outcome {
  std::uint64_t bits = 0;
  int length = 0;

  // Most significant listed qubit first, e.g. "0110".
  std::string to_string() const;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Tripartition {
  std::vector<int> r_qubits;
  std::vector<int> s_qubits;
  std::vector<int> e_qubits;
  double gamma = 0.0;
  double p = 0.0;

  int n_qubits() const noexcept {
    return static_cast<int>(r_qubits.size() + s_qubits.size() + e_qubits.size());
  }
  int r_size() const noexcept { return static_cast<int>(r_qubits.size()); }
  int s_size() const noexcept { return static_cast<int>(s_qubits.size()); }
  int e_size() const noexcept { return static_cast<int>(e_qubits.size()); }
  double gamma_eff() const { return double(r_size()) / n_qubits(); }
  double p_eff() const { return double(s_size()) / n_qubits(); }

  // |R| = round(gamma N), |S| = round(p N), remainder to E; contiguous blocks
  // R, S, E starting at qubit 0.
  static Tripartition from_fractions(double gamma, double p, int n_qubits);
  // Explicit integer sizes, contiguous blocks R, S, E.
  static Tripartition from_sizes(int r_size, int s_size, int n_qubits);
  // Arbitrary disjoint index lists covering 0..N-1.
  static Tripartition from_indices(std::vector<int> r, std::vector<int> s, std::vector<int> e);

  // Throws std::invalid_argument unless the lists are disjoint and cover
  // 0..N-1. With require_rs, also demands |R| >= 1 and |S| >= 1.
  void validate(bool require_rs = true) const;
};

/// Hermitian, unit-trace operator on a named subsystem.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Validates shape, hermiticity and trace at `tol` unless tol < 0.
  explicit DensityMatrix(Matrix entries, double tol = 1e-10);

  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }
  double trace() const { return entries_.trace().real(); }
  double purity() const;

 private:
  Matrix entries_;
};

/// Haar-random pure state: i.i.d. complex normals, normalized.
PureState haar_random_state(int n_qubits, RngStream& rng);

/// Haar-random dim x dim unitary (dim in {2, 4}) via QR of a complex Ginibre
/// matrix with the diagonal of R rotated to be positive real.
Matrix haar_random_unitary(int dim, RngStream& rng);

/// Applies a 4x4 unitary to qubits (j, k). The gate's row/column index is
/// q_j + 2 q_k, i.e. q_j is the low bit.
void apply_two_qubit_gate(PureState& state, const Eigen::Matrix4cd& gate, int j, int k);
/// Single-qubit gate on qubit j.
void apply_one_qubit_gate(PureState& state, const Eigen::Matrix2cd& gate, int j);

/// Projects onto `outcome` on s_qubits in the Z basis. Returns the
/// unnormalized projected state and its Born probability.
std::pair<PureState, double> project_onto_outcome(const PureState& state,
                                                  std::span<const int> s_qubits,
                                                  const Outcome& outcome);

/// Reduced density matrix on `keep`; the kept qubits are sorted ascending and
/// packed little-endian.
DensityMatrix partial_trace_state(const PureState& state, std::vector<int> keep);

enum class Side { Low, High };

/// Partial trace on a bipartite layout of dimension d_keep * d_drop.
/// Side::Low drops the low-order factor (index = drop + d_drop * keep),
/// Side::High drops the high-order one (index = keep + d_keep * drop).
DensityMatrix partial_trace_dm(const DensityMatrix& dm, int d_keep, int d_drop, Side drop_side);

/// Relabels qubits: new qubit i is old qubit order[i].
PureState reorder_qubits(const PureState& state, std::span<const int> order);

/// Flattens the amplitude vector into a matrix M(row, col) where the row
/// index packs `row_qubits` and the column index packs `col_qubits` (both
/// little-endian in list order). The two lists must partition all qubits.
Matrix reshape_amplitudes(const PureState& state, std::span<const int> row_qubits,
                          std::span<const int> col_qubits);

}  // namespace ppe
