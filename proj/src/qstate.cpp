#include "ppe/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "ppe/bits.hpp"
#include "ppe/errors.hpp"

namespace ppe {

namespace {

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("state needs at least one qubit");
  if (n_qubits > kMaxQubits)
    throw SizeLimitError(fmt::format("{} qubits exceeds the {}-qubit memory guard", n_qubits, kMaxQubits));
}

void check_partition(std::span<const int> a, std::span<const int> b, int n_qubits) {
  std::vector<int> seen(static_cast<std::size_t>(n_qubits), 0);
  for (auto list : {a, b})
    for (int q : list) {
      if (q < 0 || q >= n_qubits) throw std::out_of_range(fmt::format("qubit index {} out of range", q));
      if (seen[static_cast<std::size_t>(q)]++) throw std::invalid_argument(fmt::format("qubit {} listed twice", q));
    }
  if (a.size() + b.size() != static_cast<std::size_t>(n_qubits))
    throw std::invalid_argument("qubit lists do not cover the register");
}

}  // namespace

PureState::PureState(int n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  amplitudes_ = Vector::Zero(Eigen::Index{1} << n_qubits);
  amplitudes_[0] = 1.0;
}

PureState::PureState(int n_qubits, Vector amplitudes) : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits))
    throw DimensionError(fmt::format("{} amplitudes for {} qubits", amplitudes_.size(), n_qubits));
}

PureState PureState::basis(int n_qubits, std::uint64_t index) {
  PureState s(n_qubits);
  if (index >= s.dim()) throw std::out_of_range("basis index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

void PureState::normalize() {
  const double n = amplitudes_.norm();
  if (n == 0.0) throw InvariantError("cannot normalize the zero vector");
  amplitudes_ /= n;
}

PureState tensor(const PureState& high, const PureState& low) {
  const int n = high.n_qubits() + low.n_qubits();
  check_qubit_count(n);
  Vector amps(Eigen::Index{1} << n);
  const auto dl = static_cast<Eigen::Index>(low.dim());
  for (Eigen::Index h = 0; h < static_cast<Eigen::Index>(high.dim()); ++h)
    amps.segment(h * dl, dl) = high.amplitudes()[h] * low.amplitudes();
  return PureState(n, std::move(amps));
}

std::string Outcome::to_string() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) s.push_back(((bits >> i) & 1U) ? '1' : '0');
  return s;
}

// -- Tripartition -------------------------------------------------------------

Tripartition Tripartition::from_fractions(double gamma, double p, int n_qubits) {
  if (!(gamma >= 0.0 && gamma <= 1.0 && p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(fmt::format("gamma={} p={} outside [0,1]", gamma, p));
  const int r = static_cast<int>(std::lround(gamma * n_qubits));
  const int s = static_cast<int>(std::lround(p * n_qubits));
  if (r + s > n_qubits)
    throw std::invalid_argument(fmt::format("gamma={} p={} at N={} gives |R|+|S|={} > N", gamma, p, n_qubits, r + s));
  Tripartition t = from_sizes(r, s, n_qubits);
  t.gamma = gamma;
  t.p = p;
  return t;
}

Tripartition Tripartition::from_sizes(int r_size, int s_size, int n_qubits) {
  if (r_size < 0 || s_size < 0 || r_size + s_size > n_qubits)
    throw std::invalid_argument(fmt::format("sizes |R|={} |S|={} do not fit N={}", r_size, s_size, n_qubits));
  Tripartition t;
  int q = 0;
  for (int i = 0; i < r_size; ++i) t.r_qubits.push_back(q++);
  for (int i = 0; i < s_size; ++i) t.s_qubits.push_back(q++);
  while (q < n_qubits) t.e_qubits.push_back(q++);
  t.gamma = t.gamma_eff();
  t.p = t.p_eff();
  return t;
}

Tripartition Tripartition::from_indices(std::vector<int> r, std::vector<int> s, std::vector<int> e) {
  Tripartition t;
  t.r_qubits = std::move(r);
  t.s_qubits = std::move(s);
  t.e_qubits = std::move(e);
  t.validate(false);
  t.gamma = t.gamma_eff();
  t.p = t.p_eff();
  return t;
}

void Tripartition::validate(bool require_rs) const {
  const int n = n_qubits();
  if (n < 1) throw std::invalid_argument("empty tripartition");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto* list : {&r_qubits, &s_qubits, &e_qubits})
    for (int q : *list) {
      if (q < 0 || q >= n) throw std::out_of_range(fmt::format("qubit index {} out of range for N={}", q, n));
      if (seen[static_cast<std::size_t>(q)]++) throw std::invalid_argument(fmt::format("qubit {} in two subsystems", q));
    }
  if (require_rs && (r_qubits.empty() || s_qubits.empty()))
    throw std::invalid_argument("partial projected ensemble needs |R| >= 1 and |S| >= 1");
}

// -- DensityMatrix --------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix entries, double tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw DimensionError("density matrix must be square and non-empty");
  if (tol >= 0.0) {
    if (hermiticity_defect(entries_) > tol) throw InvariantError("density matrix is not Hermitian");
    if (std::abs(entries_.trace() - cplx(1.0)) > tol) throw InvariantError("density matrix trace differs from 1");
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / double(dim));
}

double DensityMatrix::purity() const { return entries_.squaredNorm(); }

// -- sampling -------------------------------------------------------------------

PureState haar_random_state(int n_qubits, RngStream& rng) {
  check_qubit_count(n_qubits);
  Vector amps(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] = rng.complex_normal();
  PureState s(n_qubits, std::move(amps));
  s.normalize();
  return s;
}

Matrix haar_random_unitary(int dim, RngStream& rng) {
  if (dim != 2 && dim != 4) throw std::invalid_argument(fmt::format("haar_random_unitary: dim {} not in {{2,4}}", dim));
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int i = 0; i < dim; ++i) {
    const cplx d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : cplx(1.0);
  }
  return q;
}

// -- gates ------------------------------------------------------------------------

void apply_two_qubit_gate(PureState& state, const Eigen::Matrix4cd& gate, int j, int k) {
  const int n = state.n_qubits();
  if (j < 0 || k < 0 || j >= n || k >= n) throw std::out_of_range(fmt::format("gate qubits ({}, {}) out of range", j, k));
  if (j == k) throw std::invalid_argument("two-qubit gate needs distinct qubits");
  if (unitarity_defect(gate) > 1e-12) throw InvariantError("two-qubit gate is not unitary");

  const int lo = std::min(j, k);
  const int hi = std::max(j, k);
  const std::uint64_t bj = std::uint64_t{1} << j;
  const std::uint64_t bk = std::uint64_t{1} << k;
  const std::uint64_t lo_mask = (std::uint64_t{1} << lo) - 1;
  const std::uint64_t hi_mask = (std::uint64_t{1} << hi) - 1;
  const std::uint64_t count = state.dim() >> 2;
  cplx* a = state.amplitudes().data();
  for (std::uint64_t c = 0; c < count; ++c) {
    // insert zero bits at positions lo and hi
    std::uint64_t base = (c & lo_mask) | ((c & ~lo_mask) << 1);
    base = (base & hi_mask) | ((base & ~hi_mask) << 1);
    const std::uint64_t i0 = base, i1 = base | bj, i2 = base | bk, i3 = base | bj | bk;
    const cplx v0 = a[i0], v1 = a[i1], v2 = a[i2], v3 = a[i3];
    a[i0] = gate(0, 0) * v0 + gate(0, 1) * v1 + gate(0, 2) * v2 + gate(0, 3) * v3;
    a[i1] = gate(1, 0) * v0 + gate(1, 1) * v1 + gate(1, 2) * v2 + gate(1, 3) * v3;
    a[i2] = gate(2, 0) * v0 + gate(2, 1) * v1 + gate(2, 2) * v2 + gate(2, 3) * v3;
    a[i3] = gate(3, 0) * v0 + gate(3, 1) * v1 + gate(3, 2) * v2 + gate(3, 3) * v3;
  }
}

void apply_one_qubit_gate(PureState& state, const Eigen::Matrix2cd& gate, int j) {
  if (j < 0 || j >= state.n_qubits()) throw std::out_of_range(fmt::format("qubit {} out of range", j));
  if (unitarity_defect(gate) > 1e-12) throw InvariantError("one-qubit gate is not unitary");
  const std::uint64_t bj = std::uint64_t{1} << j;
  const std::uint64_t lo_mask = bj - 1;
  cplx* a = state.amplitudes().data();
  for (std::uint64_t c = 0; c < (state.dim() >> 1); ++c) {
    const std::uint64_t i0 = (c & lo_mask) | ((c & ~lo_mask) << 1);
    const std::uint64_t i1 = i0 | bj;
    const cplx v0 = a[i0], v1 = a[i1];
    a[i0] = gate(0, 0) * v0 + gate(0, 1) * v1;
    a[i1] = gate(1, 0) * v0 + gate(1, 1) * v1;
  }
}

// -- projection and partial traces -----------------------------------------------------

std::pair<PureState, double> project_onto_outcome(const PureState& state, std::span<const int> s_qubits,
                                                  const Outcome& outcome) {
  if (outcome.length != static_cast<int>(s_qubits.size()))
    throw std::invalid_argument(fmt::format("outcome has {} bits for {} measured qubits", outcome.length, s_qubits.size()));
  for (int q : s_qubits)
    if (q < 0 || q >= state.n_qubits()) throw std::out_of_range(fmt::format("qubit index {} out of range", q));
  const QubitGather gather(s_qubits, state.n_qubits());
  PureState projected = state;
  Vector& amps = projected.amplitudes();
  for (std::uint64_t x = 0; x < state.dim(); ++x)
    if (gather(x) != outcome.bits) amps[static_cast<Eigen::Index>(x)] = 0.0;
  const double prob = amps.squaredNorm();
  return {std::move(projected), prob};
}

Matrix reshape_amplitudes(const PureState& state, std::span<const int> row_qubits, std::span<const int> col_qubits) {
  check_partition(row_qubits, col_qubits, state.n_qubits());
  const QubitGather rows(row_qubits, state.n_qubits());
  const QubitGather cols(col_qubits, state.n_qubits());
  Matrix m(Eigen::Index{1} << row_qubits.size(), Eigen::Index{1} << col_qubits.size());
  const cplx* a = state.amplitudes().data();
  for (std::uint64_t x = 0; x < state.dim(); ++x)
    m(static_cast<Eigen::Index>(rows(x)), static_cast<Eigen::Index>(cols(x))) = a[x];
  return m;
}

DensityMatrix partial_trace_state(const PureState& state, std::vector<int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace_state: empty keep list");
  std::sort(keep.begin(), keep.end());
  std::vector<int> rest;
  for (int q = 0; q < state.n_qubits(); ++q)
    if (!std::binary_search(keep.begin(), keep.end(), q)) rest.push_back(q);
  const Matrix m = reshape_amplitudes(state, keep, rest);
  Matrix rho = Matrix::Zero(m.rows(), m.rows());
  rho.selfadjointView<Eigen::Lower>().rankUpdate(m);
  rho = rho.selfadjointView<Eigen::Lower>();
  return DensityMatrix(std::move(rho), 1e-10);
}

DensityMatrix partial_trace_dm(const DensityMatrix& dm, int d_keep, int d_drop, Side drop_side) {
  if (d_keep < 1 || d_drop < 1 || static_cast<long long>(d_keep) * d_drop != dm.dim())
    throw DimensionError(fmt::format("partial_trace_dm: {} x {} does not match dimension {}", d_keep, d_drop, dm.dim()));
  const Matrix& in = dm.entries();
  Matrix out = Matrix::Zero(d_keep, d_keep);
  for (int a = 0; a < d_keep; ++a)
    for (int b = 0; b < d_keep; ++b) {
      cplx acc = 0.0;
      for (int c = 0; c < d_drop; ++c)
        acc += drop_side == Side::Low ? in(c + d_drop * a, c + d_drop * b) : in(a + d_keep * c, b + d_keep * c);
      out(a, b) = acc;
    }
  return DensityMatrix(std::move(out), 1e-10);
}

PureState reorder_qubits(const PureState& state, std::span<const int> order) {
  check_partition(order, {}, state.n_qubits());
  const QubitGather gather(order, state.n_qubits());
  Vector out(state.amplitudes().size());
  for (std::uint64_t x = 0; x < state.dim(); ++x) out[static_cast<Eigen::Index>(gather(x))] = state[x];
  return PureState(state.n_qubits(), std::move(out));
}

}  // namespace ppe
