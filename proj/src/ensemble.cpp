#include "ppe/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ppe/bits.hpp"
#include "ppe/errors.hpp"

namespace ppe {

namespace {

Matrix gram(const Matrix& f) {
  return f.cols() <= f.rows() ? Matrix(f.adjoint() * f) : Matrix(f * f.adjoint());
}

void check_replica_dim(long long base_dim, int k) {
  long long d = 1;
  for (int i = 0; i < k; ++i) d *= base_dim;
  if (d > kMaxReplicaDim)
    throw SizeLimitError(fmt::format("replica dimension {}^{} exceeds limit {}", base_dim, k, kMaxReplicaDim));
}

}  // namespace

// -- ConditionalState ----------------------------------------------------------------

DensityMatrix ConditionalState::density() const {
  return DensityMatrix(Matrix(factor * factor.adjoint()), 1e-10);
}

RealVector ConditionalState::spectrum() const { return hermitian_eigenvalues(gram(factor)); }

double ConditionalState::purity() const { return gram(factor).squaredNorm(); }

// -- PartialProjectedEnsemble -----------------------------------------------------------

PartialProjectedEnsemble::PartialProjectedEnsemble(std::vector<ConditionalState> members, long long r_dim,
                                                   long long s_dim, long long e_dim)
    : members_(std::move(members)), r_dim_(r_dim), s_dim_(s_dim), e_dim_(e_dim) {
  for (const auto& m : members_)
    if (m.factor.rows() != r_dim || m.factor.cols() != e_dim)
      throw DimensionError(fmt::format("member factor {}x{} does not match D_R={} D_E={}", m.factor.rows(),
                                       m.factor.cols(), r_dim, e_dim));
}

double PartialProjectedEnsemble::total_probability() const {
  double total = 0.0;
  for (const auto& m : members_) total += m.probability;
  return total;
}

DensityMatrix PartialProjectedEnsemble::average_state() const {
  Matrix rho = Matrix::Zero(r_dim_, r_dim_);
  for (const auto& m : members_) rho.noalias() += m.probability * (m.factor * m.factor.adjoint());
  return DensityMatrix(std::move(rho), 1e-10);
}

// -- construction ------------------------------------------------------------------------

PartialProjectedEnsemble build_ppe(const PureState& state, const Tripartition& part, double prob_floor) {
  part.validate(true);
  const int n = state.n_qubits();
  if (part.n_qubits() != n)
    throw DimensionError(fmt::format("tripartition covers {} qubits, state has {}", part.n_qubits(), n));
  if (part.s_size() > kMaxMeasuredQubits)
    throw SizeLimitError(fmt::format("|S|={} exceeds the {}-qubit outcome enumeration limit", part.s_size(),
                                     kMaxMeasuredQubits));

  const QubitGather gr(part.r_qubits, n), gs(part.s_qubits, n), ge(part.e_qubits, n);
  const Eigen::Index d_r = Eigen::Index{1} << part.r_size();
  const Eigen::Index d_e = Eigen::Index{1} << part.e_size();
  const std::size_t d_s = std::size_t{1} << part.s_size();

  std::vector<Matrix> blocks(d_s, Matrix::Zero(d_r, d_e));
  const cplx* a = state.amplitudes().data();
  for (std::uint64_t x = 0; x < state.dim(); ++x)
    blocks[gs(x)](static_cast<Eigen::Index>(gr(x)), static_cast<Eigen::Index>(ge(x))) = a[x];

  std::vector<ConditionalState> members;
  double kept = 0.0;
  for (std::size_t o = 0; o < d_s; ++o) {
    const double prob = blocks[o].squaredNorm();
    if (prob < prob_floor) continue;
    kept += prob;
    members.push_back({Outcome{o, part.s_size()}, prob, std::move(blocks[o]) / std::sqrt(prob)});
  }
  if (members.empty()) throw InvariantError("every outcome fell below the probability floor");
  for (auto& m : members) m.probability /= kept;
  return PartialProjectedEnsemble(std::move(members), d_r, static_cast<long long>(d_s), d_e);
}

PartialProjectedEnsemble build_pe(const PureState& state, std::vector<int> measured, double prob_floor) {
  std::sort(measured.begin(), measured.end());
  std::vector<int> rest;
  for (int q = 0; q < state.n_qubits(); ++q)
    if (!std::binary_search(measured.begin(), measured.end(), q)) rest.push_back(q);
  return build_ppe(state, Tripartition::from_indices(std::move(rest), std::move(measured), {}), prob_floor);
}

// -- moments ---------------------------------------------------------------------------

MomentOperator::MomentOperator(int k, long long base_dim, Matrix entries)
    : k_(k), base_dim_(base_dim), entries_(std::move(entries)) {
  long long d = 1;
  for (int i = 0; i < k; ++i) d *= base_dim;
  if (entries_.rows() != d || entries_.cols() != d)
    throw DimensionError(fmt::format("moment entries {}x{} do not match {}^{}", entries_.rows(), entries_.cols(),
                                     base_dim, k));
}

MomentOperator moment(const PartialProjectedEnsemble& ens, int k) {
  if (k != 1 && k != 2) throw std::invalid_argument(fmt::format("moment order {} not in {{1,2}}", k));
  const long long d = ens.r_dim();
  check_replica_dim(d, k);
  if (k == 1) return MomentOperator(1, d, ens.average_state().entries());

  // G = sum_o p vec(rho) vec(rho)^T, accumulated in column chunks, then
  // reindexed: M(i1 d + i2, j1 d + j2) = G(i1 + d j1, i2 + d j2).
  const Eigen::Index dd = d * d;
  Matrix g = Matrix::Zero(dd, dd);
  constexpr Eigen::Index kChunk = 256;
  const auto& members = ens.members();
  Matrix cols(dd, kChunk);
  for (std::size_t start = 0; start < members.size(); start += kChunk) {
    const Eigen::Index count = std::min<Eigen::Index>(kChunk, static_cast<Eigen::Index>(members.size() - start));
    for (Eigen::Index c = 0; c < count; ++c) {
      const auto& m = members[start + static_cast<std::size_t>(c)];
      const Matrix rho = m.factor * m.factor.adjoint();
      cols.col(c) = std::sqrt(m.probability) * rho.reshaped();
    }
    g.noalias() += cols.leftCols(count) * cols.leftCols(count).transpose();
  }
  Matrix out(dd, dd);
  for (Eigen::Index i1 = 0; i1 < d; ++i1)
    for (Eigen::Index i2 = 0; i2 < d; ++i2)
      for (Eigen::Index j1 = 0; j1 < d; ++j1)
        for (Eigen::Index j2 = 0; j2 < d; ++j2) out(i1 * d + i2, j1 * d + j2) = g(i1 + d * j1, i2 + d * j2);
  return MomentOperator(2, d, std::move(out));
}

MomentOperator ghse_second_moment(long long d_r, long long d_e) {
  if (!is_power_of_two(d_r) || !is_power_of_two(d_e))
    throw std::invalid_argument(fmt::format("ghse_second_moment: D_R={} and D_E={} must be powers of two", d_r, d_e));
  check_replica_dim(d_r, 2);
  const double de = static_cast<double>(d_e);
  const double dim = static_cast<double>(d_r) * de;
  const Matrix id = Matrix::Identity(d_r * d_r, d_r * d_r);
  Matrix m = (de * de * id + de * replica_swap(static_cast<int>(d_r))) / (dim * (dim + 1.0));
  return MomentOperator(2, d_r, std::move(m));
}

MomentOperator haar_moment(long long d, int k) {
  if (d < 1) throw std::invalid_argument("haar_moment: dimension must be positive");
  if (k == 1) return MomentOperator(1, d, Matrix::Identity(d, d) / double(d));
  if (k != 2) throw std::invalid_argument(fmt::format("haar moment order {} not in {{1,2}}", k));
  check_replica_dim(d, 2);
  const double dd = static_cast<double>(d);
  Matrix m = (Matrix::Identity(d * d, d * d) + replica_swap(static_cast<int>(d))) / (dd * (dd + 1.0));
  return MomentOperator(2, d, std::move(m));
}

double trace_distance(const MomentOperator& a, const MomentOperator& b) {
  if (a.dim() != b.dim())
    throw DimensionError(fmt::format("trace_distance: dimensions {} and {} differ", a.dim(), b.dim()));
  return 0.5 * hermitian_eigenvalues(a.entries() - b.entries()).cwiseAbs().sum();
}

double ghse_distance(const PartialProjectedEnsemble& ens) {
  return trace_distance(moment(ens, 2), ghse_second_moment(ens.r_dim(), ens.e_dim()));
}

}  // namespace ppe
