#include "ppe/infomeasures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "ppe/errors.hpp"

namespace ppe {

namespace {

constexpr double kSupportTol = 1e-14;
constexpr double kLeakTol = 1e-9;

double clamp_eigenvalue(double lambda) {
  if (lambda < -kEigenClampWindow)
    throw InvariantError(fmt::format("eigenvalue {:.3e} below -{:.0e}: corrupted density matrix", lambda,
                                     kEigenClampWindow));
  return std::clamp(lambda, 0.0, 1.0);
}

}  // namespace

double entropy_from_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double raw : eigenvalues) {
    const double lambda = clamp_eigenvalue(raw);
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& dm) { return entropy_from_spectrum(hermitian_eigenvalues(dm.entries())); }

double renyi2_entropy(const DensityMatrix& dm) { return -std::log(dm.purity()); }

double holevo_information(const PartialProjectedEnsemble& ens) {
  double member_entropy = 0.0;
  for (const auto& m : ens.members()) member_entropy += m.probability * entropy_from_spectrum(m.spectrum());
  const double chi = von_neumann_entropy(ens.average_state()) - member_entropy;
  return std::max(chi, 0.0);
}

RelativeEntropyAverage average_relative_entropy(const PartialProjectedEnsemble& ens) {
  const HermitianEigen avg = hermitian_eigensystem(ens.average_state().entries());
  const Eigen::Index d = avg.values.size();
  RealVector log_lambda(d);
  std::vector<bool> in_support(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    in_support[static_cast<std::size_t>(i)] = avg.values[i] > kSupportTol;
    log_lambda[i] = in_support[static_cast<std::size_t>(i)] ? std::log(avg.values[i]) : 0.0;
  }

  RelativeEntropyAverage result;
  for (const auto& m : ens.members()) {
    // diagonal of rho(o) in the eigenbasis of rho_R
    const Matrix w = avg.vectors.adjoint() * m.factor;
    const RealVector weights = w.rowwise().squaredNorm();
    double cross = 0.0;
    double leak = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (in_support[static_cast<std::size_t>(i)])
        cross += weights[i] * log_lambda[i];
      else
        leak += weights[i];
    }
    if (leak > kLeakTol) {
      result.divergent = true;
      result.value = std::numeric_limits<double>::infinity();
      return result;
    }
    result.value += m.probability * (-entropy_from_spectrum(m.spectrum()) - cross);
  }
  return result;
}

double annealed_renyi2(const PartialProjectedEnsemble& ens) {
  double avg_purity = 0.0;
  for (const auto& m : ens.members()) avg_purity += m.probability * m.purity();
  return -std::log(avg_purity);
}

double log_negativity(const PureState& state, const Tripartition& part) {
  part.validate(true);
  if (part.n_qubits() != state.n_qubits()) throw DimensionError("tripartition does not match the state");
  if (part.r_size() + part.s_size() > kMaxNegativityQubits)
    throw SizeLimitError(fmt::format("|R|+|S|={} exceeds the {}-qubit negativity limit",
                                     part.r_size() + part.s_size(), kMaxNegativityQubits));

  std::vector<int> rs = part.r_qubits;
  rs.insert(rs.end(), part.s_qubits.begin(), part.s_qubits.end());
  const Matrix m = reshape_amplitudes(state, rs, part.e_qubits);
  const Eigen::Index d_r = Eigen::Index{1} << part.r_size();
  const Eigen::Index d_s = Eigen::Index{1} << part.s_size();
  const Eigen::Index d = d_r * d_s;

  Matrix rho = Matrix::Zero(d, d);
  rho.selfadjointView<Eigen::Lower>().rankUpdate(m);
  rho = rho.selfadjointView<Eigen::Lower>();

  // transpose the S factor: index = r + d_r * s
  Matrix pt(d, d);
  for (Eigen::Index s = 0; s < d_s; ++s)
    for (Eigen::Index s2 = 0; s2 < d_s; ++s2)
      pt.block(s * d_r, s2 * d_r, d_r, d_r) = rho.block(s2 * d_r, s * d_r, d_r, d_r);

  const double trace_norm = hermitian_eigenvalues(pt).cwiseAbs().sum();
  return std::max(std::log(trace_norm), 0.0);
}

double EigenvalueDensity::tail_probability(double center, double delta) const {
  double prob = 0.0;
  for (const auto& [w, lambda] : samples)
    if (std::abs(lambda - center) >= delta) prob += w;
  return prob;
}

EigenvalueDensity eigenvalue_density(const PartialProjectedEnsemble& ens, double rank_tol) {
  EigenvalueDensity out;
  out.rank_tol = rank_tol;
  std::vector<std::pair<double, double>> raw;
  for (const auto& m : ens.members()) {
    const RealVector spec = m.spectrum();
    int rank = 0;
    for (double lambda : spec)
      if (lambda > rank_tol) {
        raw.emplace_back(m.probability, lambda);
        ++rank;
      }
    out.normalization += m.probability * rank;
  }
  if (out.normalization <= 0.0) throw InvariantError("eigenvalue_density: ensemble has no non-zero eigenvalues");
  out.samples.reserve(raw.size());
  for (const auto& [p, lambda] : raw) {
    const double w = p / out.normalization;
    out.samples.emplace_back(w, lambda);
    out.mean += w * lambda;
    out.second_moment += w * lambda * lambda;
  }
  out.variance = out.second_moment - out.mean * out.mean;
  return out;
}

}  // namespace ppe
