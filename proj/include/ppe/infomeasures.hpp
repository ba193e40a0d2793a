#pragma once

// Entropies and ensemble information measures. All values are in nats.

#include <span>
#include <utility>
#include <vector>

#include "ppe/ensemble.hpp"
#include "ppe/qstate.hpp"

namespace ppe {

// Eigenvalues in [-kEigenClampWindow, 0) are treated as 0; anything more
// negative is reported as a corrupted input.
inline constexpr double kEigenClampWindow = 1e-8;
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr int kMaxNegativityQubits = 13;

// -sum lambda ln lambda over a spectrum, with clamping as above.
double entropy_from_spectrum(const RealVector& eigenvalues);

double von_neumann_entropy(const DensityMatrix& dm);
double renyi2_entropy(const DensityMatrix& dm);

/// S(sum p rho) - sum p S(rho), clamped at 0.
double holevo_information(const PartialProjectedEnsemble& ens);

struct RelativeEntropyAverage {
  double value = 0.0;
  // Set when some member has weight outside supp(rho_R); value is +inf.
  bool divergent = false;
};

/// sum_o p(o) S(rho(o) || rho_R) with ln rho_R restricted to its support.
RelativeEntropyAverage average_relative_entropy(const PartialProjectedEnsemble& ens);

/// -ln sum_o p(o) Tr rho(o)^2.
double annealed_renyi2(const PartialProjectedEnsemble& ens);

/// ln || rho_RS^{T_S} ||_1 with rho_RS = Tr_E |psi><psi|, clamped at 0.
double log_negativity(const PureState& state, const Tripartition& part);

/// Distribution of the non-zero eigenvalues of the ensemble members,
/// each weighted by p(o_S) / normalization.
struct EigenvalueDensity {
  std::vector<std::pair<double, double>> samples;  // (weight, eigenvalue)
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double normalization = 0.0;  // average rank, sum_o p(o) r(o)
  double rank_tol = kDefaultRankTol;

  // Prob[|lambda - center| >= delta] under the density.
  double tail_probability(double center, double delta) const;
};

EigenvalueDensity eigenvalue_density(const PartialProjectedEnsemble& ens, double rank_tol = kDefaultRankTol);

}  // namespace ppe
