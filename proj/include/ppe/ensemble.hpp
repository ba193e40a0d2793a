#pragma once

// Projected and partial projected ensembles, their replica moments, and the
// Haar / generalized Hilbert-Schmidt reference moments.

#include <vector>

#include "ppe/linalg.hpp"
#include "ppe/qstate.hpp"

namespace ppe {

inline constexpr double kDefaultProbFloor = 1e-14;
inline constexpr int kMaxMeasuredQubits = 20;
// Largest replica-space dimension D_R^k a MomentOperator may have.
inline constexpr long long kMaxReplicaDim = 4096;

/// One member of a (partial) projected ensemble.
///
/// The conditional state on R is stored through a normalized factor F of
/// shape D_R x D_E with rho_R(o_S) = F F^dagger. F is the block of the
/// global amplitudes consistent with the outcome, so an ensemble costs
/// exactly one state vector of memory regardless of D_R and D_E.
struct ConditionalState {
  Outcome outcome;
  double probability = 0.0;
  Matrix factor;

  DensityMatrix density() const;
  // Non-zero part of the spectrum comes from the smaller Gram matrix.
  RealVector spectrum() const;
  double purity() const;
};

class PartialProjectedEnsemble {
 public:
  PartialProjectedEnsemble(std::vector<ConditionalState> members, long long r_dim, long long s_dim, long long e_dim);

  const std::vector<ConditionalState>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  long long r_dim() const noexcept { return r_dim_; }
  long long s_dim() const noexcept { return s_dim_; }
  long long e_dim() const noexcept { return e_dim_; }

  double total_probability() const;
  // sum_o p(o) rho_R(o), which equals rho_R.
  DensityMatrix average_state() const;

 private:
  std::vector<ConditionalState> members_;
  long long r_dim_;
  long long s_dim_;
  long long e_dim_;
};

/// Enumerates every Z-basis outcome on S, projects, traces out E and keeps
/// members with p(o_S) >= prob_floor (remaining weights renormalized).
PartialProjectedEnsemble build_ppe(const PureState& state, const Tripartition& part,
                                   double prob_floor = kDefaultProbFloor);

/// Projected ensemble on the complement of `measured` (E empty).
PartialProjectedEnsemble build_pe(const PureState& state, std::vector<int> measured,
                                  double prob_floor = kDefaultProbFloor);

/// Ensemble moment on the k-fold replica space of R (Kronecker layout,
/// replica 1 in the high-order index).
class MomentOperator {
 public:
  MomentOperator(int k, long long base_dim, Matrix entries);

  int k() const noexcept { return k_; }
  long long base_dim() const noexcept { return base_dim_; }
  long long dim() const noexcept { return static_cast<long long>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }

 private:
  int k_;
  long long base_dim_;
  Matrix entries_;
};

/// sum_o p(o) rho(o)^{(x) k} for k in {1, 2}.
MomentOperator moment(const PartialProjectedEnsemble& ens, int k);

/// Second moment of the gHSe: (D_E^2 I + D_E SWAP) / (D_R D_E (D_R D_E + 1)).
MomentOperator ghse_second_moment(long long d_r, long long d_e);

/// Haar moment: I/D for k = 1, (I + SWAP)/(D(D+1)) for k = 2.
MomentOperator haar_moment(long long d, int k);

/// Half the trace norm of A - B.
double trace_distance(const MomentOperator& a, const MomentOperator& b);

/// Delta^(2)_gHSe of an ensemble: trace distance between its second moment
/// and the gHSe second moment at the ensemble's (D_R, D_E).
double ghse_distance(const PartialProjectedEnsemble& ens);

}  // namespace ppe
