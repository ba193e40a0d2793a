#pragma once

// Closed-form predictions and bounds for partial projected ensembles of
// Haar-random states. Entropic quantities are in nats; subsystem sizes are
// taken from the rounded integer partition |R| = round(gamma N),
// |S| = round(p N), so a prediction always refers to an instantiable system.

#include <string_view>

namespace ppe::theory {

enum class PhaseLabel {
  MIQC,                   // measurement-invisible, p < 1 - 2 gamma
  MVQC,                   // measurement-visible, p > 1 - 2 gamma
  Critical,               // |p - (1 - 2 gamma)| < label_tol
  PPT,                    // p + gamma < 1/2, R and S decoupled
  MaxEntangledR,          // p > 1/2: negativity saturates at |R| ln 2
  MaxEntangledS,          // gamma > 1/2: negativity saturates at |S| ln 2
  EntanglementSaturation  // all three subsystems below half the system
};

std::string_view to_string(PhaseLabel label);

inline constexpr double kDefaultLabelTol = 0.01;

struct PhasePoint {
  double gamma = 0.0;
  double p = 0.0;
  int n_qubits = 0;
  PhaseLabel holevo_phase = PhaseLabel::Critical;
  PhaseLabel negativity_phase = PhaseLabel::PPT;
};

double harmonic_number(long long n);

/// Average entanglement entropy of an m x n bipartite Haar state, m <= n.
double page_entropy(long long m, long long n);

/// ln D_R - D_R / (2 D_E D_S).
double page_entropy_leading(double d_r, double d_s, double d_e);

/// (D_R / D_E)(1 - 1/(2 D_S)); requires p < 1 - 2 gamma.
double holevo_asymptotic_miqc(double gamma, double p, int n_qubits);

/// N ln2 (p + 2 gamma - 1) on the rounded sizes; requires p >= 1 - 2 gamma.
double holevo_asymptotic_mvqc(double gamma, double p, int n_qubits);

/// Holevo information of the gHSe limit: ln m - H_{mn} + H_n + (m-1)/(2n)
/// with m = min(D_R, D_E), n = max(D_R, D_E).
double holevo_finite_RE(long long d_r, long long d_e);

/// Size of the measured complement that makes a projected ensemble on R an
/// epsilon-approximate k-design with probability >= 1 - delta.
double design_bound_pe(int k, double epsilon, double delta, double d_r);

/// D_S D_E that makes the PPE on R an epsilon-approximate k-gHSe with
/// probability >= 1 - delta.
double ghse_bound(int k, double epsilon, double delta, double d_r);

/// Large-N limits of the two bounds: gamma <= 1/(4k+1) for the design bound,
/// gamma <= (1 - 2 alpha)/(4k) and, at k = 2, alpha <= (1 - 8 gamma)/2.
double design_bound_max_gamma(int k);
double ghse_bound_max_gamma(int k, double alpha);
double ghse_bound_max_decay_rate(double gamma);

/// Concentration bound on the eigenvalue density:
/// (mu/delta^2)[(D_E + D_R)/(1 + D_R D_E) + epsilon + mu], mu = max(1/D_E, 1/D_R),
/// epsilon the trace norm of the second-moment deviation.
double chebyshev_bound(double delta_dev, double d_r, double d_e, double epsilon);

struct NegativityPrediction {
  PhaseLabel label;
  double value;  // nats
};

/// Leading-order logarithmic negativity of a tripartite Haar state.
NegativityPrediction negativity_prediction(double gamma, double p, int n_qubits);

PhaseLabel classify_holevo_phase(double gamma, double p, double label_tol = kDefaultLabelTol);

PhasePoint classify_point(double gamma, double p, int n_qubits, double label_tol = kDefaultLabelTol);

}  // namespace ppe::theory
