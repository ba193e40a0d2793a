#include "ppe/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace ppe::theory {

namespace {

constexpr long long kExactHarmonicLimit = 1'000'000;
constexpr double kLn2 = std::numbers::ln2;

struct Sizes {
  int r, s, e;
};

Sizes rounded_sizes(double gamma, double p, int n) {
  if (n < 1) throw std::invalid_argument("system size must be positive");
  const int r = static_cast<int>(std::lround(gamma * n));
  const int s = static_cast<int>(std::lround(p * n));
  if (gamma < 0.0 || p < 0.0 || r + s > n)
    throw std::invalid_argument(fmt::format("gamma={} p={} is not a valid partition of N={}", gamma, p, n));
  return {r, s, n - r - s};
}

}  // namespace

std::string_view to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::MIQC: return "MIQC";
    case PhaseLabel::MVQC: return "MVQC";
    case PhaseLabel::Critical: return "critical";
    case PhaseLabel::PPT: return "PPT";
    case PhaseLabel::MaxEntangledR: return "max-entangled-R";
    case PhaseLabel::MaxEntangledS: return "max-entangled-S";
    case PhaseLabel::EntanglementSaturation: return "entanglement-saturation";
  }
  return "unknown";
}

double harmonic_number(long long n) {
  if (n < 0) throw std::invalid_argument("harmonic_number: negative argument");
  if (n <= kExactHarmonicLimit) {
    double h = 0.0;
    for (long long i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);  // small terms first
    return h;
  }
  const double x = static_cast<double>(n);
  const double inv2 = 1.0 / (x * x);
  return std::log(x) + std::numbers::egamma + 0.5 / x - inv2 / 12.0 + inv2 * inv2 / 120.0;
}

double page_entropy(long long m, long long n) {
  if (m < 1 || n < 1 || m > n) throw std::invalid_argument(fmt::format("page_entropy: need 1 <= m <= n, got {}, {}", m, n));
  return harmonic_number(m * n) - harmonic_number(n) - static_cast<double>(m - 1) / (2.0 * static_cast<double>(n));
}

double page_entropy_leading(double d_r, double d_s, double d_e) {
  return std::log(d_r) - d_r / (2.0 * d_e * d_s);
}

double holevo_asymptotic_miqc(double gamma, double p, int n_qubits) {
  if (!(p < 1.0 - 2.0 * gamma)) throw std::invalid_argument("holevo_asymptotic_miqc: requires p < 1 - 2 gamma");
  const Sizes z = rounded_sizes(gamma, p, n_qubits);
  const double d_r = std::ldexp(1.0, z.r), d_s = std::ldexp(1.0, z.s), d_e = std::ldexp(1.0, z.e);
  return (d_r / d_e) * (1.0 - 1.0 / (2.0 * d_s));
}

double holevo_asymptotic_mvqc(double gamma, double p, int n_qubits) {
  if (p < 1.0 - 2.0 * gamma - 1e-12) throw std::invalid_argument("holevo_asymptotic_mvqc: requires p >= 1 - 2 gamma");
  const Sizes z = rounded_sizes(gamma, p, n_qubits);
  return static_cast<double>(z.r - z.e) * kLn2;
}

double holevo_finite_RE(long long d_r, long long d_e) {
  const long long m = std::min(d_r, d_e);
  const long long n = std::max(d_r, d_e);
  return std::log(static_cast<double>(m)) - page_entropy(m, n);
}

double design_bound_pe(int k, double epsilon, double delta, double d_r) {
  if (k < 1 || epsilon <= 0.0 || delta <= 0.0 || d_r < 1.0) throw std::invalid_argument("design_bound_pe: bad arguments");
  const double pi3 = std::pow(std::numbers::pi, 3);
  return 18.0 * pi3 * (2 * k - 1) * std::pow(d_r, 4 * k) / (epsilon * epsilon) *
         (2.0 * k * std::log(d_r) + std::log(2.0 / delta));
}

double ghse_bound(int k, double epsilon, double delta, double d_r) {
  if (k < 1 || epsilon <= 0.0 || delta <= 0.0 || d_r < 1.0) throw std::invalid_argument("ghse_bound: bad arguments");
  const double pi3 = std::pow(std::numbers::pi, 3);
  const double c = 2.0 * k - 1.0;
  return 18.0 * pi3 * c * c * std::pow(d_r, 4 * k - 1) / (epsilon * epsilon) *
         std::log(2.0 * std::pow(d_r, 2 * k) / delta);
}

double design_bound_max_gamma(int k) { return 1.0 / (4.0 * k + 1.0); }

double ghse_bound_max_gamma(int k, double alpha) { return (1.0 - 2.0 * alpha) / (4.0 * k); }

double ghse_bound_max_decay_rate(double gamma) { return (1.0 - 8.0 * gamma) / 2.0; }

double chebyshev_bound(double delta_dev, double d_r, double d_e, double epsilon) {
  if (delta_dev <= 0.0) throw std::invalid_argument("chebyshev_bound: deviation must be positive");
  const double mu = std::max(1.0 / d_e, 1.0 / d_r);
  return mu / (delta_dev * delta_dev) * ((d_e + d_r) / (1.0 + d_r * d_e) + epsilon + mu);
}

NegativityPrediction negativity_prediction(double gamma, double p, int n_qubits) {
  const Sizes z = rounded_sizes(gamma, p, n_qubits);
  const double n = n_qubits;
  const double g = z.r / n;
  const double q = z.s / n;
  if (g + q < 0.5) return {PhaseLabel::PPT, 0.0};
  if (q > 0.5) return {PhaseLabel::MaxEntangledR, z.r * kLn2};
  if (g > 0.5) return {PhaseLabel::MaxEntangledS, z.s * kLn2};
  const double value = 0.5 * (z.r + z.s - z.e) * kLn2 + std::log(8.0 / (3.0 * std::numbers::pi));
  return {PhaseLabel::EntanglementSaturation, std::max(value, 0.0)};
}

PhaseLabel classify_holevo_phase(double gamma, double p, double label_tol) {
  const double line = 1.0 - 2.0 * gamma;
  if (std::abs(p - line) < label_tol) return PhaseLabel::Critical;
  return p < line ? PhaseLabel::MIQC : PhaseLabel::MVQC;
}

PhasePoint classify_point(double gamma, double p, int n_qubits, double label_tol) {
  PhasePoint pt{gamma, p, n_qubits, classify_holevo_phase(gamma, p, label_tol), PhaseLabel::PPT};
  pt.negativity_phase = negativity_prediction(gamma, p, n_qubits).label;
  return pt;
}

}  // namespace ppe::theory
