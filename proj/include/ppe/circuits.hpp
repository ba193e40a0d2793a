#pragma once

// Chaotic two-qubit circuits and the Holevo-information dynamics of the
// partial projected ensemble they generate.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ppe/qstate.hpp"
#include "ppe/rng.hpp"

namespace ppe {

using HamiltonianCoefficients = std::array<double, 4>;  // XX, X, ZZ, Z
inline constexpr HamiltonianCoefficients kDefaultCoefficients{0.3, 0.2, 0.4, 0.5};

/// a X_j X_k + b (X_j + X_k) + c Z_j Z_k + d (Z_j + Z_k) in the basis
/// index q_j + 2 q_k.
Eigen::Matrix4cd fixed_hamiltonian(const HamiltonianCoefficients& c = kDefaultCoefficients);

/// Gate ensemble W = (u_j (x) u_k) exp(-i tau H) (v_j (x) v_k) with
/// independent Haar single-qubit u, v. The propagator is computed once.
class GateFamily {
 public:
  explicit GateFamily(double tau, const HamiltonianCoefficients& coefficients = kDefaultCoefficients);

  double tau() const noexcept { return tau_; }
  const HamiltonianCoefficients& coefficients() const noexcept { return coefficients_; }
  const Eigen::Matrix4cd& propagator() const noexcept { return propagator_; }

 private:
  double tau_;
  HamiltonianCoefficients coefficients_;
  Eigen::Matrix4cd propagator_;
};

/// Draws u_j, u_k, v_j, v_k (in that order) from rng.
Eigen::Matrix4cd build_gate(const GateFamily& fam, RngStream& rng);

/// Product of independent Haar single-qubit states.
PureState random_product_initial_state(int n_qubits, RngStream& rng);

enum class GeometryKind { AllToAll, Brickwork };

struct CircuitGeometry {
  GeometryKind kind = GeometryKind::Brickwork;
  int n_qubits = 0;

  // 6N for brickwork, 30 for all-to-all.
  int default_t_max() const { return kind == GeometryKind::Brickwork ? 6 * n_qubits : 30; }
};

const char* to_string(GeometryKind kind);
GeometryKind parse_geometry(const std::string& name);

/// Qubit pairs of one time step, in application order. Brickwork: bonds
/// (0,1),(2,3),... then (1,2),(3,4),..., open boundary. All-to-all: N
/// ordered pairs of distinct qubits, each drawn from its own substream.
std::vector<std::pair<int, int>> step_pairs(const CircuitGeometry& geometry, const RngStream& step_rng);

/// One time step in place. Gate g of the step uses step_rng.substream(g, 1);
/// returns the number of gates applied.
int evolve_step(PureState& state, const CircuitGeometry& geometry, const GateFamily& fam, const RngStream& step_rng);

struct DynamicsConfig {
  GeometryKind geometry = GeometryKind::Brickwork;
  int n_qubits = 8;
  double gamma = 0.25;
  double p = 0.5;
  int r_size = -1;  // explicit sizes override (gamma, p) when >= 0
  int s_size = -1;
  double tau = 0.8;
  int t_max = 0;  // 0 selects the geometry default
  int n_realizations = 16;
  std::uint64_t master_seed = 1;
  int threads = 0;

  Tripartition partition() const;
};

struct TimeSeries {
  int n_qubits = 0;
  int r_size = 0, s_size = 0, e_size = 0;
  std::vector<int> times;                   // 0..t_max
  std::vector<std::vector<double>> values;  // [realization][t]
  std::vector<double> mean;
  std::vector<double> std_error;

  std::size_t realizations() const noexcept { return values.size(); }
};

/// Realization r runs from RngStream(master_seed, stream_address({N,|R|,|S|,geometry})).substream(r):
/// substream(0) seeds the initial state, substream(1, t) drives step t.
TimeSeries dynamics_chi(const DynamicsConfig& config);

struct Saturation {
  double chi_sat = 0.0;
  double window_fraction = 0.25;
  int window_start = 0;  // first step of the averaging window
  std::vector<double> delta;  // |1 - chi(t)/chi_sat|
  double threshold = 0.1;
  double t_star = 0.0;  // first t with delta < threshold; NaN if never
};

Saturation saturation_and_collapse(const TimeSeries& series, double window_fraction = 0.25, double threshold = 0.1);

}  // namespace ppe
