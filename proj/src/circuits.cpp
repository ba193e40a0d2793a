#include "ppe/circuits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "ppe/ensemble.hpp"
#include "ppe/errors.hpp"
#include "ppe/infomeasures.hpp"
#include "ppe/parallel.hpp"

namespace ppe {

namespace {

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& high, const Eigen::Matrix2cd& low) {
  Eigen::Matrix4cd out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.block<2, 2>(2 * a, 2 * b) = high(a, b) * low;
  return out;
}

}  // namespace

Eigen::Matrix4cd fixed_hamiltonian(const HamiltonianCoefficients& c) {
  Eigen::Matrix2cd x, z, id;
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  id.setIdentity();
  // qubit j is the low factor
  const Eigen::Matrix4cd xj = kron2(id, x), xk = kron2(x, id);
  const Eigen::Matrix4cd zj = kron2(id, z), zk = kron2(z, id);
  return c[0] * xj * xk + c[1] * (xj + xk) + c[2] * zj * zk + c[3] * (zj + zk);
}

GateFamily::GateFamily(double tau, const HamiltonianCoefficients& coefficients)
    : tau_(tau), coefficients_(coefficients) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(fixed_hamiltonian(coefficients));
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases[i] = std::exp(cplx(0.0, -tau * es.eigenvalues()[i]));
  propagator_ = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix4cd build_gate(const GateFamily& fam, RngStream& rng) {
  const Eigen::Matrix2cd u_j = haar_random_unitary(2, rng);
  const Eigen::Matrix2cd u_k = haar_random_unitary(2, rng);
  const Eigen::Matrix2cd v_j = haar_random_unitary(2, rng);
  const Eigen::Matrix2cd v_k = haar_random_unitary(2, rng);
  return kron2(u_k, u_j) * fam.propagator() * kron2(v_k, v_j);
}

PureState random_product_initial_state(int n_qubits, RngStream& rng) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw SizeLimitError(fmt::format("product state on {} qubits outside [1, {}]", n_qubits, kMaxQubits));
  Vector amps = Vector::Ones(1);
  for (int q = 0; q < n_qubits; ++q) {
    Eigen::Vector2cd phi(rng.complex_normal(), rng.complex_normal());
    phi.normalize();
    Vector next(2 * amps.size());
    next.head(amps.size()) = phi[0] * amps;
    next.tail(amps.size()) = phi[1] * amps;
    amps = std::move(next);
  }
  return PureState(n_qubits, std::move(amps));
}

const char* to_string(GeometryKind kind) { return kind == GeometryKind::AllToAll ? "alltoall" : "brickwork"; }

GeometryKind parse_geometry(const std::string& name) {
  if (name == "alltoall" || name == "all-to-all") return GeometryKind::AllToAll;
  if (name == "brickwork") return GeometryKind::Brickwork;
  throw std::invalid_argument(fmt::format("unknown geometry '{}' (expected alltoall or brickwork)", name));
}

std::vector<std::pair<int, int>> step_pairs(const CircuitGeometry& geometry, const RngStream& step_rng) {
  const int n = geometry.n_qubits;
  if (n < 2) throw std::invalid_argument(fmt::format("a circuit needs at least 2 qubits, got {}", n));
  std::vector<std::pair<int, int>> pairs;
  if (geometry.kind == GeometryKind::Brickwork) {
    for (int first : {0, 1})
      for (int q = first; q + 1 < n; q += 2) pairs.emplace_back(q, q + 1);
    return pairs;
  }
  const auto un = static_cast<std::uint64_t>(n);
  for (int g = 0; g < n; ++g) {
    RngStream rng = step_rng.substream(static_cast<std::uint64_t>(g), 0);
    const auto i = static_cast<int>(rng.uniform_index(un));
    auto j = static_cast<int>(rng.uniform_index(un - 1));
    if (j >= i) ++j;
    pairs.emplace_back(i, j);
  }
  return pairs;
}

int evolve_step(PureState& state, const CircuitGeometry& geometry, const GateFamily& fam, const RngStream& step_rng) {
  if (geometry.n_qubits != state.n_qubits())
    throw DimensionError(fmt::format("geometry has {} qubits, state has {}", geometry.n_qubits, state.n_qubits()));
  const auto pairs = step_pairs(geometry, step_rng);
  for (std::size_t g = 0; g < pairs.size(); ++g) {
    RngStream rng = step_rng.substream(g, 1);
    apply_two_qubit_gate(state, build_gate(fam, rng), pairs[g].first, pairs[g].second);
  }
  return static_cast<int>(pairs.size());
}

Tripartition DynamicsConfig::partition() const {
  if (r_size >= 0 || s_size >= 0) {
    if (r_size < 0 || s_size < 0) throw std::invalid_argument("explicit sizes need both r_size and s_size");
    return Tripartition::from_sizes(r_size, s_size, n_qubits);
  }
  return Tripartition::from_fractions(gamma, p, n_qubits);
}

TimeSeries dynamics_chi(const DynamicsConfig& config) {
  const Tripartition part = config.partition();
  part.validate(true);
  const CircuitGeometry geometry{config.geometry, config.n_qubits};
  const int t_max = config.t_max > 0 ? config.t_max : geometry.default_t_max();
  if (config.n_realizations < 1) throw std::invalid_argument("dynamics_chi: need at least one realization");
  const GateFamily fam(config.tau);

  TimeSeries out;
  out.n_qubits = config.n_qubits;
  out.r_size = part.r_size();
  out.s_size = part.s_size();
  out.e_size = part.e_size();
  for (int t = 0; t <= t_max; ++t) out.times.push_back(t);
  out.values.assign(static_cast<std::size_t>(config.n_realizations), {});

  const RngStream base(config.master_seed,
                       stream_address({static_cast<std::uint64_t>(config.n_qubits),
                                       static_cast<std::uint64_t>(part.r_size()),
                                       static_cast<std::uint64_t>(part.s_size()),
                                       static_cast<std::uint64_t>(config.geometry)}));

  parallel_for(out.values.size(), config.threads, [&](std::size_t r) {
    const RngStream real = base.substream(r);
    RngStream init = real.substream(0);
    PureState state = random_product_initial_state(config.n_qubits, init);
    std::vector<double>& chi = out.values[r];
    chi.reserve(static_cast<std::size_t>(t_max) + 1);
    chi.push_back(holevo_information(build_ppe(state, part)));
    for (int t = 1; t <= t_max; ++t) {
      evolve_step(state, geometry, fam, real.substream(1, static_cast<std::uint64_t>(t)));
      chi.push_back(holevo_information(build_ppe(state, part)));
    }
  });

  const double n = static_cast<double>(out.values.size());
  for (std::size_t t = 0; t < out.times.size(); ++t) {
    double sum = 0.0, sq = 0.0;
    for (const auto& v : out.values) sum += v[t];
    const double mean = sum / n;
    for (const auto& v : out.values) sq += (v[t] - mean) * (v[t] - mean);
    out.mean.push_back(mean);
    out.std_error.push_back(n > 1 ? std::sqrt(sq / (n - 1) / n) : 0.0);
  }
  return out;
}

Saturation saturation_and_collapse(const TimeSeries& series, double window_fraction, double threshold) {
  if (series.mean.empty()) throw std::invalid_argument("saturation_and_collapse: empty series");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("saturation_and_collapse: window_fraction must lie in (0, 1]");
  const int points = static_cast<int>(series.mean.size());
  const int t_max = points - 1;
  const int width = std::max(1, static_cast<int>(std::ceil(window_fraction * t_max)));

  Saturation s;
  s.window_fraction = window_fraction;
  s.threshold = threshold;
  s.window_start = std::max(0, points - width);
  for (int t = s.window_start; t < points; ++t) s.chi_sat += series.mean[static_cast<std::size_t>(t)];
  s.chi_sat /= points - s.window_start;

  s.t_star = std::numeric_limits<double>::quiet_NaN();
  for (int t = 0; t < points; ++t) {
    const double chi = series.mean[static_cast<std::size_t>(t)];
    double d;
    if (s.chi_sat != 0.0)
      d = std::abs(1.0 - chi / s.chi_sat);
    else
      d = chi == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    s.delta.push_back(d);
    if (std::isnan(s.t_star) && d < threshold) s.t_star = series.times[static_cast<std::size_t>(t)];
  }
  return s;
}

}  // namespace ppe
