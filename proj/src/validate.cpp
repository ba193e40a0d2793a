#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "ppe/circuits.hpp"
#include "ppe/ensemble.hpp"
#include "ppe/harness.hpp"
#include "ppe/infomeasures.hpp"
#include "ppe/theory.hpp"

namespace ppe::harness {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Measured {
  bool passed;
  std::string detail;
};

Measured within(double value, double expected, double tol) {
  const double err = std::abs(value - expected);
  return {err <= tol, fmt::format("value {:.12g}, expected {:.12g}, |err| {:.2e} (tol {:.0e})", value, expected, err, tol)};
}

Measured below(double value, double tol, const char* what) {
  return {value <= tol, fmt::format("{} {:.2e} (tol {:.0e})", what, value, tol)};
}

PureState from_amps(int n, std::initializer_list<std::pair<std::uint64_t, cplx>> entries) {
  Vector amps = Vector::Zero(Eigen::Index{1} << n);
  for (const auto& [i, a] : entries) amps[static_cast<Eigen::Index>(i)] = a;
  return PureState(n, std::move(amps));
}

PureState bell() { return from_amps(2, {{0, 1 / std::sqrt(2.0)}, {3, 1 / std::sqrt(2.0)}}); }
PureState ghz3() { return from_amps(3, {{0, 1 / std::sqrt(2.0)}, {7, 1 / std::sqrt(2.0)}}); }

// (|00> + |11>)/sqrt2 on (q0, q1) times |+> on q2.
PureState decoupled() { return from_amps(3, {{0, 0.5}, {3, 0.5}, {4, 0.5}, {7, 0.5}}); }

}  // namespace

std::vector<CheckResult> run_validate(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::function<Measured()>>> checks;
  const std::uint64_t seed = cfg.master_seed;

  checks.emplace_back("bell_chi", [] {
    return within(holevo_information(build_ppe(bell(), Tripartition::from_indices({0}, {1}, {}))), kLn2, 1e-10);
  });
  checks.emplace_back("ghz3_chi", [] {
    return within(holevo_information(build_ppe(ghz3(), Tripartition::from_indices({0}, {1}, {2}))), kLn2, 1e-10);
  });
  checks.emplace_back("decoupled_chi", [] {
    return within(holevo_information(build_ppe(decoupled(), Tripartition::from_indices({0}, {2}, {1}))), 0.0, 1e-10);
  });
  checks.emplace_back("bell_negativity", [] {
    return within(log_negativity(bell(), Tripartition::from_indices({0}, {1}, {})), kLn2, 1e-10);
  });
  checks.emplace_back("ghz3_negativity", [] {
    return within(log_negativity(ghz3(), Tripartition::from_indices({0}, {1}, {2})), 0.0, 1e-10);
  });
  checks.emplace_back("hamiltonian_diagonal", [] {
    const Eigen::Matrix4cd h = fixed_hamiltonian();
    const Eigen::Vector4d want(1.4, -0.4, -0.4, -0.6);
    const double err = (h.diagonal().real() - want).cwiseAbs().maxCoeff() + std::abs(h.trace());
    return below(err, 1e-14, "diagonal and trace error");
  });
  checks.emplace_back("gate_unitarity", [seed, fault = cfg.inject_fault] {
    double worst = 0.0;
    for (double tau : {0.5, 0.8}) {
      const GateFamily fam(tau);
      for (std::uint64_t i = 0; i < 64; ++i) {
        RngStream rng(seed, stream_address({0x67617465ULL, i}));
        Eigen::Matrix4cd w = build_gate(fam, rng);
        if (fault && i == 0) w(0, 0) += 1e-3;
        worst = std::max(worst, unitarity_defect(w));
      }
    }
    return below(worst, 1e-12, "max unitarity defect");
  });
  checks.emplace_back("propagator_eigenphases", [] {
    const GateFamily fam(0.8);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(fixed_hamiltonian());
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector4cd v = es.eigenvectors().col(i);
      const cplx phase = std::exp(cplx(0.0, -0.8 * es.eigenvalues()[i]));
      worst = std::max(worst, (fam.propagator() * v - phase * v).norm());
    }
    return below(worst, 1e-12, "max eigenvector residual");
  });
  checks.emplace_back("haar_unitary", [seed] {
    double worst = 0.0;
    for (int dim : {2, 4})
      for (std::uint64_t i = 0; i < 32; ++i) {
        RngStream rng(seed, stream_address({0x756eULL, static_cast<std::uint64_t>(dim), i}));
        worst = std::max(worst, unitarity_defect(haar_random_unitary(dim, rng)));
      }
    return below(worst, 1e-12, "max unitarity defect");
  });
  checks.emplace_back("norm_drift_1000_gates", [seed] {
    RngStream rng(seed, 11);
    PureState psi = haar_random_state(10, rng);
    const GateFamily fam(0.5);
    for (int g = 0; g < 1000; ++g) {
      RngStream gr = rng.substream(static_cast<std::uint64_t>(g));
      const int j = static_cast<int>(gr.uniform_index(10));
      const int k = (j + 1 + static_cast<int>(gr.uniform_index(9))) % 10;
      apply_two_qubit_gate(psi, build_gate(fam, gr), j, k);
    }
    return below(std::abs(psi.norm_squared() - 1.0), 1e-10, "norm drift");
  });
  checks.emplace_back("moment_identities", [seed] {
    RngStream rng(seed, 12);
    const PureState psi = haar_random_state(6, rng);
    const auto part = Tripartition::from_sizes(2, 2, 6);
    const auto ens = build_ppe(psi, part);
    const double first = (moment(ens, 1).entries() - partial_trace_state(psi, part.r_qubits).entries()).cwiseAbs().maxCoeff();
    double purity = 0.0;
    for (const auto& m : ens.members()) purity += m.probability * m.purity();
    const double perm = std::abs((replica_swap(4) * moment(ens, 2).entries()).trace() - purity);
    const double total = std::abs(ens.total_probability() - 1.0);
    return below(std::max({first, perm, total}), 1e-10, "max identity error");
  });
  checks.emplace_back("ghse_contractivity", [seed] {
    RngStream rng(seed, 13);
    const PureState psi = haar_random_state(8, rng);
    const auto part = Tripartition::from_sizes(2, 4, 8);
    const double d_ghse = ghse_distance(build_ppe(psi, part));
    const auto pe = build_pe(psi, part.s_qubits);
    const double d_haar = trace_distance(moment(pe, 2), haar_moment(16, 2));
    return Measured{d_ghse <= d_haar + 1e-10, fmt::format("gHSe {:.4e} <= Haar {:.4e}", d_ghse, d_haar)};
  });
  checks.emplace_back("ghse_moment_closed_form", [] {
    const Matrix want = (2.0 * Matrix::Identity(4, 4) + replica_swap(2)) / 10.0;
    return below((ghse_second_moment(2, 2).entries() - want).cwiseAbs().maxCoeff(), 1e-14, "max entry error");
  });
  checks.emplace_back("relative_entropy_identity", [seed] {
    RngStream rng(seed, 14);
    const auto ens = build_ppe(haar_random_state(8, rng), Tripartition::from_sizes(2, 3, 8));
    const auto rel = average_relative_entropy(ens);
    return within(rel.value, holevo_information(ens), 1e-9);
  });
  checks.emplace_back("product_state_chi_zero", [seed] {
    RngStream rng(seed, 15);
    const PureState psi = random_product_initial_state(8, rng);
    return within(holevo_information(build_ppe(psi, Tripartition::from_sizes(2, 4, 8))), 0.0, 1e-10);
  });
  checks.emplace_back("partial_trace_consistency", [seed] {
    RngStream rng(seed, 16);
    const PureState psi = haar_random_state(5, rng);
    // keep qubits {0,1}: index = keep + 4 * drop, so the dropped factor is high
    const DensityMatrix full = DensityMatrix::pure(psi.amplitudes());
    const Matrix a = partial_trace_state(psi, {0, 1}).entries();
    const Matrix b = partial_trace_dm(full, 4, 8, Side::High).entries();
    return below((a - b).cwiseAbs().maxCoeff(), 1e-12, "max entry error");
  });
  checks.emplace_back("page_values", [] {
    const double err = std::max(std::abs(theory::page_entropy(2, 2) - 1.0 / 3.0),
                                std::abs(theory::holevo_finite_RE(2, 2) - (kLn2 - 1.0 / 3.0)));
    return below(err, 1e-12, "max error");
  });
  checks.emplace_back("reproducible_streams", [seed] {
    RngStream a(seed, 17), b(seed, 17);
    const bool same = haar_random_state(8, a).amplitudes() == haar_random_state(8, b).amplitudes();
    return Measured{same, same ? "bit-identical" : "states differ"};
  });

  std::vector<CheckResult> out;
  for (auto& [name, fn] : checks) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Measured m = fn();
      r.passed = m.passed;
      r.detail = m.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = fmt::format("threw: {}", e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

void print_validation(std::ostream& out, const std::vector<CheckResult>& checks) {
  int failed = 0;
  for (const auto& c : checks) {
    out << fmt::format("[{}] {:<28} {:>9.4f}s  {}\n", c.passed ? "PASS" : "FAIL", c.name, c.seconds, c.detail);
    failed += c.passed ? 0 : 1;
  }
  out << fmt::format("{} of {} checks passed\n", checks.size() - static_cast<std::size_t>(failed), checks.size());
}

}  // namespace ppe::harness
