// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances, sample counts and runtime budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ppe/circuits.hpp"
#include "ppe/ensemble.hpp"
#include "ppe/harness.hpp"
#include "ppe/infomeasures.hpp"
#include "ppe/parallel.hpp"
#include "ppe/theory.hpp"

using namespace ppe;
namespace hn = ppe::harness;

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr std::uint64_t kSeed = 1;

struct Verdict {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Verdict()> run;
};

PureState from_amps(int n, std::initializer_list<std::pair<std::uint64_t, double>> entries) {
  Vector a = Vector::Zero(Eigen::Index{1} << n);
  for (auto [i, v] : entries) a[Eigen::Index(i)] = v;
  return PureState(n, a);
}

hn::ExperimentConfig haar_cfg(int samples) {
  hn::ExperimentConfig cfg;
  cfg.master_seed = kSeed;
  cfg.samples = samples;
  return cfg;
}

// Mean and standard error of f over Haar states at fixed sizes, drawn from
// the same streams the harness uses for that point.
template <class F>
hn::Estimate haar_average(int r, int s, int e, int samples, F f) {
  const auto cfg = haar_cfg(samples);
  std::vector<double> xs(static_cast<std::size_t>(samples));
  parallel_for(xs.size(), 0, [&](std::size_t i) {
    xs[i] = f(hn::sample_state(cfg, r + s + e, hn::point_stream_id(r, s, e, i)), Tripartition::from_sizes(r, s, r + s + e));
  });
  return hn::estimate(xs);
}

Verdict micro_oracles() {
  const double h = 1 / std::sqrt(2.0);
  const PureState bell = from_amps(2, {{0, h}, {3, h}});
  const PureState ghz = from_amps(3, {{0, h}, {7, h}});
  const PureState dec = from_amps(3, {{0, .5}, {3, .5}, {4, .5}, {7, .5}});
  const auto rs = Tripartition::from_indices({0}, {1}, {});
  const auto rse = Tripartition::from_indices({0}, {1}, {2});
  const double errs[] = {
      std::abs(holevo_information(build_ppe(bell, rs)) - kLn2),
      std::abs(holevo_information(build_ppe(ghz, rse)) - kLn2),
      std::abs(holevo_information(build_ppe(dec, Tripartition::from_indices({0}, {2}, {1})))),
      std::abs(log_negativity(bell, rs) - kLn2),
      std::abs(log_negativity(ghz, rse)),
  };
  const double worst = *std::max_element(std::begin(errs), std::end(errs));
  return {worst <= 1e-10, fmt::format("max |err| {:.2e} over 5 oracles (tol 1e-10)", worst)};
}

Verdict moment_identities() {
  RngStream rng(kSeed, stream_address({0x6d6f6dULL}));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(rng.uniform_index(8));  // 3..10
    const int r = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(std::min(n - 2, 5))));
    const int s = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - r)));
    const PureState psi = haar_random_state(n, rng);
    const auto part = Tripartition::from_sizes(r, s, n);
    const auto ens = build_ppe(psi, part);
    const double first = (moment(ens, 1).entries() - partial_trace_state(psi, part.r_qubits).entries()).cwiseAbs().maxCoeff();
    double purity = 0.0;
    for (const auto& m : ens.members()) purity += m.probability * m.purity();
    const double perm = std::abs((replica_swap(1 << r) * moment(ens, 2).entries()).trace() - purity);
    worst = std::max({worst, first, perm});
  }
  return {worst <= 1e-10, fmt::format("max error {:.2e} on 50 instances, N <= 10 (tol 1e-10)", worst)};
}

Verdict contractivity() {
  int violations = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < 20; ++i) {
    RngStream rng(kSeed, stream_address({0x636f6eULL, i}));
    const PureState psi = haar_random_state(10, rng);
    // gHSe on R against Haar on R u E
    const auto part = Tripartition::from_sizes(2, 5, 10);
    const double d_ghse = ghse_distance(build_ppe(psi, part));
    const double d_haar = trace_distance(moment(build_pe(psi, part.s_qubits), 2), haar_moment(32, 2));
    // fewer R qubits at the same S: gamma_2 < gamma_1
    const double d_small = ghse_distance(build_ppe(psi, Tripartition::from_indices({0}, {2, 3, 4, 5, 6}, {1, 7, 8, 9})));
    if (d_ghse > d_haar + 1e-10) ++violations;
    if (d_small > d_ghse + 1e-10) ++violations;
    min_gap = std::min({min_gap, d_haar - d_ghse, d_ghse - d_small});
  }
  return {violations == 0, fmt::format("{} violations in 40 inequalities on 20 samples, N = 10; min slack {:.3e}",
                                       violations, min_gap)};
}

Verdict page_oracle() {
  std::string detail;
  bool ok = true;
  for (auto [m, n] : {std::pair{2, 2}, {2, 4}, {4, 4}}) {
    const int keep = log2_exact(m), total = keep + log2_exact(n);
    std::vector<double> xs(2000);
    parallel_for(xs.size(), 0, [&](std::size_t i) {
      RngStream rng(kSeed, stream_address({0x70616765ULL, std::uint64_t(m), std::uint64_t(n), i}));
      std::vector<int> kept(static_cast<std::size_t>(keep));
      for (int q = 0; q < keep; ++q) kept[static_cast<std::size_t>(q)] = q;
      xs[i] = von_neumann_entropy(partial_trace_state(haar_random_state(total, rng), kept));
    });
    const auto est = hn::estimate(xs);
    const double target = theory::page_entropy(m, n);
    const double z = std::abs(est.mean - target) / est.std_error;
    ok = ok && z <= 3.0;
    detail += fmt::format("({},{}) {:.4f} vs {:.4f} z={:.2f}; ", m, n, est.mean, target, z);
  }
  ok = ok && std::abs(theory::page_entropy(2, 2) - 1.0 / 3.0) < 1e-14;
  return {ok, detail + "tol 3 SE"};
}

Verdict finite_re_holevo() {
  const auto est = haar_average(1, 10, 1, 256, [](const PureState& psi, const Tripartition& part) {
    return holevo_information(build_ppe(psi, part));
  });
  const double target = kLn2 - 1.0 / 3.0;
  const double z = std::abs(est.mean - target) / est.std_error;
  return {z <= 3.0 && std::abs(theory::holevo_finite_RE(2, 2) - target) < 1e-14,
          fmt::format("chi {:.5f} +- {:.5f} vs {:.5f}, z={:.2f} over {} samples (tol 3 SE)", est.mean, est.std_error,
                      target, z, est.samples)};
}

Verdict miqc_slope() {
  std::vector<double> ns, logs;
  std::string values;
  for (int n : {8, 12, 16}) {
    auto cfg = haar_cfg(32);
    cfg.n_values = {n};
    cfg.gamma_values = {0.25};
    cfg.p_values = {0.25};
    const auto res = hn::run_haar_sweep(cfg);
    for (const auto& row : res.rows)
      if (row.observable == "chi_nats") {
        ns.push_back(n);
        logs.push_back(std::log2(row.mean));
        values += fmt::format("{:.4f} ", row.mean);
      }
  }
  const double mx = (ns[0] + ns[1] + ns[2]) / 3, my = (logs[0] + logs[1] + logs[2]) / 3;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (ns[i] - mx) * (logs[i] - my);
    sxx += (ns[i] - mx) * (ns[i] - mx);
  }
  const double slope = sxy / sxx;
  const double target = 2 * 0.25 + 0.25 - 1;
  return {std::abs(slope - target) <= 0.2 * std::abs(target),
          fmt::format("chi(8,12,16) = {}; slope {:.4f} vs {:.2f} (tol 20%)", values, slope, target)};
}

Verdict mvqc_volume_law() {
  std::vector<double> ratio;
  for (int n : {12, 16, 20}) {
    const int r = n / 4, s = 3 * n / 4;
    const auto est = haar_average(r, s, n - r - s, 32, [](const PureState& psi, const Tripartition& part) {
      return holevo_information(build_ppe(psi, part));
    });
    ratio.push_back(est.mean / (n * kLn2));
  }
  const bool increasing = ratio[0] < ratio[1] && ratio[1] < ratio[2];
  const bool close = std::abs(ratio[2] - 0.25) <= 0.25 * 0.25;
  return {increasing && close, fmt::format("chi/(N ln2) = {:.5f}, {:.5f}, {:.5f}; increasing {}; N=20 vs 0.25 (tol 25%)",
                                           ratio[0], ratio[1], ratio[2], increasing ? "yes" : "no")};
}

Verdict crossing_location() {
  auto cfg = haar_cfg(32);
  cfg.experiment = hn::Experiment::HaarSlice;
  cfg.n_values = {8, 12, 16};
  cfg.gamma_values = {1.0 / 3.0};
  cfg.slice_axis = "p";
  cfg.slice_min = 0.25;
  cfg.slice_max = 0.45;
  const auto res = hn::run_haar_slice(cfg);
  std::string detail;
  bool ok = true;
  for (auto [a, b] : {std::pair{8, 12}, {8, 16}, {12, 16}}) {
    bool found = false;
    for (const auto& c : res.crossings)
      if (c.n_a == a && c.n_b == b) {
        found = true;
        ok = ok && std::abs(c.value - 1.0 / 3.0) <= 0.05;
        detail += fmt::format("{}/{}: {:.4f}; ", a, b, c.value);
      }
    if (!found) {
      ok = false;
      detail += fmt::format("{}/{}: none; ", a, b);
    }
  }
  return {ok, detail + "target 1/3 (tol 0.05)"};
}

Verdict theorem2() {
  const double mu = 0.25;  // max(1/D_E, 1/D_R) at D_R = 4, D_E = 16
  int violations = 0;
  double worst_ratio = 0.0;
  std::vector<double> tails(3 * 20), bounds(3 * 20);
  parallel_for(20, 0, [&](std::size_t i) {
    const PureState psi = hn::sample_state(haar_cfg(20), 12, hn::point_stream_id(2, 6, 4, i));
    const auto ens = build_ppe(psi, Tripartition::from_sizes(2, 6, 12));
    const auto dens = eigenvalue_density(ens);
    const double eps = 2.0 * ghse_distance(ens);  // trace norm of the second-moment deviation
    int k = 0;
    for (double delta : {0.5 * mu, mu, 2 * mu}) {
      tails[3 * i + std::size_t(k)] = dens.tail_probability(mu, delta);
      bounds[3 * i + std::size_t(k)] = theory::chebyshev_bound(delta, 4, 16, eps);
      ++k;
    }
  });
  for (std::size_t j = 0; j < tails.size(); ++j) {
    if (tails[j] > bounds[j]) ++violations;
    worst_ratio = std::max(worst_ratio, tails[j] / bounds[j]);
  }
  return {violations == 0, fmt::format("{} violations of 60 (20 samples x 3 deltas); max tail/bound {:.3f}", violations,
                                       worst_ratio)};
}

Verdict ghse_decay() {
  auto cfg = haar_cfg(32);
  cfg.experiment = hn::Experiment::GhseDistance;
  cfg.n_values = {8, 10, 12, 14};
  cfg.gamma_values = {0.1};
  cfg.on_line = true;
  const auto res = hn::run_ghse_distance(cfg);
  std::string values;
  bool ok = res.rows.size() == 4;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    values += fmt::format("{:.4f} ", res.rows[i].mean);
    if (i > 0) ok = ok && res.rows[i].mean < res.rows[i - 1].mean;
  }
  return {ok, fmt::format("Delta2 at N=8,10,12,14 (|R|=|E|=1): {}; strictly decreasing {}", values, ok ? "yes" : "no")};
}

Verdict circuit_dynamics() {
  auto run = [](int n, double p) {
    DynamicsConfig dc;
    dc.geometry = GeometryKind::Brickwork;
    dc.n_qubits = n;
    dc.gamma = 0.25;
    dc.p = p;
    dc.tau = 0.8;
    dc.n_realizations = 16;
    dc.master_seed = kSeed;
    return dynamics_chi(dc);
  };
  double chi0 = 0.0;
  std::vector<double> miqc, mvqc, t_star;
  for (int n : {8, 12, 16}) {
    for (double p : {1.0 / 3.0, 0.75}) {
      const TimeSeries ts = run(n, p);
      for (const auto& v : ts.values) chi0 = std::max(chi0, v.front());
      const Saturation sat = saturation_and_collapse(ts);
      (p < 0.5 ? miqc : mvqc).push_back(sat.chi_sat);
      if (p > 0.5) t_star.push_back(sat.t_star);
    }
  }
  const bool dec = miqc[0] > miqc[1] && miqc[1] > miqc[2];
  const bool inc = mvqc[0] < mvqc[1] && mvqc[1] < mvqc[2];
  const double ratio = t_star[2] / t_star[0];
  const bool lin = ratio >= 1.3 && ratio <= 2.7;
  return {chi0 < 1e-8 && dec && inc && lin,
          fmt::format("max chi(0) {:.1e}; chi_sat p=1/3: {:.4f} {:.4f} {:.4f}; p=3/4: {:.4f} {:.4f} {:.4f}; "
                      "t* = {} {} {}, t*(16)/t*(8) = {:.3f} (in [1.3, 2.7])",
                      chi0, miqc[0], miqc[1], miqc[2], mvqc[0], mvqc[1], mvqc[2], t_star[0], t_star[1], t_star[2], ratio)};
}

Verdict negativity_regimes() {
  double worst_ppt = 0.0;
  for (auto [r, s] : {std::pair{2, 2}, {3, 2}, {1, 4}}) {
    const auto est = haar_average(r, s, 12 - r - s, 32, [](const PureState& psi, const Tripartition& part) {
      return log_negativity(psi, part);
    });
    worst_ppt = std::max(worst_ppt, std::abs(est.mean));
  }
  auto cfg = haar_cfg(32);
  cfg.experiment = hn::Experiment::Negativity;
  cfg.n_values = {12};
  cfg.gamma_values = {0.25};
  cfg.p_values = {0.33};
  const auto res = hn::run_negativity(cfg);
  double sim = 0.0, th = 0.0;
  for (const auto& row : res.rows) {
    if (row.observable == "logneg_nats") sim = row.mean;
    if (row.observable == "logneg_theory_nats") th = row.mean;
  }
  const double rel = std::abs(sim - th) / th;
  return {worst_ppt <= 1e-8 && rel <= 0.25,
          fmt::format("PPT points max |N_RS| {:.1e} (tol 1e-8); (0.25, 0.33): {:.4f} vs {:.4f}, rel {:.3f} (tol 0.25)",
                      worst_ppt, sim, th, rel)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"micro_oracles", 1.0, micro_oracles},
      {"moment_identities", 30.0, moment_identities},
      {"contractivity_monotonicity", 120.0, contractivity},
      {"page_oracle", 60.0, page_oracle},
      {"finite_RE_holevo", 300.0, finite_re_holevo},
      {"miqc_decay_rate", 900.0, miqc_slope},
      {"mvqc_volume_law", 1800.0, mvqc_volume_law},
      {"crossing_location", 2700.0, crossing_location},
      {"theorem2_concentration", 300.0, theorem2},
      {"ghse_distance_decay", 1200.0, ghse_decay},
      {"circuit_dynamics", 7200.0, circuit_dynamics},
      {"negativity_regimes", 600.0, negativity_regimes},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool passed = out.passed && in_time;
    if (!in_time) out.detail += fmt::format("; over the {:.0f} s budget", c.budget_seconds);
    failed += passed ? 0 : 1;
    std::cout << fmt::format("[{}] {:<28} {:>8.2f}s  {}\n", passed ? "PASS" : "FAIL", c.name, secs, out.detail)
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - std::size_t(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
