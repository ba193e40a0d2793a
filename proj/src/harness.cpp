#include "ppe/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ctime>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <variant>

#include <fmt/format.h>

#include "ppe/ensemble.hpp"
#include "ppe/infomeasures.hpp"
#include "ppe/parallel.hpp"
#include "ppe/theory.hpp"

#ifndef PPE_LAB_VERSION
#define PPE_LAB_VERSION "unknown"
#endif

namespace ppe::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Point {
  int r = 0, s = 0, e = 0;
  double gamma = 0.0, p = 0.0;  // requested values
};

std::variant<Point, std::string> resolve_point(const ExperimentConfig& cfg, int n, double gamma, double p) {
  Point pt{0, 0, 0, gamma, p};
  if (cfg.r_size >= 0 && cfg.s_size >= 0) {
    pt.r = cfg.r_size;
    pt.s = cfg.s_size;
  } else if (cfg.on_line) {
    pt.r = static_cast<int>(std::lround(gamma * n));
    pt.s = n - 2 * pt.r;
    if (pt.s < 1) return fmt::format("on-line point gamma={} leaves no S at N={}", gamma, n);
  } else {
    if (gamma < 0.0 || p < 0.0 || gamma + p > 1.0 + 1e-12)
      return fmt::format("gamma + p = {} > 1: invalid partition", gamma + p);
    pt.r = static_cast<int>(std::lround(gamma * n));
    pt.s = static_cast<int>(std::lround(p * n));
  }
  if (pt.r < 1 || pt.s < 1) return fmt::format("|R|={} |S|={}: both must be at least 1", pt.r, pt.s);
  if (pt.r + pt.s > n) return fmt::format("|R|+|S|={} exceeds N={}", pt.r + pt.s, n);
  pt.e = n - pt.r - pt.s;
  if (pt.s > kMaxMeasuredQubits) return fmt::format("|S|={} exceeds the outcome enumeration limit", pt.s);
  return pt;
}

// (gamma, p) pairs to visit; explicit integer sizes collapse the grid.
std::vector<std::pair<double, double>> grid(const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> out;
  for (double gamma : cfg.gamma_values)
    for (double p : cfg.p_values) {
      out.emplace_back(gamma, p);
      if (cfg.r_size >= 0 && cfg.s_size >= 0) return out;
    }
  return out;
}

bool negativity_feasible(const Point& pt) { return pt.r + pt.s <= kMaxNegativityQubits; }
bool moment_feasible(const Point& pt) { return (1LL << (2 * pt.r)) <= kMaxReplicaDim; }

enum Obs { kChi, kLogNeg, kDelta2, kObsCount };
constexpr const char* kObsNames[kObsCount] = {"chi_nats", "logneg_nats", "delta2_ghse"};

// Per-sample observables at one point; NaN marks "not requested".
std::vector<Estimate> evaluate_point(const ExperimentConfig& cfg, const Point& pt, const std::array<bool, kObsCount>& want) {
  const int n = pt.r + pt.s + pt.e;
  const int samples = cfg.effective_samples();
  const Tripartition part = Tripartition::from_sizes(pt.r, pt.s, n);
  std::vector<std::array<double, kObsCount>> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), cfg.threads, [&](std::size_t i) {
    const PureState state = sample_state(cfg, n, point_stream_id(pt.r, pt.s, pt.e, i));
    auto& v = values[i];
    v.fill(kNaN);
    if (want[kChi] || want[kDelta2]) {
      const auto ens = build_ppe(state, part);
      if (want[kChi]) v[kChi] = holevo_information(ens);
      if (want[kDelta2]) v[kDelta2] = ghse_distance(ens);
    }
    if (want[kLogNeg]) v[kLogNeg] = log_negativity(state, part);
  });
  std::vector<Estimate> out(kObsCount);
  for (int o = 0; o < kObsCount; ++o) {
    if (!want[static_cast<std::size_t>(o)]) continue;
    std::vector<double> xs;
    for (const auto& v : values) xs.push_back(v[static_cast<std::size_t>(o)]);
    out[static_cast<std::size_t>(o)] = estimate(xs);
  }
  return out;
}

void emit(RunResult& res, const std::string& exp, const Point& pt, const char* obs, const Estimate& est, int t = -1) {
  res.rows.push_back(make_record(exp, pt.r, pt.s, pt.e, t, obs, est.mean, est.std_error, est.samples));
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  auto it = std::upper_bound(x.begin(), x.end(), at);
  if (it == x.begin()) return y.front();
  if (it == x.end()) return y.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// -- config ------------------------------------------------------------------------------------

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::HaarSweep: return "haar-sweep";
    case Experiment::HaarSlice: return "haar-slice";
    case Experiment::Dynamics: return "dynamics";
    case Experiment::GhseDistance: return "ghse-distance";
    case Experiment::Negativity: return "negativity";
    case Experiment::Validate: return "validate";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::HaarSweep, Experiment::HaarSlice, Experiment::Dynamics, Experiment::GhseDistance,
                 Experiment::Negativity, Experiment::Validate})
    if (to_string(e) == name) return e;
  throw std::invalid_argument(fmt::format("unknown experiment '{}'", name));
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = to_string(experiment);
  j["n"] = n_values;
  j["gamma"] = gamma_values;
  j["p"] = p_values;
  if (r_size >= 0) j["r_size"] = r_size;
  if (s_size >= 0) j["s_size"] = s_size;
  j["on_line"] = on_line;
  j["tau"] = tau;
  j["samples"] = effective_samples();
  j["seed"] = master_seed;
  j["t_max"] = t_max;
  j["geometry"] = ppe::to_string(geometry);
  j["threads"] = threads;
  j["state"] = state == StateKind::Haar ? "haar" : "ghz";
  j["slice_axis"] = slice_axis;
  j["slice_min"] = slice_min;
  j["slice_max"] = slice_max;
  j["label_tol"] = label_tol;
  j["window_fraction"] = window_fraction;
  return j;
}

void ExperimentConfig::merge_json(const nlohmann::json& j) {
  auto list = [&](const char* key, auto& target) {
    if (!j.contains(key)) return;
    using T = typename std::decay_t<decltype(target)>::value_type;
    target = j[key].is_array() ? j[key].get<std::vector<T>>() : std::vector<T>{j[key].get<T>()};
  };
  auto scalar = [&](const char* key, auto& target) {
    if (j.contains(key)) target = j[key].get<std::decay_t<decltype(target)>>();
  };
  if (j.contains("experiment")) experiment = parse_experiment(j["experiment"].get<std::string>());
  list("n", n_values);
  list("gamma", gamma_values);
  list("p", p_values);
  scalar("r_size", r_size);
  scalar("s_size", s_size);
  scalar("on_line", on_line);
  scalar("tau", tau);
  scalar("samples", samples);
  scalar("seed", master_seed);
  scalar("t_max", t_max);
  if (j.contains("geometry")) geometry = parse_geometry(j["geometry"].get<std::string>());
  scalar("out", output_path);
  scalar("threads", threads);
  if (j.contains("state")) {
    const auto s = j["state"].get<std::string>();
    if (s != "haar" && s != "ghz") throw std::invalid_argument(fmt::format("unknown state kind '{}'", s));
    state = s == "haar" ? StateKind::Haar : StateKind::Ghz;
  }
  scalar("slice_axis", slice_axis);
  scalar("slice_min", slice_min);
  scalar("slice_max", slice_max);
  scalar("label_tol", label_tol);
  scalar("window_fraction", window_fraction);
}

// -- shared pieces -------------------------------------------------------------------------------

Estimate estimate(const std::vector<double>& xs) {
  Estimate est;
  est.samples = static_cast<int>(xs.size());
  if (xs.empty()) return est;
  double sum = 0.0;
  for (double x : xs) sum += x;
  est.mean = sum / xs.size();
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - est.mean) * (x - est.mean);
    est.std_error = std::sqrt(sq / double(xs.size() - 1) / double(xs.size()));
  }
  return est;
}

std::uint64_t point_stream_id(int r, int s, int e, std::uint64_t index) {
  return stream_address({0x68616172ULL, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(s),
                         static_cast<std::uint64_t>(e), index});
}

PureState sample_state(const ExperimentConfig& cfg, int n_qubits, std::uint64_t stream_id) {
  if (cfg.state == StateKind::Ghz) {
    Vector amps = Vector::Zero(Eigen::Index{1} << n_qubits);
    amps[0] = amps[amps.size() - 1] = 1.0 / std::sqrt(2.0);
    return PureState(n_qubits, std::move(amps));
  }
  RngStream rng(cfg.master_seed, stream_id);
  return haar_random_state(n_qubits, rng);
}

// -- experiments -------------------------------------------------------------------------------

RunResult run_haar_sweep(const ExperimentConfig& cfg) {
  RunResult res;
  const std::string exp = to_string(Experiment::HaarSweep);
  for (int n : cfg.n_values)
    for (const auto& [gamma, p] : grid(cfg)) {
        const auto resolved = resolve_point(cfg, n, gamma, p);
        if (const auto* why = std::get_if<std::string>(&resolved)) {
          res.skipped.push_back({n, gamma, p, *why});
          continue;
        }
        const Point& pt = std::get<Point>(resolved);
        const std::array<bool, kObsCount> want{true, negativity_feasible(pt), moment_feasible(pt)};
        const auto est = evaluate_point(cfg, pt, want);
        for (int o = 0; o < kObsCount; ++o)
          if (want[static_cast<std::size_t>(o)]) emit(res, exp, pt, kObsNames[o], est[static_cast<std::size_t>(o)]);
        if (!want[kLogNeg]) res.skipped.push_back({n, gamma, p, "logneg_nats: |R|+|S| above the negativity limit"});
        if (!want[kDelta2]) res.skipped.push_back({n, gamma, p, "delta2_ghse: D_R^2 above the replica limit"});
      }
  return res;
}

std::vector<Crossing> find_crossings(const std::vector<Curve>& curves) {
  std::vector<Crossing> out;
  for (std::size_t a = 0; a < curves.size(); ++a)
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      const Curve& ca = curves[a];
      const Curve& cb = curves[b];
      if (ca.x.size() < 2 || cb.x.size() < 2) continue;
      const double lo = std::max(ca.x.front(), cb.x.front());
      const double hi = std::min(ca.x.back(), cb.x.back());
      if (!(lo < hi)) continue;
      std::vector<double> grid;
      for (const Curve* c : {&ca, &cb})
        for (double x : c->x)
          if (x >= lo && x <= hi) grid.push_back(x);
      grid.push_back(lo);
      grid.push_back(hi);
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end(), [](double u, double v) { return std::abs(u - v) < 1e-12; }),
                 grid.end());
      std::vector<double> d;
      for (double x : grid) d.push_back(interpolate(cb.x, cb.y, x) - interpolate(ca.x, ca.y, x));
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (d[i] == 0.0) {
          out.push_back({ca.n, cb.n, grid[i]});
        } else if (d[i] * d[i + 1] < 0.0) {
          const double w = d[i] / (d[i] - d[i + 1]);
          out.push_back({ca.n, cb.n, grid[i] + w * (grid[i + 1] - grid[i])});
        }
      }
      if (d.back() == 0.0) out.push_back({ca.n, cb.n, grid.back()});
    }
  return out;
}

RunResult run_haar_slice(const ExperimentConfig& cfg) {
  RunResult res;
  const std::string exp = to_string(Experiment::HaarSlice);
  const bool scan_p = cfg.slice_axis == "p";
  if (!scan_p && cfg.slice_axis != "gamma")
    throw std::invalid_argument(fmt::format("slice axis '{}' is neither p nor gamma", cfg.slice_axis));
  if (!(cfg.slice_min < cfg.slice_max)) throw std::invalid_argument("slice range is empty");
  const double fixed = scan_p ? cfg.gamma_values.at(0) : cfg.p_values.at(0);

  std::vector<Curve> curves;
  for (int n : cfg.n_values) {
    // Sizes are integers, so the scanned coordinate is shifted to absorb the
    // rounding of the fixed one; the transition then sits at the same place
    // for every N.
    std::vector<std::pair<double, Point>> cand;
    if (scan_p) {
      const int r = static_cast<int>(std::lround(fixed * n));
      for (int s = 1; s <= n - r; ++s)
        cand.push_back({double(s) / n + 2.0 * (double(r) / n - fixed), Point{r, s, n - r - s, fixed, double(s) / n}});
    } else {
      const int s = static_cast<int>(std::lround(fixed * n));
      for (int r = 1; r <= n - s; ++r)
        cand.push_back({double(r) / n + 0.5 * (double(s) / n - fixed), Point{r, s, n - r - s, double(r) / n, fixed}});
    }
    std::vector<std::pair<double, Point>> chosen;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const double x = cand[i].first;
      const bool inside = x >= cfg.slice_min - 1e-12 && x <= cfg.slice_max + 1e-12;
      const bool left_bracket = x < cfg.slice_min && i + 1 < cand.size() && cand[i + 1].first >= cfg.slice_min;
      const bool right_bracket = x > cfg.slice_max && i > 0 && cand[i - 1].first <= cfg.slice_max;
      if (inside || left_bracket || right_bracket) chosen.push_back(cand[i]);
    }
    Curve curve;
    curve.n = n;
    for (const auto& [x, pt] : chosen) {
      if (pt.r < 1 || pt.s < 1 || pt.s > kMaxMeasuredQubits) {
        res.skipped.push_back({n, pt.gamma, pt.p, "slice point outside the feasible partition range"});
        continue;
      }
      const auto est = evaluate_point(cfg, pt, {true, false, false});
      emit(res, exp, pt, kObsNames[kChi], est[kChi]);
      curve.x.push_back(x);
      curve.y.push_back(est[kChi].mean);
    }
    curves.push_back(std::move(curve));
  }
  res.crossings = find_crossings(curves);
  res.extra["crossing_axis"] = cfg.slice_axis;
  res.extra["crossing_coordinate"] = scan_p ? "p_eff + 2 (gamma_eff - gamma)" : "gamma_eff + (p_eff - p) / 2";
  res.extra["transition"] = scan_p ? 1.0 - 2.0 * fixed : (1.0 - fixed) / 2.0;
  return res;
}

RunResult run_dynamics(const ExperimentConfig& cfg) {
  RunResult res;
  const std::string exp = to_string(Experiment::Dynamics);
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& [gamma, p] : grid(cfg))
    for (int n : cfg.n_values) {
        DynamicsConfig dc;
        dc.geometry = cfg.geometry;
        dc.n_qubits = n;
        dc.gamma = gamma;
        dc.p = p;
        dc.r_size = cfg.r_size >= 0 && cfg.s_size >= 0 ? cfg.r_size : -1;
        dc.s_size = cfg.r_size >= 0 && cfg.s_size >= 0 ? cfg.s_size : -1;
        dc.tau = cfg.tau;
        dc.t_max = cfg.t_max;
        dc.n_realizations = cfg.effective_samples();
        dc.master_seed = cfg.master_seed;
        dc.threads = cfg.threads;
        const auto resolved = resolve_point(cfg, n, gamma, p);
        if (const auto* why = std::get_if<std::string>(&resolved)) {
          res.skipped.push_back({n, gamma, p, *why});
          continue;
        }
        const Point& pt = std::get<Point>(resolved);
        const TimeSeries series = dynamics_chi(dc);
        const Saturation sat = saturation_and_collapse(series, cfg.window_fraction);
        const int reals = static_cast<int>(series.realizations());
        for (std::size_t t = 0; t < series.times.size(); ++t)
          emit(res, exp, pt, "chi_nats", {series.mean[t], series.std_error[t], reals}, series.times[t]);
        std::vector<double> per_real;
        for (const auto& v : series.values) {
          double s = 0.0;
          for (std::size_t t = static_cast<std::size_t>(sat.window_start); t < v.size(); ++t) s += v[t];
          per_real.push_back(s / double(v.size() - static_cast<std::size_t>(sat.window_start)));
        }
        Estimate chi_sat = estimate(per_real);
        chi_sat.mean = sat.chi_sat;
        emit(res, exp, pt, "chi_sat_nats", chi_sat);
        for (std::size_t t = 0; t < series.times.size(); ++t)
          emit(res, exp, pt, "delta_chi", {sat.delta[t], 0.0, reals}, series.times[t]);
        emit(res, exp, pt, "t_star", {sat.t_star, 0.0, reals});
        windows.push_back({{"N", n}, {"window_start", sat.window_start}, {"t_max", series.times.back()}});
      }
  res.extra["saturation_window_fraction"] = cfg.window_fraction;
  res.extra["t_star_threshold"] = 0.1;
  res.extra["windows"] = windows;
  return res;
}

RunResult run_ghse_distance(const ExperimentConfig& cfg) {
  RunResult res;
  const std::string exp = to_string(Experiment::GhseDistance);
  for (const auto& [gamma, p] : grid(cfg))
    for (int n : cfg.n_values) {
        const auto resolved = resolve_point(cfg, n, gamma, p);
        if (const auto* why = std::get_if<std::string>(&resolved)) {
          res.skipped.push_back({n, gamma, p, *why});
          continue;
        }
        const Point& pt = std::get<Point>(resolved);
        if (!moment_feasible(pt)) {
          res.skipped.push_back({n, gamma, p, "D_R^2 above the replica limit"});
          continue;
        }
        emit(res, exp, pt, kObsNames[kDelta2], evaluate_point(cfg, pt, {false, false, true})[kDelta2]);
      }
  return res;
}

RunResult run_negativity(const ExperimentConfig& cfg) {
  RunResult res;
  const std::string exp = to_string(Experiment::Negativity);
  for (int n : cfg.n_values)
    for (const auto& [gamma, p] : grid(cfg)) {
        const auto resolved = resolve_point(cfg, n, gamma, p);
        if (const auto* why = std::get_if<std::string>(&resolved)) {
          res.skipped.push_back({n, gamma, p, *why});
          continue;
        }
        const Point& pt = std::get<Point>(resolved);
        if (!negativity_feasible(pt)) {
          res.skipped.push_back({n, gamma, p, "|R|+|S| above the negativity limit"});
          continue;
        }
        emit(res, exp, pt, kObsNames[kLogNeg], evaluate_point(cfg, pt, {false, true, false})[kLogNeg]);
        const auto pred = theory::negativity_prediction(double(pt.r) / n, double(pt.s) / n, n);
        emit(res, exp, pt, "logneg_theory_nats", {pred.value, 0.0, 0});
      }
  return res;
}

nlohmann::json make_metadata(const ExperimentConfig& cfg, const RunResult& result, bool with_timestamp) {
  nlohmann::json meta;
  meta["experiment"] = to_string(cfg.experiment);
  meta["version"] = PPE_LAB_VERSION;
  meta["seed"] = cfg.master_seed;
  meta["config"] = cfg.to_json();
  meta["units"] = {{"chi_nats", "nats"},     {"logneg_nats", "nats"},        {"logneg_theory_nats", "nats"},
                   {"delta2_ghse", "trace distance"}, {"chi_sat_nats", "nats"}, {"delta_chi", "dimensionless"},
                   {"t_star", "steps"}};
  meta["label_tol"] = cfg.label_tol;
  if (with_timestamp) meta["timestamp"] = now_utc();
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : result.skipped) skipped.push_back({{"N", s.n}, {"gamma", s.gamma}, {"p", s.p}, {"reason", s.reason}});
  meta["skipped"] = skipped;
  if (!result.crossings.empty() || cfg.experiment == Experiment::HaarSlice) {
    nlohmann::json cr = nlohmann::json::array();
    for (const auto& c : result.crossings) cr.push_back({{"N_a", c.n_a}, {"N_b", c.n_b}, {"value", c.value}});
    meta["crossings"] = cr;
  }
  for (const auto& [k, v] : result.extra.items()) meta[k] = v;
  return meta;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::HaarSweep: return run_haar_sweep(cfg);
    case Experiment::HaarSlice: return run_haar_slice(cfg);
    case Experiment::Dynamics: return run_dynamics(cfg);
    case Experiment::GhseDistance: return run_ghse_distance(cfg);
    case Experiment::Negativity: return run_negativity(cfg);
    case Experiment::Validate: break;
  }
  throw std::invalid_argument("validate produces a report, not a result table");
}

}  // namespace ppe::harness
