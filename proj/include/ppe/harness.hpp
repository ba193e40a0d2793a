#pragma once

// Experiment drivers behind the ppe_lab command line.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppe/circuits.hpp"
#include "ppe/csv.hpp"
#include "ppe/qstate.hpp"

namespace ppe::harness {

enum class Experiment { HaarSweep, HaarSlice, Dynamics, GhseDistance, Negativity, Validate };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

enum class StateKind { Haar, Ghz };  // GHZ is a deterministic test override

struct ExperimentConfig {
  Experiment experiment = Experiment::HaarSweep;
  std::vector<int> n_values{12};
  std::vector<double> gamma_values{0.25};
  std::vector<double> p_values{0.25};
  int r_size = -1;  // explicit integer sizes override (gamma, p) rounding
  int s_size = -1;
  bool on_line = false;  // ghse-distance: |R| = |E| = round(gamma N), |S| = N - 2|R|
  double tau = 0.8;
  int samples = 0;  // 0 selects 32 (statics) or 16 (dynamics)
  std::uint64_t master_seed = 1;
  int t_max = 0;    // 0 selects the geometry default
  GeometryKind geometry = GeometryKind::Brickwork;
  std::string output_path;  // empty or "-" writes to stdout
  int threads = 0;
  StateKind state = StateKind::Haar;
  // haar-slice: scan "p" at the first gamma value, or "gamma" at the first p value
  std::string slice_axis = "p";
  double slice_min = 0.25;
  double slice_max = 0.45;
  double label_tol = 0.01;
  double window_fraction = 0.25;
  bool inject_fault = false;  // validate: corrupt one gate to exercise the failure path

  int effective_samples() const { return samples > 0 ? samples : (experiment == Experiment::Dynamics ? 16 : 32); }

  nlohmann::json to_json() const;
  // Keys mirror to_json(); absent keys keep their current value.
  void merge_json(const nlohmann::json& j);
};

struct SkippedPoint {
  int n = 0;
  double gamma = 0.0;
  double p = 0.0;
  std::string reason;
};

struct Crossing {
  int n_a = 0, n_b = 0;
  double value = 0.0;
};

struct RunResult {
  std::vector<ResultRecord> rows;
  std::vector<SkippedPoint> skipped;
  std::vector<Crossing> crossings;
  nlohmann::json extra = nlohmann::json::object();
};

/// Mean and standard error of a sample list.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};
Estimate estimate(const std::vector<double>& xs);

/// Stream id of Haar sample `index` at a point. It depends only on the
/// integer sizes, so any point can be recomputed on its own and the static
/// experiments see the same states at the same point.
std::uint64_t point_stream_id(int r, int s, int e, std::uint64_t index);

PureState sample_state(const ExperimentConfig& cfg, int n_qubits, std::uint64_t stream_id);

RunResult run_haar_sweep(const ExperimentConfig& cfg);
RunResult run_haar_slice(const ExperimentConfig& cfg);
RunResult run_dynamics(const ExperimentConfig& cfg);
RunResult run_ghse_distance(const ExperimentConfig& cfg);
RunResult run_negativity(const ExperimentConfig& cfg);

/// Pairwise crossings of per-N curves (x, y) by linear interpolation of the
/// difference on the union grid of their overlap.
struct Curve {
  int n = 0;
  std::vector<double> x, y;  // x ascending
};
std::vector<Crossing> find_crossings(const std::vector<Curve>& curves);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CheckResult> run_validate(const ExperimentConfig& cfg);
void print_validation(std::ostream& out, const std::vector<CheckResult>& checks);

/// Metadata object for the CSV header line.
nlohmann::json make_metadata(const ExperimentConfig& cfg, const RunResult& result, bool with_timestamp = true);

RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace ppe::harness
