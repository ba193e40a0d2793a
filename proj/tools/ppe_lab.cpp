// ppe_lab: command-line front end for the partial projected ensemble experiments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ppe/harness.hpp"

namespace {

using ppe::harness::ExperimentConfig;

// Flag values as parsed; only flags the user actually passed are applied on
// top of the config file.
struct Flags {
  std::vector<int> n;
  std::vector<double> gamma, p;
  int r_size = -1, s_size = -1;
  double tau = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  int t_max = 0;
  std::string geometry, out, state, slice_axis;
  int threads = 0;
  double slice_min = 0.0, slice_max = 0.0, label_tol = 0.0, window_fraction = 0.0;
  bool on_line = false, inject_fault = false, no_timestamp = false;
  std::string config;
};

struct Registered {
  std::map<std::string, CLI::Option*> opts;
  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

Registered add_flags(CLI::App* sub, Flags& f) {
  Registered r;
  r.opts["n"] = sub->add_option("--n", f.n, "System sizes N")->delimiter(',');
  r.opts["gamma"] = sub->add_option("--gamma", f.gamma, "Fractions |R|/N")->delimiter(',');
  r.opts["p"] = sub->add_option("--p", f.p, "Fractions |S|/N")->delimiter(',');
  r.opts["r_size"] = sub->add_option("--r-size", f.r_size, "Explicit |R| (overrides gamma)");
  r.opts["s_size"] = sub->add_option("--s-size", f.s_size, "Explicit |S| (overrides p)");
  r.opts["tau"] = sub->add_option("--tau", f.tau, "Gate evolution time");
  r.opts["samples"] = sub->add_option("--samples", f.samples, "Haar samples or circuit realizations per point");
  r.opts["seed"] = sub->add_option("--seed", f.seed, "Master seed");
  r.opts["t_max"] = sub->add_option("--t-max", f.t_max, "Circuit depth (default 6N brickwork, 30 all-to-all)");
  r.opts["geometry"] =
      sub->add_option("--geometry", f.geometry, "Circuit geometry")->check(CLI::IsMember({"alltoall", "brickwork"}));
  r.opts["out"] = sub->add_option("--out", f.out, "Output CSV path (default stdout)");
  r.opts["threads"] = sub->add_option("--threads", f.threads, "Worker threads (0 = hardware default)");
  r.opts["state"] = sub->add_option("--state", f.state, "Input state override")->check(CLI::IsMember({"haar", "ghz"}));
  r.opts["on_line"] = sub->add_flag("--on-line", f.on_line, "Use |R| = |E| = round(gamma N), |S| = N - 2|R|");
  r.opts["slice_axis"] =
      sub->add_option("--slice-axis", f.slice_axis, "Scanned axis for haar-slice")->check(CLI::IsMember({"p", "gamma"}));
  r.opts["slice_min"] = sub->add_option("--slice-min", f.slice_min, "Lower end of the scanned range");
  r.opts["slice_max"] = sub->add_option("--slice-max", f.slice_max, "Upper end of the scanned range");
  r.opts["label_tol"] = sub->add_option("--label-tol", f.label_tol, "Tolerance for the critical phase label");
  r.opts["window_fraction"] =
      sub->add_option("--window-fraction", f.window_fraction, "Late-time fraction averaged for chi_sat");
  r.opts["no_timestamp"] = sub->add_flag("--no-timestamp", f.no_timestamp, "Omit the timestamp from the metadata");
  r.opts["config"] = sub->add_option("--config", f.config, "JSON config file; flags override its values");
  return r;
}

ExperimentConfig build_config(ppe::harness::Experiment experiment, const Flags& f, const Registered& r) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  bool threads_set = false;
  if (r.given("config")) {
    std::ifstream in(f.config);
    if (!in) throw std::runtime_error(fmt::format("cannot open config file '{}'", f.config));
    const auto j = nlohmann::json::parse(in);
    cfg.merge_json(j);
    cfg.experiment = experiment;
    threads_set = j.contains("threads");
  }
  nlohmann::json over;
  if (r.given("n")) over["n"] = f.n;
  if (r.given("gamma")) over["gamma"] = f.gamma;
  if (r.given("p")) over["p"] = f.p;
  if (r.given("r_size")) over["r_size"] = f.r_size;
  if (r.given("s_size")) over["s_size"] = f.s_size;
  if (r.given("tau")) over["tau"] = f.tau;
  if (r.given("samples")) over["samples"] = f.samples;
  if (r.given("seed")) over["seed"] = f.seed;
  if (r.given("t_max")) over["t_max"] = f.t_max;
  if (r.given("geometry")) over["geometry"] = f.geometry;
  if (r.given("out")) over["out"] = f.out;
  if (r.given("threads")) over["threads"] = f.threads;
  if (r.given("state")) over["state"] = f.state;
  if (r.given("on_line")) over["on_line"] = f.on_line;
  if (r.given("slice_axis")) over["slice_axis"] = f.slice_axis;
  if (r.given("slice_min")) over["slice_min"] = f.slice_min;
  if (r.given("slice_max")) over["slice_max"] = f.slice_max;
  if (r.given("label_tol")) over["label_tol"] = f.label_tol;
  if (r.given("window_fraction")) over["window_fraction"] = f.window_fraction;
  cfg.merge_json(over);
  if (!threads_set && !r.given("threads"))
    if (const char* env = std::getenv("PPE_LAB_THREADS")) cfg.threads = std::stoi(env);
  if ((cfg.r_size >= 0) != (cfg.s_size >= 0)) throw std::invalid_argument("--r-size and --s-size go together");
  return cfg;
}

int run_table(const ExperimentConfig& cfg, bool timestamp) {
  const auto result = ppe::harness::run_experiment(cfg);
  for (const auto& s : result.skipped)
    std::cerr << fmt::format("skipped N={} gamma={} p={}: {}\n", s.n, s.gamma, s.p, s.reason);
  for (const auto& c : result.crossings)
    std::cerr << fmt::format("crossing N={} / N={}: {:.4f}\n", c.n_a, c.n_b, c.value);
  const auto meta = ppe::harness::make_metadata(cfg, result, timestamp);
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    ppe::harness::write_csv(std::cout, meta, result.rows);
  } else {
    std::ofstream out(cfg.output_path);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", cfg.output_path));
    ppe::harness::write_csv(out, meta, result.rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial projected ensembles of Haar states and chaotic circuits"};
  app.set_version_flag("--version", PPE_LAB_VERSION);
  app.require_subcommand(1);

  using ppe::harness::Experiment;
  const std::vector<std::pair<Experiment, std::string>> commands{
      {Experiment::HaarSweep, "Holevo information, negativity and gHSe distance over a (gamma, p) grid"},
      {Experiment::HaarSlice, "Holevo information along a slice at several N, with pairwise crossings"},
      {Experiment::Dynamics, "Holevo information of circuit-evolved product states versus time"},
      {Experiment::GhseDistance, "Second-moment distance to the generalized Hilbert-Schmidt ensemble versus N"},
      {Experiment::Negativity, "Logarithmic negativity between R and S, with the leading-order prediction"},
      {Experiment::Validate, "Fast invariant and oracle checks"}};

  std::vector<Flags> flags(commands.size());
  std::vector<Registered> registered;
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(ppe::harness::to_string(commands[i].first), commands[i].second);
    registered.push_back(add_flags(sub, flags[i]));
    if (commands[i].first == Experiment::Validate)
      sub->add_flag("--inject-fault", flags[i].inject_fault, "Corrupt one gate to exercise the failure path");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      ExperimentConfig cfg = build_config(commands[i].first, flags[i], registered[i]);
      if (commands[i].first == Experiment::Validate) {
        cfg.inject_fault = flags[i].inject_fault;
        const auto checks = ppe::harness::run_validate(cfg);
        ppe::harness::print_validation(std::cout, checks);
        for (const auto& c : checks)
          if (!c.passed) return 1;
        return 0;
      }
      return run_table(cfg, !flags[i].no_timestamp);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
