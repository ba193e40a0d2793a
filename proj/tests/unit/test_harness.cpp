#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ppe/harness.hpp"

using namespace ppe;
using namespace ppe::harness;

namespace {

constexpr double kLn2 = std::numbers::ln2;

ExperimentConfig sweep(std::vector<int> n, std::vector<double> gamma, std::vector<double> p, int samples) {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::HaarSweep;
  cfg.n_values = std::move(n);
  cfg.gamma_values = std::move(gamma);
  cfg.p_values = std::move(p);
  cfg.samples = samples;
  return cfg;
}

const ResultRecord* find(const RunResult& res, int n, int r, int s, const std::string& obs) {
  for (const auto& row : res.rows)
    if (row.n == n && row.r == r && row.s == s && row.observable == obs) return &row;
  return nullptr;
}

std::string body(const ExperimentConfig& cfg, const RunResult& res) {
  std::ostringstream out;
  write_csv(out, make_metadata(cfg, res, false), res.rows);
  return out.str();
}

}  // namespace

TEST_CASE("CSV round trip") {
  std::vector<ResultRecord> rows{make_record("haar-sweep", 3, 3, 6, -1, "chi_nats", 0.1 + 0.2, 1e-17, 32),
                                 make_record("dynamics", 2, 4, 2, 17, "delta_chi", std::numbers::pi, 0.0, 16)};
  const nlohmann::json meta{{"experiment", "haar-sweep"}, {"seed", 7}};
  std::stringstream buf;
  write_csv(buf, meta, rows);

  std::string first, header;
  std::getline(buf, first);
  std::getline(buf, header);
  CHECK(first.rfind("# {", 0) == 0);
  CHECK(header == "experiment,N,R,S,E,gamma_eff,p_eff,t,observable,mean,stderr,samples");
  buf.seekg(0);

  const CsvDocument doc = read_csv(buf);
  CHECK(doc.metadata == meta);
  REQUIRE(doc.rows.size() == 2);
  CHECK(doc.rows[0].mean == rows[0].mean);  // bit-exact
  CHECK(doc.rows[0].std_error == rows[0].std_error);
  CHECK(doc.rows[0].gamma_eff == 0.25);
  CHECK(doc.rows[0].t == -1);
  CHECK(doc.rows[1].mean == std::numbers::pi);
  CHECK(doc.rows[1].t == 17);
  CHECK(doc.rows[1].n == 8);

  std::istringstream bad("experiment,N\n");
  CHECK_THROWS_AS(read_csv(bad), std::runtime_error);
}

TEST_CASE("estimate") {
  const Estimate e = estimate({1.0, 2.0, 3.0, 4.0});
  CHECK(e.mean == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.samples == 4);
  CHECK(estimate({}).samples == 0);
}

TEST_CASE("sweep output is deterministic and independent of the thread count") {
  auto cfg = sweep({8, 10}, {0.25}, {0.25, 0.5}, 6);
  cfg.threads = 1;
  const RunResult a = run_haar_sweep(cfg);
  cfg.threads = 4;
  const RunResult b = run_haar_sweep(cfg);
  CHECK(a.rows.size() == 2 * 2 * 3);
  CHECK(body(cfg, a) == body(cfg, b));
  cfg.master_seed = 2;
  CHECK(body(cfg, run_haar_sweep(cfg)) != body(cfg, a));
}

TEST_CASE("a single point reproduces its row in the full sweep") {
  const RunResult full = run_haar_sweep(sweep({8, 10}, {0.2, 0.3}, {0.25, 0.5}, 5));
  const RunResult one = run_haar_sweep(sweep({10}, {0.3}, {0.5}, 5));
  for (const auto& row : one.rows) {
    const ResultRecord* match = find(full, row.n, row.r, row.s, row.observable);
    REQUIRE(match != nullptr);
    CHECK(format_row(*match) == format_row(row));
  }

  // explicit sizes address the same states as the rounded fractions
  auto exp = sweep({10}, {0.0}, {0.0}, 5);
  exp.r_size = 3;
  exp.s_size = 5;
  const RunResult by_size = run_haar_sweep(exp);
  REQUIRE(by_size.rows.size() == one.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) CHECK(format_row(by_size.rows[i]) == format_row(one.rows[i]));
}

TEST_CASE("static experiments share the states at a point") {
  auto cfg = sweep({8}, {0.25}, {0.25}, 4);
  const RunResult sw = run_haar_sweep(cfg);
  cfg.experiment = Experiment::Negativity;
  const RunResult neg = run_negativity(cfg);
  CHECK(find(sw, 8, 2, 2, "logneg_nats")->mean == find(neg, 8, 2, 2, "logneg_nats")->mean);
}

TEST_CASE("invalid points are skipped with a reason") {
  const RunResult res = run_haar_sweep(sweep({8}, {0.6, 0.25}, {0.6}, 2));
  CHECK_FALSE(res.skipped.empty());
  CHECK(res.skipped.front().gamma == 0.6);
  CHECK_FALSE(res.skipped.front().reason.empty());
  for (const auto& row : res.rows) CHECK(row.r + row.s <= row.n);

  const auto meta = make_metadata(sweep({8}, {0.6}, {0.6}, 2), res, false);
  CHECK(meta["skipped"].size() == res.skipped.size());
}

TEST_CASE("GHZ override gives ln 2") {
  auto cfg = sweep({6}, {1.0 / 6.0}, {0.5}, 3);
  cfg.state = StateKind::Ghz;
  const RunResult res = run_haar_sweep(cfg);
  const ResultRecord* chi = find(res, 6, 1, 3, "chi_nats");
  REQUIRE(chi != nullptr);
  CHECK(chi->mean == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(chi->std_error == doctest::Approx(0.0));
  CHECK(find(res, 6, 1, 3, "logneg_nats")->mean == doctest::Approx(0.0));
}

TEST_CASE("gHSe distance on the transition line") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::GhseDistance;
  cfg.n_values = {6, 8};
  cfg.gamma_values = {1.0 / 6.0};
  cfg.p_values = {0.0};
  cfg.on_line = true;
  cfg.samples = 3;
  const RunResult res = run_ghse_distance(cfg);
  REQUIRE(res.rows.size() == 2);
  for (const auto& row : res.rows) {
    CHECK(row.r == row.e);
    CHECK(row.r + row.s + row.e == row.n);
    CHECK(row.mean > 0.0);
    CHECK(row.mean < 1.0);
  }
}

TEST_CASE("negativity rows carry the prediction") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Negativity;
  cfg.n_values = {8};
  cfg.gamma_values = {0.125};
  cfg.p_values = {0.25};
  cfg.samples = 3;
  const RunResult res = run_negativity(cfg);
  const ResultRecord* sim = find(res, 8, 1, 2, "logneg_nats");
  const ResultRecord* th = find(res, 8, 1, 2, "logneg_theory_nats");
  REQUIRE(sim != nullptr);
  REQUIRE(th != nullptr);
  CHECK(th->mean == 0.0);
  CHECK(sim->mean < 1e-8);
}

TEST_CASE("dynamics rows") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Dynamics;
  cfg.n_values = {6};
  cfg.gamma_values = {1.0 / 6.0};
  cfg.p_values = {0.5};
  cfg.samples = 2;
  cfg.t_max = 8;
  const RunResult res = run_dynamics(cfg);
  int chi_rows = 0, delta_rows = 0;
  for (const auto& row : res.rows) {
    chi_rows += row.observable == "chi_nats";
    delta_rows += row.observable == "delta_chi";
  }
  CHECK(chi_rows == 9);
  CHECK(delta_rows == 9);
  CHECK(find(res, 6, 1, 3, "chi_sat_nats") != nullptr);
  CHECK(find(res, 6, 1, 3, "t_star") != nullptr);
  const auto meta = make_metadata(cfg, res, true);
  CHECK(meta.contains("timestamp"));
  CHECK(meta["config"]["window_fraction"] == 0.25);
}

TEST_CASE("crossing finder") {
  SUBCASE("two lines") {
    const Curve a{8, {0.0, 1.0}, {0.0, 1.0}};
    const Curve b{12, {0.0, 0.5, 1.0}, {0.5, 0.5, 0.5}};
    const auto c = find_crossings({a, b});
    REQUIRE(c.size() == 1);
    CHECK(c[0].n_a == 8);
    CHECK(c[0].n_b == 12);
    CHECK(c[0].value == doctest::Approx(0.5));
  }
  SUBCASE("different grids, partial overlap") {
    const Curve a{8, {0.1, 0.3, 0.5}, {0.0, 0.2, 0.4}};  // y = x - 0.1
    const Curve b{16, {0.2, 0.35, 0.6}, {0.3, 0.3, 0.3}};
    const auto c = find_crossings({a, b});
    REQUIRE(c.size() == 1);
    CHECK(c[0].value == doctest::Approx(0.4));
  }
  SUBCASE("no crossing") {
    const Curve a{8, {0.0, 1.0}, {0.0, 0.0}};
    const Curve b{12, {0.0, 1.0}, {1.0, 1.0}};
    CHECK(find_crossings({a, b}).empty());
    const Curve far{16, {2.0, 3.0}, {0.0, 1.0}};
    CHECK(find_crossings({a, far}).empty());
  }
  SUBCASE("three curves give three pairs") {
    const Curve a{8, {0.0, 1.0}, {1.0, 0.0}};
    const Curve b{12, {0.0, 1.0}, {0.0, 1.0}};
    const Curve c{16, {0.0, 1.0}, {0.2, 0.6}};
    CHECK(find_crossings({a, b, c}).size() == 3);
  }
}

TEST_CASE("slice enumerates points around the range and reports crossings") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::HaarSlice;
  cfg.n_values = {6, 8};
  cfg.gamma_values = {1.0 / 3.0};
  cfg.slice_min = 0.25;
  cfg.slice_max = 0.45;
  cfg.samples = 4;
  const RunResult res = run_haar_slice(cfg);
  CHECK_FALSE(res.rows.empty());
  for (const auto& row : res.rows) CHECK(row.observable == "chi_nats");
  const auto meta = make_metadata(cfg, res, false);
  CHECK(meta.contains("crossings"));
  CHECK(meta["crossing_axis"] == "p");
}

TEST_CASE("config JSON") {
  ExperimentConfig cfg;
  cfg.merge_json(nlohmann::json::parse(R"({"n": [8, 12], "gamma": [0.1], "seed": 9, "geometry": "alltoall",
                                            "state": "ghz", "window_fraction": 0.5})"));
  CHECK(cfg.n_values == std::vector<int>{8, 12});
  CHECK(cfg.gamma_values == std::vector<double>{0.1});
  CHECK(cfg.p_values == std::vector<double>{0.25});
  CHECK(cfg.master_seed == 9);
  CHECK(cfg.geometry == GeometryKind::AllToAll);
  CHECK(cfg.state == StateKind::Ghz);
  CHECK(cfg.window_fraction == 0.5);

  ExperimentConfig again;
  again.merge_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());

  CHECK_THROWS(cfg.merge_json(nlohmann::json::parse(R"({"state": "bell"})")));
  CHECK(parse_experiment(to_string(Experiment::GhseDistance)) == Experiment::GhseDistance);
  CHECK_THROWS(parse_experiment("nope"));
}

TEST_CASE("validate") {
  ExperimentConfig cfg;
  const auto checks = run_validate(cfg);
  CHECK(checks.size() >= 15);
  for (const auto& c : checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  cfg.inject_fault = true;
  for (const auto& c : run_validate(cfg)) CHECK(c.passed == (c.name != "gate_unitarity"));

  std::ostringstream out;
  print_validation(out, checks);
  CHECK(out.str().find("checks passed") != std::string::npos);
}
