#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jc_oracle.hpp"
#include "qsl/sweep.hpp"

using namespace qsl;
using nlohmann::json;

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.gamma0_grid = {0.05, 20.0, 8};
  cfg.steps = 1000;
  return cfg;
}

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  emit(rows, OutputFormat::Csv, out);
  return out.str();
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("gamma0 grid") {
  const auto v = Gamma0Grid{0.01, 100.0, 5}.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 0.01);
  CHECK(v.back() == 100.0);
  CHECK(v[2] == doctest::Approx(1.0));
  CHECK(Gamma0Grid{1.0, 2.0, 2}.values().size() == 2);
}

TEST_CASE("config validation and JSON overlay") {
  SweepConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma0_grid.count = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.gamma0_grid.min = 5.0;
  cfg.gamma0_grid.max = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);

  const auto parsed = sweep_config_from_json(json::parse(R"({"lambda": 2.0, "gamma0_grid": {"count": 7}, "constants": {"hbar": 0.5}})"));
  CHECK(parsed.lambda == 2.0);
  CHECK(parsed.gamma0_grid.count == 7);
  CHECK(parsed.gamma0_grid.min == 1e-2);
  CHECK(parsed.constants.hbar == 0.5);
  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"lamda": 2.0})")), Error);
  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"lambda": "two"})")), Error);
  const auto back = sweep_config_from_json(to_json(parsed));
  CHECK(back.lambda == parsed.lambda);
  CHECK(back.gamma0_grid.count == parsed.gamma0_grid.count);
  CHECK(back.seed == parsed.seed);
}

TEST_CASE("count = 2 grid gives two rows") {
  SweepConfig cfg = small_config();
  cfg.gamma0_grid = {0.1, 0.2, 2};
  CHECK(run_jc_sweep(cfg).size() == 2);
}

TEST_CASE("Markovian rows follow the closed form") {
  SweepConfig cfg = small_config();
  cfg.steps = 20000;
  for (double g0 : {0.05, 0.25, 0.45}) {
    const SweepRow row = evaluate_jc_point(cfg, g0);
    const double pe = oracle::excited_population(g0, 1.0, 1.0);
    const double h = -pe * std::log(pe) - (1 - pe) * std::log(1 - pe);
    CHECK(row.report.flags.empty());
    CHECK(row.speed.ell == doctest::Approx(1.0 - pe).epsilon(1e-10));
    CHECK(row.delta_h_nats == doctest::Approx(h).epsilon(1e-10));
    CHECK(row.report.info_rate_exact == doctest::Approx(h / std::numbers::ln2).epsilon(1e-8));
    CHECK(row.report.info_rate_exact <= row.report.bound_micro_with_additive + 1e-9);
    CHECK(row.halfstep_discrepancy < 1e-8);
  }
}

TEST_CASE("rows with amplitude zeros are flagged and still filled") {
  const SweepRow row = evaluate_jc_point(small_config(), 20.0);
  CHECK(row.report.flags.has(Flag::AmplitudeGuard));
  CHECK(std::isfinite(row.report.info_rate_exact));
  CHECK(std::isfinite(row.report.bound_micro_with_additive));
  const double pe = oracle::excited_population(20.0, 1.0, 1.0);
  CHECK(row.speed.ell == doctest::Approx(1.0 - pe).epsilon(1e-9));
}

TEST_CASE("parallel sweep equals the serial reference and is deterministic") {
  const SweepConfig cfg = small_config();
  const std::string serial = csv_of(run_jc_sweep_serial(cfg));
  CHECK(csv_of(run_jc_sweep(cfg, 1)) == serial);
  CHECK(csv_of(run_jc_sweep(cfg, 3)) == serial);
  CHECK(csv_of(run_jc_sweep(cfg, 8)) == serial);
}

TEST_CASE("rows come back in grid order") {
  const SweepConfig cfg = small_config();
  const auto rows = run_jc_sweep(cfg, 4);
  const auto grid = cfg.gamma0_grid.values();
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].gamma0 == grid[i]);
}

TEST_CASE("CSV header, empty flags column and round trip") {
  const auto rows = run_jc_sweep(small_config(), 2);
  const std::string text = csv_of(rows);
  const std::string header = text.substr(0, text.find('\n'));
  CHECK(header == "gamma0,lambda,omega0,tau,ell,lambda_tau,tau_qsl,delta_H_nats,info_rate_exact,bound_micro,bound_micro_with_additive,flags");

  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    if (rows[i].report.flags.empty()) CHECK(line.back() == ',');
    ++i;
  }
  CHECK(i == rows.size());

  std::istringstream in(text);
  const auto back = parse_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(close_rel(back[k].gamma0, rows[k].gamma0, 1e-12));
    CHECK(close_rel(back[k].speed.ell, rows[k].speed.ell, 1e-12));
    CHECK(close_rel(back[k].speed.lambda_tau, rows[k].speed.lambda_tau, 1e-12));
    CHECK(close_rel(back[k].speed.tau_qsl, rows[k].speed.tau_qsl, 1e-12));
    CHECK(close_rel(back[k].delta_h_nats, rows[k].delta_h_nats, 1e-12));
    CHECK(close_rel(back[k].report.info_rate_exact, rows[k].report.info_rate_exact, 1e-12));
    CHECK(close_rel(back[k].report.bound_micro, rows[k].report.bound_micro, 1e-12));
    CHECK(close_rel(back[k].report.bound_micro_with_additive, rows[k].report.bound_micro_with_additive, 1e-12));
    CHECK(back[k].report.flags == rows[k].report.flags);
  }
  CHECK(csv_of(back) == text);
}

TEST_CASE("parse_csv rejects a wrong header") {
  std::istringstream in("gamma0,lambda\n1,2\n");
  CHECK_THROWS_AS(parse_csv(in), Error);
}

TEST_CASE("JSON output has the CSV keys") {
  const auto rows = run_jc_sweep(small_config(), 2);
  std::ostringstream out;
  emit(rows, OutputFormat::Json, out);
  const json j = json::parse(out.str());
  REQUIRE(j.is_array());
  REQUIRE(j.size() == rows.size());
  for (const auto& obj : j) {
    CHECK(obj.size() == kCsvColumns.size());
    for (auto key : kCsvColumns) CHECK(obj.contains(std::string(key)));
  }
  CHECK(j[0]["gamma0"].get<double>() == rows[0].gamma0);
  CHECK(j[0]["flags"].get<std::string>() == rows[0].report.flags.to_string());
}

TEST_CASE("emit errors") {
  std::ostringstream out;
  CHECK_THROWS_AS(emit({}, OutputFormat::Csv, out), Error);
  const auto rows = run_jc_sweep(SweepConfig{.gamma0_grid = {0.1, 0.2, 2}, .steps = 200});
  CHECK_THROWS_AS(emit(rows, OutputFormat::Csv, std::string("/nonexistent-dir/x.csv")), Error);
  CHECK_THROWS_AS(parse_format("xml"), Error);
  CHECK(parse_format("json") == OutputFormat::Json);

  const auto path = std::filesystem::temp_directory_path() / "qsl_emit_test.csv";
  emit(rows, OutputFormat::Csv, path.string());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == csv_of(rows));
  std::filesystem::remove(path);
}

TEST_CASE("Rabi demo") {
  const auto r = run_rabi_demo(1.0, std::numbers::pi, 2000, 1.0, 0.0);
  CHECK(std::abs(r.marginal.tau_qsl_x - std::numbers::pi) < 1e-6);
  CHECK(std::abs(r.speed.tau_qsl - 2.0) < 1e-6);
  CHECK(r.max_entropy_drift < 1e-8);
  CHECK(r.converged);

  const auto full = run_rabi_demo(1.0, 2.0 * std::numbers::pi, 4000, 1.0, 0.0);
  CHECK(std::abs(full.delta_s_x_nats) < 1e-9);

  const auto quarter = run_rabi_demo(1.0, 0.5 * std::numbers::pi, 2000, 1.0, 0.0);
  CHECK(quarter.bound_shannon >= quarter.shannon_rate_exact);
  CHECK(quarter.shannon_rate_exact > 0.0);

  CHECK_THROWS_AS(run_rabi_demo(0.0, 1.0, 100, 1.0, 0.0), Error);
  CHECK_THROWS_AS(run_rabi_demo(1.0, 1.0, 100, 0.0, 0.0), Error);
  const json j = to_json(r);
  CHECK(j.contains("tau_qsl_x"));
  CHECK(j.contains("bound_shannon"));
}
