#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "srz/compare.hpp"
#include "srz/config_io.hpp"
#include "srz/domain.hpp"
#include "srz/optimal_control.hpp"
#include "srz/scheduler.hpp"
#include "srz/sim_engine.hpp"

namespace fs = std::filesystem;

namespace {

bool verbose_logging() {
  const char* level = std::getenv("SRZ_LOG");
  return level != nullptr && std::string(level) != "quiet" &&
         std::string(level) != "error";
}

// Atomic write: temp file in the target directory, then rename.
bool write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    if (!out) return false;
  }
  fs::rename(tmp, path, ec);
  return !ec;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir, bool trace) {
  srz::ConfigLoadResult loaded = srz::load_config_file(config_path);
  if (!loaded.validation.ok()) {
    for (const auto& v : loaded.validation.violations) {
      std::cerr << "config: " << v << '\n';
    }
    return 1;
  }
  srz::SimConfig config = loaded.config;
  if (seed.has_value()) config.seed = *seed;

  std::vector<srz::MetricsReport> reports;
  std::string all_events;
  std::string all_traces;
  try {
    for (int rep = 0; rep < config.replications; ++rep) {
      const srz::ScenarioResult run =
          srz::run_scenario(config, config.seed + rep, trace);
      reports.push_back(run.report);
      const std::string tag = "rep" + std::to_string(rep);
      if (!write_file_atomic(fs::path(out_dir) / (tag + "_vehicles.csv"),
                             srz::per_vehicle_csv(run.report))) {
        std::cerr << "cannot write outputs under " << out_dir << '\n';
        return 1;
      }
      all_events += srz::events_text(run.events);
      if (trace) all_traces += srz::trace_csv(run.trace);
      if (verbose_logging()) {
        std::cerr << tag << ": " << run.report.rows.size() << " vehicles, "
                  << run.events.size() << " events\n";
      }
    }
  } catch (const srz::InfeasibleVolume& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  const srz::MetricsReport aggregate = srz::summarize(reports);
  bool ok = write_file_atomic(fs::path(out_dir) / "aggregate.json",
                              srz::aggregate_json(aggregate));
  ok = write_file_atomic(fs::path(out_dir) / "events.log", all_events) && ok;
  if (trace) {
    ok = write_file_atomic(fs::path(out_dir) / "trace.csv", all_traces) && ok;
  }
  if (!ok) {
    std::cerr << "cannot write outputs under " << out_dir << '\n';
    return 1;
  }
  return 0;
}

int cmd_plan(double t0, double p0, double v0, double tm, double pm, double vm,
             double dt) {
  srz::TrajectoryCoefficients coeffs;
  try {
    coeffs = srz::solve_coefficients({t0, p0, v0, tm, pm, vm});
  } catch (const srz::DegenerateHorizon& e) {
    std::cerr << e.what() << '\n';
    return 3;
  }
  std::printf("t,p,v,u\n");
  for (double t = t0; t <= tm + 1e-9; t += dt) {
    const srz::EvalResult r = srz::eval_trajectory(coeffs, std::min(t, tm));
    std::printf("%.9g,%.9g,%.9g,%.9g\n", t, r.p, r.v, r.u);
  }
  return 0;
}

int cmd_check(double l, double delta, double dv, double tm) {
  try {
    const srz::SafetyVerdict verdict = srz::theorem1_condition(l, delta, dv, tm);
    const double oracle_gap = srz::certificate_min_gap(l, delta, dv, tm);
    std::printf("holds,t_star,margin,oracle_min_gap\n");
    std::printf("%s,%.9g,%.9g,%.9g\n", verdict.holds ? "true" : "false",
                verdict.t_star, verdict.margin, oracle_gap);
    return 0;
  } catch (const srz::HypothesisViolated& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}

int cmd_compare(const std::string& config_path, std::optional<std::uint64_t> seed,
                const std::string& out_dir) {
  srz::ConfigLoadResult loaded = srz::load_config_file(config_path);
  if (!loaded.validation.ok()) {
    for (const auto& v : loaded.validation.violations) {
      std::cerr << "config: " << v << '\n';
    }
    return 1;
  }
  srz::SimConfig config = loaded.config;
  if (seed.has_value()) config.seed = *seed;

  srz::ComparisonTable table;
  try {
    table = srz::run_comparison(config);
  } catch (const srz::InfeasibleVolume& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  bool ok = write_file_atomic(fs::path(out_dir) / "comparison.csv",
                              srz::comparison_csv(table));
  ok = write_file_atomic(fs::path(out_dir) / "comparison.json",
                         srz::comparison_json(table)) &&
       ok;
  if (!ok) {
    std::cerr << "cannot write outputs under " << out_dir << '\n';
    return 1;
  }
  std::cout << srz::comparison_summary(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speed-reduction-zone trajectory optimization and traffic simulation"};
  app.require_subcommand(1);

  std::string config_path = "configs/testbed.cfg";
  std::optional<std::uint64_t> seed_override;
  std::string out_dir = "out";
  bool trace = false;
  app.add_option("--config", config_path, "Scenario config file");
  app.add_option("--seed", seed_override, "Override base seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--trace", trace, "Emit per-step trace CSV");

  auto* run = app.add_subcommand("run", "Run all replications of one scenario");

  double t0 = 0, p0 = 0, v0 = 15.6, tm_arg = 19.2308, pm = 300, vm = 15.6, dt = 1.0;
  auto* plan = app.add_subcommand("plan", "Dump the closed-form trajectory as CSV");
  plan->add_option("t0", t0)->required();
  plan->add_option("p0", p0)->required();
  plan->add_option("v0", v0)->required();
  plan->add_option("tm", tm_arg)->required();
  plan->add_option("pm", pm)->required();
  plan->add_option("vm", vm)->required();
  plan->add_option("dt", dt);

  double l = 50, delta = 20.22, dv = 0, check_tm = 15;
  auto* check = app.add_subcommand("check", "Rear-end certificate for a vehicle pair");
  check->add_option("l", l)->required();
  check->add_option("delta", delta)->required();
  check->add_option("dv", dv)->required();
  check->add_option("tm", check_tm)->required();

  auto* compare =
      app.add_subcommand("compare", "Controller x volume comparison sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run->parsed()) return cmd_run(config_path, seed_override, out_dir, trace);
  if (plan->parsed()) return cmd_plan(t0, p0, v0, tm_arg, pm, vm, dt);
  if (check->parsed()) return cmd_check(l, delta, dv, check_tm);
  if (compare->parsed()) return cmd_compare(config_path, seed_override, out_dir);
  return 1;
}
