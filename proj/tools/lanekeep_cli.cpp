/*
 * Copyright 2026 The lanekeep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Batch front end: scenarios, comparisons, stability sweeps, tuning,
// dataset generation and track export.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lanekeep/config.hpp"
#include "lanekeep/errors.hpp"
#include "lanekeep/estimator.hpp"
#include "lanekeep/harness.hpp"
#include "lanekeep/stability.hpp"
#include "lanekeep/track.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOffTrack = 3;
constexpr int kExitInfeasible = 4;

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw lanekeep::ConfigError("cannot write " + path.string());
  return out;
}

int simulate(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = lanekeep::parse_scenario(
      lanekeep::read_text_file(config_path));
  const auto trace = lanekeep::run_scenario(cfg);
  const auto metrics = lanekeep::compute_metrics(trace);
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "trace.csv");
    lanekeep::write_trace_csv(out, trace, cfg.trace_decimation);
  }
  {
    auto out = open_output(dir / "metrics.json");
    lanekeep::write_metrics_json(out, metrics);
  }
  {
    auto out = open_output(dir / "config.json");
    out << lanekeep::scenario_to_json(cfg) << '\n';
  }
  lanekeep::write_metrics_json(std::cout, metrics);
  return trace.off_track ? kExitOffTrack : kExitOk;
}

int compare(const std::string& config_path, const std::string& out_path) {
  lanekeep::ScenarioConfig base;
  const auto variants = lanekeep::parse_comparison(
      lanekeep::read_text_file(config_path), base);
  const auto table = lanekeep::compare_configurations(base, variants);
  lanekeep::write_comparison_csv(std::cout, table);
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    lanekeep::write_comparison_csv(out, table);
  }
  return kExitOk;
}

int sweep(const std::string& grid_path, const std::string& out_path) {
  lanekeep::StraightLoopParams fixed;
  const auto grid = lanekeep::parse_sweep_grid(
      lanekeep::read_text_file(grid_path), fixed);
  const auto rows = lanekeep::sweep_critical_delay(grid, fixed);
  auto out = open_output(out_path);
  lanekeep::write_sweep_csv(out, rows);
  std::printf("%zu rows written to %s\n", rows.size(), out_path.c_str());
  return kExitOk;
}

int tune(double v, double L_d, double wheelbase, double tau,
         const lanekeep::KdRange& range) {
  const auto best = lanekeep::tune_kd(v, L_d, wheelbase, tau, range);
  std::printf("K_D = %.6f\ncritical_delay_s = %.6f\n", best.K_D,
              best.critical_delay);
  return kExitOk;
}

int dataset(const std::string& config_path, const std::string& out_path) {
  lanekeep::TrackSpec track;
  const auto cfg = lanekeep::parse_dataset(
      lanekeep::read_text_file(config_path), track);
  const auto path = lanekeep::build_track(track, lanekeep::Direction::kClockwise);
  const auto records = lanekeep::generate_dataset(path, cfg);
  auto out = open_output(out_path);
  lanekeep::write_dataset_csv(out, cfg, records);
  std::printf("%zu records written to %s\n", records.size(), out_path.c_str());
  return kExitOk;
}

int track(const std::string& params_path, const std::string& out_path,
          double spacing, bool counterclockwise) {
  const auto spec = lanekeep::parse_track_spec(
      lanekeep::read_text_file(params_path));
  const auto path = lanekeep::build_track(
      spec, counterclockwise ? lanekeep::Direction::kCounterclockwise
                             : lanekeep::Direction::kClockwise);
  auto out = open_output(out_path);
  out << "s,x,y,psi,kappa\n";
  char buf[160];
  for (const auto& p : lanekeep::sample_polyline(path, spacing)) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g\n", p.s, p.x,
                  p.y, p.psi, p.kappa);
    out << buf;
  }
  std::printf("length_m = %.9g\n", path.total_length());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lanekeep: lane-keeping simulation and delay-stability tools"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;

  auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
  sim->add_option("--config", config_path, "Scenario JSON")->required();
  sim->add_option("--out", out_path, "Output directory")->required();

  auto* cmp = app.add_subcommand("compare", "Compare controller variants");
  cmp->add_option("--config", config_path, "Comparison JSON")->required();
  cmp->add_option("--out", out_path, "Optional CSV copy of the table");

  auto* swp = app.add_subcommand("sweep-stability",
                                 "Critical delay over a parameter grid");
  swp->add_option("--grid", config_path, "Grid JSON")->required();
  swp->add_option("--out", out_path, "Output CSV")->required();

  double v = 1.0;
  double L_d = 0.5;
  double wheelbase = 0.26;
  double tau = 0.17;
  lanekeep::KdRange range;
  auto* tun = app.add_subcommand("tune", "Derivative gain maximising the critical delay");
  tun->add_option("--v", v, "Speed, m/s")->required();
  tun->add_option("--Ld", L_d, "Lookahead distance, m")->required();
  tun->add_option("--wheelbase", wheelbase, "Wheelbase, m");
  tun->add_option("--tau", tau, "Steering lag, s");
  tun->add_option("--kd-min", range.lo, "Lower end of the K_D range");
  tun->add_option("--kd-max", range.hi, "Upper end of the K_D range");
  tun->add_option("--points", range.coarse_points, "Coarse grid size");

  auto* dat = app.add_subcommand("dataset", "Labelled pose dataset");
  dat->add_option("--config", config_path, "Dataset JSON")->required();
  dat->add_option("--out", out_path, "Output CSV")->required();

  double spacing = 0.01;
  bool ccw = false;
  auto* trk = app.add_subcommand("track", "Export the track centreline");
  trk->add_option("--params", config_path, "Track JSON")->required();
  trk->add_option("--emit-polyline", out_path, "Output CSV")->required();
  trk->add_option("--spacing", spacing, "Sample spacing, m");
  trk->add_flag("--counterclockwise", ccw, "Mirror the travel direction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return simulate(config_path, out_path);
    if (*cmp) return compare(config_path, out_path);
    if (*swp) return sweep(config_path, out_path);
    if (*tun) return tune(v, L_d, wheelbase, tau, range);
    if (*dat) return dataset(config_path, out_path);
    if (*trk) return track(config_path, out_path, spacing, ccw);
  } catch (const lanekeep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lanekeep::ConstraintViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lanekeep::InfeasibleTuningError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
