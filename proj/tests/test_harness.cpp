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


#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lanekeep/errors.hpp"
#include "lanekeep/harness.hpp"

namespace lanekeep {
namespace {

ScenarioConfig ideal(const PPDConfig& controller = oc_controller()) {
  ScenarioConfig cfg;
  cfg.controller = controller;
  cfg.sensor.mode = SensorMode::kIdeal;
  return cfg;
}

SimTrace trace_of(std::initializer_list<double> e_y) {
  SimTrace trace;
  trace.track_length = 10.0;
  double t = 0.0;
  for (double e : e_y) {
    TraceRow r;
    r.t = t;
    r.s = t;
    r.v = 1.0;
    r.e_y = e;
    trace.rows.push_back(r);
    t += 0.1;
  }
  return trace;
}

// Largest swing to the opposite side relative to the peak on the first
// straight of lap 2, over the part where the lookahead stays on it.
double straight_overshoot(const ScenarioConfig& cfg) {
  const SimTrace trace = run_scenario(cfg);
  const TrackPath track = build_track(cfg.track, cfg.direction);
  const Section& sec = track.sections()[1];
  const double lo = sec.s_start + trace.track_length;
  const double hi = lo + sec.length() - cfg.controller.L_d;
  double peak = 0.0;
  double opposite = 0.0;
  for (const auto& r : trace.rows) {
    if (r.s < lo || r.s > hi) continue;
    peak = std::max(peak, r.e_y);
    opposite = std::min(opposite, r.e_y);
  }
  EXPECT_GT(peak, 0.0);
  return -opposite / peak;
}

TEST(ScenarioConfigTest, Validation) {
  ScenarioConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ScenarioConfig{};
  cfg.duration.value = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ScenarioConfig{};
  cfg.controller.L_d = -0.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ScenarioConfig{};
  cfg.trace_decimation = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(run_scenario(cfg), ConfigError);
}

TEST(RunScenarioTest, FixedSpeedBenchmarkLap) {
  ScenarioConfig cfg = ideal();
  cfg.controller.K_D = 0.0;
  cfg.vehicle.tau_d = 0.0;
  cfg.velocity.mode = VelocityMode::kFixed;
  cfg.velocity.fixed_speed = 0.3;
  cfg.duration = {DurationUnit::kLaps, 1.0};
  const SimTrace trace = run_scenario(cfg);
  ASSERT_FALSE(trace.off_track);
  EXPECT_GE(trace.rows.back().s - trace.rows.front().s, trace.track_length - 0.01);
  const MetricsReport m = compute_metrics(trace);
  EXPECT_LE(m.eps_y_max, 0.05 + 1e-12);
  EXPECT_LT(m.eps_psi_max, 0.3);
  EXPECT_NEAR(m.mean_speed, 0.3, 0.01);
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    EXPECT_GT(trace.rows[i].t, trace.rows[i - 1].t);
  }
}

TEST(RunScenarioTest, StraightEquilibrium) {
  ScenarioConfig cfg = ideal();
  cfg.track.shape = TrackShape::kStraight;
  cfg.initial.e_y = 0.0;
  cfg.vehicle.tau_d = 0.0;
  cfg.duration = {DurationUnit::kSeconds, 20.0};
  const SimTrace trace = run_scenario(cfg);
  EXPECT_FALSE(trace.off_track);
  EXPECT_NEAR(trace.rows.back().t, 20.0, 1e-9);
  for (const auto& r : trace.rows) {
    EXPECT_EQ(r.e_y, 0.0);
    EXPECT_EQ(r.e_psi, 0.0);
  }
}

TEST(RunScenarioTest, OffTrackEndsRun) {
  ScenarioConfig cfg = ideal();
  cfg.controller.K_D = 0.0;
  cfg.controller.L_d = 0.12;  // below v tau: unstable
  cfg.velocity.mode = VelocityMode::kFixed;
  cfg.velocity.fixed_speed = 1.0;
  const SimTrace trace = run_scenario(cfg);
  EXPECT_TRUE(trace.off_track);
  EXPECT_LT(trace.rows.back().t, 30.0);
  EXPECT_TRUE(compute_metrics(trace).off_track);
}

TEST(RunScenarioTest, Determinism) {
  ScenarioConfig cfg;
  cfg.duration = {DurationUnit::kLaps, 1.0};
  const SimTrace a = run_scenario(cfg);
  const SimTrace b = run_scenario(cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const TraceRow& x = a.rows[i];
    const TraceRow& y = b.rows[i];
    EXPECT_EQ(x.e_y, y.e_y);
    EXPECT_EQ(x.alpha_meas, y.alpha_meas);
    EXPECT_EQ(x.delta, y.delta);
  }
  cfg.rng_seed = 2;
  const SimTrace c = run_scenario(cfg);
  bool differs = false;
  for (std::size_t i = 0; i < std::min(a.rows.size(), c.rows.size()); ++i) {
    differs = differs || a.rows[i].alpha_meas != c.rows[i].alpha_meas;
  }
  EXPECT_TRUE(differs);
}

TEST(RunScenarioTest, StepSizeConverged) {
  ScenarioConfig cfg;
  cfg.initial.e_y = 0.0;
  const double coarse = compute_metrics(run_scenario(cfg)).eps_y_max;
  cfg.dt /= 2.0;
  const double fine = compute_metrics(run_scenario(cfg)).eps_y_max;
  EXPECT_GT(coarse, 0.02);
  EXPECT_LT(std::abs(fine - coarse), 0.01 * coarse);
}

TEST(RunScenarioTest, DirectionsMirror) {
  ScenarioConfig cw = ideal();
  cw.initial.e_y = 0.03;
  cw.initial.e_psi = 0.02;
  ScenarioConfig ccw = cw;
  ccw.direction = Direction::kCounterclockwise;
  ccw.initial.e_y = -cw.initial.e_y;
  ccw.initial.e_psi = -cw.initial.e_psi;
  const SimTrace a = run_scenario(cw);
  const SimTrace b = run_scenario(ccw);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_NEAR(a.rows[i].e_y, -b.rows[i].e_y, 1e-6);
    EXPECT_NEAR(a.rows[i].delta, -b.rows[i].delta, 1e-6);
  }
  const MetricsReport ma = compute_metrics(a);
  const MetricsReport mb = compute_metrics(b);
  EXPECT_NEAR(ma.eps_y_max, mb.eps_y_max, 1e-6);
  EXPECT_NEAR(ma.eps_psi_max, mb.eps_psi_max, 1e-6);
  EXPECT_NEAR(ma.rms_e_y, mb.rms_e_y, 1e-6);
  EXPECT_NEAR(ma.lap_time, mb.lap_time, 1e-6);
}

TEST(RunScenarioTest, VelocityReferenceRespectsLateralLimitInSteadyCornering) {
  const ScenarioConfig cfg = ideal();
  const SimTrace trace = run_scenario(cfg);
  const TrackPath track = build_track(cfg.track, cfg.direction);
  const Section& arc = track.sections()[0];
  double entry = 0.0;
  double steady = 0.0;
  for (const auto& r : trace.rows) {
    if (r.t < 5.0) continue;
    const double a_lat = r.v * r.v * 2.0 * std::abs(std::sin(r.alpha_true)) /
                         cfg.controller.L_d;
    const double u = track.normalize(r.s) - arc.s_start;
    if (u < 0.0 || u > arc.length()) continue;
    if (u < 0.2 * arc.length()) entry = std::max(entry, a_lat);
    // The smoothed command needs about 1.5 s to settle after entry.
    if (u > 0.5 * arc.length() && u < 0.8 * arc.length()) {
      steady = std::max(steady, a_lat);
    }
  }
  EXPECT_GT(entry, cfg.velocity.ppvr.a_max);
  EXPECT_GT(steady, 0.95 * cfg.velocity.ppvr.a_max);
  EXPECT_LE(steady, 1.01 * cfg.velocity.ppvr.a_max);
}

TEST(RunScenarioTest, NoDerivativeLeavesStraightsUnderdamped) {
  EXPECT_GT(straight_overshoot(ideal(llndc_controller())), 0.3);
  EXPECT_LT(straight_overshoot(ideal(llc_controller())), 0.05);
  EXPECT_LT(straight_overshoot(ideal(oc_controller())), 0.05);
}

TEST(ComputeMetricsTest, Examples) {
  const MetricsReport zero = compute_metrics(trace_of({0.0, 0.0, 0.0}));
  EXPECT_EQ(zero.eps_y_max, 0.0);
  EXPECT_EQ(zero.eps_psi_max, 0.0);
  EXPECT_EQ(zero.rms_e_y, 0.0);
  const MetricsReport spike = compute_metrics(trace_of({0.0, -0.02, 0.1, 0.0}));
  EXPECT_EQ(spike.eps_y_max, 0.1);
  EXPECT_NEAR(spike.rms_e_y, std::sqrt((0.02 * 0.02 + 0.01) / 4.0), 1e-15);
  EXPECT_NEAR(spike.mean_speed, 1.0, 1e-12);
  EXPECT_NEAR(spike.lap_time, 10.0, 1e-9);
  EXPECT_THROW(compute_metrics(SimTrace{}), DomainError);
}

TEST(CompareTest, SingleVariantMatchesDirectRun) {
  ScenarioConfig base;
  base.duration = {DurationUnit::kLaps, 1.0};
  ScenarioConfig variant = base;
  variant.controller = llc_controller();
  variant.rng_seed = 99;  // replaced by the base seed
  const ComparisonTable table = compare_configurations(base, {{"llc", variant}});
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_TRUE(table.deltas.empty());
  variant.rng_seed = base.rng_seed;
  const MetricsReport direct = compute_metrics(run_scenario(variant));
  EXPECT_EQ(table.rows[0].name, "llc");
  EXPECT_EQ(table.rows[0].metrics.eps_y_max, direct.eps_y_max);
  EXPECT_EQ(table.rows[0].metrics.eps_psi_max, direct.eps_psi_max);
  EXPECT_EQ(table.rows[0].metrics.lap_time, direct.lap_time);
}

TEST(CompareTest, PairwiseDeltas) {
  ScenarioConfig base;
  base.duration = {DurationUnit::kLaps, 1.0};
  std::vector<Variant> variants;
  for (const auto& [name, c] : {std::pair{"oc", oc_controller()},
                                {"llc", llc_controller()},
                                {"llndc", llndc_controller()}}) {
    ScenarioConfig v = base;
    v.controller = c;
    variants.push_back({name, v});
  }
  const ComparisonTable table = compare_configurations(base, variants);
  ASSERT_EQ(table.rows.size(), 3u);
  ASSERT_EQ(table.deltas.size(), 3u);
  for (const PairDelta& d : table.deltas) {
    EXPECT_LT(d.first, d.second);
    EXPECT_DOUBLE_EQ(d.eps_y_max, table.rows[d.second].metrics.eps_y_max -
                                      table.rows[d.first].metrics.eps_y_max);
  }
  std::ostringstream out;
  write_comparison_csv(out, table);
  // Metrics block, blank line, deltas block.
  const std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_NE(csv.find("\noc,llc,"), std::string::npos);
}

TEST(CompareTest, RejectsMismatchedTrackOrVehicle) {
  ScenarioConfig base;
  ScenarioConfig other_track = base;
  other_track.track.lane = Lane::kOuterLane;
  EXPECT_THROW(compare_configurations(base, {{"x", other_track}}), ConfigError);
  ScenarioConfig other_vehicle = base;
  other_vehicle.vehicle.tau_d = 0.1;
  EXPECT_THROW(compare_configurations(base, {{"x", other_vehicle}}), ConfigError);
}

TEST(OutputTest, TraceCsv) {
  const SimTrace trace = trace_of({0.0, 0.01, 0.02, 0.03, 0.04});
  std::ostringstream out;
  write_trace_csv(out, trace, 2);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,y,psi,v,s,e_y,e_psi,alpha_true,alpha_meas,delta_r,delta,v_ref");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].substr(0, rows[1].find(',')), "0.2");
  EXPECT_EQ(std::count(rows[1].begin(), rows[1].end(), ','), 12);
}

TEST(OutputTest, MetricsJson) {
  std::ostringstream out;
  write_metrics_json(out, compute_metrics(trace_of({0.0, 0.1})));
  const std::string text = out.str();
  for (const char* key : {"eps_y_max", "eps_psi_max", "rms_e_y", "lap_time",
                          "mean_speed", "off_track"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(ControllerPresetsTest, Values) {
  EXPECT_EQ(oc_controller().L_d, 0.5);
  EXPECT_EQ(oc_controller().K_D, 0.2);
  EXPECT_EQ(llc_controller().L_d, 0.8);
  EXPECT_EQ(llc_controller().K_D, 0.18);
  EXPECT_EQ(llndc_controller().L_d, 0.8);
  EXPECT_EQ(llndc_controller().K_D, 0.0);
}

}  // namespace
}  // namespace lanekeep
