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


#ifndef LANEKEEP_HARNESS_HPP_
#define LANEKEEP_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lanekeep/controllers.hpp"
#include "lanekeep/estimator.hpp"
#include "lanekeep/track.hpp"
#include "lanekeep/vehicle.hpp"

namespace lanekeep {

enum class TrackShape { kTestTrack, kStraight };

struct TrackSpec {
  TrackShape shape = TrackShape::kTestTrack;
  TrackParams params;
  Lane lane = Lane::kCenterline;
  double straight_length = 50.0;  // m, kStraight only

  friend bool operator==(const TrackSpec&, const TrackSpec&) = default;
};

enum class VelocityMode { kPPVR, kFixed };

struct VelocityConfig {
  VelocityMode mode = VelocityMode::kPPVR;
  PPVRConfig ppvr;
  double fixed_speed = 0.3;  // m/s

  friend bool operator==(const VelocityConfig&, const VelocityConfig&) = default;
};

enum class DurationUnit { kSeconds, kLaps };

struct Duration {
  DurationUnit unit = DurationUnit::kLaps;
  double value = 3.0;

  friend bool operator==(const Duration&, const Duration&) = default;
};

struct InitialCondition {
  // Arc length of the start station; by default the start of the first
  // straight section.
  std::optional<double> s;
  double e_y = 0.05;
  double e_psi = 0.0;

  friend bool operator==(const InitialCondition&,
                         const InitialCondition&) = default;
};

// The sensor uses the controller's lookahead distance and the scenario
// seed; the corresponding SensorConfig fields are ignored here.
struct ScenarioConfig {
  TrackSpec track;
  VehicleParams vehicle;
  PPDConfig controller;
  VelocityConfig velocity;
  SensorConfig sensor;
  double dt = 1.0 / 600.0;  // s
  Duration duration;
  InitialCondition initial;
  Direction direction = Direction::kClockwise;
  std::uint64_t rng_seed = 1;
  double off_track_threshold = 0.37;  // m
  int trace_decimation = 10;
  double max_time = 600.0;  // s, hard stop for lap-count runs

  // Throws ConfigError.
  void validate() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

TrackPath build_track(const TrackSpec& spec, Direction direction);

struct TraceRow {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double v = 0.0;
  double s = 0.0;  // unwrapped arc length
  double e_y = 0.0;
  double e_psi = 0.0;
  double alpha_true = 0.0;  // NaN when undefined
  double alpha_meas = 0.0;  // last valid measurement, held
  double delta_r = 0.0;
  double delta = 0.0;
  double v_ref = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct SimTrace {
  std::vector<TraceRow> rows;
  double track_length = 0.0;
  bool off_track = false;
};

struct MetricsReport {
  double eps_y_max = 0.0;    // m
  double eps_psi_max = 0.0;  // rad
  double rms_e_y = 0.0;      // m
  double lap_time = 0.0;     // s, extrapolated from mean progress
  double mean_speed = 0.0;   // m/s
  bool off_track = false;
};

// Fixed-step closed loop: sensor, PP-D with a held derivative, steering
// actuator, velocity reference and speed loop, kinematic vehicle. Leaving
// the lane corridor ends the run with off_track set.
SimTrace run_scenario(const ScenarioConfig& cfg);

// Throws DomainError for an empty trace.
MetricsReport compute_metrics(const SimTrace& trace);

struct Variant {
  std::string name;
  ScenarioConfig config;
};

struct ComparisonRow {
  std::string name;
  MetricsReport metrics;
};

struct PairDelta {
  std::size_t first = 0;
  std::size_t second = 0;
  double eps_y_max = 0.0;    // second minus first
  double eps_psi_max = 0.0;
  double rms_e_y = 0.0;
  double lap_time = 0.0;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::vector<PairDelta> deltas;
};

// Runs every variant with the base seed. Throws ConfigError when a variant
// differs from the base in track or vehicle.
ComparisonTable compare_configurations(const ScenarioConfig& base,
                                       const std::vector<Variant>& variants);

// Rows 0, k, 2k, ... with k = decimation.
void write_trace_csv(std::ostream& out, const SimTrace& trace,
                     int decimation = 1);
void write_metrics_json(std::ostream& out, const MetricsReport& m);
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);

// The three tunings compared on the real car.
PPDConfig oc_controller();
PPDConfig llc_controller();
PPDConfig llndc_controller();

}  // namespace lanekeep

#endif  // LANEKEEP_HARNESS_HPP_
