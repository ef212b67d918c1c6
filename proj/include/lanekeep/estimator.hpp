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


#ifndef LANEKEEP_ESTIMATOR_HPP_
#define LANEKEEP_ESTIMATOR_HPP_

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "lanekeep/angles.hpp"
#include "lanekeep/track.hpp"

namespace lanekeep {

// Standard normal deviates from mt19937_64. Each pair of 64-bit draws is
// mapped to uniforms in (0, 1) as ((x >> 11) + 0.5) * 2^-53 and turned into
// two deviates by the Box-Muller transform; the second one is cached.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

enum class SensorMode { kIdeal, kNoisy };

struct SensorConfig {
  SensorMode mode = SensorMode::kNoisy;
  double rate = 30.0;        // Hz
  double latency = 0.0;      // s
  double noise_std = 0.02;   // rad
  double bias = 0.0;         // rad
  double quant_step = 0.0;   // rad; 0 disables quantisation
  double L_d = 0.5;          // m
  std::uint64_t rng_seed = 0;

  void validate() const;
  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

struct Measurement {
  double alpha_meas = 0.0;
  double t_capture = 0.0;
  double t_available = 0.0;
  bool valid = false;
};

struct SensorState {
  explicit SensorState(std::uint64_t seed = 0) : noise(seed) {}

  GaussianSource noise;
  std::int64_t next_frame = 0;
  std::deque<Measurement> in_flight;
  double last_t = 0.0;
  bool started = false;
};

inline SensorState make_sensor_state(const SensorConfig& cfg) {
  return SensorState(cfg.rng_seed);
}

// Ground-truth lookahead heading error with the station found by
// projection; nullopt when the pose is off the track or the lookahead
// circle does not cut the path twice.
std::optional<double> true_lhe(const TrackPath& track, const PoseG& pose,
                               double L_d);

// Polls the sensor at time t. The ideal mode returns the exact value at
// every call. The noisy mode captures a frame at every multiple of 1/rate
// up to t, and returns the newest frame that has become available since the
// previous call, or nullopt while nothing new is available. Frames the
// sensor cannot evaluate come back with valid = false.
// Throws OrderingError when t decreases.
std::optional<Measurement> sense(const TrackPath& track, const PoseG& pose,
                                 const SensorConfig& cfg, double t,
                                 SensorState& state);

struct DatasetConfig {
  double sigma_L = 0.06;                        // m
  double sigma_psi = deg_to_rad(12.0);          // rad
  std::int64_t N = 1000;
  std::vector<double> L_d_list = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct SampleRecord {
  PoseG pose;
  double s_ref = 0.0;
  // One entry per L_d_list element; empty where the lookahead is undefined.
  std::vector<std::optional<double>> labels;
  // Lateral offset actually applied, m (positive to the left).
  double lateral_offset = 0.0;
  // Heading perturbation actually applied, rad.
  double heading_offset = 0.0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

// Samples stations uniformly in arc length along the reference path,
// perturbs each pose laterally and in heading, and labels it for every
// lookahead distance.
std::vector<SampleRecord> generate_dataset(const TrackPath& reference,
                                           const DatasetConfig& cfg);

std::vector<SampleRecord> generate_dataset(const TrackParams& params,
                                           Lane reference_lane,
                                           const DatasetConfig& cfg);

void write_dataset_csv(std::ostream& out, const DatasetConfig& cfg,
                       const std::vector<SampleRecord>& records);

}  // namespace lanekeep

#endif  // LANEKEEP_ESTIMATOR_HPP_
