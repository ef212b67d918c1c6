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


#include "lanekeep/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

// Frames are due at k / rate; a query this close to the instant counts.
constexpr double kFrameTolerance = 1e-9;

double quantize(double x, double step) {
  return step > 0.0 ? step * std::round(x / step) : x;
}

}  // namespace

double GaussianSource::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianSource::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_ = r * std::sin(kTwoPi * u2);
  has_cached_ = true;
  return r * std::cos(kTwoPi * u2);
}

void SensorConfig::validate() const {
  if (!(rate > 0.0)) throw ConstraintViolation("sensor rate must be > 0");
  if (!(latency >= 0.0)) throw ConstraintViolation("sensor latency must be >= 0");
  if (!(noise_std >= 0.0)) throw ConstraintViolation("noise_std must be >= 0");
  if (!(quant_step >= 0.0)) throw ConstraintViolation("quant_step must be >= 0");
  if (!std::isfinite(bias)) throw ConstraintViolation("bias must be finite");
  if (!(L_d > 0.0)) throw ConstraintViolation("sensor L_d must be > 0");
}

std::optional<double> true_lhe(const TrackPath& track, const PoseG& pose,
                               double L_d) {
  try {
    const LocalError err = project(track, pose);
    return lhe_global(track, pose, L_d, err.s);
  } catch (const OffTrackError&) {
    return std::nullopt;
  } catch (const NoLookaheadError&) {
    return std::nullopt;
  }
}

std::optional<Measurement> sense(const TrackPath& track, const PoseG& pose,
                                 const SensorConfig& cfg, double t,
                                 SensorState& state) {
  if (state.started && t < state.last_t) {
    throw OrderingError("sensor queried backwards in time");
  }
  state.started = true;
  state.last_t = t;

  if (cfg.mode == SensorMode::kIdeal) {
    const auto truth = true_lhe(track, pose, cfg.L_d);
    return Measurement{truth.value_or(0.0), t, t, truth.has_value()};
  }

  while (static_cast<double>(state.next_frame) / cfg.rate <=
         t + kFrameTolerance) {
    const double t_frame = static_cast<double>(state.next_frame) / cfg.rate;
    ++state.next_frame;
    const auto truth = true_lhe(track, pose, cfg.L_d);
    // Always draw, so the noise sequence does not depend on validity.
    const double noise = cfg.noise_std * state.noise.normal();
    Measurement m;
    m.t_capture = t_frame;
    m.t_available = t_frame + cfg.latency;
    m.valid = truth.has_value();
    if (m.valid) {
      m.alpha_meas = quantize(*truth + cfg.bias + noise, cfg.quant_step);
    }
    state.in_flight.push_back(m);
  }

  std::optional<Measurement> newest;
  while (!state.in_flight.empty() &&
         state.in_flight.front().t_available <= t + kFrameTolerance) {
    newest = state.in_flight.front();
    state.in_flight.pop_front();
  }
  return newest;
}

void DatasetConfig::validate() const {
  if (!(sigma_L >= 0.0)) throw ConstraintViolation("sigma_L must be >= 0");
  if (!(sigma_psi >= 0.0)) throw ConstraintViolation("sigma_psi must be >= 0");
  if (N <= 0) throw ConstraintViolation("N must be > 0");
  if (L_d_list.empty()) throw ConstraintViolation("L_d_list must be non-empty");
  for (double l : L_d_list) {
    if (!(l > 0.0)) throw ConstraintViolation("every L_d must be > 0");
  }
}

std::vector<SampleRecord> generate_dataset(const TrackPath& reference,
                                           const DatasetConfig& cfg) {
  cfg.validate();
  GaussianSource rng(cfg.rng_seed);
  const double total = reference.total_length();
  std::vector<SampleRecord> out;
  out.reserve(static_cast<std::size_t>(cfg.N));
  for (std::int64_t i = 0; i < cfg.N; ++i) {
    SampleRecord rec;
    rec.s_ref = reference.normalize(rng.uniform() * total);
    rec.lateral_offset = cfg.sigma_L * rng.normal();
    rec.heading_offset = cfg.sigma_psi * rng.normal();
    const PathPoint nominal = point_at(reference, rec.s_ref);
    const Vec2 left{-std::sin(nominal.psi), std::cos(nominal.psi)};
    const Vec2 p = nominal.position() + rec.lateral_offset * left;
    rec.pose = {p.x, p.y, wrap_angle(nominal.psi + rec.heading_offset)};
    rec.labels.reserve(cfg.L_d_list.size());
    for (double L_d : cfg.L_d_list) {
      try {
        rec.labels.emplace_back(lhe_global(reference, rec.pose, L_d,
                                           rec.s_ref));
      } catch (const NoLookaheadError&) {
        rec.labels.emplace_back(std::nullopt);
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SampleRecord> generate_dataset(const TrackParams& params,
                                           Lane reference_lane,
                                           const DatasetConfig& cfg) {
  return generate_dataset(build_test_track(params, reference_lane), cfg);
}

void write_dataset_csv(std::ostream& out, const DatasetConfig& cfg,
                       const std::vector<SampleRecord>& records) {
  char buf[64];
  out << "s_ref,x,y,psi";
  for (double l : cfg.L_d_list) {
    std::snprintf(buf, sizeof(buf), ",alpha_Ld_%g", l);
    out << buf;
  }
  out << '\n';
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g", r.s_ref, r.pose.x,
                  r.pose.y, r.pose.psi);
    out << buf;
    for (const auto& label : r.labels) {
      out << ',';
      if (label) {
        std::snprintf(buf, sizeof(buf), "%.9g", *label);
        out << buf;
      }
    }
    out << '\n';
  }
}

}  // namespace lanekeep
