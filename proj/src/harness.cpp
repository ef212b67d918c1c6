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


#include "lanekeep/harness.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double first_straight_start(const TrackPath& track) {
  for (const auto& sec : track.sections()) {
    if (sec.kind == SectionKind::kSegment) return sec.s_start;
  }
  return 0.0;
}

VehicleStateG initial_state(const TrackPath& track,
                            const InitialCondition& init) {
  const double s = init.s.value_or(first_straight_start(track));
  const PathPoint p = point_at(track, s);
  VehicleStateG state;
  state.x = p.x - init.e_y * std::sin(p.psi);
  state.y = p.y + init.e_y * std::cos(p.psi);
  state.psi = wrap_angle(p.psi + init.e_psi);
  return state;
}

bool finished(const ScenarioConfig& cfg, std::int64_t step, double progress,
              double track_length) {
  const double t = static_cast<double>(step) * cfg.dt;
  if (t >= cfg.max_time - 0.5 * cfg.dt) return true;
  if (cfg.duration.unit == DurationUnit::kSeconds) {
    return t >= cfg.duration.value - 0.5 * cfg.dt;
  }
  return progress >= cfg.duration.value * track_length;
}

}  // namespace

void ScenarioConfig::validate() const {
  try {
    if (track.shape == TrackShape::kTestTrack) {
      track.params.validate();
    } else if (!(track.straight_length > 0.0)) {
      throw ConstraintViolation("straight_length must be > 0");
    }
    vehicle.validate();
    controller.validate();
    velocity.ppvr.validate();
    sensor.validate();
  } catch (const ConstraintViolation& e) {
    throw ConfigError(e.what());
  }
  if (velocity.mode == VelocityMode::kFixed && !(velocity.fixed_speed >= 0.0)) {
    throw ConfigError("fixed_speed must be >= 0");
  }
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(dt <= vehicle.tau / 10.0)) {
    throw ConfigError("dt must not exceed a tenth of the steering lag");
  }
  if (!(duration.value > 0.0)) throw ConfigError("duration must be > 0");
  if (!(off_track_threshold > 0.0)) {
    throw ConfigError("off_track_threshold must be > 0");
  }
  if (trace_decimation < 1) throw ConfigError("trace_decimation must be >= 1");
  if (!(max_time > 0.0)) throw ConfigError("max_time must be > 0");
  if (!std::isfinite(initial.e_y) || !std::isfinite(initial.e_psi)) {
    throw ConfigError("initial errors must be finite");
  }
}

TrackPath build_track(const TrackSpec& spec, Direction direction) {
  if (spec.shape == TrackShape::kStraight) {
    TrackPath straight = build_straight_track(spec.straight_length);
    return direction == Direction::kCounterclockwise ? straight.mirrored(0.0)
                                                     : straight;
  }
  return build_test_track(spec.params, spec.lane, direction);
}

SimTrace run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const TrackPath track = build_track(cfg.track, cfg.direction);
  const VehicleParams& veh = cfg.vehicle;
  const PPDConfig& ctrl = cfg.controller;

  SensorConfig sensor_cfg = cfg.sensor;
  sensor_cfg.L_d = ctrl.L_d;
  sensor_cfg.rng_seed = cfg.rng_seed;
  SensorState sensor(cfg.rng_seed);

  SimTrace trace;
  trace.track_length = track.total_length();

  VehicleStateG state = initial_state(track, cfg.initial);
  const auto alpha0 = true_lhe(track, state.pose(), ctrl.L_d);
  const bool fixed = cfg.velocity.mode == VelocityMode::kFixed;
  double v_target =
      fixed ? cfg.velocity.fixed_speed
            : ppvr_velocity(alpha0.value_or(0.0), cfg.velocity.ppvr, ctrl.L_d);
  double v_ref = v_target;
  state.v = v_target;

  ActuatorState actuator(veh.tau, veh.tau_d, veh.delta_max);
  VelocityLoopState speed_loop;
  DerivState deriv;
  double alpha_held = 0.0;
  double delta_r = 0.0;

  double s_prev = project(track, state.pose()).s;
  double s_unwrapped = s_prev;
  const double s_origin = s_prev;

  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const PoseG pose = state.pose();

    LocalError err;
    bool lost = false;
    try {
      err = project(track, pose);
    } catch (const OffTrackError&) {
      lost = true;
    }
    if (!lost) {
      s_unwrapped += track.closed() ? track.progress(s_prev, err.s)
                                    : err.s - s_prev;
      s_prev = err.s;
      lost = std::abs(err.e_y) > cfg.off_track_threshold;
    }
    if (lost) {
      trace.off_track = true;
      break;
    }

    if (const auto m = sense(track, pose, sensor_cfg, t, sensor);
        m && m->valid) {
      alpha_held = m->alpha_meas;
      double rate = 0.0;
      std::tie(deriv, rate) =
          lhe_derivative(deriv, m->alpha_meas, m->t_capture,
                         ctrl.deriv_filter_tc);
      delta_r = ppd_steer(alpha_held, rate, ctrl, veh.wheelbase);
      if (!fixed) {
        v_target = ppvr_velocity(alpha_held, cfg.velocity.ppvr, ctrl.L_d);
      }
    }
    if (!fixed) {
      v_ref = smooth_velocity_ref(v_ref, v_target, cfg.dt,
                                  cfg.velocity.ppvr.smooth_rate);
    }

    double u = 0.0;
    std::tie(speed_loop, u) =
        velocity_loop_step(speed_loop, veh.v_loop_gains, v_ref, state.v, cfg.dt);
    const double v_next =
        velocity_actuator_step(state.v, u, veh.v_actuator_lag, cfg.dt);
    const double delta_now = actuator.delta();
    const double delta_next = actuator.advance(delta_r, cfg.dt, t);

    double alpha_true = kNaN;
    try {
      alpha_true = lhe_global(track, pose, ctrl.L_d, err.s);
    } catch (const NoLookaheadError&) {
    }
    trace.rows.push_back({t, state.x, state.y, state.psi, state.v, s_unwrapped,
                          err.e_y, err.e_psi, alpha_true, alpha_held, delta_r,
                          delta_now, v_ref});

    if (finished(cfg, k, s_unwrapped - s_origin, trace.track_length)) break;

    // Steering and speed enter the step as their averages over it.
    const double v_step = 0.5 * (state.v + v_next);
    state = step_global(state, 0.5 * (delta_now + delta_next), v_step, cfg.dt,
                        veh);
    state.v = v_next;
  }
  return trace;
}

MetricsReport compute_metrics(const SimTrace& trace) {
  if (trace.rows.empty()) throw DomainError("cannot score an empty trace");
  MetricsReport m;
  m.off_track = trace.off_track;
  double sum_sq = 0.0;
  double sum_v = 0.0;
  for (const auto& r : trace.rows) {
    m.eps_y_max = std::max(m.eps_y_max, std::abs(r.e_y));
    m.eps_psi_max = std::max(m.eps_psi_max, std::abs(r.e_psi));
    sum_sq += r.e_y * r.e_y;
    sum_v += r.v;
  }
  const double n = static_cast<double>(trace.rows.size());
  m.rms_e_y = std::sqrt(sum_sq / n);
  m.mean_speed = sum_v / n;
  const double elapsed = trace.rows.back().t - trace.rows.front().t;
  const double progress = trace.rows.back().s - trace.rows.front().s;
  m.lap_time = progress > 0.0 && trace.track_length > 0.0
                   ? elapsed * trace.track_length / progress
                   : std::numeric_limits<double>::infinity();
  return m;
}

ComparisonTable compare_configurations(const ScenarioConfig& base,
                                       const std::vector<Variant>& variants) {
  for (const auto& v : variants) {
    if (!(v.config.track == base.track) ||
        v.config.direction != base.direction) {
      throw ConfigError("variant '" + v.name + "' uses a different track");
    }
    if (!(v.config.vehicle == base.vehicle)) {
      throw ConfigError("variant '" + v.name + "' uses a different vehicle");
    }
  }
  ComparisonTable table;
  for (const auto& v : variants) {
    ScenarioConfig cfg = v.config;
    cfg.rng_seed = base.rng_seed;
    table.rows.push_back({v.name, compute_metrics(run_scenario(cfg))});
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < table.rows.size(); ++j) {
      const MetricsReport& a = table.rows[i].metrics;
      const MetricsReport& b = table.rows[j].metrics;
      table.deltas.push_back({i, j, b.eps_y_max - a.eps_y_max,
                              b.eps_psi_max - a.eps_psi_max,
                              b.rms_e_y - a.rms_e_y, b.lap_time - a.lap_time});
    }
  }
  return table;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace,
                     int decimation) {
  if (decimation < 1) throw DomainError("decimation must be >= 1");
  out << "t,x,y,psi,v,s,e_y,e_psi,alpha_true,alpha_meas,delta_r,delta,v_ref\n";
  char buf[320];
  for (std::size_t i = 0; i < trace.rows.size();
       i += static_cast<std::size_t>(decimation)) {
    const TraceRow& r = trace.rows[i];
    std::snprintf(buf, sizeof(buf),
                  "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                  "%.9g,%.9g\n",
                  r.t, r.x, r.y, r.psi, r.v, r.s, r.e_y, r.e_psi, r.alpha_true,
                  r.alpha_meas, r.delta_r, r.delta, r.v_ref);
    out << buf;
  }
}

namespace {

nlohmann::json metrics_to_json(const MetricsReport& m) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "nan";
  };
  return {{"eps_y_max", num(m.eps_y_max)},
          {"eps_psi_max", num(m.eps_psi_max)},
          {"rms_e_y", num(m.rms_e_y)},
          {"lap_time", num(m.lap_time)},
          {"mean_speed", num(m.mean_speed)},
          {"off_track", m.off_track}};
}

}  // namespace

void write_metrics_json(std::ostream& out, const MetricsReport& m) {
  out << metrics_to_json(m).dump(2) << '\n';
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  char buf[256];
  out << "name,eps_y_max,eps_psi_max,rms_e_y,lap_time,mean_speed,off_track\n";
  for (const auto& row : table.rows) {
    const MetricsReport& m = row.metrics;
    std::snprintf(buf, sizeof(buf), ",%.9g,%.9g,%.9g,%.9g,%.9g,%d\n",
                  m.eps_y_max, m.eps_psi_max, m.rms_e_y, m.lap_time,
                  m.mean_speed, m.off_track ? 1 : 0);
    out << row.name << buf;
  }
  out << "\nfirst,second,d_eps_y_max,d_eps_psi_max,d_rms_e_y,d_lap_time\n";
  for (const auto& d : table.deltas) {
    std::snprintf(buf, sizeof(buf), ",%.9g,%.9g,%.9g,%.9g\n", d.eps_y_max,
                  d.eps_psi_max, d.rms_e_y, d.lap_time);
    out << table.rows[d.first].name << ',' << table.rows[d.second].name << buf;
  }
}

PPDConfig oc_controller() {
  PPDConfig c;
  c.L_d = 0.5;
  c.K_D = 0.2;
  return c;
}

PPDConfig llc_controller() {
  PPDConfig c;
  c.L_d = 0.8;
  c.K_D = 0.18;
  return c;
}

PPDConfig llndc_controller() {
  PPDConfig c;
  c.L_d = 0.8;
  c.K_D = 0.0;
  return c;
}

}  // namespace lanekeep
