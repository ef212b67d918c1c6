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

#include "lanekeep/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

constexpr double kSingularityTolerance = 1e-6;
constexpr double kTimeSlack = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstraintViolation("vehicle parameters violate " + what);
}

struct LocalRates {
  double s;
  double e_y;
  double e_psi;
};

LocalRates local_rates(double e_y, double e_psi, double kappa, double v,
                       double yaw_rate) {
  if (kappa != 0.0 && std::abs(1.0 / kappa - e_y) < kSingularityTolerance) {
    throw SingularityError(
        "vehicle at the centre of curvature of the path (rho_s - e_y ~ 0)");
  }
  const double s_dot = v * std::cos(e_psi) / (1.0 - kappa * e_y);
  return {s_dot, v * std::sin(e_psi), yaw_rate - kappa * s_dot};
}

}  // namespace

void VehicleParams::validate() const {
  require(wheelbase > 0.0, "wheelbase > 0");
  require(axle_track >= 0.0, "axle_track >= 0");
  require(delta_max > 0.0 && delta_max < 0.5 * kPi, "0 < delta_max < pi/2");
  require(tau > 0.0, "tau > 0");
  require(tau_d >= 0.0, "tau_d >= 0");
  require(v_loop_gains.kp >= 0.0 && v_loop_gains.ki >= 0.0 &&
              v_loop_gains.kd >= 0.0,
          "non-negative velocity loop gains");
  require(v_loop_gains.i_limit >= 0.0 && v_loop_gains.u_max > 0.0,
          "i_limit >= 0 and u_max > 0");
  require(v_actuator_lag > 0.0, "v_actuator_lag > 0");
}

VehicleStateG step_global(const VehicleStateG& state, double delta, double v,
                          double dt, const VehicleParams& params) {
  if (!(dt > 0.0 && dt <= 0.1)) throw DomainError("dt must lie in (0, 0.1]");
  if (std::abs(delta) > params.delta_max + 1e-12) {
    throw DomainError("steering angle beyond delta_max");
  }
  if (v < 0.0) throw DomainError("speed must be >= 0");

  // psi is linear in time over the step; only x and y need the stages.
  const double yaw_rate = v * std::tan(delta) / params.wheelbase;
  const double psi0 = state.psi;
  const double psi_mid = psi0 + 0.5 * dt * yaw_rate;
  const double psi1 = psi0 + dt * yaw_rate;
  const double c0 = std::cos(psi0), c_mid = std::cos(psi_mid),
               c1 = std::cos(psi1);
  const double s0 = std::sin(psi0), s_mid = std::sin(psi_mid),
               s1 = std::sin(psi1);

  VehicleStateG next;
  next.x = state.x + dt / 6.0 * v * (c0 + 4.0 * c_mid + c1);
  next.y = state.y + dt / 6.0 * v * (s0 + 4.0 * s_mid + s1);
  next.psi = wrap_angle(psi1);
  next.v = v;
  return next;
}

LocalError step_local(const LocalError& err, double delta, double v,
                      const TrackPath& track, double dt,
                      const VehicleParams& params) {
  if (!(dt > 0.0 && dt <= 0.1)) throw DomainError("dt must lie in (0, 0.1]");
  const double yaw_rate = v * std::tan(delta) / params.wheelbase;
  const auto& sections = track.sections();
  const std::size_t count = sections.size();

  LocalError e = err;
  e.s = track.normalize(e.s);
  double remaining = dt;
  std::optional<std::size_t> forced;  // set after reaching a section start

  for (int guard = 0; remaining > 0.0 && guard < 256; ++guard) {
    const std::size_t idx = forced ? *forced : track.section_index(e.s);
    forced.reset();
    const Section& sec = sections[idx];
    const double kappa = sec.curvature();
    const LocalRates r0 = local_rates(e.e_y, e.e_psi, kappa, v, yaw_rate);

    double h = remaining;
    bool hit_end = false;
    bool hit_start = false;
    const bool has_next = track.closed() || idx + 1 < count;
    const bool has_prev = track.closed() || idx > 0;
    if (r0.s > 0.0 && has_next && e.s + r0.s * h > sec.s_end) {
      h = (sec.s_end - e.s) / r0.s;
      hit_end = true;
    } else if (r0.s < 0.0 && has_prev && e.s + r0.s * h < sec.s_start) {
      h = (e.s - sec.s_start) / -r0.s;
      hit_start = true;
    }
    h = std::min(h, remaining);

    if (h > 0.0) {
      const LocalRates k1 = r0;
      const LocalRates k2 = local_rates(e.e_y + 0.5 * h * k1.e_y,
                                        e.e_psi + 0.5 * h * k1.e_psi, kappa,
                                        v, yaw_rate);
      const LocalRates k3 = local_rates(e.e_y + 0.5 * h * k2.e_y,
                                        e.e_psi + 0.5 * h * k2.e_psi, kappa,
                                        v, yaw_rate);
      const LocalRates k4 = local_rates(e.e_y + h * k3.e_y,
                                        e.e_psi + h * k3.e_psi, kappa, v,
                                        yaw_rate);
      e.s += h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
      e.e_y += h / 6.0 * (k1.e_y + 2.0 * k2.e_y + 2.0 * k3.e_y + k4.e_y);
      e.e_psi +=
          h / 6.0 * (k1.e_psi + 2.0 * k2.e_psi + 2.0 * k3.e_psi + k4.e_psi);
    }
    if (hit_end) {
      e.s = track.normalize(sec.s_end);
    } else if (hit_start) {
      e.s = sec.s_start;
      forced = idx == 0 ? count - 1 : idx - 1;
      if (idx == 0) e.s = track.total_length();
    }
    remaining -= h;
  }
  e.s = track.normalize(e.s);
  e.e_psi = wrap_angle(e.e_psi);
  return e;
}

ActuatorState::ActuatorState(double tau, double tau_d, double delta_max,
                             double t0, double delta0,
                             double initial_command)
    : tau_(tau), tau_d_(tau_d), delta_max_(delta_max), delta_(delta0) {
  if (!(tau > 0.0) || !(tau_d >= 0.0) || !(delta_max > 0.0)) {
    throw ConstraintViolation("actuator needs tau > 0, tau_d >= 0 and "
                              "delta_max > 0");
  }
  delta_ = std::clamp(delta_, -delta_max_, delta_max_);
  // Anchor the history so that [t0 - tau_d, t0] is covered.
  pending_.push_back({t0 - tau_d - 1e-12, initial_command});
}

double ActuatorState::advance(double delta_r, double dt, double t) {
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  if (dt > 0.1 * tau_ * (1.0 + 1e-12)) {
    throw DomainError("actuator step must satisfy dt <= tau / 10");
  }
  if (!(t > pending_.back().t)) {
    throw OrderingError("actuator command timestamps must increase");
  }
  const double window_start = t - tau_d_;
  const double window_end = t + dt - tau_d_;
  // Step times come from k * dt, which can disagree with t + dt in the last
  // bit, so the history check allows a little slack.
  if (window_start < pending_.front().t - kTimeSlack) {
    throw InitializationError("actuator history does not reach t - tau_d");
  }
  pending_.push_back({t, delta_r});

  std::size_t i = 0;
  while (i + 1 < pending_.size() && pending_[i + 1].t <= window_start) ++i;
  double cursor = window_start;
  while (cursor < window_end) {
    const double next = i + 1 < pending_.size()
                            ? std::min(window_end, pending_[i + 1].t)
                            : window_end;
    if (next > cursor) {
      const double u = pending_[i].value;
      delta_ = u + (delta_ - u) * std::exp(-(next - cursor) / tau_);
    }
    cursor = next;
    ++i;
  }
  delta_ = std::clamp(delta_, -delta_max_, delta_max_);

  while (pending_.size() >= 2 && pending_[1].t <= window_end) {
    pending_.pop_front();
  }
  return delta_;
}

std::pair<ActuatorState, double> actuator_step(ActuatorState act,
                                               double delta_r, double dt,
                                               double t) {
  const double delta = act.advance(delta_r, dt, t);
  return {std::move(act), delta};
}

WheelAngles ackermann_split(double delta, const VehicleParams& params) {
  if (delta == 0.0) return {};
  const double l = params.wheelbase;
  const double half_track = 0.5 * params.axle_track;
  const double radius = l / std::tan(std::abs(delta));
  WheelAngles out;
  out.inner = std::copysign(std::atan2(l, radius - half_track), delta);
  out.outer = std::copysign(std::atan2(l, radius + half_track), delta);
  return out;
}

std::pair<VelocityLoopState, double> velocity_loop_step(
    VelocityLoopState state, const PidGains& gains, double v_ref,
    double v_meas, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  const double error = v_ref - v_meas;
  const double derivative =
      state.has_prev ? (error - state.prev_error) / dt : 0.0;

  auto output = [&](double integral) {
    return v_ref + gains.kp * error + gains.ki * integral +
           gains.kd * derivative;
  };

  double integral = state.integral + error * dt;
  if (gains.ki > 0.0) {
    const double bound = gains.i_limit / gains.ki;
    integral = std::clamp(integral, -bound, bound);
  }
  const double trial = output(integral);
  if (std::abs(trial) > gains.u_max && trial * error > 0.0) {
    integral = state.integral;
  }
  const double u = std::clamp(output(integral), -gains.u_max, gains.u_max);

  state.integral = integral;
  state.prev_error = error;
  state.has_prev = true;
  return {state, u};
}

double velocity_actuator_step(double v, double u, double lag, double dt) {
  const double next = v + (u - v) * -std::expm1(-dt / lag);
  return std::max(0.0, next);
}

}  // namespace lanekeep
