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

#ifndef LANEKEEP_VEHICLE_HPP_
#define LANEKEEP_VEHICLE_HPP_

#include <deque>
#include <utility>

#include "lanekeep/angles.hpp"
#include "lanekeep/track.hpp"

namespace lanekeep {

struct PidGains {
  double kp = 2.0;
  double ki = 1.0;
  double kd = 0.0;
  double i_limit = 0.5;  // |integral term| bound, m/s
  double u_max = 3.0;    // |drive command| bound, m/s

  friend bool operator==(const PidGains&, const PidGains&) = default;
};

struct VehicleParams {
  double wheelbase = 0.26;              // l, m
  double axle_track = 0.16;             // w, m (Ackermann split only)
  double delta_max = deg_to_rad(28.0);  // servo end stops, rad
  double tau = 0.17;                    // steering lag, s
  double tau_d = 0.15;                  // steering dead time, s
  PidGains v_loop_gains;
  double v_actuator_lag = 0.1;          // s

  // Throws ConstraintViolation.
  void validate() const;

  friend bool operator==(const VehicleParams&, const VehicleParams&) = default;
};

struct VehicleStateG {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double v = 0.0;

  PoseG pose() const { return {x, y, psi}; }
};

// One RK4 step of the rear-axle kinematic bicycle model
//   x' = v cos(psi), y' = v sin(psi), psi' = (v / l) tan(delta)
// with delta and v held over the step. The returned state carries v.
VehicleStateG step_global(const VehicleStateG& state, double delta, double v,
                          double dt, const VehicleParams& params);

// One RK4 step of the same model in path coordinates:
//   s'     = v cos(e_psi) / (1 - kappa e_y)
//   e_y'   = v sin(e_psi)
//   e_psi' = (v / l) tan(delta) - kappa v cos(e_psi) / (1 - kappa e_y)
// The step is split at section joins so that each sub-step sees a single
// curvature. Throws SingularityError when |rho_s - e_y| < 1e-6.
LocalError step_local(const LocalError& err, double delta, double v,
                      const TrackPath& track, double dt,
                      const VehicleParams& params);

// Steering servo: dead time followed by a first-order lag,
//   tau * delta'(t) = -delta(t) + delta_r(t - tau_d),
// i.e. D(s) = exp(-s tau_d) / (1 + s tau). Commands are held between their
// timestamps, so each step is integrated exactly piece by piece. The output
// saturates at +/- delta_max.
class ActuatorState {
 public:
  // History before t0 is the constant command `initial_command`.
  ActuatorState(double tau, double tau_d, double delta_max, double t0 = 0.0,
                double delta0 = 0.0, double initial_command = 0.0);

  double delta() const { return delta_; }
  double tau() const { return tau_; }
  double tau_d() const { return tau_d_; }
  std::size_t queue_size() const { return pending_.size(); }

  // Issues delta_r at time t and advances to t + dt; returns delta(t + dt).
  // Throws OrderingError for non-increasing t, DomainError for dt > tau/10
  // and InitializationError if the history does not reach back to
  // t - tau_d.
  double advance(double delta_r, double dt, double t);

 private:
  struct Command {
    double t;
    double value;
  };

  double tau_;
  double tau_d_;
  double delta_max_;
  double delta_;
  std::deque<Command> pending_;
};

std::pair<ActuatorState, double> actuator_step(ActuatorState act,
                                               double delta_r, double dt,
                                               double t);

struct WheelAngles {
  double inner = 0.0;
  double outer = 0.0;
};

// Inner and outer front-wheel angles for the bicycle steering angle delta,
// satisfying cot(outer) - cot(inner) = w / l in magnitude. Signs follow
// delta.
WheelAngles ackermann_split(double delta, const VehicleParams& params);

struct VelocityLoopState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool has_prev = false;
};

// PID speed loop with the reference as feedforward:
//   u = v_ref + kp e + ki I + kd de/dt,  e = v_ref - v_meas.
// The integrator is clamped and frozen while the output is saturated in the
// direction of the error.
std::pair<VelocityLoopState, double> velocity_loop_step(
    VelocityLoopState state, const PidGains& gains, double v_ref,
    double v_meas, double dt);

// First-order drivetrain: lag * v' = u - v, integrated exactly, floored at 0.
double velocity_actuator_step(double v, double u, double lag, double dt);

}  // namespace lanekeep

#endif  // LANEKEEP_VEHICLE_HPP_
