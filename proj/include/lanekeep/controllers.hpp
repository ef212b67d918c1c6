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

#ifndef LANEKEEP_CONTROLLERS_HPP_
#define LANEKEEP_CONTROLLERS_HPP_

#include <utility>

#include "lanekeep/angles.hpp"

namespace lanekeep {

// Pure Pursuit with derivative action on the lookahead heading error.
struct PPDConfig {
  double L_d = 0.5;              // lookahead distance, m
  double K_D = 0.2;              // derivative gain, s
  double deriv_filter_tc = 0.05; // s; 0 disables the low-pass
  double delta_cmd_limit = deg_to_rad(28.0);
  double rate = 30.0;            // Hz, nominal controller rate

  void validate() const;

  friend bool operator==(const PPDConfig&, const PPDConfig&) = default;
};

// Velocity reference from the curvature implied by the lookahead error.
struct PPVRConfig {
  double v_max = 1.0;        // m/s
  double a_max = 0.4;        // lateral acceleration limit, m/s^2
  double smooth_rate = 2.0;  // 1/s, exponential convergence of the command

  void validate() const;

  friend bool operator==(const PPVRConfig&, const PPVRConfig&) = default;
};

struct DerivState {
  double alpha = 0.0;
  double rate = 0.0;
  double t = 0.0;
  bool initialized = false;
};

// delta_r = atan(2 l sin(alpha) / L_d).
double pp_steer(double alpha, double L_d, double wheelbase);

// Radius of the arc through the rear axle and the lookahead point,
// L_d / (2 sin(alpha)); infinite for alpha = 0.
double pp_radius(double alpha, double L_d);

// pp_steer(alpha) + K_D * alpha_rate, clamped to the command limit.
double ppd_steer(double alpha, double alpha_rate, const PPDConfig& cfg,
                 double wheelbase);

// Filtered finite difference of alpha. The first call returns 0. The raw
// difference is smoothed by a one-pole filter discretised exactly for the
// sample spacing: y += (1 - exp(-dt / tc)) * (raw - y).
// Throws OrderingError unless t is strictly later than the previous sample.
std::pair<DerivState, double> lhe_derivative(DerivState state,
                                             double alpha_meas, double t,
                                             double filter_tc);

// v = min(v_max, sqrt(L_d * a_max / (2 |sin(alpha)|))).
double ppvr_velocity(double alpha, const PPVRConfig& cfg, double L_d);

// v_target + (v_prev - v_target) * exp(-smooth_rate * dt).
double smooth_velocity_ref(double v_prev, double v_target, double dt,
                           double smooth_rate);

}  // namespace lanekeep

#endif  // LANEKEEP_CONTROLLERS_HPP_
