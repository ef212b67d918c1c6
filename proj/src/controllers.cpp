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

#include "lanekeep/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

constexpr double kMinSinAlpha = 1e-9;

}  // namespace

void PPDConfig::validate() const {
  if (!(L_d > 0.0)) throw ConstraintViolation("controller needs L_d > 0");
  if (!(K_D >= 0.0)) throw ConstraintViolation("controller needs K_D >= 0");
  if (!(deriv_filter_tc >= 0.0)) {
    throw ConstraintViolation("controller needs deriv_filter_tc >= 0");
  }
  if (!(delta_cmd_limit > 0.0)) {
    throw ConstraintViolation("controller needs delta_cmd_limit > 0");
  }
  if (!(rate > 0.0)) throw ConstraintViolation("controller needs rate > 0");
}

void PPVRConfig::validate() const {
  if (!(v_max > 0.0)) throw ConstraintViolation("PP-VR needs v_max > 0");
  if (!(a_max > 0.0)) throw ConstraintViolation("PP-VR needs a_max > 0");
  if (!(smooth_rate > 0.0)) {
    throw ConstraintViolation("PP-VR needs smooth_rate > 0");
  }
}

double pp_steer(double alpha, double L_d, double wheelbase) {
  return std::atan(2.0 * wheelbase * std::sin(alpha) / L_d);
}

double pp_radius(double alpha, double L_d) {
  const double s = std::sin(alpha);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return L_d / (2.0 * s);
}

double ppd_steer(double alpha, double alpha_rate, const PPDConfig& cfg,
                 double wheelbase) {
  const double raw =
      pp_steer(alpha, cfg.L_d, wheelbase) + cfg.K_D * alpha_rate;
  return std::clamp(raw, -cfg.delta_cmd_limit, cfg.delta_cmd_limit);
}

std::pair<DerivState, double> lhe_derivative(DerivState state,
                                             double alpha_meas, double t,
                                             double filter_tc) {
  if (!state.initialized) {
    state = {alpha_meas, 0.0, t, true};
    return {state, 0.0};
  }
  const double dt = t - state.t;
  if (!(dt > 0.0)) {
    throw OrderingError("LHE samples must have increasing timestamps");
  }
  const double raw = wrap_angle(alpha_meas - state.alpha) / dt;
  double rate = raw;
  if (filter_tc > 0.0) {
    rate = state.rate - std::expm1(-dt / filter_tc) * (raw - state.rate);
  }
  state = {alpha_meas, rate, t, true};
  return {state, rate};
}

double ppvr_velocity(double alpha, const PPVRConfig& cfg, double L_d) {
  const double s = std::max(std::abs(std::sin(alpha)), kMinSinAlpha);
  return std::min(cfg.v_max, std::sqrt(L_d * cfg.a_max / (2.0 * s)));
}

double smooth_velocity_ref(double v_prev, double v_target, double dt,
                           double smooth_rate) {
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  return v_target + (v_prev - v_target) * std::exp(-smooth_rate * dt);
}

}  // namespace lanekeep
