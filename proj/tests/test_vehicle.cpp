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


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lanekeep/errors.hpp"
#include "lanekeep/track.hpp"
#include "lanekeep/vehicle.hpp"

namespace lanekeep {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest deviation from the analytic constant-steer circle over one
// revolution, starting at the origin heading along +x.
double circle_radius_error(double delta, double dt) {
  VehicleParams params;
  const double radius = params.wheelbase / std::tan(delta);
  const double v = 1.0;
  VehicleStateG s{0.0, 0.0, 0.0, v};
  const int steps = static_cast<int>(std::round(2.0 * kPi * radius / (v * dt)));
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    s = step_global(s, delta, v, dt, params);
    worst = std::max(worst, std::abs(std::hypot(s.x, s.y - radius) - radius));
  }
  return worst;
}

TEST(StepGlobalTest, StraightMotion) {
  const VehicleParams params;
  const VehicleStateG s =
      step_global({0.0, 0.0, 0.0, 1.0}, 0.0, 1.0, 0.01, params);
  EXPECT_NEAR(s.x, 0.01, 1e-16);
  EXPECT_EQ(s.y, 0.0);
  EXPECT_EQ(s.psi, 0.0);
  EXPECT_EQ(s.v, 1.0);
}

TEST(StepGlobalTest, ConstantSteerCircle) {
  EXPECT_NEAR(0.26 / std::tan(0.2), 1.2827, 1e-4);
  EXPECT_LT(circle_radius_error(0.2, 1e-3), 1e-6);
}

TEST(StepGlobalTest, FourthOrderConvergence) {
  const double coarse = circle_radius_error(0.4, 0.1);
  const double fine = circle_radius_error(0.4, 0.05);
  EXPECT_GT(coarse, 1e-12);
  EXPECT_GE(coarse / fine, 8.0);
}

TEST(StepGlobalTest, ReflectionSymmetry) {
  const VehicleParams params;
  VehicleStateG a{0.3, 0.2, 0.4, 0.7};
  VehicleStateG b{0.3, -0.2, -0.4, 0.7};
  for (int k = 0; k < 500; ++k) {
    const double delta = 0.3 * std::sin(0.01 * k);
    a = step_global(a, delta, 0.7, 0.01, params);
    b = step_global(b, -delta, 0.7, 0.01, params);
    ASSERT_EQ(a.x, b.x);
    ASSERT_EQ(a.y, -b.y);
    ASSERT_EQ(a.psi, -b.psi);
  }
}

TEST(StepGlobalTest, RejectsBadInputs) {
  const VehicleParams params;
  const VehicleStateG s{0.0, 0.0, 0.0, 1.0};
  EXPECT_THROW(step_global(s, 0.0, 1.0, 0.0, params), DomainError);
  EXPECT_THROW(step_global(s, 0.0, 1.0, 0.2, params), DomainError);
  EXPECT_THROW(step_global(s, 0.6, 1.0, 0.01, params), DomainError);
  EXPECT_THROW(step_global(s, 0.0, -1.0, 0.01, params), DomainError);
}

TEST(StepLocalTest, StraightEquilibrium) {
  const VehicleParams params;
  const TrackPath track = build_straight_track(10.0);
  const LocalError e = step_local({1.0, 0.0, 0.0}, 0.0, 0.8, track, 0.01,
                                  params);
  EXPECT_NEAR(e.s, 1.008, 1e-15);
  EXPECT_EQ(e.e_y, 0.0);
  EXPECT_EQ(e.e_psi, 0.0);
}

TEST(StepLocalTest, SteadyCornering) {
  const VehicleParams params;
  const TrackPath track = build_test_track(TrackParams{});
  // The first arc turns right with radius 1.04.
  const double delta = -std::atan(params.wheelbase / 1.04);
  LocalError e{0.1, 0.0, 0.0};
  for (int k = 0; k < 1000; ++k) {
    e = step_local(e, delta, 0.6, track, 1e-3, params);
  }
  EXPECT_NEAR(e.e_y, 0.0, 1e-12);
  EXPECT_NEAR(e.e_psi, 0.0, 1e-12);
  EXPECT_NEAR(e.s, 0.1 + 0.6, 1e-12);
}

TEST(StepLocalTest, SingularityAtCentreOfCurvature) {
  const VehicleParams params;
  const TrackPath track = build_test_track(TrackParams{}, Lane::kCenterline,
                                           Direction::kCounterclockwise);
  // Left-turning arc: the centre lies 1.04 m to the left.
  EXPECT_THROW(step_local({0.5, 1.04, 0.0}, 0.0, 0.5, track, 1e-3, params),
               SingularityError);
}

TEST(StepLocalTest, MatchesGlobalModelWithProjection) {
  const VehicleParams params;
  const TrackPath track = build_test_track(TrackParams{});
  const double dt = 1e-3;
  LocalError local{0.2, 0.05, 0.02};
  const PathPoint p = point_at(track, local.s);
  VehicleStateG global{p.x - local.e_y * std::sin(p.psi),
                       p.y + local.e_y * std::cos(p.psi), p.psi + local.e_psi,
                       0.0};
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double t = k * dt;
    // Feedforward on the nominal curvature plus a wandering correction.
    const LocalError now = project(track, global.pose());
    const double kappa = point_at(track, now.s).kappa;
    const double delta =
        std::atan(params.wheelbase * kappa) - 0.8 * now.e_y - 0.6 * now.e_psi +
        0.03 * std::sin(1.3 * t);
    const double v = 0.7 + 0.2 * std::sin(0.4 * t);
    global = step_global(global, delta, v, dt, params);
    local = step_local(local, delta, v, track, dt, params);
    const LocalError g = project(track, global.pose());
    worst = std::max(worst, std::abs(g.e_y - local.e_y));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(ActuatorTest, RestStaysAtRest) {
  ActuatorState act(0.17, 0.15, 0.5);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_EQ(act.advance(0.0, 1e-3, k * 1e-3), 0.0);
  }
}

TEST(ActuatorTest, UnitStepResponse) {
  ActuatorState act(0.17, 0.15, 1.5);
  const double dt = 1e-3;
  double delta = 0.0;
  for (int k = 0; k < 320; ++k) {
    const double t = k * dt;
    delta = act.advance(1.0, dt, t);
    if (t + dt < 0.15 - 1e-9) ASSERT_EQ(delta, 0.0) << "t=" << t + dt;
  }
  EXPECT_NEAR(delta, 1.0 - std::exp(-1.0), 1e-4);
}

TEST(ActuatorTest, RampTracksWithLagOffset) {
  const double tau = 0.17;
  const double tau_d = 0.15;
  const double slope = 0.5;
  const double dt = 1e-3;
  ActuatorState act(tau, tau_d, 1.5);
  double delta = 0.0;
  double t_end = 0.0;
  for (int k = 0; t_end < tau_d + 10.0 * tau; ++k) {
    const double t = k * dt;
    delta = act.advance(slope * t, dt, t);
    t_end = t + dt;
  }
  EXPECT_NEAR(delta, slope * (t_end - tau_d - tau), 1e-3);
}

TEST(ActuatorTest, LinearBeforeSaturation) {
  ActuatorState a(0.17, 0.15, 1.5);
  ActuatorState b(0.17, 0.15, 1.5);
  for (int k = 0; k < 2000; ++k) {
    const double t = k * 1e-3;
    const double u = 0.1 * std::sin(3.0 * t) + 0.05 * std::cos(11.0 * t);
    const double ya = a.advance(u, 1e-3, t);
    const double yb = b.advance(3.0 * u, 1e-3, t);
    EXPECT_NEAR(yb, 3.0 * ya, 1e-12);
  }
}

TEST(ActuatorTest, RecentCommandsDoNotAffectOutput) {
  const double dt = 1e-3;
  const double tau_d = 0.15;
  ActuatorState a(0.17, tau_d, 0.5);
  ActuatorState b(0.17, tau_d, 0.5);
  const int split = 400;
  for (int k = 0; k < 1000; ++k) {
    const double t = k * dt;
    const double common = 0.2 * std::sin(2.0 * t);
    const double ya = a.advance(common, dt, t);
    const double yb = b.advance(k < split ? common : -common + 0.3, dt, t);
    // Output at t + dt only sees commands issued up to t + dt - tau_d.
    if (t + dt - tau_d < split * dt - 1e-9) {
      ASSERT_EQ(ya, yb) << "k=" << k;
    }
  }
}

TEST(ActuatorTest, SaturatesAtLimit) {
  ActuatorState act(0.17, 0.0, 0.4);
  double delta = 0.0;
  for (int k = 0; k < 3000; ++k) delta = act.advance(2.0, 1e-3, k * 1e-3);
  EXPECT_EQ(delta, 0.4);
  for (int k = 3000; k < 6000; ++k) delta = act.advance(-2.0, 1e-3, k * 1e-3);
  EXPECT_EQ(delta, -0.4);
}

TEST(ActuatorTest, Errors) {
  ActuatorState act(0.17, 0.15, 0.5);
  EXPECT_THROW(act.advance(0.0, 0.02, 0.0), DomainError);
  EXPECT_THROW(act.advance(0.0, 1e-3, -0.1), InitializationError);
  act.advance(0.0, 1e-3, 0.0);
  EXPECT_THROW(act.advance(0.0, 1e-3, 0.0), OrderingError);
  EXPECT_THROW(ActuatorState(0.0, 0.1, 0.5), ConstraintViolation);
}

TEST(ActuatorTest, FunctionalStepMatchesMember) {
  ActuatorState a(0.17, 0.15, 0.5);
  ActuatorState b(0.17, 0.15, 0.5);
  for (int k = 0; k < 300; ++k) {
    const double t = k * 1e-3;
    double out = 0.0;
    std::tie(b, out) = actuator_step(b, 0.3, 1e-3, t);
    EXPECT_EQ(a.advance(0.3, 1e-3, t), out);
  }
}

TEST(AckermannTest, StraightAhead) {
  const WheelAngles w = ackermann_split(0.0, VehicleParams{});
  EXPECT_EQ(w.inner, 0.0);
  EXPECT_EQ(w.outer, 0.0);
}

TEST(AckermannTest, CotangentIdentity) {
  const VehicleParams params;
  for (double delta = -0.45; delta <= 0.45; delta += 0.013) {
    if (std::abs(delta) < 1e-6) continue;
    const WheelAngles w = ackermann_split(delta, params);
    const double lhs = 1.0 / std::tan(std::abs(w.outer)) -
                       1.0 / std::tan(std::abs(w.inner));
    EXPECT_NEAR(lhs, params.axle_track / params.wheelbase, 1e-12);
    EXPECT_EQ(std::signbit(w.inner), std::signbit(delta));
    EXPECT_GT(std::abs(w.inner), std::abs(w.outer));
  }
}

TEST(AckermannTest, ClosedForm) {
  const VehicleParams params;
  const WheelAngles w = ackermann_split(0.3, params);
  const double radius = 0.26 / std::tan(0.3);
  // Four-digit reference values.
  EXPECT_NEAR(radius, 0.8404, 2e-4);
  EXPECT_NEAR(w.inner, std::atan(0.26 / (radius - 0.08)), 1e-14);
  EXPECT_NEAR(w.outer, std::atan(0.26 / (radius + 0.08)), 1e-14);
  EXPECT_NEAR(radius - 0.08, 0.7604, 2e-4);
  EXPECT_NEAR(radius + 0.08, 0.9204, 2e-4);
}

TEST(VelocityLoopTest, ZeroErrorGivesFeedforward) {
  const PidGains gains;
  VelocityLoopState state;
  double u = 0.0;
  for (int k = 0; k < 10; ++k) {
    std::tie(state, u) = velocity_loop_step(state, gains, 0.8, 0.8, 0.01);
    EXPECT_EQ(u, 0.8);
  }
  EXPECT_EQ(state.integral, 0.0);
}

TEST(VelocityLoopTest, RestGivesZero) {
  VelocityLoopState state;
  double u = 1.0;
  std::tie(state, u) = velocity_loop_step(state, PidGains{}, 0.0, 0.0, 0.01);
  EXPECT_EQ(u, 0.0);
}

TEST(VelocityLoopTest, StepConverges) {
  const VehicleParams params;
  VelocityLoopState state;
  double v = 0.0;
  double settled_at = -1.0;
  const double dt = 1e-3;
  for (int k = 0; k < 10000; ++k) {
    double u = 0.0;
    std::tie(state, u) =
        velocity_loop_step(state, params.v_loop_gains, 1.0, v, dt);
    v = velocity_actuator_step(v, u, params.v_actuator_lag, dt);
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_LT(v, 2.0);
    if (std::abs(v - 1.0) > 0.02) settled_at = -1.0;
    else if (settled_at < 0.0) settled_at = k * dt;
  }
  EXPECT_GE(settled_at, 0.0);
  EXPECT_LT(settled_at, 5.0);
  EXPECT_NEAR(v, 1.0, 1e-3);
}

TEST(VelocityLoopTest, IntegratorIsClamped) {
  PidGains gains;
  VelocityLoopState state;
  double u = 0.0;
  for (int k = 0; k < 10000; ++k) {
    std::tie(state, u) = velocity_loop_step(state, gains, 1.0, 0.0, 0.01);
  }
  EXPECT_LE(std::abs(gains.ki * state.integral), gains.i_limit + 1e-12);
  EXPECT_LE(std::abs(u), gains.u_max);
}

TEST(VelocityActuatorTest, ExactFirstOrderAndFloor) {
  EXPECT_NEAR(velocity_actuator_step(0.0, 1.0, 0.1, 0.1), 1.0 - std::exp(-1.0),
              1e-15);
  EXPECT_EQ(velocity_actuator_step(0.05, -5.0, 0.1, 0.1), 0.0);
}

TEST(VehicleParamsTest, Validation) {
  VehicleParams p;
  EXPECT_NO_THROW(p.validate());
  p.delta_max = 2.0;
  EXPECT_THROW(p.validate(), ConstraintViolation);
  p = VehicleParams{};
  p.tau_d = -0.1;
  EXPECT_THROW(p.validate(), ConstraintViolation);
  p = VehicleParams{};
  p.wheelbase = 0.0;
  EXPECT_THROW(p.validate(), ConstraintViolation);
}

}  // namespace
}  // namespace lanekeep
