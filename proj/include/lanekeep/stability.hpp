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

#ifndef LANEKEEP_STABILITY_HPP_
#define LANEKEEP_STABILITY_HPP_

#include <iosfwd>
#include <limits>
#include <vector>

#include "lanekeep/polynomial.hpp"

namespace lanekeep {

// Characteristic quasi-polynomial of a single-delay loop,
//   Delta(s) = d(s) + n(s) exp(-s tau_d).
struct QuasiPoly {
  Poly d;
  Poly n;

  // Throws DomainError unless deg d >= deg n and d, n share no root.
  void validate() const;
};

// Linearised straight-road loop: bicycle model, Pure Pursuit with
// derivative gain K_D, and the first-order steering lag tau.
struct StraightLoopParams {
  double v = 1.0;
  double L_d = 0.5;
  double K_D = 0.2;
  double wheelbase = 0.26;
  double tau = 0.17;

  void validate() const;
};

struct RouthResult {
  bool stable = false;
  double mu = 1.0;        // 2 / ((2 + K*) (1 + K*)), K* = K_D v / l
  double L_d_bound = 0.0; // the loop needs L_d > mu * v * tau
};

struct Crossing {
  double omega = 0.0;  // rad/s
  double tau = 0.0;    // smallest positive delay giving a root at j*omega
  int sign = 0;        // +1 destabilising, -1 stabilising, 0 touching
};

struct CrossingReport {
  std::vector<Crossing> crossings;  // sorted by tau
  bool delay_free_stable = false;
  // Delay at which the loop first loses stability: 0 if unstable without
  // delay, infinity if stable for every delay.
  double critical_delay = std::numeric_limits<double>::infinity();
};

// d(s) = s^2 (1 + s tau)
// n(s) = v^2 / (l L_d) * (2 l / L_d + s K_D) * (1 + s L_d / v)
QuasiPoly straight_loop_quasipoly(const StraightLoopParams& p);

double routh_mu(double k_star);

RouthResult delay_free_stable(const StraightLoopParams& p);

// Q(eta) = d(jw) d(-jw) - n(jw) n(-jw) with eta = w^2, built by coefficient
// convolution of d(s) d(-s) - n(s) n(-s).
Poly wm_polynomial(const QuasiPoly& qp);

// Walton-Marshall analysis for deg d > deg n. Throws DomainError for
// invalid input and DegenerateCrossingError when n(jw*) vanishes.
CrossingReport wm_critical_delay(const QuasiPoly& qp);

// wm_critical_delay on the straight loop, after dividing out the steering-lag
// pole when the controller or plant zero cancels it exactly.
CrossingReport straight_loop_critical_delay(const StraightLoopParams& p);

struct SweepGrid {
  std::vector<double> v;
  std::vector<double> L_d;
  std::vector<double> K_D;
};

struct SweepRow {
  double v = 0.0;
  double L_d = 0.0;
  double K_D = 0.0;
  double critical_delay = 0.0;
  bool delay_free_stable = false;
};

// Rows in v-major, then L_d, then K_D order. `fixed` supplies the wheelbase
// and steering lag.
std::vector<SweepRow> sweep_critical_delay(const SweepGrid& grid,
                                           const StraightLoopParams& fixed);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct KdRange {
  double lo = 0.0;
  double hi = 0.6;
  int coarse_points = 61;
};

struct TuneResult {
  double K_D = 0.0;
  double critical_delay = 0.0;
};

// Derivative gain maximising the critical delay: coarse scan, then a
// golden-section search around the best grid point. Ties go to the smaller
// gain. Throws InfeasibleTuningError when the loop is unstable without
// delay across the whole range.
TuneResult tune_kd(double v, double L_d, double wheelbase, double tau,
                   const KdRange& range = {});

}  // namespace lanekeep

#endif  // LANEKEEP_STABILITY_HPP_
