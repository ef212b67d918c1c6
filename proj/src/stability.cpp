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

#include "lanekeep/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lanekeep/angles.hpp"
#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

constexpr double kRealRootTolerance = 1e-8;
constexpr int kPolishSteps = 60;
constexpr double kDegenerateN = 1e-12;
constexpr double kCoprimeTolerance = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum of |c_k x^k|, the natural scale for judging p(x) ~ 0.
double magnitude_scale(const Poly& p, std::complex<double> x) {
  double acc = 0.0;
  double r = 1.0;
  for (double c : p.coefficients()) {
    acc += std::abs(c) * r;
    r *= std::abs(x);
  }
  return acc;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Bisection on a sign change around an approximate simple root. Returns
// false when no sign change is found nearby (even-multiplicity root).
bool polish_root(const Poly& q, double approx, double& root) {
  const double scale = std::max(1.0, std::abs(approx));
  for (double rel : {1e-12, 1e-10, 1e-8, 1e-6}) {
    double lo = approx - rel * scale;
    double hi = approx + rel * scale;
    double f_lo = q(lo);
    const double f_hi = q(hi);
    if (sign_of(f_lo) * sign_of(f_hi) >= 0) continue;
    for (int i = 0; i < kPolishSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = q(mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if (sign_of(f_mid) == sign_of(f_lo)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    root = 0.5 * (lo + hi);
    return true;
  }
  root = approx;
  return false;
}

// p(s) / (s - root) by synthetic division, dropping the remainder.
Poly deflate(const Poly& p, double root) {
  const auto& c = p.coefficients();
  if (c.size() < 2) return Poly();
  std::vector<double> q(c.size() - 1);
  double carry = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    carry = c[k] + carry * root;
    q[k - 1] = carry;
  }
  return Poly(std::move(q));
}

}  // namespace

void QuasiPoly::validate() const {
  if (d.is_zero()) throw DomainError("d(s) must be nonzero");
  if (d.degree() < n.degree()) {
    throw DomainError("quasi-polynomial needs deg d >= deg n");
  }
  if (n.is_zero()) return;
  for (const auto& z : polynomial_roots(d)) {
    if (std::abs(n(z)) <= kCoprimeTolerance * magnitude_scale(n, z)) {
      throw DomainError("d(s) and n(s) share a root");
    }
  }
}

void StraightLoopParams::validate() const {
  if (!(v > 0.0 && L_d > 0.0 && wheelbase > 0.0 && tau > 0.0)) {
    throw ConstraintViolation(
        "straight loop needs v, L_d, wheelbase and tau > 0");
  }
  if (!(K_D >= 0.0)) throw ConstraintViolation("straight loop needs K_D >= 0");
}

QuasiPoly straight_loop_quasipoly(const StraightLoopParams& p) {
  p.validate();
  const double l = p.wheelbase;
  const double gain = p.v * p.v / (l * p.L_d);
  const Poly controller({2.0 * l / p.L_d, p.K_D});
  const Poly plant_zero({1.0, p.L_d / p.v});
  return {Poly({0.0, 0.0, 1.0, p.tau}), gain * (controller * plant_zero)};
}

double routh_mu(double k_star) {
  return 2.0 / ((2.0 + k_star) * (1.0 + k_star));
}

RouthResult delay_free_stable(const StraightLoopParams& p) {
  const QuasiPoly qp = straight_loop_quasipoly(p);
  RouthResult out;
  out.mu = routh_mu(p.K_D * p.v / p.wheelbase);
  out.L_d_bound = out.mu * p.v * p.tau;
  out.stable = is_hurwitz(qp.d + qp.n);
  return out;
}

Poly wm_polynomial(const QuasiPoly& qp) {
  // d(s) d(-s) - n(s) n(-s) is even in s; s^(2m) = (-1)^m eta^m on s = jw.
  const Poly even = qp.d * qp.d.reflected() - qp.n * qp.n.reflected();
  std::vector<double> eta;
  for (int k = 0; k <= even.degree(); k += 2) {
    eta.push_back((k / 2) % 2 == 0 ? even[k] : -even[k]);
  }
  return Poly(std::move(eta));
}

CrossingReport wm_critical_delay(const QuasiPoly& qp) {
  qp.validate();
  if (qp.d.degree() <= qp.n.degree()) {
    throw DomainError("critical delay analysis needs deg d > deg n");
  }

  CrossingReport report;
  report.delay_free_stable = is_hurwitz(qp.d + qp.n);

  const Poly q = wm_polynomial(qp);
  const Poly dq = q.derivative();

  std::vector<double> etas;
  std::vector<int> signs;
  for (const auto& z : polynomial_roots(q)) {
    if (!(z.real() > 0.0)) continue;
    if (std::abs(z.imag()) >=
        kRealRootTolerance * std::max(1.0, std::abs(z.real()))) {
      continue;
    }
    double eta = z.real();
    const bool simple = polish_root(q, z.real(), eta);
    const bool duplicate = std::any_of(
        etas.begin(), etas.end(), [&](double other) {
          return std::abs(other - eta) <= 1e-9 * std::max(1.0, eta);
        });
    if (duplicate) continue;
    int s = 0;
    if (simple) {
      const double slope = dq(eta);
      if (std::abs(slope) > 1e-9 * magnitude_scale(dq, eta)) {
        s = sign_of(slope);
      }
    }
    etas.push_back(eta);
    signs.push_back(s);
  }

  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double omega = std::sqrt(etas[i]);
    const std::complex<double> jw(0.0, omega);
    const std::complex<double> n_jw = qp.n(jw);
    if (std::abs(n_jw) < kDegenerateN) {
      throw DegenerateCrossingError("n(jw) vanishes at a crossing frequency");
    }
    // exp(-j w tau) = -d(jw) / n(jw)
    const double phase = std::arg(-qp.d(jw) / n_jw);
    report.crossings.push_back({omega, wrap_positive(-phase) / omega,
                                signs[i]});
  }
  std::sort(report.crossings.begin(), report.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.tau < b.tau; });

  if (!report.delay_free_stable) {
    report.critical_delay = 0.0;
    return report;
  }

  // Every crossing family repeats with period 2*pi/w. Walk the events in
  // increasing delay and count roots in the right half plane.
  double horizon = kInf;
  for (const auto& c : report.crossings) {
    if (c.sign > 0) horizon = std::min(horizon, c.tau);
  }
  if (horizon == kInf) {
    report.critical_delay = kInf;
    return report;
  }
  struct Event {
    double tau;
    int sign;
  };
  std::vector<Event> events;
  for (const auto& c : report.crossings) {
    if (c.sign == 0) continue;
    const double period = kTwoPi / c.omega;
    for (double t = c.tau; t <= horizon; t += period) {
      events.push_back({t, c.sign});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.tau < b.tau || (a.tau == b.tau && a.sign < b.sign);
  });
  int unstable_roots = 0;
  report.critical_delay = horizon;
  for (const auto& e : events) {
    unstable_roots = std::max(0, unstable_roots + 2 * e.sign);
    if (unstable_roots > 0) {
      report.critical_delay = e.tau;
      break;
    }
  }
  return report;
}

CrossingReport straight_loop_critical_delay(const StraightLoopParams& p) {
  QuasiPoly qp = straight_loop_quasipoly(p);
  // n(0) = 2 v^2 / L_d^2, so the steering-lag pole is the only candidate
  // for a common root. It cancels when K_D L_d = 2 l tau or L_d = v tau; the
  // cancelled mode is delay-independent and stable, so the reduced loop
  // decides stability.
  const double pole = -1.0 / p.tau;
  if (std::abs(qp.n(pole)) <= kCoprimeTolerance * magnitude_scale(qp.n, pole)) {
    qp.d = deflate(qp.d, pole);
    qp.n = deflate(qp.n, pole);
  }
  return wm_critical_delay(qp);
}

std::vector<SweepRow> sweep_critical_delay(const SweepGrid& grid,
                                           const StraightLoopParams& fixed) {
  if (grid.v.empty() || grid.L_d.empty() || grid.K_D.empty()) {
    throw ConstraintViolation("sweep grid axes must be non-empty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.v.size() * grid.L_d.size() * grid.K_D.size());
  for (double v : grid.v) {
    for (double L_d : grid.L_d) {
      for (double k : grid.K_D) {
        StraightLoopParams p = fixed;
        p.v = v;
        p.L_d = L_d;
        p.K_D = k;
        const CrossingReport r = straight_loop_critical_delay(p);
        rows.push_back({v, L_d, k, r.critical_delay, r.delay_free_stable});
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "v,L_d,K_D,critical_delay_s,delay_free_stable\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%d\n", r.v, r.L_d,
                  r.K_D, r.critical_delay, r.delay_free_stable ? 1 : 0);
    out << buf;
  }
}

TuneResult tune_kd(double v, double L_d, double wheelbase, double tau,
                   const KdRange& range) {
  if (!(range.hi >= range.lo) || range.lo < 0.0 || range.coarse_points < 1) {
    throw ConstraintViolation("K_D range must satisfy 0 <= lo <= hi");
  }
  auto critical = [&](double k) {
    const StraightLoopParams p{v, L_d, k, wheelbase, tau};
    return straight_loop_critical_delay(p).critical_delay;
  };

  const int n = range.hi > range.lo ? std::max(range.coarse_points, 2) : 1;
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] =
        n == 1 ? range.lo
               : range.lo + (range.hi - range.lo) * i / (n - 1);
  }
  std::size_t best = 0;
  double best_value = critical(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double value = critical(grid[i]);
    if (value > best_value) {
      best = i;
      best_value = value;
    }
  }
  if (!(best_value > 0.0)) {
    throw InfeasibleTuningError(
        "loop is unstable without delay for every K_D in the range");
  }
  if (std::isinf(best_value) || grid.size() == 1) {
    return {grid[best], best_value};
  }

  // Golden-section search for the maximum between the grid neighbours.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = critical(x1);
  double f2 = critical(x2);
  while (b - a > 1e-9) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = critical(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = critical(x2);
    }
  }
  const double refined = 0.5 * (a + b);
  const double refined_value = critical(refined);
  if (refined_value > best_value) return {refined, refined_value};
  return {grid[best], best_value};
}

}  // namespace lanekeep
