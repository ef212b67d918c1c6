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


// Independent description of the test track for geometry oracles: each
// piece is a curve P(u), u in [0, 1], written directly from the track
// parameters. Arc length comes from adaptive Simpson quadrature of |P'(u)|
// and dense point clouds from uniform sampling.

#ifndef LANEKEEP_TESTS_ORACLES_REFERENCE_TRACK_HPP_
#define LANEKEEP_TESTS_ORACLES_REFERENCE_TRACK_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace lanekeep::oracle {

struct Point {
  double x;
  double y;
};

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol,
                               int depth = 40) {
  const auto simpson = [&](double lo, double hi, double flo, double fmid,
                           double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  const std::function<double(double, double, double, double, double, double,
                             double, int)>
      recurse = [&](double lo, double hi, double flo, double fmid, double fhi,
                    double whole, double eps, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(lo, mid, flo, flm, fmid);
    const double right = simpson(mid, hi, fmid, frm, fhi);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return recurse(lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
           recurse(mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
  };
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  return recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

struct Piece {
  std::function<Point(double)> at;
  std::function<Point(double)> velocity;  // dP/du
  double length = 0.0;
};

class ReferenceTrack {
 public:
  // Big and small centre-line radii of the chosen lane. Clockwise order:
  // lower big arc, left straight, upper-left arc, top straight, upper-right
  // arc, right straight.
  ReferenceTrack(double x_c, double m, double L, double big_centre_radius,
                 double big, double small, bool mirror) {
    const double pi = std::numbers::pi;
    const double yb = m + big_centre_radius;
    const double yt = yb + L;
    const double s = mirror ? -1.0 : 1.0;
    auto X = [=](double x) { return x_c + s * (x - x_c); };
    auto arc = [&](double cx, double cy, double r, double a0, double a1) {
      Piece p;
      p.at = [=](double u) {
        const double a = a0 + (a1 - a0) * u;
        return Point{X(cx + r * std::cos(a)), cy + r * std::sin(a)};
      };
      p.velocity = [=](double u) {
        const double a = a0 + (a1 - a0) * u;
        return Point{-s * r * (a1 - a0) * std::sin(a),
                     r * (a1 - a0) * std::cos(a)};
      };
      pieces_.push_back(p);
    };
    auto line = [&](double x0, double y0, double x1, double y1) {
      Piece p;
      p.at = [=](double u) {
        return Point{X(x0 + (x1 - x0) * u), y0 + (y1 - y0) * u};
      };
      p.velocity = [=](double) { return Point{s * (x1 - x0), y1 - y0}; };
      pieces_.push_back(p);
    };
    arc(x_c, yb, big, 0.0, -pi);
    line(x_c - big, yb, x_c - big, yt);
    arc(x_c - big + small, yt, small, pi, pi / 2.0);
    line(x_c - big + small, yt + small, x_c + big - small, yt + small);
    arc(x_c + big - small, yt, small, pi / 2.0, 0.0);
    line(x_c + big, yt, x_c + big, yb);
    for (auto& p : pieces_) {
      p.length = adaptive_simpson(
          [&](double u) {
            const Point d = p.velocity(u);
            return std::hypot(d.x, d.y);
          },
          0.0, 1.0, 1e-12);
    }
  }

  const std::vector<Piece>& pieces() const { return pieces_; }

  double length() const {
    double total = 0.0;
    for (const auto& p : pieces_) total += p.length;
    return total;
  }

  // n points uniformly spaced in arc length, s_k = k * length / n.
  std::vector<Point> dense(std::size_t n) const {
    std::vector<Point> out;
    out.reserve(n);
    const double total = length();
    std::size_t piece = 0;
    double start = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double s = total * static_cast<double>(k) / static_cast<double>(n);
      while (piece + 1 < pieces_.size() && s >= start + pieces_[piece].length) {
        start += pieces_[piece].length;
        ++piece;
      }
      out.push_back(pieces_[piece].at((s - start) / pieces_[piece].length));
    }
    return out;
  }

 private:
  std::vector<Piece> pieces_;
};

// Nearest sample: returns its arc length and distance.
struct Nearest {
  double s;
  double distance;
};

inline Nearest nearest_sample(const std::vector<Point>& cloud, double total,
                              Point p) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t idx = 0;
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const double d = std::hypot(cloud[k].x - p.x, cloud[k].y - p.y);
    if (d < best) {
      best = d;
      idx = k;
    }
  }
  return {total * static_cast<double>(idx) / static_cast<double>(cloud.size()),
          best};
}

// Crossings of |P(s) - centre| = radius between neighbouring samples,
// located by linear interpolation; returns the arc lengths.
inline std::vector<double> circle_crossings(const std::vector<Point>& cloud,
                                            double total, Point centre,
                                            double radius) {
  std::vector<double> out;
  const std::size_t n = cloud.size();
  auto f = [&](std::size_t k) {
    const Point& q = cloud[k % n];
    return std::hypot(q.x - centre.x, q.y - centre.y) - radius;
  };
  double prev = f(0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double cur = f(k);
    if ((prev < 0.0) != (cur < 0.0)) {
      const double frac = prev / (prev - cur);
      out.push_back(total * (static_cast<double>(k - 1) + frac) /
                    static_cast<double>(n));
    }
    prev = cur;
  }
  return out;
}

}  // namespace lanekeep::oracle

#endif  // LANEKEEP_TESTS_ORACLES_REFERENCE_TRACK_HPP_
