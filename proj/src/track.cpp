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

#include "lanekeep/track.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>

#include "lanekeep/angles.hpp"
#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

constexpr double kIntersectionSlack = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstraintViolation("track parameters violate " + what);
}

Vec2 mirror_point(Vec2 p, double axis) { return {2.0 * axis - p.x, p.y}; }

}  // namespace

void TrackParams::validate() const {
  require(x_c > 0.0, "x_c > 0");
  require(m > 0.0, "m > 0");
  require(w > 0.0, "w > 0");
  require(L > 0.0, "L > 0");
  require(R_c > 0.0, "R_c > 0");
  require(r_c > 0.0, "r_c > 0");
  require(r_c < R_c, "r_c < R_c");
  require(w < 2.0 * r_c, "w < 2*r_c");
}

Section Section::segment(Vec2 from, Vec2 to) {
  Section sec;
  sec.kind = SectionKind::kSegment;
  const double len = norm(to - from);
  if (!(len > 0.0)) throw ConstraintViolation("segment of zero length");
  sec.start = from;
  sec.direction = (1.0 / len) * (to - from);
  sec.s_end = len;
  return sec;
}

Section Section::arc(Vec2 center, double radius, double theta_start,
                     double theta_end) {
  if (!(radius > 0.0)) throw ConstraintViolation("arc radius must be > 0");
  const double sweep = theta_end - theta_start;
  if (sweep == 0.0) throw ConstraintViolation("arc of zero sweep");
  Section sec;
  sec.kind = SectionKind::kArc;
  sec.center = center;
  sec.radius = radius;
  sec.theta_start = theta_start;
  sec.turn = sweep > 0.0 ? 1.0 : -1.0;
  sec.s_end = radius * std::abs(sweep);
  return sec;
}

PathPoint Section::at(double u) const {
  PathPoint p;
  p.s = s_start + u;
  if (kind == SectionKind::kSegment) {
    p.x = start.x + u * direction.x;
    p.y = start.y + u * direction.y;
    p.psi = std::atan2(direction.y, direction.x);
    return p;
  }
  const double theta = theta_start + turn * u / radius;
  p.x = center.x + radius * std::cos(theta);
  p.y = center.y + radius * std::sin(theta);
  p.psi = wrap_angle(theta + turn * 0.5 * kPi);
  p.kappa = turn / radius;
  p.rho = turn * radius;
  return p;
}

double Section::closest(Vec2 p) const {
  const double len = length();
  if (kind == SectionKind::kSegment) {
    return std::clamp(dot(p - start, direction), 0.0, len);
  }
  const Vec2 rel = p - center;
  if (rel.x == 0.0 && rel.y == 0.0) return 0.0;
  const double phi = std::atan2(rel.y, rel.x);
  const double u = radius * wrap_positive(turn * (phi - theta_start));
  if (u <= len) return u;
  // Outside the swept range: the nearer endpoint wins.
  const double d0 = norm(p - at(0.0).position());
  const double d1 = norm(p - at(len).position());
  return d0 <= d1 ? 0.0 : len;
}

std::vector<double> Section::circle_intersections(Vec2 c, double r) const {
  std::vector<double> out;
  const double len = length();
  auto keep = [&](double u) {
    if (u < -kIntersectionSlack || u > len + kIntersectionSlack) return;
    out.push_back(std::clamp(u, 0.0, len));
  };

  if (kind == SectionKind::kSegment) {
    const Vec2 f = start - c;
    const double b = dot(f, direction);
    const double disc = b * b - (dot(f, f) - r * r);
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    keep(-b - sq);
    if (sq > 0.0) keep(-b + sq);
    return out;
  }

  const Vec2 offset = c - center;
  const double d = norm(offset);
  if (d == 0.0 || d > radius + r || d < std::abs(radius - r)) return out;
  const double a = (radius * radius - r * r + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, radius * radius - a * a));
  const Vec2 e = (1.0 / d) * offset;
  const Vec2 base = center + a * e;
  const Vec2 perp{-e.y, e.x};
  auto keep_point = [&](Vec2 q) {
    const double phi = std::atan2(q.y - center.y, q.x - center.x);
    double delta = wrap_positive(turn * (phi - theta_start));
    // A point just before the start angle wraps to ~2*pi.
    if ((kTwoPi - delta) * radius < kIntersectionSlack) delta = 0.0;
    keep(delta * radius);
  };
  keep_point(base + h * perp);
  if (h > 0.0) keep_point(base - h * perp);
  return out;
}

TrackPath::TrackPath(std::vector<Section> sections, bool closed)
    : sections_(std::move(sections)), closed_(closed) {
  if (sections_.empty()) throw ConstraintViolation("path has no sections");
  double s = 0.0;
  for (auto& sec : sections_) {
    const double len = sec.length();
    if (!(len > 0.0)) throw ConstraintViolation("section of zero length");
    sec.s_start = s;
    sec.s_end = s + len;
    s = sec.s_end;
  }
  total_length_ = s;

  auto check_join = [](const Section& a, const Section& b, std::size_t k) {
    const PathPoint end = a.at(a.length());
    const PathPoint begin = b.at(0.0);
    const double gap = norm(end.position() - begin.position());
    const double kink = std::abs(wrap_angle(end.psi - begin.psi));
    if (gap > kJoinTolerance || kink > kJoinTolerance) {
      std::ostringstream msg;
      msg << "discontinuous path at join " << k << " (gap " << gap
          << " m, heading jump " << kink << " rad)";
      throw ConstraintViolation(msg.str());
    }
  };
  for (std::size_t k = 0; k + 1 < sections_.size(); ++k) {
    check_join(sections_[k], sections_[k + 1], k);
  }
  if (closed_) check_join(sections_.back(), sections_.front(),
                          sections_.size() - 1);
}

double TrackPath::normalize(double s) const {
  if (!closed_) return std::clamp(s, 0.0, total_length_);
  s = std::fmod(s, total_length_);
  if (s < 0.0) s += total_length_;
  if (s >= total_length_) s = 0.0;
  return s;
}

double TrackPath::progress(double from, double to) const {
  const double d = to - from;
  if (!closed_) return d;
  const double t = total_length_;
  return d - t * std::floor((d + 0.5 * t) / t);
}

std::size_t TrackPath::section_index(double s) const {
  s = normalize(s);
  const auto it = std::upper_bound(
      sections_.begin(), sections_.end(), s,
      [](double value, const Section& sec) { return value < sec.s_end; });
  if (it == sections_.end()) return sections_.size() - 1;
  return static_cast<std::size_t>(it - sections_.begin());
}

TrackPath TrackPath::mirrored(double axis) const {
  std::vector<Section> out = sections_;
  for (auto& sec : out) {
    if (sec.kind == SectionKind::kSegment) {
      sec.start = mirror_point(sec.start, axis);
      sec.direction.x = -sec.direction.x;
    } else {
      sec.center = mirror_point(sec.center, axis);
      sec.theta_start = kPi - sec.theta_start;
      sec.turn = -sec.turn;
    }
  }
  return TrackPath(std::move(out), closed_);
}

TrackPath build_test_track(const TrackParams& params, Lane lane,
                           Direction direction) {
  params.validate();
  double R = params.R_c;
  double r = params.r_c;
  if (lane == Lane::kInnerLane) {
    R = params.R_i();
    r = params.r_i();
  } else if (lane == Lane::kOuterLane) {
    R = params.R_e();
    r = params.r_e();
  }
  const double xc = params.x_c;
  const double y_bottom = params.m + params.R_c;
  const double y_top = y_bottom + params.L;

  std::vector<Section> sections;
  sections.reserve(6);
  sections.push_back(Section::arc({xc, y_bottom}, R, 0.0, -kPi));         // r_12
  sections.push_back(Section::segment({xc - R, y_bottom}, {xc - R, y_top}));  // r_23
  sections.push_back(
      Section::arc({xc - R + r, y_top}, r, -kPi, -1.5 * kPi));            // r_34
  sections.push_back(
      Section::segment({xc - R + r, y_top + r}, {xc + R - r, y_top + r}));  // r_45
  sections.push_back(
      Section::arc({xc + R - r, y_top}, r, -1.5 * kPi, -2.0 * kPi));      // r_56
  sections.push_back(Section::segment({xc + R, y_top}, {xc + R, y_bottom}));  // r_61

  TrackPath path(std::move(sections), /*closed=*/true);
  if (direction == Direction::kCounterclockwise) return path.mirrored(xc);
  return path;
}

TrackPath build_straight_track(double length) {
  return TrackPath({Section::segment({0.0, 0.0}, {length, 0.0})},
                   /*closed=*/false);
}

PathPoint point_at(const TrackPath& track, double s) {
  s = track.normalize(s);
  const Section& sec = track.sections()[track.section_index(s)];
  PathPoint p = sec.at(s - sec.s_start);
  p.s = s;
  return p;
}

LocalError project(const TrackPath& track, const PoseG& pose,
                   double capture_radius) {
  const Vec2 p{pose.x, pose.y};
  double best_dist = std::numeric_limits<double>::infinity();
  PathPoint best;
  for (const auto& sec : track.sections()) {
    const PathPoint q = sec.at(sec.closest(p));
    const double dist = norm(p - q.position());
    if (dist < best_dist) {
      best_dist = dist;
      best = q;
    }
  }
  if (best_dist > capture_radius) {
    std::ostringstream msg;
    msg << "pose is " << best_dist << " m from the path (capture radius "
        << capture_radius << " m)";
    throw OffTrackError(msg.str());
  }
  const Vec2 tangent{std::cos(best.psi), std::sin(best.psi)};
  LocalError err;
  err.s = track.normalize(best.s);
  err.e_y = cross(tangent, p - best.position());
  err.e_psi = wrap_angle(pose.psi - best.psi);
  return err;
}

PathPoint lookahead_point(const TrackPath& track, const PoseG& rear,
                          double L_d, double s_hint) {
  if (!(L_d > 0.0)) throw DomainError("lookahead distance must be > 0");
  const Vec2 c{rear.x, rear.y};
  std::vector<double> hits;
  for (const auto& sec : track.sections()) {
    for (double u : sec.circle_intersections(c, L_d)) {
      hits.push_back(track.normalize(sec.s_start + u));
    }
  }
  std::sort(hits.begin(), hits.end());
  // The same point is found twice where it sits on a join.
  std::vector<double> unique;
  for (double s : hits) {
    if (unique.empty() || s - unique.back() > TrackPath::kJoinTolerance) {
      unique.push_back(s);
    }
  }
  if (track.closed() && unique.size() > 1 &&
      unique.front() + track.total_length() - unique.back() <=
          TrackPath::kJoinTolerance) {
    unique.pop_back();
  }
  if (unique.size() < 2) {
    std::ostringstream msg;
    msg << "lookahead circle of radius " << L_d << " m meets the path at "
        << unique.size() << " point(s); at least 2 are required";
    throw NoLookaheadError(msg.str());
  }
  double best_s = unique.front();
  double best_progress = track.progress(s_hint, best_s);
  for (double s : unique) {
    const double prog = track.progress(s_hint, s);
    if (prog > best_progress) {
      best_progress = prog;
      best_s = s;
    }
  }
  return point_at(track, best_s);
}

double lhe_global(const TrackPath& track, const PoseG& rear, double L_d,
                  double s_hint) {
  const PathPoint p = lookahead_point(track, rear, L_d, s_hint);
  return wrap_angle(std::atan2(p.y - rear.y, p.x - rear.x) - rear.psi);
}

double lle_straight(double e_y, double e_psi, double L_d) {
  if (!(L_d > 0.0)) throw DomainError("lookahead distance must be > 0");
  const double radicand = L_d * L_d - e_y * e_y;
  if (radicand < 0.0) {
    throw DomainError("|e_y| exceeds the lookahead distance");
  }
  return e_y * std::cos(e_psi) + std::sqrt(radicand) * std::sin(e_psi);
}

std::vector<PathPoint> sample_polyline(const TrackPath& track,
                                       double spacing) {
  if (!(spacing > 0.0)) throw ConstraintViolation("spacing must be > 0");
  const double total = track.total_length();
  const auto n = static_cast<std::size_t>(std::ceil(total / spacing));
  std::vector<PathPoint> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = total * static_cast<double>(i) / static_cast<double>(n);
    if (i == n && track.closed()) {
      PathPoint p = point_at(track, 0.0);
      p.s = total;
      out.push_back(p);
    } else {
      out.push_back(point_at(track, s));
    }
  }
  return out;
}

}  // namespace lanekeep
