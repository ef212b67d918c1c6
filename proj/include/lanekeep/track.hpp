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

#ifndef LANEKEEP_TRACK_HPP_
#define LANEKEEP_TRACK_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace lanekeep {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Geometry of the laboratory test track. Lengths in metres. The inner and
// outer radii are derived from the lane-centre radii and the lane width.
struct TrackParams {
  double x_c = 1.5;   // abscissa of the axis of symmetry
  double m = 0.25;    // margin from the edge of the fabric
  double w = 0.37;    // lane width
  double L = 2.0;     // length of the long straights
  double R_c = 1.04;  // big lane-centre radius
  double r_c = 0.65;  // small lane-centre radius

  double R_i() const { return R_c - 0.5 * w; }
  double R_e() const { return R_c + 0.5 * w; }
  double r_i() const { return r_c - 0.5 * w; }
  double r_e() const { return r_c + 0.5 * w; }

  // Throws ConstraintViolation naming the first violated inequality.
  void validate() const;

  friend bool operator==(const TrackParams&, const TrackParams&) = default;
};

enum class Lane { kCenterline, kInnerLane, kOuterLane };

// kClockwise is the native orientation of the six-piece parameterisation;
// kCounterclockwise is its mirror image about x = x_c.
enum class Direction { kClockwise, kCounterclockwise };

enum class SectionKind { kArc, kSegment };

// Global pose of the rear axle. Heading is wrapped to (-pi, pi].
struct PoseG {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;

  friend bool operator==(const PoseG&, const PoseG&) = default;
};

// Path-frame error: arc length of the projection, lateral offset (positive
// when the vehicle is to the left of the path) and heading error psi - psi_s.
struct LocalError {
  double s = 0.0;
  double e_y = 0.0;
  double e_psi = 0.0;
};

struct PathPoint {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;    // road heading
  double kappa = 0.0;  // signed curvature, positive for left turns
  double rho = std::numeric_limits<double>::infinity();  // 1 / kappa

  Vec2 position() const { return {x, y}; }
};

// One arc or straight piece of a path, addressed by local arc length
// u in [0, length()].
struct Section {
  SectionKind kind = SectionKind::kSegment;
  double s_start = 0.0;
  double s_end = 0.0;

  // Segment: start point and unit direction.
  Vec2 start;
  Vec2 direction{1.0, 0.0};

  // Arc: centre, radius, polar angle of the start point, and +1 for a
  // counterclockwise sweep or -1 for a clockwise one.
  Vec2 center;
  double radius = 0.0;
  double theta_start = 0.0;
  double turn = 1.0;

  static Section segment(Vec2 from, Vec2 to);
  static Section arc(Vec2 center, double radius, double theta_start,
                     double theta_end);

  double length() const { return s_end - s_start; }
  double curvature() const {
    return kind == SectionKind::kArc ? turn / radius : 0.0;
  }
  // Point at local arc length u (not clamped).
  PathPoint at(double u) const;
  // Local arc length of the point closest to p, clamped to the section.
  double closest(Vec2 p) const;
  // Local arc lengths where the circle (c, r) meets this section.
  std::vector<double> circle_intersections(Vec2 c, double r) const;
};

// Ordered, arc-length parameterised chain of sections. Construction checks
// contiguity, positional and tangent continuity, and closure for closed
// paths. Immutable afterwards.
class TrackPath {
 public:
  static constexpr double kJoinTolerance = 1e-9;

  TrackPath(std::vector<Section> sections, bool closed);

  const std::vector<Section>& sections() const { return sections_; }
  double total_length() const { return total_length_; }
  bool closed() const { return closed_; }

  // Closed paths: s modulo total length. Open paths: clamped.
  double normalize(double s) const;
  // Signed arc-length progress from a to b; on a closed path the result lies
  // in [-total/2, total/2).
  double progress(double from, double to) const;
  std::size_t section_index(double s) const;

  // Reflection about the vertical line x = axis. Orientation is reversed.
  TrackPath mirrored(double axis) const;

 private:
  std::vector<Section> sections_;
  double total_length_ = 0.0;
  bool closed_ = true;
};

// The six-piece closed test track, r_12 ... r_61. Lane variants substitute
// the inner or outer radii for the lane-centre ones.
TrackPath build_test_track(const TrackParams& params,
                           Lane lane = Lane::kCenterline,
                           Direction direction = Direction::kClockwise);

// Open straight along +x starting at the origin.
TrackPath build_straight_track(double length);

PathPoint point_at(const TrackPath& track, double s);

inline constexpr double kDefaultCaptureRadius = 1.0;

// Closest-point projection, minimised over every section in closed form.
// Throws OffTrackError when the pose is beyond capture_radius.
LocalError project(const TrackPath& track, const PoseG& pose,
                   double capture_radius = kDefaultCaptureRadius);

// Furthest path point at distance L_d from the rear axle, "furthest" being
// the greatest forward progress from s_hint. Throws NoLookaheadError when
// the circle meets the path fewer than twice.
PathPoint lookahead_point(const TrackPath& track, const PoseG& rear,
                          double L_d, double s_hint);

// Lookahead heading error, wrapped; positive when the lookahead point lies
// to the left of the vehicle.
double lhe_global(const TrackPath& track, const PoseG& rear, double L_d,
                  double s_hint);

// Lookahead lateral error on a straight path:
//   e_d = e_y cos(e_psi) + sqrt(L_d^2 - e_y^2) sin(e_psi).
// The offsets here are those of the path as seen from the vehicle, so with
// LocalError values pass (-e_y, -e_psi); then asin(e_d / L_d) equals
// lhe_global. Throws DomainError when |e_y| > L_d.
double lle_straight(double e_y, double e_psi, double L_d);

// Uniformly spaced samples for plotting and export.
std::vector<PathPoint> sample_polyline(const TrackPath& track,
                                       double spacing);

}  // namespace lanekeep

#endif  // LANEKEEP_TRACK_HPP_
