// Copyright 2026 The HGAT Forecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef HGAT__GEOMETRY_HPP_
#define HGAT__GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <vector>

namespace hgat
{

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
  double cross(const Vec2 & o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  bool operator==(const Vec2 &) const = default;
};

inline Vec2 rotate(const Vec2 & v, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 unit_from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Wraps to (-pi, pi].
inline double wrap_angle(double a)
{
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

/// Rigid 2D pose used as a normalization frame (origin + heading).
struct Frame
{
  Vec2 origin;
  double heading = 0.0;

  Vec2 to_local(const Vec2 & world) const { return rotate(world - origin, -heading); }
  Vec2 to_world(const Vec2 & local) const { return rotate(local, heading) + origin; }
  double heading_to_local(double h) const { return wrap_angle(h - heading); }
  Vec2 direction_to_local(const Vec2 & d) const { return rotate(d, -heading); }
};

/// Polyline with arc-length parametrization; queries beyond either end extrapolate
/// along the end segments.
class Polyline
{
public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2> & points() const noexcept { return points_; }
  double length() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  const std::vector<double> & cumulative() const noexcept { return cumulative_; }

  Vec2 point_at(double s) const;
  /// Unit tangent of the segment containing s.
  Vec2 segment_direction(double s) const;
  /// Unit tangent from a symmetric chord of half-width `half` (clamped to the polyline).
  Vec2 smooth_direction(double s, double half) const;
  /// Index of the segment containing s.
  std::size_t segment_index(double s) const;
  /// Interpolates per-vertex values at arc length s.
  double interpolate(const std::vector<double> & values, double s) const;

  /// Euclidean distance from p to the polyline.
  double distance_to(const Vec2 & p) const;

private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

}  // namespace hgat

#endif  // HGAT__GEOMETRY_HPP_
