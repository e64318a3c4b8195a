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
#include "hgat/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hgat
{

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points))
{
  if (points_.size() < 2) throw std::invalid_argument("polyline needs at least two points");
  cumulative_.resize(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + (points_[i] - points_[i - 1]).norm();
  }
}

std::size_t Polyline::segment_index(double s) const
{
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const auto i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, points_.size() - 2);
}

Vec2 Polyline::point_at(double s) const
{
  const std::size_t i = segment_index(s);
  const double seg = cumulative_[i + 1] - cumulative_[i];
  const double u = seg > 0.0 ? (s - cumulative_[i]) / seg : 0.0;
  return points_[i] + (points_[i + 1] - points_[i]) * u;
}

Vec2 Polyline::segment_direction(double s) const
{
  const std::size_t i = segment_index(s);
  const Vec2 d = points_[i + 1] - points_[i];
  return d * (1.0 / d.norm());
}

Vec2 Polyline::smooth_direction(double s, double half) const
{
  const double a = std::clamp(s - half, 0.0, length());
  const double b = std::clamp(s + half, 0.0, length());
  const Vec2 d = point_at(b) - point_at(a);
  const double n = d.norm();
  if (n <= 1e-12) return segment_direction(s);
  return d * (1.0 / n);
}

double Polyline::interpolate(const std::vector<double> & values, double s) const
{
  if (values.size() != points_.size()) throw std::invalid_argument("per-vertex value count mismatch");
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_index(s);
  const double seg = cumulative_[i + 1] - cumulative_[i];
  const double u = seg > 0.0 ? (s - cumulative_[i]) / seg : 0.0;
  return values[i] + (values[i + 1] - values[i]) * u;
}

double Polyline::distance_to(const Vec2 & p) const
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2 a = points_[i];
    const Vec2 ab = points_[i + 1] - a;
    const double len2 = ab.squared_norm();
    const double u = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (a + ab * u)).norm());
  }
  return best;
}

}  // namespace hgat
