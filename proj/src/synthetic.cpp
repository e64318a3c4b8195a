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
#include "hgat/synthetic.hpp"

#include "hgat/parameters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace hgat
{

const char * to_string(ScenarioKind kind)
{
  switch (kind) {
    case ScenarioKind::kStraight:
      return "straight";
    case ScenarioKind::kCurve:
      return "curve";
    case ScenarioKind::kIntersection:
      return "intersection";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string & s)
{
  for (auto k : {ScenarioKind::kStraight, ScenarioKind::kCurve, ScenarioKind::kIntersection}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

namespace
{

constexpr double kLaneWidth = 3.5;
constexpr double kFineStep = 0.05;
constexpr double kPi = std::numbers::pi;

/// Piecewise-constant acceleration schedule starting at t = 0.
class SpeedProfile
{
public:
  static SpeedProfile constant(double v0) { return SpeedProfile({{0.0, v0, 0.0}}); }
  static SpeedProfile accelerate(double v0, double t_start, double a, double v_max)
  {
    std::vector<Phase> p{{0.0, v0, 0.0}};
    if (v_max > v0) {
      p.push_back({t_start, v0, a});
      p.push_back({t_start + (v_max - v0) / a, v_max, 0.0});
    }
    return SpeedProfile(std::move(p));
  }
  static SpeedProfile decelerate_to_stop(double v0, double t_start, double b)
  {
    return SpeedProfile({{0.0, v0, 0.0}, {t_start, v0, -b}, {t_start + v0 / b, 0.0, 0.0}});
  }

  double speed(double t) const
  {
    const Phase & p = phase(t);
    return std::max(0.0, p.v0 + p.a * (t - p.t0));
  }

  double distance(double t) const
  {
    double s = 0.0;
    for (std::size_t i = 0; i < phases_.size(); ++i) {
      const Phase & p = phases_[i];
      if (t <= p.t0) break;
      const double end = i + 1 < phases_.size() ? std::min(t, phases_[i + 1].t0) : t;
      const double dt = end - p.t0;
      s += p.v0 * dt + 0.5 * p.a * dt * dt;
    }
    return s;
  }

private:
  struct Phase
  {
    double t0;
    double v0;
    double a;
  };

  explicit SpeedProfile(std::vector<Phase> phases) : phases_(std::move(phases)) {}

  const Phase & phase(double t) const
  {
    std::size_t i = 0;
    while (i + 1 < phases_.size() && phases_[i + 1].t0 <= t) ++i;
    return phases_[i];
  }

  std::vector<Phase> phases_;
};

struct Motion
{
  // lane following
  Polyline path;
  double s0 = 0.0;
  SpeedProfile speed = SpeedProfile::constant(0.0);
  double lc_start = 0.0;
  double lc_duration = 0.0;
  double lc_offset = 0.0;  // toward the left of travel

  // straight walk
  bool walking = false;
  Vec2 origin;
  Vec2 direction;
  double walk_speed = 0.0;

  double arc(double t) const { return s0 + speed.distance(t); }

  double lateral(double t) const
  {
    if (lc_duration <= 0.0) return 0.0;
    const double u = std::clamp((t - lc_start) / lc_duration, 0.0, 1.0);
    return lc_offset * 0.5 * (1.0 - std::cos(kPi * u));
  }

  Vec2 position(double t) const
  {
    if (walking) return origin + direction * (walk_speed * t);
    const double s = arc(t);
    const Vec2 d = path.smooth_direction(s, 1.0);
    return path.point_at(s) + Vec2{-d.y, d.x} * lateral(t);
  }

  double rest_heading(double t) const
  {
    if (walking) return std::atan2(direction.y, direction.x);
    const Vec2 d = path.smooth_direction(arc(t), 1.0);
    return std::atan2(d.y, d.x);
  }
};

Vec2 left_normal(const Vec2 & d) { return {-d.y, d.x}; }

class Builder
{
public:
  Builder(std::uint64_t seed, const SyntheticOptions & options, const std::string & id)
  : rng_(seed), layout_(timestep_layout(options.rate_hz))
  {
    scenario_.id = id;
    scenario_.dt_s = layout_.dt();
  }

  Rng & rng() { return rng_; }
  const Scenario & scenario() const { return scenario_; }

  /// Samples f over [0, length] every `step` meters and cuts it into chained lanes of
  /// roughly `segment` meters. Returns the new lane ids in travel order.
  std::vector<std::int64_t> add_chain(
    const std::function<Vec2(double)> & f, double length, double step, double segment,
    std::int64_t first_id, MarkType left, MarkType right, bool intersection = false)
  {
    const auto n_steps = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
    step = length / static_cast<double>(n_steps);
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i <= n_steps; ++i) pts.push_back(f(static_cast<double>(i) * step));
    const std::size_t per = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(segment / step)));
    std::vector<std::int64_t> ids;
    for (std::size_t begin = 0; begin + 1 < pts.size(); begin += per) {
      std::size_t end = std::min(pts.size() - 1, begin + per);
      if (pts.size() - 1 - end < per / 2) end = pts.size() - 1;
      const std::int64_t id = first_id + static_cast<std::int64_t>(ids.size());
      LanePolyline lane;
      lane.id = id;
      lane.centerline.assign(pts.begin() + static_cast<std::ptrdiff_t>(begin), pts.begin() + static_cast<std::ptrdiff_t>(end) + 1);
      // agents drive on a finely sampled copy so their motion has no visible corners
      const double s_begin = std::min(length, static_cast<double>(begin) * step);
      const double s_end = std::min(length, static_cast<double>(end) * step);
      const auto n_fine = static_cast<std::size_t>(std::ceil((s_end - s_begin) / kFineStep));
      auto & fine = fine_[id];
      for (std::size_t i = 0; i <= n_fine; ++i) {
        fine.push_back(f(s_begin + (s_end - s_begin) * static_cast<double>(i) / static_cast<double>(n_fine)));
      }
      const double half = 0.5 * kLaneWidth + rng_.uniform(-0.1, 0.1);
      lane.left_dist.assign(lane.centerline.size(), half);
      lane.right_dist.assign(lane.centerline.size(), half);
      lane.left_mark = left;
      lane.right_mark = right;
      lane.is_intersection = intersection;
      if (!ids.empty()) {
        lane.predecessors.push_back(ids.back());
        scenario_.lanes.back().successors.push_back(id);
      }
      scenario_.lanes.push_back(std::move(lane));
      ids.push_back(id);
      if (end == pts.size() - 1) break;
      begin = end - per;  // next segment starts at this one's end point
    }
    return ids;
  }

  /// Driving path through consecutive lanes.
  Polyline path(const std::vector<std::int64_t> & ids) const
  {
    std::vector<Vec2> pts;
    for (auto id : ids) {
      for (const auto & p : fine_.at(id)) {
        if (pts.empty() || (p - pts.back()).norm() > 1e-9) pts.push_back(p);
      }
    }
    return Polyline(std::move(pts));
  }

  LanePolyline & lane(std::int64_t id)
  {
    for (auto & l : scenario_.lanes) {
      if (l.id == id) return l;
    }
    throw std::logic_error("missing lane");
  }

  void pair_neighbors(const std::vector<std::int64_t> & right, const std::vector<std::int64_t> & left)
  {
    for (std::size_t i = 0; i < std::min(right.size(), left.size()); ++i) {
      lane(right[i]).left_neighbor = left[i];
      lane(left[i]).right_neighbor = right[i];
    }
  }

  void add_track(const std::string & id, AgentType type, TrackCategory category, const Motion & m)
  {
    AgentTrack track;
    track.id = id;
    track.type = type;
    track.category = category;
    const std::size_t total = layout_.observed + layout_.future;
    constexpr double h = 1e-4;
    for (std::size_t k = 0; k < total; ++k) {
      const double t = static_cast<double>(k) * layout_.dt();
      AgentState st;
      st.position = m.position(t);
      const Vec2 ahead = m.position(t + h);
      const Vec2 behind = m.position(std::max(0.0, t - h));
      st.velocity = (ahead - behind) * (1.0 / (t >= h ? 2.0 * h : h + t));
      st.heading = st.velocity.norm() > 0.3 ? std::atan2(st.velocity.y, st.velocity.x) : m.rest_heading(t);
      st.observed = k < layout_.observed;
      track.states.push_back(st);
    }
    scenario_.tracks.push_back(std::move(track));
  }

  AgentType sample_vehicle_type()
  {
    const double u = rng_.uniform();
    if (u < 0.75) return AgentType::kVehicle;
    if (u < 0.85) return AgentType::kBus;
    if (u < 0.95) return AgentType::kCyclist;
    return AgentType::kMotorcyclist;
  }

  TrackCategory sample_category()
  {
    const double u = rng_.uniform();
    if (u < 0.5) return TrackCategory::kScored;
    if (u < 0.85) return TrackCategory::kUnscored;
    return TrackCategory::kFragment;
  }

  SpeedProfile sample_profile(double v0, double v_max)
  {
    const double u = rng_.uniform();
    if (u < 0.4) return SpeedProfile::constant(v0);
    if (u < 0.7) {
      return SpeedProfile::accelerate(v0, rng_.uniform(0.0, 6.0), rng_.uniform(0.5, 1.5), std::max(v0, v_max));
    }
    return SpeedProfile::decelerate_to_stop(v0, rng_.uniform(2.0, 8.0), rng_.uniform(1.0, 2.5));
  }

  Scenario finish(const SyntheticOptions & options)
  {
    if (options.random_pose) {
      const double theta = rng_.uniform(-kPi, kPi);
      const Vec2 shift{rng_.uniform(-300.0, 300.0), rng_.uniform(-300.0, 300.0)};
      for (auto & l : scenario_.lanes) {
        for (auto & p : l.centerline) p = rotate(p, theta) + shift;
      }
      for (auto & t : scenario_.tracks) {
        for (auto & s : t.states) {
          s.position = rotate(s.position, theta) + shift;
          s.velocity = rotate(s.velocity, theta);
          s.heading = wrap_angle(s.heading + theta);
        }
      }
    }
    validate(scenario_);
    return std::move(scenario_);
  }

private:
  Rng rng_;
  TimestepLayout layout_;
  Scenario scenario_;
  std::map<std::int64_t, std::vector<Vec2>> fine_;
};

std::string agent_id(std::size_t i) { return i == 0 ? "focal" : "agent_" + std::to_string(i); }

/// Pedestrian crossing a road at `at` along `across`, starting `from` meters before the
/// road axis.
Motion crossing(const Vec2 & at, const Vec2 & across, double from, double speed)
{
  Motion m;
  m.walking = true;
  m.direction = across;
  m.origin = at - across * from;
  m.walk_speed = speed;
  return m;
}


constexpr double kStraightLength = 300.0;

struct TwoLaneRoad
{
  std::vector<std::int64_t> right;
  std::vector<std::int64_t> left;
};

TwoLaneRoad add_straight_road(Builder & b)
{
  TwoLaneRoad road;
  road.right = b.add_chain(
    [](double s) { return Vec2{s, 0.0}; }, kStraightLength, 2.0, 60.0, 1, MarkType::kDashed, MarkType::kSolid);
  road.left = b.add_chain(
    [](double s) { return Vec2{s, kLaneWidth}; }, kStraightLength, 2.0, 60.0, 101, MarkType::kSolid, MarkType::kDashed);
  b.pair_neighbors(road.right, road.left);
  return road;
}

/// Adds non-focal agents that follow one of the two lanes of a road, or cross it.
void add_road_traffic(
  Builder & b, const TwoLaneRoad & road, std::size_t n_agents,
  bool focal_on_left, double focal_s0, double s_range, double v_max,
  const std::function<std::pair<Vec2, Vec2>(double)> & crossing_at)
{
  Rng & rng = b.rng();
  const Polyline right = b.path(road.right);
  const Polyline left = b.path(road.left);
  for (std::size_t i = 1; i < n_agents; ++i) {
    const TrackCategory category = b.sample_category();
    if (rng.uniform() < 0.2) {
      const auto [at, across] = crossing_at(rng.uniform(0.1 * s_range, s_range));
      b.add_track(agent_id(i), AgentType::kPedestrian, category,
        crossing(at, across, rng.uniform(4.0, 9.0), rng.uniform(1.0, 1.6)));
      continue;
    }
    const bool on_left = rng.uniform() < 0.5;
    Motion m;
    m.path = on_left ? left : right;
    m.s0 = rng.uniform(0.0, s_range);
    for (int tries = 0; tries < 16 && on_left == focal_on_left && std::abs(m.s0 - focal_s0) < 8.0; ++tries) {
      m.s0 = rng.uniform(0.0, s_range);
    }
    const AgentType type = b.sample_vehicle_type();
    const double cap = type == AgentType::kCyclist ? std::min(v_max, 7.0) : v_max;
    m.speed = b.sample_profile(rng.uniform(0.5 * cap, cap), cap + 2.0);
    if (rng.uniform() < 0.3) {
      m.lc_start = rng.uniform(0.5, 7.0);
      m.lc_duration = rng.uniform(3.0, 5.0);
      m.lc_offset = on_left ? -kLaneWidth : kLaneWidth;
    }
    b.add_track(agent_id(i), type, category, m);
  }
}

Scenario straight_scene(std::size_t n_agents, std::uint64_t seed, const SyntheticOptions & options)
{
  Builder b(seed, options, "straight_" + std::to_string(seed));
  const TwoLaneRoad road = add_straight_road(b);
  Rng & rng = b.rng();

  const bool focal_on_left = rng.uniform() < 0.5;
  Motion focal;
  focal.path = b.path(focal_on_left ? road.left : road.right);
  focal.s0 = rng.uniform(10.0, 30.0);
  focal.speed = b.sample_profile(rng.uniform(5.0, 15.0), 18.0);
  b.add_track(agent_id(0), AgentType::kVehicle, TrackCategory::kFocal, focal);

  add_road_traffic(b, road, n_agents, focal_on_left, focal.s0, 120.0, 15.0,
    [](double x) { return std::make_pair(Vec2{x, 0.5 * kLaneWidth}, Vec2{0.0, 1.0}); });
  return b.finish(options);
}

Scenario curve_scene(std::size_t n_agents, std::uint64_t seed, const SyntheticOptions & options)
{
  Builder b(seed, options, "curve_" + std::to_string(seed));
  Rng & rng = b.rng();
  const double r_inner = rng.uniform(20.0, 76.5);
  const bool left_turn = rng.uniform() < 0.5;
  // speeds are sized for 1.5 pi of travel; lanes extend further so nobody runs off the end
  const double span = 1.5 * kPi;
  const double lane_span = 1.9 * kPi;

  // left lane is at +lane width along the left normal in both turn directions
  const double r_left = left_turn ? r_inner : r_inner + kLaneWidth;
  const double r_right = left_turn ? r_inner + kLaneWidth : r_inner;
  // both lanes start at x = 0 heading +x around a common center
  const double cy = left_turn ? r_left : -r_right;
  const auto concentric = [&](double radius) {
    return [left_turn, radius, cy](double s) {
      const double phi = left_turn ? -0.5 * kPi + s / radius : 0.5 * kPi - s / radius;
      return Vec2{radius * std::cos(phi), cy + radius * std::sin(phi)};
    };
  };
  TwoLaneRoad road;
  road.right = b.add_chain(concentric(r_right), lane_span * r_right, 1.0, 40.0, 1, MarkType::kDashed, MarkType::kSolid);
  road.left = b.add_chain(concentric(r_left), lane_span * r_left, 1.0, 40.0, 101, MarkType::kSolid, MarkType::kDashed);
  b.pair_neighbors(road.right, road.left);

  const bool focal_on_left = rng.uniform() < 0.5;
  Motion focal;
  focal.path = b.path(focal_on_left ? road.left : road.right);
  focal.s0 = rng.uniform(5.0, 15.0);
  const double horizon = 11.0;
  const double v_max = std::min({14.0, std::sqrt(2.5 * r_inner), (span * r_inner - 20.0) / (horizon + 2.0)});
  focal.speed = b.sample_profile(rng.uniform(0.5 * v_max, v_max), v_max);
  b.add_track(agent_id(0), AgentType::kVehicle, TrackCategory::kFocal, focal);

  add_road_traffic(b, road, n_agents, focal_on_left, focal.s0, 0.4 * span * r_inner, v_max,
    [&](double s) {
      const Vec2 d = focal.path.smooth_direction(s, 1.0);
      const Vec2 n = left_normal(d);
      return std::make_pair(focal.path.point_at(s) + n * (focal_on_left ? -0.5 : 0.5) * kLaneWidth, n);
    });
  return b.finish(options);
}

/// Four-way junction. Arm k points along heading k * 90 deg from the center.
class Junction
{
public:
  static constexpr double kInner = 22.0;
  static constexpr double kOuter = 90.0;

  explicit Junction(Builder & b) : b_(b)
  {
    for (int k = 0; k < 4; ++k) {
      const Vec2 d = dir(k);
      const Vec2 out_side = rotate(d, -0.5 * kPi) * (0.5 * kLaneWidth);  // right of outbound travel
      const Vec2 in_side = out_side * -1.0;
      inbound_[k] = b.add_chain(
        [=](double s) { return d * (kOuter - s) + in_side; }, kOuter - kInner, 2.0, 40.0,
        1000 + 10 * k, MarkType::kDashed, MarkType::kSolid);
      outbound_[k] = b.add_chain(
        [=](double s) { return d * (kInner + s) + out_side; }, kOuter - kInner, 2.0, 40.0,
        2000 + 10 * k, MarkType::kDashed, MarkType::kSolid);
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        const Vec2 p0 = end_point(inbound_[i].back());
        const Vec2 p3 = b.lane(outbound_[j].front()).centerline.front();
        const Vec2 t0 = dir(i) * -1.0;
        const Vec2 t3 = dir(j);
        const double c = 0.4 * (p3 - p0).norm();
        const Vec2 p1 = p0 + t0 * c;
        const Vec2 p2 = p3 - t3 * c;
        std::vector<Vec2> pts;
        for (int q = 0; q <= 1000; ++q) {
          const double u = q / 1000.0;
          const double w = 1.0 - u;
          pts.push_back(p0 * (w * w * w) + p1 * (3 * w * w * u) + p2 * (3 * w * u * u) + p3 * (u * u * u));
        }
        const Polyline curve(pts);
        const std::int64_t id = 3000 + 10 * i + j;
        b.add_chain([&](double s) { return curve.point_at(s); }, curve.length(), 1.0, 1000.0, id,
          MarkType::kNone, MarkType::kNone, true);
        b.lane(id).predecessors.push_back(inbound_[i].back());
        b.lane(inbound_[i].back()).successors.push_back(id);
        b.lane(id).successors.push_back(outbound_[j].front());
        b.lane(outbound_[j].front()).predecessors.push_back(id);
      }
    }
  }

  static Vec2 dir(int k) { return unit_from_heading(0.5 * kPi * k); }

  Polyline route(int from, int to) const
  {
    std::vector<std::int64_t> ids = inbound_[from];
    ids.push_back(3000 + 10 * from + to);
    ids.insert(ids.end(), outbound_[to].begin(), outbound_[to].end());
    return b_.path(ids);
  }

private:
  Vec2 end_point(std::int64_t id) { return b_.lane(id).centerline.back(); }

  Builder & b_;
  std::array<std::vector<std::int64_t>, 4> inbound_;
  std::array<std::vector<std::int64_t>, 4> outbound_;
};

Scenario intersection_scene(std::size_t n_agents, std::uint64_t seed, const SyntheticOptions & options)
{
  Builder b(seed, options, "intersection_" + std::to_string(seed));
  const Junction junction(b);
  Rng & rng = b.rng();

  const auto random_exit = [&](int from) { return (from + 1 + static_cast<int>(rng.index(3))) % 4; };
  const int focal_arm = static_cast<int>(rng.index(4));
  Motion focal;
  focal.path = junction.route(focal_arm, random_exit(focal_arm));
  focal.s0 = rng.uniform(5.0, 40.0);
  focal.speed = b.sample_profile(rng.uniform(3.0, 6.0), 6.5);
  b.add_track(agent_id(0), AgentType::kVehicle, TrackCategory::kFocal, focal);

  for (std::size_t i = 1; i < n_agents; ++i) {
    const TrackCategory category = b.sample_category();
    if (rng.uniform() < 0.2) {
      const int k = static_cast<int>(rng.index(4));
      const Vec2 across = rotate(Junction::dir(k), 0.5 * kPi) * (rng.uniform() < 0.5 ? 1.0 : -1.0);
      b.add_track(agent_id(i), AgentType::kPedestrian, category,
        crossing(Junction::dir(k) * (Junction::kInner + 3.0), across, rng.uniform(4.0, 9.0), rng.uniform(1.0, 1.6)));
      continue;
    }
    const int arm = static_cast<int>(rng.index(4));
    Motion m;
    m.path = junction.route(arm, random_exit(arm));
    m.s0 = rng.uniform(0.0, 70.0);
    for (int tries = 0; tries < 16 && arm == focal_arm && std::abs(m.s0 - focal.s0) < 8.0; ++tries) {
      m.s0 = rng.uniform(0.0, 70.0);
    }
    const AgentType type = b.sample_vehicle_type();
    const double cap = type == AgentType::kCyclist ? 5.0 : 6.0;
    m.speed = b.sample_profile(rng.uniform(0.4 * cap, cap), 6.5);
    b.add_track(agent_id(i), type, category, m);
  }
  return b.finish(options);
}

}  // namespace

Scenario generate_synthetic(
  ScenarioKind kind, std::size_t n_agents, std::uint64_t seed, const SyntheticOptions & options)
{
  if (n_agents < 1) throw std::invalid_argument("generate_synthetic: n_agents must be at least 1");
  switch (kind) {
    case ScenarioKind::kStraight:
      return straight_scene(n_agents, seed, options);
    case ScenarioKind::kCurve:
      return curve_scene(n_agents, seed, options);
    case ScenarioKind::kIntersection:
      return intersection_scene(n_agents, seed, options);
  }
  throw std::invalid_argument("generate_synthetic: unknown kind");
}

std::vector<Scenario> generate_dataset(
  std::size_t count, std::size_t n_agents, std::uint64_t seed, const SyntheticOptions & options)
{
  static constexpr ScenarioKind kKinds[] = {ScenarioKind::kStraight, ScenarioKind::kCurve, ScenarioKind::kIntersection};
  std::vector<Scenario> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(generate_synthetic(kKinds[i % 3], n_agents, seed * 1000003ULL + i, options));
  }
  return out;
}

Scenario generate_crossing_scene(std::uint64_t seed, const SyntheticOptions & options)
{
  Builder b(seed, options, "crossing_" + std::to_string(seed));
  const TwoLaneRoad road = add_straight_road(b);
  Rng & rng = b.rng();

  // brake from v0 at rate 2 to stop about 6 m short of the crossing
  const double v0 = rng.uniform(7.0, 9.0);
  const double s0 = 20.0;
  const double crossing_x = s0 + 60.0;
  const double brake = 2.0;
  const double t_brake = std::max(0.0, (crossing_x - 6.0 - s0 - v0 * v0 / (2.0 * brake)) / v0);
  Motion focal;
  focal.path = b.path(road.right);
  focal.s0 = s0;
  focal.speed = SpeedProfile::decelerate_to_stop(v0, t_brake, brake);
  b.add_track("focal", AgentType::kVehicle, TrackCategory::kFocal, focal);

  // starts on the shoulder and is inside the focal lane for the whole window
  b.add_track("ped_ahead", AgentType::kPedestrian, TrackCategory::kScored,
    crossing(Vec2{crossing_x, 0.0}, Vec2{0.0, 1.0}, 2.5, 0.4));
  b.add_track("ped_behind", AgentType::kPedestrian, TrackCategory::kScored,
    crossing(Vec2{s0 - 55.0, 0.0}, Vec2{0.0, 1.0}, 2.5, 0.4));
  return b.finish(options);
}

}  // namespace hgat
