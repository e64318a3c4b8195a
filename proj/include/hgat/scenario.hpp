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
#ifndef HGAT__SCENARIO_HPP_
#define HGAT__SCENARIO_HPP_

#include "hgat/geometry.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgat
{

inline constexpr int kScenarioSchemaVersion = 1;

enum class MarkType { kDashed, kSolid, kNone };
enum class AgentType { kVehicle, kPedestrian, kBus, kCyclist, kMotorcyclist };
enum class TrackCategory { kFocal, kScored, kUnscored, kFragment };

inline constexpr std::size_t kAgentTypeCount = 5;
inline constexpr std::size_t kMarkTypeCount = 3;

const char * to_string(MarkType m);
const char * to_string(AgentType t);
const char * to_string(TrackCategory c);
MarkType mark_type_from_string(const std::string & s);
AgentType agent_type_from_string(const std::string & s);
TrackCategory track_category_from_string(const std::string & s);

/// Pedestrians are the only agents not bound to lane orientation.
inline bool is_vehicle_like(AgentType t) { return t != AgentType::kPedestrian; }

struct LanePolyline
{
  std::int64_t id = 0;
  std::vector<Vec2> centerline;
  std::vector<double> left_dist;
  std::vector<double> right_dist;
  MarkType left_mark = MarkType::kDashed;
  MarkType right_mark = MarkType::kDashed;
  std::vector<std::int64_t> predecessors;
  std::vector<std::int64_t> successors;
  std::optional<std::int64_t> left_neighbor;
  std::optional<std::int64_t> right_neighbor;
  bool is_intersection = false;

  bool operator==(const LanePolyline &) const = default;
};

struct AgentState
{
  Vec2 position;
  Vec2 velocity;
  double heading = 0.0;
  bool observed = false;

  bool operator==(const AgentState &) const = default;
};

struct AgentTrack
{
  std::string id;
  AgentType type = AgentType::kVehicle;
  TrackCategory category = TrackCategory::kUnscored;
  std::vector<AgentState> states;

  std::size_t observed_count() const;
  bool operator==(const AgentTrack &) const = default;
};

struct Scenario
{
  std::string id;
  double dt_s = 0.1;
  std::vector<LanePolyline> lanes;
  std::vector<AgentTrack> tracks;

  std::size_t observed_steps() const;
  std::size_t future_steps() const;
  std::size_t focal_index() const;
  const AgentTrack & focal() const { return tracks[focal_index()]; }
  const LanePolyline * find_lane(std::int64_t id) const;

  bool operator==(const Scenario &) const = default;
};

/// Observation / prediction window in steps, derived from the sampling rate.
struct TimestepLayout
{
  std::size_t observed = 50;
  std::size_t future = 60;
  double rate_hz = 10.0;

  double dt() const { return 1.0 / rate_hz; }
};

/// 5 s observed and 6 s future at `rate_hz`; the rate must be positive and make both
/// windows a whole number of steps.
TimestepLayout timestep_layout(double rate_hz, double observed_s = 5.0, double future_s = 6.0);

class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};
class ScenarioParseError : public ScenarioError
{
public:
  using ScenarioError::ScenarioError;
};
class SchemaVersionError : public ScenarioError
{
public:
  using ScenarioError::ScenarioError;
};
class InvariantViolation : public ScenarioError
{
public:
  using ScenarioError::ScenarioError;
};

/// Throws InvariantViolation describing the first broken invariant.
void validate(const Scenario & scenario);

nlohmann::json to_json(const Scenario & scenario);
/// Parses and validates. Throws ScenarioParseError / SchemaVersionError / InvariantViolation.
Scenario scenario_from_json(const nlohmann::json & j);

Scenario load_scenario(const std::string & path);
void save_scenario(const Scenario & scenario, const std::string & path);
std::string dump_scenario(const Scenario & scenario);

}  // namespace hgat

#endif  // HGAT__SCENARIO_HPP_
