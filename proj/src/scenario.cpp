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
#include "hgat/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hgat
{

using nlohmann::json;

const char * to_string(MarkType m)
{
  switch (m) {
    case MarkType::kDashed:
      return "dashed";
    case MarkType::kSolid:
      return "solid";
    case MarkType::kNone:
      return "none";
  }
  return "?";
}

const char * to_string(AgentType t)
{
  switch (t) {
    case AgentType::kVehicle:
      return "vehicle";
    case AgentType::kPedestrian:
      return "pedestrian";
    case AgentType::kBus:
      return "bus";
    case AgentType::kCyclist:
      return "cyclist";
    case AgentType::kMotorcyclist:
      return "motorcyclist";
  }
  return "?";
}

const char * to_string(TrackCategory c)
{
  switch (c) {
    case TrackCategory::kFocal:
      return "focal";
    case TrackCategory::kScored:
      return "scored";
    case TrackCategory::kUnscored:
      return "unscored";
    case TrackCategory::kFragment:
      return "fragment";
  }
  return "?";
}

MarkType mark_type_from_string(const std::string & s)
{
  for (auto m : {MarkType::kDashed, MarkType::kSolid, MarkType::kNone}) {
    if (s == to_string(m)) return m;
  }
  throw ScenarioParseError("unknown lane marking type '" + s + "'");
}

AgentType agent_type_from_string(const std::string & s)
{
  for (auto t : {AgentType::kVehicle, AgentType::kPedestrian, AgentType::kBus, AgentType::kCyclist,
                 AgentType::kMotorcyclist}) {
    if (s == to_string(t)) return t;
  }
  throw ScenarioParseError("unknown agent type '" + s + "'");
}

TrackCategory track_category_from_string(const std::string & s)
{
  for (auto c : {TrackCategory::kFocal, TrackCategory::kScored, TrackCategory::kUnscored,
                 TrackCategory::kFragment}) {
    if (s == to_string(c)) return c;
  }
  throw ScenarioParseError("unknown track category '" + s + "'");
}

std::size_t AgentTrack::observed_count() const
{
  std::size_t n = 0;
  while (n < states.size() && states[n].observed) ++n;
  return n;
}

std::size_t Scenario::focal_index() const
{
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (tracks[i].category == TrackCategory::kFocal) return i;
  }
  throw InvariantViolation("scenario " + id + " has no focal track");
}

std::size_t Scenario::observed_steps() const { return focal().observed_count(); }

std::size_t Scenario::future_steps() const
{
  return focal().states.size() - focal().observed_count();
}

const LanePolyline * Scenario::find_lane(std::int64_t lane_id) const
{
  for (const auto & l : lanes) {
    if (l.id == lane_id) return &l;
  }
  return nullptr;
}

TimestepLayout timestep_layout(double rate_hz, double observed_s, double future_s)
{
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw std::invalid_argument("timestep rate must be positive, got " + std::to_string(rate_hz));
  }
  const double obs = observed_s * rate_hz;
  const double fut = future_s * rate_hz;
  if (std::abs(obs - std::round(obs)) > 1e-9 || std::abs(fut - std::round(fut)) > 1e-9 || std::round(obs) < 1 ||
      std::round(fut) < 1) {
    throw std::invalid_argument(
      "rate " + std::to_string(rate_hz) + " Hz does not divide the observation/prediction windows");
  }
  return {static_cast<std::size_t>(std::round(obs)), static_cast<std::size_t>(std::round(fut)), rate_hz};
}

void validate(const Scenario & s)
{
  auto fail = [&](const std::string & what) { throw InvariantViolation("scenario " + s.id + ": " + what); };
  if (!(s.dt_s > 0.0)) fail("timestep duration must be positive");
  std::set<std::int64_t> lane_ids;
  for (const auto & l : s.lanes) {
    if (!lane_ids.insert(l.id).second) fail("duplicate lane id " + std::to_string(l.id));
  }
  for (const auto & l : s.lanes) {
    const std::string lane = "lane " + std::to_string(l.id);
    if (l.centerline.size() < 2) fail(lane + " has fewer than 2 centerline points");
    for (std::size_t i = 1; i < l.centerline.size(); ++i) {
      if ((l.centerline[i] - l.centerline[i - 1]).norm() <= 0.0) fail(lane + " repeats a centerline point");
    }
    if (l.left_dist.size() != l.centerline.size() || l.right_dist.size() != l.centerline.size()) {
      fail(lane + " marking distances do not match its centerline");
    }
    auto resolve = [&](std::int64_t ref, const char * what) {
      if (!lane_ids.count(ref)) fail(lane + " " + what + " " + std::to_string(ref) + " does not resolve");
    };
    for (auto r : l.predecessors) resolve(r, "predecessor");
    for (auto r : l.successors) resolve(r, "successor");
    if (l.left_neighbor) resolve(*l.left_neighbor, "left neighbor");
    if (l.right_neighbor) resolve(*l.right_neighbor, "right neighbor");
  }
  if (s.tracks.empty()) fail("no tracks");
  std::size_t focal = 0;
  std::set<std::string> track_ids;
  const std::size_t total = s.tracks.front().states.size();
  const std::size_t observed = s.tracks.front().observed_count();
  for (const auto & t : s.tracks) {
    if (!track_ids.insert(t.id).second) fail("duplicate track id " + t.id);
    if (t.category == TrackCategory::kFocal) ++focal;
    if (t.states.size() != total) fail("track " + t.id + " has a different number of timesteps");
    const std::size_t obs = t.observed_count();
    if (obs != observed) fail("track " + t.id + " has a different observation window");
    for (std::size_t k = obs; k < t.states.size(); ++k) {
      if (t.states[k].observed) fail("track " + t.id + " has observed flags after the observation window");
    }
  }
  if (focal != 1) fail("expected exactly one focal track, found " + std::to_string(focal));
  if (observed < 1) fail("focal track has no observed states");
  if (observed == total) fail("no future timesteps");
}

namespace
{

json vec_list(const std::vector<Vec2> & pts)
{
  json a = json::array();
  for (const auto & p : pts) a.push_back({p.x, p.y});
  return a;
}

template <typename T>
T field(const json & j, const char * key, const std::string & where)
{
  if (!j.contains(key)) throw ScenarioParseError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception & e) {
    throw ScenarioParseError(where + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

std::optional<std::int64_t> optional_id(const json & j, const char * key, const std::string & where)
{
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<std::int64_t>(j, key, where);
}

}  // namespace

json to_json(const Scenario & s)
{
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["id"] = s.id;
  j["dt_s"] = s.dt_s;
  json lanes = json::array();
  for (const auto & l : s.lanes) {
    json lj;
    lj["id"] = l.id;
    lj["centerline"] = vec_list(l.centerline);
    lj["left_dist"] = l.left_dist;
    lj["right_dist"] = l.right_dist;
    lj["left_mark"] = to_string(l.left_mark);
    lj["right_mark"] = to_string(l.right_mark);
    lj["predecessors"] = l.predecessors;
    lj["successors"] = l.successors;
    lj["left_neighbor"] = l.left_neighbor ? json(*l.left_neighbor) : json(nullptr);
    lj["right_neighbor"] = l.right_neighbor ? json(*l.right_neighbor) : json(nullptr);
    lj["is_intersection"] = l.is_intersection;
    lanes.push_back(std::move(lj));
  }
  j["lanes"] = std::move(lanes);
  json tracks = json::array();
  for (const auto & t : s.tracks) {
    json tj;
    tj["id"] = t.id;
    tj["type"] = to_string(t.type);
    tj["category"] = to_string(t.category);
    json states = json::array();
    for (const auto & st : t.states) {
      states.push_back(
        {{"x", st.position.x}, {"y", st.position.y}, {"vx", st.velocity.x}, {"vy", st.velocity.y},
         {"heading", st.heading}, {"observed", st.observed}});
    }
    tj["states"] = std::move(states);
    tracks.push_back(std::move(tj));
  }
  j["tracks"] = std::move(tracks);
  return j;
}

Scenario scenario_from_json(const json & j)
{
  if (!j.is_object()) throw ScenarioParseError("scenario document must be a JSON object");
  const int version = field<int>(j, "schema_version", "scenario");
  if (version != kScenarioSchemaVersion) {
    throw SchemaVersionError(
      "scenario schema version " + std::to_string(version) + " is not supported (expected " +
      std::to_string(kScenarioSchemaVersion) + ")");
  }
  Scenario s;
  s.id = field<std::string>(j, "id", "scenario");
  s.dt_s = field<double>(j, "dt_s", "scenario");
  const std::string where = "scenario " + s.id;
  for (const auto & lj : field<json>(j, "lanes", where)) {
    LanePolyline l;
    l.id = field<std::int64_t>(lj, "id", where + " lane");
    const std::string lw = where + " lane " + std::to_string(l.id);
    for (const auto & p : field<json>(lj, "centerline", lw)) {
      if (!p.is_array() || p.size() != 2) throw ScenarioParseError(lw + ": centerline points must be [x, y]");
      l.centerline.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    l.left_dist = field<std::vector<double>>(lj, "left_dist", lw);
    l.right_dist = field<std::vector<double>>(lj, "right_dist", lw);
    l.left_mark = mark_type_from_string(field<std::string>(lj, "left_mark", lw));
    l.right_mark = mark_type_from_string(field<std::string>(lj, "right_mark", lw));
    l.predecessors = field<std::vector<std::int64_t>>(lj, "predecessors", lw);
    l.successors = field<std::vector<std::int64_t>>(lj, "successors", lw);
    l.left_neighbor = optional_id(lj, "left_neighbor", lw);
    l.right_neighbor = optional_id(lj, "right_neighbor", lw);
    l.is_intersection = field<bool>(lj, "is_intersection", lw);
    s.lanes.push_back(std::move(l));
  }
  for (const auto & tj : field<json>(j, "tracks", where)) {
    AgentTrack t;
    t.id = field<std::string>(tj, "id", where + " track");
    const std::string tw = where + " track " + t.id;
    t.type = agent_type_from_string(field<std::string>(tj, "type", tw));
    t.category = track_category_from_string(field<std::string>(tj, "category", tw));
    for (const auto & sj : field<json>(tj, "states", tw)) {
      AgentState st;
      st.position = {field<double>(sj, "x", tw), field<double>(sj, "y", tw)};
      st.velocity = {field<double>(sj, "vx", tw), field<double>(sj, "vy", tw)};
      st.heading = field<double>(sj, "heading", tw);
      st.observed = field<bool>(sj, "observed", tw);
      t.states.push_back(st);
    }
    s.tracks.push_back(std::move(t));
  }
  validate(s);
  return s;
}

std::string dump_scenario(const Scenario & s) { return to_json(s).dump(1) + "\n"; }

Scenario load_scenario(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ScenarioParseError(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const Scenario & s, const std::string & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write scenario file " + path);
  out << dump_scenario(s);
  if (!out) throw std::runtime_error("failed writing scenario file " + path);
}

}  // namespace hgat
