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
#ifndef HGAT__SYNTHETIC_HPP_
#define HGAT__SYNTHETIC_HPP_

#include "hgat/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hgat
{

enum class ScenarioKind { kStraight, kCurve, kIntersection };

const char * to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string & s);

struct SyntheticOptions
{
  double rate_hz = 10.0;
  /// Apply a random rigid transform to the whole scene.
  bool random_pose = true;
};

/**
 * @brief Deterministic synthetic scenario.
 *
 * - straight: two parallel same-direction lanes, chained 60 m segments.
 * - curve: two concentric constant-curvature lanes (inner radius 20-76.5 m).
 * - intersection: four-way junction with inbound/outbound lanes per arm and
 *   straight/left/right connector lanes flagged as intersection lanes.
 *
 * Vehicles follow centerlines with constant-speed, accelerating, or decelerate-and-stop
 * profiles; non-focal vehicles may change into a neighbor lane. Pedestrians walk
 * straight crossing paths. The focal track never changes lanes.
 */
Scenario generate_synthetic(
  ScenarioKind kind, std::size_t n_agents, std::uint64_t seed, const SyntheticOptions & options = {});

/// Mixed-kind set: scenario i has kind i mod 3 and a seed derived from (seed, i).
std::vector<Scenario> generate_dataset(
  std::size_t count, std::size_t n_agents, std::uint64_t seed, const SyntheticOptions & options = {});

/**
 * @brief Straight-road scene for attention inspection.
 *
 * The focal vehicle brakes to a stop in front of a pedestrian crossing its lane ahead;
 * a second pedestrian crosses far behind (within step-step range).
 */
Scenario generate_crossing_scene(std::uint64_t seed, const SyntheticOptions & options = {});

}  // namespace hgat

#endif  // HGAT__SYNTHETIC_HPP_
