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
#ifndef HGAT__METRICS_HPP_
#define HGAT__METRICS_HPP_

#include "hgat/forecaster.hpp"
#include "hgat/graph.hpp"

#include <ostream>
#include <vector>

namespace hgat
{

/// Predictions of one graph together with the agents they belong to.
struct EvalSample
{
  PredictionSet predictions;
  std::vector<AgentInfo> agents;
};

struct AgentMetrics
{
  double min_ade = 0.0;
  double min_fde = 0.0;
  bool miss = false;
  double brier_min_fde = 0.0;
  /// Mode achieving the minimum FDE.
  std::size_t best = 0;
};

struct MetricRow
{
  std::size_t k = 0;
  double min_ade = 0.0;
  double min_fde = 0.0;
  double miss_rate = 0.0;
  double brier_min_fde = 0.0;
  std::size_t n = 0;
};

constexpr double kMissThreshold = 2.0;

/// Modes ordered by confidence (descending, ties to the lower index), first k kept.
std::vector<std::size_t> top_k_modes(const PredictionSet & p, std::size_t agent, std::size_t k);

/// Metrics of one agent over its top-k modes. Throws std::invalid_argument when k exceeds
/// the available modes or the ground truth does not match the horizon.
AgentMetrics agent_metrics(const PredictionSet & p, std::size_t agent, const std::vector<Vec2> & truth, std::size_t k);

/// Means over focal agents.
MetricRow evaluate(const std::vector<EvalSample> & samples, std::size_t k);

/// Header K,minADE,minFDE,MR,brier_minFDE,n and one row per entry.
void write_metrics_csv(std::ostream & out, const std::vector<MetricRow> & rows);

/// Mean distance from every predicted point of the focal agents (all modes) to the
/// nearest lane centerline, with centerlines given in the same frame as the points.
double mean_lane_distance(const PredictionSet & p, const std::vector<AgentInfo> & agents, const std::vector<Polyline> & centerlines);

/// Lane centerlines of a scenario expressed in `frame`.
std::vector<Polyline> local_centerlines(const Scenario & scenario, const Frame & frame);

}  // namespace hgat

#endif  // HGAT__METRICS_HPP_
