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
#include "hgat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hgat
{

std::vector<std::size_t> top_k_modes(const PredictionSet & p, std::size_t agent, std::size_t k)
{
  if (k == 0 || k > p.modes) {
    throw std::invalid_argument("K=" + std::to_string(k) + " but only " + std::to_string(p.modes) + " modes are predicted");
  }
  std::vector<std::size_t> order(p.modes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.confidence(agent, a) > p.confidence(agent, b);
  });
  order.resize(k);
  return order;
}

AgentMetrics agent_metrics(const PredictionSet & p, std::size_t agent, const std::vector<Vec2> & truth, std::size_t k)
{
  if (truth.size() != p.future_steps) throw std::invalid_argument("ground truth does not cover the prediction horizon");
  AgentMetrics m;
  m.min_ade = std::numeric_limits<double>::infinity();
  m.min_fde = std::numeric_limits<double>::infinity();
  const std::size_t last = p.future_steps - 1;
  for (std::size_t mode : top_k_modes(p, agent, k)) {
    double ade = 0.0;
    for (std::size_t t = 0; t < p.future_steps; ++t) ade += (p.point(agent, mode, t) - truth[t]).norm();
    ade /= static_cast<double>(p.future_steps);
    const double fde = (p.point(agent, mode, last) - truth[last]).norm();
    m.min_ade = std::min(m.min_ade, ade);
    if (fde < m.min_fde) {
      m.min_fde = fde;
      m.best = mode;
    }
  }
  m.miss = m.min_fde > kMissThreshold;
  const double c = p.confidence(agent, m.best);
  m.brier_min_fde = m.min_fde + (1.0 - c) * (1.0 - c);
  return m;
}

MetricRow evaluate(const std::vector<EvalSample> & samples, std::size_t k)
{
  MetricRow row;
  row.k = k;
  for (const auto & s : samples) {
    if (s.agents.size() != s.predictions.agents) throw std::invalid_argument("evaluate: agents and predictions disagree");
    for (std::size_t a = 0; a < s.agents.size(); ++a) {
      if (s.agents[a].category != TrackCategory::kFocal) continue;
      const AgentMetrics m = agent_metrics(s.predictions, a, s.agents[a].future, k);
      row.min_ade += m.min_ade;
      row.min_fde += m.min_fde;
      row.miss_rate += m.miss ? 1.0 : 0.0;
      row.brier_min_fde += m.brier_min_fde;
      ++row.n;
    }
  }
  if (row.n > 0) {
    const double n = static_cast<double>(row.n);
    row.min_ade /= n;
    row.min_fde /= n;
    row.miss_rate /= n;
    row.brier_min_fde /= n;
  }
  return row;
}

void write_metrics_csv(std::ostream & out, const std::vector<MetricRow> & rows)
{
  out << "K,minADE,minFDE,MR,brier_minFDE,n\n" << std::setprecision(17);
  for (const auto & r : rows) {
    out << r.k << ',' << r.min_ade << ',' << r.min_fde << ',' << r.miss_rate << ',' << r.brier_min_fde << ',' << r.n << '\n';
  }
}

double mean_lane_distance(const PredictionSet & p, const std::vector<AgentInfo> & agents, const std::vector<Polyline> & centerlines)
{
  if (centerlines.empty()) throw std::invalid_argument("mean_lane_distance: no lane centerlines");
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (agents[a].category != TrackCategory::kFocal) continue;
    for (std::size_t k = 0; k < p.modes; ++k) {
      for (std::size_t t = 0; t < p.future_steps; ++t) {
        const Vec2 q = p.point(a, k, t);
        double best = std::numeric_limits<double>::infinity();
        for (const auto & c : centerlines) best = std::min(best, c.distance_to(q));
        total += best;
        ++count;
      }
    }
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

std::vector<Polyline> local_centerlines(const Scenario & scenario, const Frame & frame)
{
  std::vector<Polyline> out;
  out.reserve(scenario.lanes.size());
  for (const auto & lane : scenario.lanes) {
    std::vector<Vec2> pts;
    pts.reserve(lane.centerline.size());
    for (const auto & p : lane.centerline) pts.push_back(frame.to_local(p));
    out.emplace_back(std::move(pts));
  }
  return out;
}

}  // namespace hgat
