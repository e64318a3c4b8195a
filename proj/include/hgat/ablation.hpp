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
#ifndef HGAT__ABLATION_HPP_
#define HGAT__ABLATION_HPP_

#include "hgat/config.hpp"
#include "hgat/metrics.hpp"
#include "hgat/scenario.hpp"

#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgat
{

class AblationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

using RemovalSet = std::set<Relation>;

/// Families that may be dropped from the scene graph: lane_to_step, step_to_lane,
/// step_to_step and traj_to_step. The accumulating step_to_traj direction stays.
const std::vector<Relation> & removable_relations();

/// Throws AblationError for any relation outside the removable families.
void check_removal_set(const RemovalSet & removed);

/// Comma-separated relation names; empty text or "none" is the empty set.
RemovalSet parse_removal_set(const std::string & text);

/// "none" or the names joined by '+', in relation order.
std::string removal_label(const RemovalSet & removed);

/// Full graph, each family alone, and all four together.
std::vector<RemovalSet> standard_removal_sets();

struct AblationRow
{
  RemovalSet removed;
  MetricRow k1;
  MetricRow k6;
  double final_loss = 0.0;
};

/**
 * @brief Trains one end-to-end model per removal set on graphs built without those
 * families and evaluates it on .
 *
 * Every configuration starts from the same seed. The refinement graph is built from
 * predicted coordinates and is never affected by the removal set.
 */
std::vector<AblationRow> ablate(
  const Config & config, const std::vector<Scenario> & train, const std::vector<Scenario> & eval,
  const std::vector<RemovalSet> & sets);

void write_ablation_csv(std::ostream & out, const std::vector<AblationRow> & rows);

}  // namespace hgat

#endif  // HGAT__ABLATION_HPP_
