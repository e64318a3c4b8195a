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
#include "hgat/ablation.hpp"

#include "hgat/model.hpp"
#include "hgat/training.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hgat
{

const std::vector<Relation> & removable_relations()
{
  static const std::vector<Relation> r{
    Relation::kLaneToStep, Relation::kStepToLane, Relation::kStepToStep, Relation::kTrajToStep};
  return r;
}

void check_removal_set(const RemovalSet & removed)
{
  const auto & allowed = removable_relations();
  for (auto r : removed) {
    if (std::find(allowed.begin(), allowed.end(), r) == allowed.end()) {
      throw AblationError(std::string("edge family '") + to_string(r) + "' is not part of the ablation space");
    }
  }
}

RemovalSet parse_removal_set(const std::string & text)
{
  RemovalSet out;
  if (text.empty() || text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.insert(relation_from_string(item));
    } catch (const std::exception &) {
      throw AblationError("unknown edge family '" + item + "'");
    }
  }
  check_removal_set(out);
  return out;
}

std::string removal_label(const RemovalSet & removed)
{
  if (removed.empty()) return "none";
  std::string out;
  for (auto r : removed) out += (out.empty() ? "" : "+") + std::string(to_string(r));
  return out;
}

std::vector<RemovalSet> standard_removal_sets()
{
  std::vector<RemovalSet> sets{{}};
  for (auto r : removable_relations()) sets.push_back({r});
  sets.emplace_back(removable_relations().begin(), removable_relations().end());
  return sets;
}

namespace
{

std::vector<HeteroGraph> build(const std::vector<Scenario> & scenes, const GraphConfig & g)
{
  std::vector<HeteroGraph> out;
  out.reserve(scenes.size());
  for (const auto & s : scenes) out.push_back(assemble_scene_graph(s, g));
  return out;
}

}  // namespace

std::vector<AblationRow> ablate(
  const Config & config, const std::vector<Scenario> & train_set, const std::vector<Scenario> & eval_set,
  const std::vector<RemovalSet> & sets)
{
  if (train_set.empty()) throw std::invalid_argument("ablation needs training scenarios");
  if (eval_set.empty()) throw std::invalid_argument("ablation needs evaluation scenarios");
  for (const auto & s : sets) check_removal_set(s);

  std::vector<AblationRow> rows;
  for (const auto & removed : sets) {
    Config c = config;
    c.model.graph.removed = removed;
    const auto train_graphs = build(train_set, c.model.graph);
    const auto eval_graphs = build(eval_set, c.model.graph);
    Model model = create_model(c.model, train_graphs.front().future_steps(), c.train.seed);
    TrainOptions opt;
    opt.regime = Regime::kE2e;
    opt.config = c.train;
    const auto records = train(model, train_graphs, opt);

    std::vector<EvalSample> samples;
    samples.reserve(eval_graphs.size());
    for (const auto & g : eval_graphs) samples.push_back({predict(model, g, true), g.agents});
    AblationRow row;
    row.removed = removed;
    row.k1 = evaluate(samples, 1);
    row.k6 = evaluate(samples, std::min<std::size_t>(6, c.model.modes));
    row.final_loss = records.empty() ? 0.0 : records.back().total;
    rows.push_back(row);
  }
  return rows;
}

void write_ablation_csv(std::ostream & out, const std::vector<AblationRow> & rows)
{
  out << "removed,minADE_1,minFDE_1,MR_1,minADE_6,minFDE_6,MR_6,brier_minFDE_6,final_loss\n";
  out << std::setprecision(17);
  for (const auto & r : rows) {
    out << removal_label(r.removed) << ',' << r.k1.min_ade << ',' << r.k1.min_fde << ',' << r.k1.miss_rate << ','
        << r.k6.min_ade << ',' << r.k6.min_fde << ',' << r.k6.miss_rate << ',' << r.k6.brier_min_fde << ','
        << r.final_loss << '\n';
  }
}

}  // namespace hgat
