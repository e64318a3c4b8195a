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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hgat/ablation.hpp"
#include "hgat/model.hpp"
#include "hgat/synthetic.hpp"

#include <sstream>

using namespace hgat;

namespace
{

std::vector<Scenario> scenes(std::size_t n, std::uint64_t seed)
{
  SyntheticOptions o;
  o.rate_hz = 2;
  return generate_dataset(n, 3, seed, o);
}

Config tiny()
{
  Config c;
  c.model.dim = 8;
  c.model.map_layers = 1;
  c.model.scene_layers = 1;
  c.model.refine_iterations = 1;
  c.train.steps = 2;
  c.train.batch_size = 2;
  return c;
}

}  // namespace

TEST_CASE("removal sets parse, label and reject lane-lane families")
{
  CHECK(parse_removal_set("").empty());
  CHECK(parse_removal_set("none").empty());
  const RemovalSet s = parse_removal_set("traj_to_step,lane_to_step");
  CHECK(s == RemovalSet{Relation::kLaneToStep, Relation::kTrajToStep});
  CHECK(removal_label(s) == "lane_to_step+traj_to_step");
  CHECK(removal_label({}) == "none");
  CHECK_THROWS_AS(parse_removal_set("lane_succ"), AblationError);
  CHECK_THROWS_AS(parse_removal_set("step_to_traj"), AblationError);
  CHECK_THROWS_AS(parse_removal_set("bogus"), AblationError);
  CHECK_THROWS_AS(check_removal_set({Relation::kLaneLeft}), AblationError);
  CHECK(standard_removal_sets().size() == 6);
}

TEST_CASE("removed families are absent and the rest of the graph is unchanged")
{
  const auto data = scenes(6, 21);
  for (const auto & removed : standard_removal_sets()) {
    GraphConfig g;
    g.removed = removed;
    for (const auto & s : data) {
      const HeteroGraph full = assemble_scene_graph(s);
      const HeteroGraph cut = assemble_scene_graph(s, g);
      for (auto r : kAllRelations) {
        if (removed.count(r)) {
          CHECK(cut.edge(r).size() == 0);
        } else {
          CHECK(cut.edge(r).src == full.edge(r).src);
          CHECK(cut.edge(r).dst == full.edge(r).dst);
        }
      }
      // accumulation stays even when distribution is removed
      CHECK(cut.edge(Relation::kStepToTraj).size() == full.steps().size());
    }
  }
}

TEST_CASE("refinement edges do not depend on the removal set")
{
  const auto data = scenes(2, 4);
  const Config c = tiny();
  std::vector<std::vector<EdgeTable>> seen;
  for (const auto & removed : standard_removal_sets()) {
    GraphConfig g;
    g.removed = removed;
    const HeteroGraph graph = assemble_scene_graph(data[0], g);
    Model m = create_model(c.model, graph.future_steps(), 5);
    Tape tape;
    Context ctx(tape, m.store, false);
    ForwardOptions fo;
    fo.record_refinement_edges = true;
    const ModelOutput out = run_model(ctx, m, graph, fo);
    REQUIRE(out.refinement_edges.size() == 1);
    // zero-initialized coordinate heads start every mode at the last observed position
    const std::size_t per_step = std::min<std::size_t>(5, graph.lanes().size());
    CHECK(out.refinement_edges[0].size() == per_step * out.proposals.agents * out.proposals.modes * out.proposals.future_steps);
    seen.push_back(out.refinement_edges);
  }
  for (const auto & e : seen) {
    CHECK(e[0].src == seen[0][0].src);
    CHECK(e[0].dst == seen[0][0].dst);
  }
}

TEST_CASE("ablate emits one row per removal set")
{
  const auto train = scenes(2, 8);
  const auto eval = scenes(1, 9);
  const std::vector<RemovalSet> sets{{}, {Relation::kStepToStep}};
  const auto rows = ablate(tiny(), train, eval, sets);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].removed == sets[1]);
  CHECK(rows[0].k6.n == 1);
  CHECK(rows[0].k6.min_fde <= rows[0].k1.min_fde);
  std::ostringstream csv;
  write_ablation_csv(csv, rows);
  const std::string text = csv.str();
  CHECK(text.find("\nnone,") != std::string::npos);
  CHECK(text.find("\nstep_to_step,") != std::string::npos);
  CHECK_THROWS_AS(ablate(tiny(), train, eval, {{Relation::kLanePred}}), AblationError);

  // the empty removal set is the plain e2e pipeline
  const auto again = ablate(tiny(), train, eval, {{}});
  CHECK(again[0].k6.brier_min_fde == rows[0].k6.brier_min_fde);
}
