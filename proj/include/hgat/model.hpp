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
#ifndef HGAT__MODEL_HPP_
#define HGAT__MODEL_HPP_

#include "hgat/config.hpp"
#include "hgat/encoders.hpp"
#include "hgat/forecaster.hpp"
#include "hgat/refinement.hpp"

#include <optional>

namespace hgat
{

/// Full predictor: encoders, per-type heads and the refinement module in one store.
struct Model
{
  ModelConfig config;
  std::size_t future_steps = 0;
  ParameterStore store;
  /// Whether outputs come from the refinement stage; cleared by training without it.
  bool use_refinement = true;

  EncoderLayout encoder_layout() const;
  ForecastLayout forecast_layout() const;
  RefineLayout refine_layout() const;
};

Model create_model(const ModelConfig & config, std::size_t future_steps, std::uint64_t seed);

struct ModelOutput
{
  EncodedScene encoded;
  Forecast proposals;
  std::optional<Forecast> refined;
  /// Dynamic lane edges of each refinement iteration, when requested.
  std::vector<EdgeTable> refinement_edges;

  /// Refined forecast when present, proposals otherwise.
  const Forecast & final() const { return refined ? *refined : proposals; }
};

struct ForwardOptions
{
  bool refine = true;
  bool record_attention = false;
  bool record_refinement_edges = false;
  /// Overrides the configured running-statistics momentum when positive.
  double bn_momentum = 0.0;
};

ModelOutput run_model(Context & ctx, const Model & model, const HeteroGraph & graph, const ForwardOptions & options = {});

/// Evaluation-mode predictions for one (possibly merged) graph.
PredictionSet predict(Model & model, const HeteroGraph & graph, bool refine = true);

}  // namespace hgat

#endif  // HGAT__MODEL_HPP_
