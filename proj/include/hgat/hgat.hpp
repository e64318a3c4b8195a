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
#ifndef HGAT__HGAT_HPP_
#define HGAT__HGAT_HPP_

#include "hgat/graph.hpp"
#include "hgat/parameters.hpp"

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace hgat
{

struct HgatLayout
{
  std::size_t dim = 64;
  std::size_t heads = 2;
  double slope = 0.2;

  std::size_t head_dim() const { return dim / heads; }
};

/// One feature matrix [n_t x D] per node type.
using NodeFeatures = std::array<Var, kNodeTypeCount>;

/// Attention weights of one layer, [E_r x H] per relation (empty when inactive).
struct LayerAttention
{
  std::size_t layer = 0;
  std::array<Tensor, kRelationCount> alpha;
};

struct AttentionRecord
{
  std::size_t layer = 0;
  std::size_t head = 0;
  Relation relation = Relation::kLaneLeft;
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  double alpha = 0.0;
};

/**
 * Registers one layer under `prefix`: per relation `.<rel>.self` [D x D],
 * `.<rel>.neighbor` [D x D], `.<rel>.edge` [F_r x D]; `.attention` [H x 3D/H] shared by all
 * relations; `.residual.<node type>` [D x D] for each updated node type. No biases.
 */
void add_hgat_layer(
  ParameterStore & store, const std::string & prefix, const HgatLayout & layout,
  const std::vector<Relation> & relations, Rng & rng,
  const std::vector<NodeType> & updated = {NodeType::kLane, NodeType::kStep, NodeType::kTrajectory});

/**
 * @brief Attention weights of the active relations.
 *
 * Per edge (j, r, i) and head h the logit is a^h . LeakyReLU([W_s v_i | W_n v_j | W_e e]),
 * and the softmax runs over all active edges that share a target, across relations.
 * Entries of inactive relations are invalid Vars.
 */
std::array<Var, kRelationCount> attention_scores(
  Context & ctx, const std::string & prefix, const HgatLayout & layout, const HeteroGraph & graph,
  const NodeFeatures & x, const std::vector<Relation> & active);

/// v_i' = LeakyReLU(W_res,t v_i + sum over incident active edges of alpha * (W_n v_j + W_e e)).
/// Node types without a residual matrix pass through unchanged.
NodeFeatures hgat_layer(
  Context & ctx, const std::string & prefix, const HgatLayout & layout, const HeteroGraph & graph,
  const NodeFeatures & x, const std::vector<Relation> & active, LayerAttention * attention = nullptr);

std::vector<AttentionRecord> attention_records(const HeteroGraph & graph, const std::vector<LayerAttention> & layers);

/// One JSON object per line: {layer, head, relation, src_type, src, dst_type, dst, alpha}.
void write_attention_jsonl(std::ostream & out, const std::vector<AttentionRecord> & records);

}  // namespace hgat

#endif  // HGAT__HGAT_HPP_
