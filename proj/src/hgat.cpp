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
#include "hgat/hgat.hpp"

#include "hgat/nn.hpp"

#include "json.hpp"

namespace hgat
{

namespace
{

std::string relation_prefix(const std::string & prefix, Relation r) { return prefix + "." + to_string(r); }

void check_layout(const HgatLayout & layout)
{
  if (layout.heads == 0 || layout.dim % layout.heads != 0) {
    throw std::invalid_argument(
      "hgat: heads (" + std::to_string(layout.heads) + ") must divide the feature width (" + std::to_string(layout.dim) + ")");
  }
}

struct RelationTerms
{
  Relation relation;
  Var logits;
  Var message;
};

}  // namespace

void add_hgat_layer(
  ParameterStore & store, const std::string & prefix, const HgatLayout & layout,
  const std::vector<Relation> & relations, Rng & rng, const std::vector<NodeType> & updated)
{
  check_layout(layout);
  const std::size_t d = layout.dim;
  for (auto r : relations) {
    const std::string p = relation_prefix(prefix, r);
    store.add(p + ".self", xavier_uniform(d, d, rng));
    store.add(p + ".neighbor", xavier_uniform(d, d, rng));
    store.add(p + ".edge", xavier_uniform(edge_feature_dim(r), d, rng));
  }
  store.add(prefix + ".attention", xavier_uniform(layout.heads, 3 * layout.head_dim(), rng));
  for (auto t : updated) store.add(prefix + ".residual." + to_string(t), xavier_uniform(d, d, rng));
}

namespace
{

std::vector<RelationTerms> relation_terms(
  Context & ctx, const std::string & prefix, const HgatLayout & layout, const HeteroGraph & graph,
  const NodeFeatures & x, const std::vector<Relation> & active)
{
  check_layout(layout);
  const std::size_t hd = layout.head_dim();
  const Var att = ctx.param(prefix + ".attention");
  const Var a_self = slice_cols(att, 0, hd);
  const Var a_neighbor = slice_cols(att, hd, 2 * hd);
  const Var a_edge = slice_cols(att, 2 * hd, 3 * hd);
  std::vector<RelationTerms> out;
  for (auto r : active) {
    const EdgeTable & e = graph.edge(r);
    if (e.size() == 0) continue;
    const std::string p = relation_prefix(prefix, r);
    if (!ctx.store().contains(p + ".self")) {
      throw std::out_of_range(std::string("hgat layer '") + prefix + "' has no parameters for relation " + to_string(r));
    }
    const Var & xs = x[static_cast<std::size_t>(target_type(r))];
    const Var & xn = x[static_cast<std::size_t>(source_type(r))];
    if (xs.cols() != layout.dim || xn.cols() != layout.dim) {
      throw DimensionError("hgat layer '" + prefix + "': node features must have " + std::to_string(layout.dim) + " columns");
    }
    const Var self = gather_rows(matmul(xs, ctx.param(p + ".self")), e.dst);
    const Var neighbor = gather_rows(matmul(xn, ctx.param(p + ".neighbor")), e.src);
    const Var edge = matmul(ctx.constant(e.features), ctx.param(p + ".edge"));
    const Var logits = add(
      add(head_dot(leaky_relu(self, layout.slope), a_self), head_dot(leaky_relu(neighbor, layout.slope), a_neighbor)),
      head_dot(leaky_relu(edge, layout.slope), a_edge));
    out.push_back({r, logits, add(neighbor, edge)});
  }
  return out;
}

/// Pooled softmax per target node type; returns alpha aligned with `terms`.
std::vector<Var> pooled_alpha(const HeteroGraph & graph, const std::vector<RelationTerms> & terms, NodeType t)
{
  std::vector<Var> logits;
  Index segments;
  std::vector<std::size_t> which;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (target_type(terms[i].relation) != t) continue;
    logits.push_back(terms[i].logits);
    const Index & dst = graph.edge(terms[i].relation).dst;
    segments.insert(segments.end(), dst.begin(), dst.end());
    which.push_back(i);
  }
  std::vector<Var> alpha(terms.size());
  if (logits.empty()) return alpha;
  const Var all = segment_softmax(concat_rows(logits), segments, graph.table(t).size());
  std::size_t offset = 0;
  for (auto i : which) {
    const std::size_t n = graph.edge(terms[i].relation).size();
    Index rows(n);
    for (std::size_t k = 0; k < n; ++k) rows[k] = static_cast<std::uint32_t>(offset + k);
    alpha[i] = gather_rows(all, rows);
    offset += n;
  }
  return alpha;
}

}  // namespace

std::array<Var, kRelationCount> attention_scores(
  Context & ctx, const std::string & prefix, const HgatLayout & layout, const HeteroGraph & graph,
  const NodeFeatures & x, const std::vector<Relation> & active)
{
  const auto terms = relation_terms(ctx, prefix, layout, graph, x, active);
  std::array<Var, kRelationCount> out;
  for (auto t : {NodeType::kLane, NodeType::kStep, NodeType::kTrajectory}) {
    const auto alpha = pooled_alpha(graph, terms, t);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (alpha[i].valid()) out[static_cast<std::size_t>(terms[i].relation)] = alpha[i];
    }
  }
  return out;
}

NodeFeatures hgat_layer(
  Context & ctx, const std::string & prefix, const HgatLayout & layout, const HeteroGraph & graph,
  const NodeFeatures & x, const std::vector<Relation> & active, LayerAttention * attention)
{
  const auto terms = relation_terms(ctx, prefix, layout, graph, x, active);
  NodeFeatures out;
  for (auto t : {NodeType::kLane, NodeType::kStep, NodeType::kTrajectory}) {
    const std::size_t ti = static_cast<std::size_t>(t);
    const std::string residual = prefix + ".residual." + to_string(t);
    if (!ctx.store().contains(residual)) {
      out[ti] = x[ti];
      continue;
    }
    Var h = matmul(x[ti], ctx.param(residual));
    const auto alpha = pooled_alpha(graph, terms, t);
    std::vector<Var> messages;
    Index segments;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (!alpha[i].valid()) continue;
      messages.push_back(head_scale(terms[i].message, alpha[i]));
      const Index & dst = graph.edge(terms[i].relation).dst;
      segments.insert(segments.end(), dst.begin(), dst.end());
      if (attention) attention->alpha[static_cast<std::size_t>(terms[i].relation)] = alpha[i].value();
    }
    if (!messages.empty()) h = add(h, segment_sum(concat_rows(messages), segments, graph.table(t).size()));
    out[ti] = leaky_relu(h, layout.slope);
  }
  return out;
}

std::vector<AttentionRecord> attention_records(const HeteroGraph & graph, const std::vector<LayerAttention> & layers)
{
  std::vector<AttentionRecord> out;
  for (const auto & layer : layers) {
    for (auto r : kAllRelations) {
      const Tensor & alpha = layer.alpha[static_cast<std::size_t>(r)];
      if (alpha.empty()) continue;
      const EdgeTable & e = graph.edge(r);
      for (std::size_t k = 0; k < e.size(); ++k) {
        for (std::size_t h = 0; h < alpha.cols(); ++h) out.push_back({layer.layer, h, r, e.src[k], e.dst[k], alpha(k, h)});
      }
    }
  }
  return out;
}

void write_attention_jsonl(std::ostream & out, const std::vector<AttentionRecord> & records)
{
  for (const auto & r : records) {
    const nlohmann::json j{
      {"layer", r.layer},
      {"head", r.head},
      {"relation", to_string(r.relation)},
      {"src_type", to_string(source_type(r.relation))},
      {"src", r.src},
      {"dst_type", to_string(target_type(r.relation))},
      {"dst", r.dst},
      {"alpha", r.alpha}};
    out << j.dump() << '\n';
  }
}

}  // namespace hgat
