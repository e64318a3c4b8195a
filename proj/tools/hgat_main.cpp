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
#include "hgat/checkpoint.hpp"
#include "hgat/config.hpp"
#include "hgat/metrics.hpp"
#include "hgat/model.hpp"
#include "hgat/synthetic.hpp"
#include "hgat/training.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using namespace hgat;

namespace
{

constexpr const char * kToolVersion = "1.0.0";
constexpr int kPredictionSchemaVersion = 1;
constexpr int kAttentionSchemaVersion = 1;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// A directory of *.json scenario files (sorted by name) or a single file.
std::vector<Scenario> load_scenarios(const std::string & path)
{
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto & e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path)) {
    files.emplace_back(path);
  } else {
    throw UsageError("no scenario file or directory at '" + path + "'");
  }
  if (files.empty()) throw UsageError("no scenario files in '" + path + "'");
  std::vector<Scenario> out;
  out.reserve(files.size());
  for (const auto & f : files) out.push_back(load_scenario(f.string()));
  return out;
}

std::vector<HeteroGraph> build_graphs(const std::vector<Scenario> & scenes, const GraphConfig & g)
{
  std::vector<HeteroGraph> out;
  out.reserve(scenes.size());
  for (const auto & s : scenes) out.push_back(assemble_scene_graph(s, g));
  return out;
}

void check_horizon(const Model & model, const std::vector<HeteroGraph> & graphs)
{
  for (const auto & g : graphs) {
    if (g.future_steps() != model.future_steps) {
      throw UsageError(
        "scenario '" + g.scenes.front().id + "' has " + std::to_string(g.future_steps()) +
        " future steps, the model predicts " + std::to_string(model.future_steps));
    }
  }
}

/// Runs job(i) for i in [0, n) on the given number of workers; results land in caller-owned slots.
template <typename Job>
void parallel_for(std::size_t n, std::size_t threads, Job job)
{
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto & th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

template <typename Write>
void write_output(const std::string & path, Write write)
{
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  write(out);
  if (!out) throw UsageError("failed writing '" + path + "'");
}

std::vector<std::size_t> parse_k_list(const std::string & text, std::size_t modes)
{
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw UsageError("--k expects a comma-separated list of integers, got '" + text + "'");
    }
    if (k == 0 || k > modes) {
      throw UsageError("--k " + std::to_string(k) + " is outside 1.." + std::to_string(modes) + " (the model's mode count)");
    }
    out.push_back(k);
  }
  if (out.empty()) throw UsageError("--k is empty");
  return out;
}

struct Options
{
  std::size_t threads = 1;

  // generate
  std::string kind = "all";
  std::size_t count = 10;
  std::size_t agents = 6;
  std::uint64_t seed = 0;
  double rate_hz = 10.0;
  std::string out;

  // train / eval / ablate
  std::string data;
  std::string eval_data;
  std::string config;
  std::string regime = "e2e";
  std::string base;
  std::string loss_csv;
  std::string k_list = "1,6";
  std::string ckpt;
  std::string scenario;
  std::vector<std::string> remove;
  bool seed_given = false;
};

int run_generate(const Options & o)
{
  if (o.count == 0) throw UsageError("--count must be positive");
  fs::create_directories(o.out);
  SyntheticOptions so;
  so.rate_hz = o.rate_hz;
  std::vector<Scenario> scenes;
  if (o.kind == "all") {
    scenes = generate_dataset(o.count, o.agents, o.seed, so);
  } else {
    const ScenarioKind kind = scenario_kind_from_string(o.kind);
    for (std::size_t i = 0; i < o.count; ++i) scenes.push_back(generate_synthetic(kind, o.agents, o.seed * 1000003ULL + i, so));
  }
  char name[48];
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    std::snprintf(name, sizeof(name), "scenario_%05zu.json", i);
    save_scenario(scenes[i], (fs::path(o.out) / name).string());
  }
  std::cerr << "wrote " << scenes.size() << " scenarios to " << o.out << "\n";
  return 0;
}

int run_train(const Options & o)
{
  const Regime regime = regime_from_string(o.regime);
  if (regime == Regime::kFrozen && o.base.empty()) throw UsageError("regime frozen needs a pretrained --base checkpoint");
  Config cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  if (o.seed_given) cfg.train.seed = o.seed;

  Model model;
  if (!o.base.empty()) {
    model = load_checkpoint(o.base);
  }
  const GraphConfig & graph_cfg = o.base.empty() ? cfg.model.graph : model.config.graph;
  const auto scenes = load_scenarios(o.data);
  const auto graphs = build_graphs(scenes, graph_cfg);
  if (o.base.empty()) {
    model = create_model(cfg.model, graphs.front().future_steps(), cfg.train.seed);
  }
  check_horizon(model, graphs);

  TrainOptions opt;
  opt.regime = regime;
  opt.config = cfg.train;
  opt.on_step = [&](const StepRecord & r) {
    if (r.step == 1 || r.step % 50 == 0 || r.step == cfg.train.steps) {
      std::cerr << "step " << r.step << " total " << r.total << " traj " << r.traj << " conf " << r.conf << "\n";
    }
  };
  const auto records = train(model, graphs, opt);
  save_checkpoint(model, o.out);
  const std::string csv = o.loss_csv.empty() ? o.out + ".loss.csv" : o.loss_csv;
  write_output(csv, [&](std::ostream & s) { write_loss_csv(s, records); });
  return 0;
}

int run_eval(const Options & o)
{
  Model model = load_checkpoint(o.ckpt);
  const auto ks = parse_k_list(o.k_list, model.config.modes);
  const auto scenes = load_scenarios(o.data);
  const auto graphs = build_graphs(scenes, model.config.graph);
  check_horizon(model, graphs);
  std::vector<EvalSample> samples(graphs.size());
  parallel_for(graphs.size(), o.threads, [&](std::size_t i) {
    samples[i] = {predict(model, graphs[i], model.use_refinement), graphs[i].agents};
  });
  std::vector<MetricRow> rows;
  for (auto k : ks) rows.push_back(evaluate(samples, k));
  write_output(o.out, [&](std::ostream & s) { write_metrics_csv(s, rows); });
  return 0;
}

int run_predict(const Options & o)
{
  Model model = load_checkpoint(o.ckpt);
  const Scenario scene = load_scenario(o.scenario);
  const HeteroGraph graph = assemble_scene_graph(scene, model.config.graph);
  check_horizon(model, {graph});
  const PredictionSet p = predict(model, graph, model.use_refinement);
  const Frame & frame = graph.scenes.front().frame;
  nlohmann::ordered_json out;
  out["schema_version"] = kPredictionSchemaVersion;
  out["scenario_id"] = scene.id;
  out["refined"] = model.use_refinement;
  out["agents"] = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < p.agents; ++a) {
    nlohmann::ordered_json agent;
    agent["agent_id"] = graph.agents[a].id;
    agent["category"] = to_string(graph.agents[a].category);
    agent["modes"] = nlohmann::ordered_json::array();
    for (auto k : top_k_modes(p, a, p.modes)) {
      nlohmann::ordered_json mode;
      mode["confidence"] = p.confidence(a, k);
      mode["points"] = nlohmann::ordered_json::array();
      for (std::size_t t = 0; t < p.future_steps; ++t) {
        const Vec2 w = frame.to_world(p.point(a, k, t));
        mode["points"].push_back({w.x, w.y});
      }
      agent["modes"].push_back(std::move(mode));
    }
    out["agents"].push_back(std::move(agent));
  }
  write_output(o.out, [&](std::ostream & s) { s << out.dump(1) << "\n"; });
  return 0;
}

int run_attention(const Options & o)
{
  Model model = load_checkpoint(o.ckpt);
  const Scenario scene = load_scenario(o.scenario);
  const HeteroGraph graph = assemble_scene_graph(scene, model.config.graph);
  check_horizon(model, {graph});
  Tape tape;
  Context ctx(tape, model.store, false);
  ForwardOptions fo;
  fo.refine = false;
  fo.record_attention = true;
  const ModelOutput result = run_model(ctx, model, graph, fo);
  const auto records = attention_records(graph, result.encoded.attention);
  write_output(o.out, [&](std::ostream & s) { write_attention_jsonl(s, records); });
  return 0;
}

int run_ablate(const Options & o)
{
  Config cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  if (o.seed_given) cfg.train.seed = o.seed;
  std::vector<RemovalSet> sets;
  for (const auto & r : o.remove) {
    if (r == "standard") {
      for (const auto & s : standard_removal_sets()) sets.push_back(s);
    } else {
      sets.push_back(parse_removal_set(r));
    }
  }
  if (sets.empty()) sets = standard_removal_sets();
  const auto train_set = load_scenarios(o.data);
  const auto eval_set = o.eval_data.empty() ? train_set : load_scenarios(o.eval_data);
  const auto rows = ablate(cfg, train_set, eval_set, sets);
  write_output(o.out, [&](std::ostream & s) { write_ablation_csv(s, rows); });
  return 0;
}

std::string version_text()
{
  std::ostringstream s;
  s << "hgat " << kToolVersion << "\n"
    << "scenario schema " << kScenarioSchemaVersion << "\n"
    << "checkpoint schema " << kCheckpointSchemaVersion << "\n"
    << "prediction schema " << kPredictionSchemaVersion << "\n"
    << "attention schema " << kAttentionSchemaVersion;
  return s.str();
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Heterogeneous graph attention trajectory forecaster"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "Worker threads for evaluation (1 = fully sequential)")->check(CLI::PositiveNumber);

  auto * gen = app.add_subcommand("generate", "Write synthetic scenario JSON files");
  gen->add_option("--kind", o.kind, "straight, curve, intersection or all (round-robin)")->capture_default_str();
  gen->add_option("--count", o.count, "Number of scenarios")->capture_default_str();
  gen->add_option("--agents", o.agents, "Agents per scenario")->capture_default_str();
  gen->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  gen->add_option("--rate", o.rate_hz, "Sampling rate in Hz (2 or 10)")->capture_default_str();
  gen->add_option("--out", o.out, "Output directory")->required();

  auto * tr = app.add_subcommand("train", "Train a model and write a checkpoint plus loss CSV");
  tr->add_option("--data", o.data, "Scenario directory or file")->required();
  tr->add_option("--config", o.config, "Configuration file (key = value)");
  tr->add_option("--regime", o.regime, "none, frozen or e2e")->capture_default_str();
  tr->add_option("--base", o.base, "Pretrained checkpoint (required for frozen)");
  tr->add_option("--out", o.out, "Output checkpoint")->required();
  tr->add_option("--loss-csv", o.loss_csv, "Loss log (default: <out>.loss.csv)");
  auto * tr_seed = tr->add_option("--seed", o.seed, "Overrides train.seed");

  auto * ev = app.add_subcommand("eval", "Evaluate a checkpoint");
  ev->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  ev->add_option("--data", o.data, "Scenario directory or file")->required();
  ev->add_option("--k", o.k_list, "Comma-separated K values")->capture_default_str();
  ev->add_option("--out", o.out, "Metrics CSV (default: stdout)");

  auto * pr = app.add_subcommand("predict", "Write world-frame predictions for one scenario");
  pr->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  pr->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  pr->add_option("--out", o.out, "Prediction JSON (default: stdout)");

  auto * at = app.add_subcommand("attention", "Dump scene-graph attention weights as JSON lines");
  at->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  at->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  at->add_option("--out", o.out, "JSONL output (default: stdout)");

  auto * ab = app.add_subcommand("ablate", "Train and evaluate with edge families removed");
  ab->add_option("--data", o.data, "Training scenarios")->required();
  ab->add_option("--eval", o.eval_data, "Evaluation scenarios (default: the training set)");
  ab->add_option("--config", o.config, "Configuration file");
  ab->add_option("--remove", o.remove, "Removal set, e.g. lane_to_step,step_to_step; 'none' or 'standard'; repeatable");
  ab->add_option("--out", o.out, "Ablation CSV (default: stdout)");
  auto * ab_seed = ab->add_option("--seed", o.seed, "Overrides train.seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  o.seed_given = tr_seed->count() > 0 || ab_seed->count() > 0;

  try {
    if (*gen) return run_generate(o);
    if (*tr) return run_train(o);
    if (*ev) return run_eval(o);
    if (*pr) return run_predict(o);
    if (*at) return run_attention(o);
    if (*ab) return run_ablate(o);
  } catch (const std::exception & e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << msg << "\n";
    return 1;
  }
  return 1;
}
