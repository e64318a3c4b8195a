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
#include "hgat/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace hgat
{

namespace
{

struct Key
{
  const char * name;
  std::function<void(Config &, const std::string &)> set;
  std::function<std::string(const Config &)> get;
};

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string & key, const std::string & v)
{
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception &) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
}

std::uint64_t to_uint(const std::string & key, const std::string & v)
{
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string & key, const std::string & v)
{
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

// shortest text that parses back to the same double
std::string fmt(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
Key size_key(const char * name, T Config::*group, std::size_t T::*field)
{
  return {name,
          [=](Config & c, const std::string & v) { (c.*group).*field = static_cast<std::size_t>(to_uint(name, v)); },
          [=](const Config & c) { return std::to_string((c.*group).*field); }};
}

template <typename T>
Key real_key(const char * name, T Config::*group, double T::*field)
{
  return {name, [=](Config & c, const std::string & v) { (c.*group).*field = to_double(name, v); },
          [=](const Config & c) { return fmt((c.*group).*field); }};
}

Key graph_size(const char * name, std::size_t GraphConfig::*field)
{
  return {name, [=](Config & c, const std::string & v) { c.model.graph.*field = static_cast<std::size_t>(to_uint(name, v)); },
          [=](const Config & c) { return std::to_string(c.model.graph.*field); }};
}

Key graph_real(const char * name, double GraphConfig::*field)
{
  return {name, [=](Config & c, const std::string & v) { c.model.graph.*field = to_double(name, v); },
          [=](const Config & c) { return fmt(c.model.graph.*field); }};
}

const std::vector<Key> & keys()
{
  using M = ModelConfig;
  using T = TrainConfig;
  static const std::vector<Key> k{
    size_key("model.dim", &Config::model, &M::dim),
    size_key("model.heads", &Config::model, &M::heads),
    size_key("model.modes", &Config::model, &M::modes),
    size_key("model.map_layers", &Config::model, &M::map_layers),
    size_key("model.scene_layers", &Config::model, &M::scene_layers),
    real_key("model.leaky_slope", &Config::model, &M::leaky_slope),
    size_key("model.refine_iterations", &Config::model, &M::refine_iterations),
    size_key("model.refine_heads", &Config::model, &M::refine_heads),
    real_key("model.bn_momentum", &Config::model, &M::bn_momentum),
    real_key("model.bn_eps", &Config::model, &M::bn_eps),
    graph_real("graph.lane_spacing", &GraphConfig::lane_spacing),
    graph_size("graph.step_lane_k", &GraphConfig::step_lane_k),
    graph_real("graph.step_lane_radius", &GraphConfig::step_lane_radius),
    graph_real("graph.orientation_gate_deg", &GraphConfig::orientation_gate_deg),
    graph_size("graph.step_step_k", &GraphConfig::step_step_k),
    graph_real("graph.step_step_radius", &GraphConfig::step_step_radius),
    graph_real("graph.position_scale", &GraphConfig::position_scale),
    graph_real("graph.speed_scale", &GraphConfig::speed_scale),
    {"graph.removed",
     [](Config & c, const std::string & v) {
       c.model.graph.removed.clear();
       std::stringstream in(v);
       std::string item;
       while (std::getline(in, item, ',')) {
         item = trim(item);
         if (item.empty()) continue;
         try {
           c.model.graph.removed.insert(relation_from_string(item));
         } catch (const std::invalid_argument & e) {
           throw ConfigError(std::string("config key 'graph.removed': ") + e.what());
         }
       }
     },
     [](const Config & c) {
       std::string out;
       for (auto r : c.model.graph.removed) out += (out.empty() ? "" : ",") + std::string(to_string(r));
       return out;
     }},
    size_key("train.steps", &Config::train, &T::steps),
    size_key("train.batch_size", &Config::train, &T::batch_size),
    real_key("train.lr", &Config::train, &T::lr),
    {"train.lr_schedule",
     [](Config & c, const std::string & v) {
       if (v != "cosine" && v != "constant") throw ConfigError("config key 'train.lr_schedule': expected cosine or constant, got '" + v + "'");
       c.train.lr_schedule = v;
     },
     [](const Config & c) { return c.train.lr_schedule; }},
    real_key("train.adam_beta1", &Config::train, &T::adam_beta1),
    real_key("train.adam_beta2", &Config::train, &T::adam_beta2),
    real_key("train.adam_eps", &Config::train, &T::adam_eps),
    real_key("train.margin", &Config::train, &T::margin),
    real_key("train.traj_weight", &Config::train, &T::traj_weight),
    real_key("train.weight_focal", &Config::train, &T::weight_focal),
    real_key("train.weight_scored", &Config::train, &T::weight_scored),
    real_key("train.weight_unscored", &Config::train, &T::weight_unscored),
    real_key("train.weight_fragment", &Config::train, &T::weight_fragment),
    real_key("train.proposal_loss_weight", &Config::train, &T::proposal_loss_weight),
    {"train.seed", [](Config & c, const std::string & v) { c.train.seed = to_uint("train.seed", v); },
     [](const Config & c) { return std::to_string(c.train.seed); }},
    {"train.precise_bn", [](Config & c, const std::string & v) { c.train.precise_bn = to_bool("train.precise_bn", v); },
     [](const Config & c) { return std::string(c.train.precise_bn ? "true" : "false"); }},
  };
  return k;
}

void check(const Config & c)
{
  if (c.model.dim == 0 || c.model.heads == 0 || c.model.dim % c.model.heads != 0) {
    throw ConfigError("model.heads must divide model.dim");
  }
  if (c.model.refine_heads == 0 || c.model.dim % c.model.refine_heads != 0) {
    throw ConfigError("model.refine_heads must divide model.dim");
  }
  if (c.model.modes == 0) throw ConfigError("model.modes must be positive");
  if (c.train.batch_size == 0) throw ConfigError("train.batch_size must be positive");
  if (!(c.model.graph.lane_spacing > 0.0)) throw ConfigError("graph.lane_spacing must be positive");
}

}  // namespace

Config parse_config(const std::string & text, Config base)
{
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool found = false;
    for (const auto & k : keys()) {
      if (key == k.name) {
        k.set(base, value);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
  }
  check(base);
  return base;
}

Config load_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_text(const Config & config)
{
  std::string out;
  for (const auto & k : keys()) out += std::string(k.name) + " = " + k.get(config) + "\n";
  return out;
}

std::map<std::string, std::string> config_to_map(const Config & config)
{
  std::map<std::string, std::string> out;
  for (const auto & k : keys()) out[k.name] = k.get(config);
  return out;
}

}  // namespace hgat
