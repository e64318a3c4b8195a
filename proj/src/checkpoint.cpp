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
#include "hgat/checkpoint.hpp"

#include "json.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace hgat
{

namespace
{

constexpr char kMagic[8] = {'H', 'G', 'A', 'T', 'C', 'K', 'P', 'T'};

void put_u64(std::string & out, std::uint64_t v)
{
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string & in, std::size_t at)
{
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

void put_f64(std::string & out, double d)
{
  std::uint64_t bits = 0;
  std::memcpy(&bits, &d, sizeof bits);
  put_u64(out, bits);
}

double get_f64(const std::string & in, std::size_t at)
{
  const std::uint64_t bits = get_u64(in, at);
  double d = 0.0;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

bool is_model_key(const std::string & k) { return k.starts_with("model.") || k.starts_with("graph."); }

}  // namespace

std::string checkpoint_bytes(const Model & model)
{
  nlohmann::json manifest;
  manifest["schema_version"] = kCheckpointSchemaVersion;
  manifest["future_steps"] = model.future_steps;
  manifest["use_refinement"] = model.use_refinement;
  nlohmann::json cfg = nlohmann::json::object();
  Config full;
  full.model = model.config;
  for (const auto & [k, v] : config_to_map(full)) {
    if (is_model_key(k)) cfg[k] = v;
  }
  manifest["config"] = cfg;
  nlohmann::json params = nlohmann::json::array();
  std::string blob;
  for (const auto & [name, p] : model.store.entries()) {
    params.push_back(
      {{"name", name},
       {"kind", p.kind == ParamKind::kWeight ? "weight" : "buffer"},
       {"shape", p.value.shape()},
       {"dtype", "f64"},
       {"offset", blob.size()}});
    for (double v : p.value.data()) put_f64(blob, v);
  }
  manifest["params"] = params;
  const std::string text = manifest.dump();
  std::string out(kMagic, sizeof kMagic);
  put_u64(out, text.size());
  out += text;
  out += blob;
  return out;
}

Model checkpoint_from_bytes(const std::string & bytes)
{
  if (bytes.size() < 16 || bytes.compare(0, 8, std::string(kMagic, 8)) != 0) throw CheckpointError("not a checkpoint file (bad magic)");
  const std::uint64_t len = get_u64(bytes, 8);
  if (16 + len > bytes.size()) throw CheckpointError("truncated checkpoint manifest");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.substr(16, len));
  } catch (const nlohmann::json::exception & e) {
    throw CheckpointError(std::string("corrupt checkpoint manifest: ") + e.what());
  }
  const std::size_t blob_at = 16 + len;
  try {
    const int version = manifest.at("schema_version").get<int>();
    if (version != kCheckpointSchemaVersion) {
      throw CheckpointError("unsupported checkpoint schema version " + std::to_string(version));
    }
    std::string cfg_text;
    for (const auto & [k, v] : manifest.at("config").items()) cfg_text += k + " = " + v.get<std::string>() + "\n";
    Config cfg = parse_config(cfg_text);
    Model m = create_model(cfg.model, manifest.at("future_steps").get<std::size_t>(), 0);
    m.use_refinement = manifest.value("use_refinement", true);
    std::size_t seen = 0;
    for (const auto & p : manifest.at("params")) {
      const std::string name = p.at("name").get<std::string>();
      if (!m.store.contains(name)) throw CheckpointError("checkpoint parameter '" + name + "' does not belong to the model");
      Parameter & dst = m.store.at(name);
      const Shape shape = p.at("shape").get<Shape>();
      if (shape != dst.value.shape()) {
        throw CheckpointError("checkpoint parameter '" + name + "' has shape " + shape_to_string(shape) + ", model expects " + shape_to_string(dst.value.shape()));
      }
      if (p.at("dtype").get<std::string>() != "f64") throw CheckpointError("checkpoint parameter '" + name + "': unsupported dtype");
      const std::size_t offset = p.at("offset").get<std::size_t>();
      if (blob_at + offset + 8 * dst.value.size() > bytes.size()) throw CheckpointError("checkpoint blob truncated at '" + name + "'");
      for (std::size_t i = 0; i < dst.value.size(); ++i) dst.value[i] = get_f64(bytes, blob_at + offset + 8 * i);
      ++seen;
    }
    if (seen != m.store.entries().size()) throw CheckpointError("checkpoint is missing model parameters");
    return m;
  } catch (const nlohmann::json::exception & e) {
    throw CheckpointError(std::string("corrupt checkpoint manifest: ") + e.what());
  } catch (const ConfigError & e) {
    throw CheckpointError(std::string("checkpoint configuration: ") + e.what());
  }
}

void save_checkpoint(const Model & model, const std::string & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  const std::string bytes = checkpoint_bytes(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing checkpoint " + path);
}

Model load_checkpoint(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_bytes(buf.str());
}

}  // namespace hgat
