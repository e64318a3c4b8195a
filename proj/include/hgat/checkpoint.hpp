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
#ifndef HGAT__CHECKPOINT_HPP_
#define HGAT__CHECKPOINT_HPP_

#include "hgat/model.hpp"

#include <stdexcept>
#include <string>

namespace hgat
{

constexpr int kCheckpointSchemaVersion = 1;

class CheckpointError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * Layout: 8-byte magic "HGATCKPT", u64 little-endian manifest length, the JSON manifest
 * (schema version, model configuration, future steps, and per parameter its name, kind,
 * shape, dtype and byte offset into the blob), then the little-endian f64 blob.
 */
void save_checkpoint(const Model & model, const std::string & path);
Model load_checkpoint(const std::string & path);

std::string checkpoint_bytes(const Model & model);
Model checkpoint_from_bytes(const std::string & bytes);

}  // namespace hgat

#endif  // HGAT__CHECKPOINT_HPP_
