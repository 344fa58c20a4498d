// Copyright 2026 The CompGCN-cpp Authors.
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

#ifndef COMPGCN_CHECKPOINT_H_
#define COMPGCN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "compgcn/tensor.h"

namespace compgcn {

// Container layout, all integers little-endian:
//
//   bytes 0..7    magic "CGCNCKPT"
//   bytes 8..11   uint32 format version
//   bytes 12..19  uint64 manifest length L
//   next L bytes  UTF-8 JSON manifest
//   remainder     concatenated float64 arrays
//
// The manifest is {"version": 1, "metadata": {...}, "arrays": [{"name",
// "shape", "offset", "count"}]} with offsets in bytes from the start of the
// array section.
inline constexpr char kCheckpointMagic[8] = {'C', 'G', 'C', 'N', 'C', 'K', 'P', 'T'};
inline constexpr uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckpointData {
  nlohmann::json metadata;
  std::map<std::string, Tensor> arrays;
};

void SaveCheckpoint(const std::filesystem::path& path, std::span<const Parameter* const> params,
                    const nlohmann::json& metadata = nlohmann::json::object());
CheckpointData LoadCheckpoint(const std::filesystem::path& path);

// Copies arrays into parameters by name. Every parameter must be present with
// a matching shape.
void RestoreParameters(const CheckpointData& data, std::span<Parameter* const> params);

}  // namespace compgcn

#endif  // COMPGCN_CHECKPOINT_H_
