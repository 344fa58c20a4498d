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

#include "compgcn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <vector>

namespace compgcn {
namespace {

template <typename T>
void AppendLittleEndian(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, uint64_t, uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

template <typename T>
T ReadLittleEndian(const char* p) {
  using U = std::conditional_t<sizeof(T) == 8, uint64_t, uint32_t>;
  U bits = 0;
  for (size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return std::bit_cast<T>(bits);
}

}  // namespace

void SaveCheckpoint(const std::filesystem::path& path, std::span<const Parameter* const> params,
                    const nlohmann::json& metadata) {
  nlohmann::json arrays = nlohmann::json::array();
  std::string blob;
  std::set<std::string> seen;
  for (const Parameter* p : params) {
    if (!seen.insert(p->name).second) {
      throw CheckpointError("duplicate parameter name '" + p->name + "'");
    }
    arrays.push_back({{"name", p->name},
                      {"shape", p->value.shape()},
                      {"offset", blob.size()},
                      {"count", p->value.size()}});
    for (double x : p->value.data()) AppendLittleEndian(blob, x);
  }
  const nlohmann::json manifest = {
      {"version", kCheckpointVersion}, {"metadata", metadata}, {"arrays", arrays}};
  const std::string text = manifest.dump();

  std::string header(kCheckpointMagic, sizeof(kCheckpointMagic));
  AppendLittleEndian(header, kCheckpointVersion);
  AppendLittleEndian(header, static_cast<uint64_t>(text.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw CheckpointError("failed writing " + path.string());
}

CheckpointData LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr size_t kHeader = sizeof(kCheckpointMagic) + 4 + 8;
  if (bytes.size() < kHeader ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw CheckpointError(path.string() + " is not a checkpoint (bad magic)");
  }
  const auto version = ReadLittleEndian<uint32_t>(bytes.data() + 8);
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto manifest_len = ReadLittleEndian<uint64_t>(bytes.data() + 12);
  if (manifest_len > bytes.size() - kHeader) throw CheckpointError("truncated manifest");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.substr(kHeader, manifest_len));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("corrupt manifest: ") + e.what());
  }
  const size_t data_start = kHeader + manifest_len;
  const size_t data_len = bytes.size() - data_start;

  CheckpointData data;
  data.metadata = manifest.value("metadata", nlohmann::json::object());
  for (const auto& entry : manifest.at("arrays")) {
    const auto name = entry.at("name").get<std::string>();
    const auto shape = entry.at("shape").get<Shape>();
    const auto offset = entry.at("offset").get<uint64_t>();
    const auto count = entry.at("count").get<uint64_t>();
    if (static_cast<uint64_t>(NumElements(shape)) != count || offset % 8 != 0 ||
        offset + count * 8 > data_len) {
      throw CheckpointError("array '" + name + "' has inconsistent extent");
    }
    std::vector<double> values(count);
    for (uint64_t i = 0; i < count; ++i) {
      values[i] = ReadLittleEndian<double>(bytes.data() + data_start + offset + 8 * i);
    }
    data.arrays.emplace(name, Tensor(shape, std::move(values)));
  }
  return data;
}

void RestoreParameters(const CheckpointData& data, std::span<Parameter* const> params) {
  for (Parameter* p : params) {
    auto it = data.arrays.find(p->name);
    if (it == data.arrays.end()) throw CheckpointError("checkpoint lacks array '" + p->name + "'");
    if (it->second.shape() != p->value.shape()) {
      throw CheckpointError("array '" + p->name + "' has shape " +
                            ShapeToString(it->second.shape()) + ", expected " +
                            ShapeToString(p->value.shape()));
    }
    p->value = it->second;
    p->grad = Tensor(p->value.shape());
  }
}

}  // namespace compgcn
