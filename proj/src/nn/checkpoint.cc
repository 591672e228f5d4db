// Copyright (c) 2026 The r2w Authors
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

#include "r2w/nn/checkpoint.h"

#include <bit>
#include <sstream>

#include "r2w/util/binary_io.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::nn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'R', '2', 'W', 'C', 'K', 'P', 'T', '1'};

}  // namespace

void WriteCheckpoint(const fs::path& path, const Checkpoint& ckpt) {
  json index = json::array();
  uint64_t offset = 0;
  for (const auto& [name, t] : ckpt.tensors) {
    if (static_cast<int64_t>(t.values.size()) != NumElements(t.shape)) {
      throw std::invalid_argument("checkpoint tensor " + name + " has wrong size");
    }
    index.push_back({{"name", name}, {"shape", t.shape}, {"offset", offset}});
    offset += t.values.size();
  }
  json header = {{"meta", ckpt.meta}, {"tensors", index}};
  const std::string text = header.dump();
  ByteWriter w;
  w.PutBytes(std::string_view(kMagic, sizeof(kMagic)));
  w.Put<uint64_t>(text.size());
  w.PutBytes(text);
  for (const auto& [name, t] : ckpt.tensors) w.PutArray(t.values);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  AtomicWriteFile(path, w.bytes());
}

Checkpoint ReadCheckpoint(const fs::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r(bytes, "checkpoint " + path.string());
  if (r.GetBytes(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    r.Fail("bad magic");
  }
  const auto header_len = r.Get<uint64_t>();
  if (header_len > r.remaining()) r.Fail("truncated header");
  json header;
  try {
    header = json::parse(r.GetBytes(header_len));
  } catch (const json::exception& e) {
    r.Fail(std::string("bad header: ") + e.what());
  }
  Checkpoint ckpt;
  try {
    ckpt.meta = header.at("meta");
    uint64_t expected_offset = 0;
    for (const auto& entry : header.at("tensors")) {
      StoredTensor t;
      t.shape = entry.at("shape").get<Shape>();
      if (entry.at("offset").get<uint64_t>() != expected_offset) r.Fail("bad offsets");
      t.values = r.GetArray<double>(static_cast<size_t>(NumElements(t.shape)));
      expected_offset += t.values.size();
      ckpt.tensors.emplace(entry.at("name").get<std::string>(), std::move(t));
    }
  } catch (const json::exception& e) {
    r.Fail(std::string("bad header: ") + e.what());
  }
  if (r.remaining() != 0) r.Fail("trailing bytes");
  return ckpt;
}

void StoreModule(Checkpoint& ckpt, const std::string& prefix, const Module& module) {
  for (const auto& p : module.NamedParameters()) {
    ckpt.tensors[prefix + "." + p.name] = {p.tensor.shape(), p.tensor.values()};
  }
}

void RestoreModule(const Checkpoint& ckpt, const std::string& prefix, Module& module) {
  for (auto& p : module.NamedParameters()) {
    const std::string key = prefix + "." + p.name;
    auto it = ckpt.tensors.find(key);
    if (it == ckpt.tensors.end()) {
      throw ConfigError("checkpoint lacks parameter " + key);
    }
    if (it->second.shape != p.tensor.shape()) {
      throw ConfigError("checkpoint parameter " + key + " has shape " +
                        ShapeToString(it->second.shape) + ", model expects " +
                        ShapeToString(p.tensor.shape()));
    }
    p.tensor.mutable_values() = it->second.values;
  }
}

void StoreAdam(Checkpoint& ckpt, const std::string& prefix, Adam& adam) {
  ckpt.meta[prefix + ".step"] = adam.step_count();
  ckpt.meta[prefix + ".lr"] = adam.lr();
  auto& m = adam.first_moments();
  auto& v = adam.second_moments();
  for (size_t i = 0; i < m.size(); ++i) {
    const Shape shape{static_cast<int64_t>(m[i].size())};
    ckpt.tensors[prefix + ".m." + std::to_string(i)] = {shape, m[i]};
    ckpt.tensors[prefix + ".v." + std::to_string(i)] = {shape, v[i]};
  }
}

void RestoreAdam(const Checkpoint& ckpt, const std::string& prefix, Adam& adam) {
  auto& m = adam.first_moments();
  auto& v = adam.second_moments();
  for (size_t i = 0; i < m.size(); ++i) {
    for (auto* target : {&m[i], &v[i]}) {
      const std::string key =
          prefix + (target == &m[i] ? ".m." : ".v.") + std::to_string(i);
      auto it = ckpt.tensors.find(key);
      if (it == ckpt.tensors.end() || it->second.values.size() != target->size()) {
        throw ConfigError("checkpoint optimizer state mismatch at " + key);
      }
      *target = it->second.values;
    }
  }
  try {
    adam.set_step_count(ckpt.meta.at(prefix + ".step").get<int64_t>());
    adam.set_lr(ckpt.meta.at(prefix + ".lr").get<double>());
  } catch (const json::exception&) {
    throw ConfigError("checkpoint lacks optimizer metadata for " + prefix);
  }
}

std::string SerializeRng(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

Rng DeserializeRng(const std::string& text) {
  std::istringstream in(text);
  Rng rng;
  in >> rng;
  if (!in) throw DataError("bad RNG state in checkpoint");
  return rng;
}

uint64_t ParameterHash(const Module& module) {
  uint64_t h = 1469598103934665603ull;
  for (const auto& p : module.Parameters()) {
    for (double v : p.values()) {
      uint64_t bits = std::bit_cast<uint64_t>(v);
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    }
  }
  return h;
}

}  // namespace r2w::nn
