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

#ifndef R2W_NN_CHECKPOINT_H_
#define R2W_NN_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "r2w/nn/module.h"
#include "r2w/nn/optim.h"

namespace r2w::nn {

struct StoredTensor {
  Shape shape;
  std::vector<double> values;
};

// Self-describing training state. On disk: 8-byte magic "R2WCKPT1",
// uint64 header length, a JSON header holding `meta` plus the tensor index
// (name, shape, offset), then the tensors as raw float64.
struct Checkpoint {
  nlohmann::json meta = nlohmann::json::object();
  std::map<std::string, StoredTensor> tensors;
};

// Atomic write.
void WriteCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// DataError on any structural problem.
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

// Parameters are stored as "<prefix>.<dotted name>".
void StoreModule(Checkpoint& ckpt, const std::string& prefix, const Module& module);
// Strict: every parameter must be present with the same shape, else
// ConfigError.
void RestoreModule(const Checkpoint& ckpt, const std::string& prefix, Module& module);

void StoreAdam(Checkpoint& ckpt, const std::string& prefix, Adam& adam);
void RestoreAdam(const Checkpoint& ckpt, const std::string& prefix, Adam& adam);

// Text form of the full engine state.
std::string SerializeRng(const Rng& rng);
Rng DeserializeRng(const std::string& text);

// FNV-1a over the bit patterns of every parameter value, in registration
// order. Cheap identity for "did these parameters change" checks.
uint64_t ParameterHash(const Module& module);

}  // namespace r2w::nn

#endif  // R2W_NN_CHECKPOINT_H_
