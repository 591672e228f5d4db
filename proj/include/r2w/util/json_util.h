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

#ifndef R2W_UTIL_JSON_UTIL_H_
#define R2W_UTIL_JSON_UTIL_H_

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "r2w/util/error.h"

namespace r2w {

// Rejects keys outside `allowed` so that typos in config files fail loudly.
inline void CheckKeys(const nlohmann::json& j, const std::string& where,
                      std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

// Overwrites `out` with j[key] when present. Type errors become ConfigError.
template <typename T>
void ReadOptional(const nlohmann::json& j, const char* key, T& out,
                  const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace r2w

#endif  // R2W_UTIL_JSON_UTIL_H_
