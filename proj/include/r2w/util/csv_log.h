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

#ifndef R2W_UTIL_CSV_LOG_H_
#define R2W_UTIL_CSV_LOG_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace r2w {

// Per-step CSV log: "step,<columns...>". Values are written in shortest
// round-trip form, so equal runs give byte-equal files.
class CsvLog {
 public:
  // Starts a fresh file, or with keep_through_step >= 0 keeps the existing
  // header and rows up to that step and appends after them (resume).
  CsvLog(const std::filesystem::path& path, std::vector<std::string> columns,
         int64_t keep_through_step = -1);

  void Append(int64_t step, const std::vector<double>& values);

 private:
  std::vector<std::string> columns_;
  std::ofstream out_;
};

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace r2w

#endif  // R2W_UTIL_CSV_LOG_H_
