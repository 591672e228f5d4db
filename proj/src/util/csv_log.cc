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

#include "r2w/util/csv_log.h"

#include <fmt/format.h>

#include <sstream>

#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w {

namespace fs = std::filesystem;

std::string FormatDouble(double v) { return fmt::format("{}", v); }

CsvLog::CsvLog(const fs::path& path, std::vector<std::string> columns,
               int64_t keep_through_step)
    : columns_(std::move(columns)) {
  std::string header = "step";
  for (const auto& c : columns_) header += "," + c;
  std::string kept = header + "\n";
  if (keep_through_step >= 0 && fs::exists(path)) {
    std::istringstream in(ReadFileBytes(path));
    std::string line;
    std::getline(in, line);
    if (line != header) throw DataError("loss log " + path.string() + " has a different header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const int64_t step = std::stoll(line.substr(0, line.find(',')));
      if (step > keep_through_step) break;
      kept += line + "\n";
    }
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  AtomicWriteFile(path, kept);
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw IoError("cannot append to " + path.string());
}

void CsvLog::Append(int64_t step, const std::vector<double>& values) {
  std::string row = std::to_string(step);
  for (double v : values) row += "," + FormatDouble(v);
  row += "\n";
  out_ << row;
  out_.flush();
  if (!out_) throw IoError("loss log write failed");
}

}  // namespace r2w
