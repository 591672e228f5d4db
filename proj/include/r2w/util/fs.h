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

#ifndef R2W_UTIL_FS_H_
#define R2W_UTIL_FS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace r2w {

std::string ReadFileBytes(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void AtomicWriteFile(const std::filesystem::path& path, std::string_view bytes);

// Hex-encoded SHA-256 digest.
std::string Sha256Hex(std::string_view bytes);

// Exclusive advisory lock on a file, released on destruction.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

struct ProcessResult {
  int exit_code = -1;
  std::string stdout_text;
};

// Runs argv[0] with the given arguments (no shell), capturing stdout.
// argv[0] is resolved through PATH when it contains no slash.
ProcessResult RunProcess(const std::vector<std::string>& argv);

// True when `tool` names an executable file, directly or via PATH.
bool ExecutableExists(const std::string& tool);

}  // namespace r2w

#endif  // R2W_UTIL_FS_H_
