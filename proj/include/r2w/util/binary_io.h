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

// Little-endian packing of trivially copyable values. All supported hosts are
// little-endian, which is asserted at compile time.

#ifndef R2W_UTIL_BINARY_IO_H_
#define R2W_UTIL_BINARY_IO_H_

#include <bit>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "r2w/util/error.h"

namespace r2w {

static_assert(std::endian::native == std::endian::little);

class ByteWriter {
 public:
  template <typename T>
  void Put(const T& value) {
    static_assert(std::is_trivially_copyable_v<T>);
    buffer_.append(reinterpret_cast<const char*>(&value), sizeof(T));
  }

  template <typename T>
  void PutArray(const std::vector<T>& values) {
    static_assert(std::is_trivially_copyable_v<T>);
    buffer_.append(reinterpret_cast<const char*>(values.data()),
                   values.size() * sizeof(T));
  }

  void PutBytes(std::string_view bytes) { buffer_.append(bytes); }

  const std::string& bytes() const { return buffer_; }
  std::string Release() { return std::move(buffer_); }

 private:
  std::string buffer_;
};

// Reads from a borrowed buffer; every short read raises DataError naming
// `what`.
class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  template <typename T>
  T Get() {
    static_assert(std::is_trivially_copyable_v<T>);
    Need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  template <typename T>
  std::vector<T> GetArray(size_t count) {
    static_assert(std::is_trivially_copyable_v<T>);
    if (count > remaining() / sizeof(T)) Fail("truncated payload");
    std::vector<T> values(count);
    std::memcpy(values.data(), bytes_.data() + pos_, count * sizeof(T));
    pos_ += count * sizeof(T);
    return values;
  }

  std::string_view GetBytes(size_t count) {
    Need(count);
    auto out = bytes_.substr(pos_, count);
    pos_ += count;
    return out;
  }

  size_t remaining() const { return bytes_.size() - pos_; }
  [[noreturn]] void Fail(const std::string& why) const {
    throw DataError(what_ + ": " + why);
  }

 private:
  void Need(size_t n) const {
    if (n > remaining()) Fail("truncated header");
  }

  std::string_view bytes_;
  std::string what_;
  size_t pos_ = 0;
};

}  // namespace r2w

#endif  // R2W_UTIL_BINARY_IO_H_
