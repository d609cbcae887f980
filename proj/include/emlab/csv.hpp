// Copyright 2026 The emlab Authors
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

// Plain CSV output. Floats are written with 17 significant digits so values
// round-trip exactly.

#pragma once

#include <filesystem>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace emlab::csv {

std::string format(double value);

/// Streams comma-separated rows.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  Writer& header(std::initializer_list<std::string_view> columns);
  Writer& field(std::string_view text);
  Writer& field(double value);
  Writer& field(long long value);
  Writer& field(std::size_t value) { return field(static_cast<long long>(value)); }
  Writer& field(int value) { return field(static_cast<long long>(value)); }
  Writer& field(bool value) { return field(std::string_view(value ? "true" : "false")); }
  Writer& end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

/// Opens `path` for writing (creating parent directories), runs `fill`, and
/// raises IoError on any failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill);

}  // namespace emlab::csv
