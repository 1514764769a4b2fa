// Copyright 2026 The qndm-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef QNDM_IO_HPP
#define QNDM_IO_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qndm {

/// Writes `content` to a temporary sibling of `path`, then renames it over
/// `path`. Creates missing parent directories. Throws IoError.
void write_file_atomic(const std::string &path, std::string_view content);

/// Whole-file read. Throws IoError.
std::string read_file(const std::string &path);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
/// Throws ConfigError on a line without '=' or with an empty key.
KeyValues parse_key_values(std::string_view text);
std::string format_key_values(const KeyValues &kv);

/// Shortest round-trip representation (%.17g).
std::string format_double(double x);

/// Comma-separated list of integers, e.g. "6,12,24". Throws ConfigError.
std::vector<std::size_t> parse_size_list(std::string_view text);
std::string format_size_list(const std::vector<std::size_t> &values);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace qndm

#endif
