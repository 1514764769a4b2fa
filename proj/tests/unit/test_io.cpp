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


#include <gtest/gtest.h>

#include <filesystem>
#include <regex>

#include "qndm/error.hpp"
#include "qndm/io.hpp"

namespace qndm {
namespace {

TEST(Io, KeyValuesRoundTrip) {
    const KeyValues kv{{"seed", "42"}, {"J", "6,12"}, {"observable", "1 Z; 2 X"}};
    EXPECT_EQ(parse_key_values(format_key_values(kv)), kv);
    EXPECT_EQ(parse_key_values("# header\n\n  a =  b c \n"), (KeyValues{{"a", "b c"}}));
    EXPECT_THROW(parse_key_values("no equals sign"), ConfigError);
    EXPECT_THROW(parse_key_values(" = value"), ConfigError);
}

TEST(Io, DoublesRoundTrip) {
    for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

TEST(Io, SizeLists) {
    EXPECT_EQ(parse_size_list("6,12, 24"), (std::vector<std::size_t>{6, 12, 24}));
    EXPECT_EQ(format_size_list({1, 2, 3}), "1,2,3");
    EXPECT_THROW(parse_size_list("6,x"), ConfigError);
    EXPECT_THROW(parse_size_list("-3"), ConfigError);
}

TEST(Io, AtomicWriteAndRead) {
    const auto dir = std::filesystem::temp_directory_path() / "qndm_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    const auto path = (dir / "file.txt").string();
    write_file_atomic(path, "hello\n");
    write_file_atomic(path, "world\n");
    EXPECT_EQ(read_file(path), "world\n");
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
    EXPECT_THROW(read_file((dir / "missing.txt").string()), IoError);
    std::filesystem::remove_all(dir.parent_path());
}

TEST(Io, TimestampFormat) {
    EXPECT_TRUE(std::regex_match(utc_timestamp(), std::regex(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)")));
}

}  // namespace
}  // namespace qndm
