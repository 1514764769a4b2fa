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

#ifndef QNDM_RANDOM_HPP
#define QNDM_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qndm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Folds a list of coordinates into a seed: h = splitmix(h ^ splitmix(c)) for
/// each coordinate in order, starting from the master seed. Order matters.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master);
    for (auto c : coords) {
        h = splitmix64(h ^ splitmix64(c));
    }
    return h;
}

// Labels for the independent sub-streams of one realization.
enum class Stream : std::uint64_t {
    Instance = 1,
    QndmShots = 2,
    DmPilot = 3,
    DmShots = 4,
    QndmRepeats = 5,
    DmRepeats = 6,
};

constexpr std::uint64_t stream_seed(std::uint64_t base, Stream s) {
    return mix_seed(base, {static_cast<std::uint64_t>(s)});
}

}  // namespace qndm

#endif
