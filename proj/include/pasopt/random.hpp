// SPDX-License-Identifier: Apache-2.0
//
// pasopt - placement optimization for multi-waveguide pinching antenna systems
// Copyright (C) 2026 The pasopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

namespace pasopt {

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed for (master, counter, stream). Stream ids separate
/// the draws of one trial (users, random pre-placement, random init).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter, std::uint64_t stream = 0) {
    return mix64(mix64(master ^ mix64(counter)) + stream);
}

/// Counter-based uniform on [0, 1): the counter-th draw of the SplitMix64
/// stream seeded with seed. Independent of how many other draws are taken.
constexpr double counter_unit(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(mix64(seed + counter * 0x9e3779b97f4a7c15ULL) >> 11) * 0x1.0p-53;
}

/// Seeded 64-bit Mersenne Twister with a portable uniform mapping
/// (std::uniform_real_distribution is not bit-stable across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

enum Stream : std::uint64_t {
    stream_users = 0,
    stream_preplacement = 1,
    stream_init = 2,
};

}  // namespace pasopt
