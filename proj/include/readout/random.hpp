// Copyright 2026 The readout-sim Authors
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

#ifndef READOUT_RANDOM_HPP
#define READOUT_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace readout {

/// Master seed of a simulation. Every random stream is keyed by
/// (master_seed, label, index) through stream_key(), so a given shot or
/// resample draws the same numbers whatever the execution order.
struct SeedSpec {
  std::uint64_t master_seed{0};
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over the bytes of a label.
constexpr std::uint64_t label_hash(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t stream_key(const SeedSpec& seed, std::string_view label, std::uint64_t index) {
  return mix64(mix64(mix64(seed.master_seed) ^ label_hash(label)) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

Engine make_engine(const SeedSpec& seed, std::string_view label, std::uint64_t index);

}  // namespace readout

#endif  // READOUT_RANDOM_HPP
