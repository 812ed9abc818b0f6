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

#include "readout/random.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

#include "readout/parallel.hpp"

namespace readout {

namespace {
std::atomic<std::size_t> thread_override{0};
}

std::size_t max_threads() {
  if (const std::size_t n = thread_override.load(); n > 0) return n;
  if (const char* env = std::getenv("READOUT_SIM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_max_threads(std::size_t n) { thread_override = n; }

Engine make_engine(const SeedSpec& seed, std::string_view label, std::uint64_t index) {
  const std::uint64_t key = stream_key(seed, label, index);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return Engine(seq);
}

}  // namespace readout
