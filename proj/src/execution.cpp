// Copyright 2026 The cghzsim Authors
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

#include "cghz/execution.hpp"

#include <atomic>
#include <cstdlib>

namespace cghz {

namespace {

std::atomic<Exec> g_exec{Exec::Parallel};

int initial_cap() {
  if (const char* env = std::getenv("CGHZ_MAX_MN")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 9;
}

std::atomic<int> g_cap{initial_cap()};

}  // namespace

Exec execution() noexcept { return g_exec.load(std::memory_order_relaxed); }
void set_execution(Exec e) noexcept { g_exec.store(e, std::memory_order_relaxed); }

int desk_cap() noexcept { return g_cap.load(std::memory_order_relaxed); }
void set_desk_cap(int cap) noexcept { g_cap.store(cap, std::memory_order_relaxed); }

}  // namespace cghz
