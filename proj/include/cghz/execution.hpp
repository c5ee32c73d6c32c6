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

#pragma once

#include <stdexcept>
#include <string>

namespace cghz {

// Execution policy for the state-vector kernels. Both policies produce
// bit-identical results: the parallel path only distributes deterministic,
// index-addressed work (term expansion, pattern enumeration, sweep rows).
enum class Exec { Serial, Parallel };

Exec execution() noexcept;
void set_execution(Exec e) noexcept;

// RAII helper used by tests/benchmarks to switch policy within a scope.
class ScopedExecution {
 public:
  explicit ScopedExecution(Exec e) : prev_(execution()) { set_execution(e); }
  ~ScopedExecution() { set_execution(prev_); }
  ScopedExecution(const ScopedExecution&) = delete;
  ScopedExecution& operator=(const ScopedExecution&) = delete;

 private:
  Exec prev_;
};

// Problem-size guard: protocol instances are rejected when m*N exceeds the
// cap. Initialized from the CGHZ_MAX_MN environment variable (default 9);
// adjustable programmatically for benchmarks.
int desk_cap() noexcept;
void set_desk_cap(int cap) noexcept;

struct CapError : std::runtime_error {
  explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cghz
