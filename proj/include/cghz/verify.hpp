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

#include <string>
#include <vector>

namespace cghz {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Built-in self-check suite: element unitarity and involutions on seeded
// random states, closed-form expansions of the m = N = 2 checkpoint states,
// agreement with the independent enumeration oracle, the analytic success
// probability, output fidelity, and the alpha/beta exchange symmetry.
// quick = true trims the grids for a sub-second run.
std::vector<VerifyCheck> run_verification(bool quick);

}  // namespace cghz
