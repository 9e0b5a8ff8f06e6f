// Copyright 2026 The machlimit Authors
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

// Field snapshots: a short text header terminated by a blank line, then the
// samples as little-endian IEEE doubles in row-major order.
//
//   machlimit-snapshot 1
//   dim 2
//   n 128
//   L 24
//   name rho
//   time 0.5
//   <blank line>
//   <n^dim doubles>

#include <string>

#include "machlimit/grid.hpp"

namespace machlimit {

struct Snapshot {
  ScalarField field;
  std::string name;
  double time = 0.0;
};

void write_snapshot(const std::string& path, const ScalarField& f, const std::string& name,
                    double time);
Snapshot read_snapshot(const std::string& path);

}  // namespace machlimit
