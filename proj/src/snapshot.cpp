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

#include "machlimit/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "machlimit/errors.hpp"

namespace machlimit {
namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const ScalarField& f, const std::string& name,
                    double time) {
  if (name.find_first_of(" \n") != std::string::npos) {
    throw IoError("snapshot name must not contain blanks: " + name);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open snapshot for writing: " + path);
  const Grid& g = f.grid();
  out << "machlimit-snapshot 1\n"
      << "dim " << g.dim << "\n"
      << "n " << g.n << "\n"
      << std::setprecision(17) << "L " << g.L << "\n"
      << "name " << name << "\n"
      << "time " << time << "\n\n";
  for (double v : f.values()) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!out) throw IoError("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path);
  std::string line;
  std::getline(in, line);
  if (line != "machlimit-snapshot 1") throw IoError("not a snapshot file: " + path);
  int dim = 0, n = 0;
  double L = 0.0, time = 0.0;
  std::string name;
  while (std::getline(in, line) && !line.empty()) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dim") ls >> dim;
    else if (key == "n") ls >> n;
    else if (key == "L") ls >> L;
    else if (key == "name") ls >> name;
    else if (key == "time") ls >> time;
  }
  const Grid g(dim, n, L);
  std::vector<double> samples(g.size());
  for (double& v : samples) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), sizeof bits);
    v = std::bit_cast<double>(to_little(bits));
  }
  if (!in) throw IoError("truncated snapshot: " + path);
  return {ScalarField(g, std::move(samples)), name, time};
}

}  // namespace machlimit
