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

#include "machlimit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "machlimit/errors.hpp"

namespace machlimit {
namespace {

using Slot = std::variant<int*, double*, bool*, std::string*, std::vector<double>*>;

struct Entry {
  const char* key;
  Slot slot;
};

std::vector<Entry> entries(ExperimentConfig& c) {
  return {
      {"grid.dim", &c.grid.dim},
      {"grid.n", &c.grid.n},
      {"grid.L", &c.grid.L},
      {"gas.variant", &c.gas.variant},
      {"gas.p_infty", &c.gas.p_infty},
      {"gas.a_rad", &c.gas.a_rad},
      {"gas.mu0", &c.gas.mu0},
      {"gas.kappa0", &c.gas.kappa0},
      {"ref.rho_bar", &c.ref.rho_bar},
      {"ref.theta_bar", &c.ref.theta_bar},
      {"scaling.eps", &c.scaling.eps},
      {"scaling.a_exp", &c.scaling.a_exp},
      {"scaling.b_exp", &c.scaling.b_exp},
      {"scaling.eta", &c.scaling.eta},
      {"scaling.eta_list", &c.scaling.eta_list},
      {"scaling.cutoff_unit", &c.scaling.cutoff_unit},
      {"data.rho_amp", &c.data.rho_amp},
      {"data.rho_width", &c.data.rho_width},
      {"data.theta_amp", &c.data.theta_amp},
      {"data.theta_width", &c.data.theta_width},
      {"data.theta_shift", &c.data.theta_shift},
      {"data.vortex_amp", &c.data.vortex_amp},
      {"data.vortex_width", &c.data.vortex_width},
      {"data.vortex_sep", &c.data.vortex_sep},
      {"data.gradient_amp", &c.data.gradient_amp},
      {"data.gradient_width", &c.data.gradient_width},
      {"time.dt", &c.time.dt},
      {"time.t_final", &c.time.t_final},
      {"time.sample_interval", &c.time.sample_interval},
      {"time.acoustic_cfl", &c.time.acoustic_cfl},
      {"time.t_max", &c.time.t_max},
      {"metrics.k_radius", &c.metrics.k_radius},
      {"decay.width", &c.decay.width},
      {"decay.support_factor", &c.decay.support_factor},
      {"decay.t_start", &c.decay.t_start},
      {"decay.samples", &c.decay.samples},
      {"output.dir", &c.output.dir},
      {"output.snapshots", &c.output.snapshots},
  };
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void assign(const std::string& key, Slot slot, const std::string& value) {
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, int>) {
          const double d = parse_double(key, value);
          if (d != std::floor(d)) throw ConfigError(key + ": expected an integer");
          *p = static_cast<int>(d);
        } else if constexpr (std::is_same_v<T, double>) {
          *p = parse_double(key, value);
        } else if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") *p = true;
          else if (value == "false" || value == "0") *p = false;
          else throw ConfigError(key + ": expected true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
          *p = value;
        } else {
          p->clear();
          std::stringstream ss(value);
          std::string item;
          while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) p->push_back(parse_double(key, item));
          }
        }
      },
      slot);
}

std::string render(Slot slot) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, int>) {
          return std::to_string(*p);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(*p);
        } else if constexpr (std::is_same_v<T, bool>) {
          return *p ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else {
          std::string out;
          for (std::size_t i = 0; i < p->size(); ++i) {
            if (i) out += ", ";
            out += format_double((*p)[i]);
          }
          return out;
        }
      },
      slot);
}

}  // namespace

GasModel ExperimentConfig::gas_model() const {
  if (gas.variant != "fn_degenerate") {
    throw ConfigError("gas.variant: only fn_degenerate can be configured from a file");
  }
  return GasModel::fn_degenerate(gas.p_infty, gas.a_rad, gas.mu0, gas.kappa0);
}

void ExperimentConfig::validate() const {
  if (grid.dim < 1 || grid.dim > 3) throw ConfigError("grid.dim must be 1, 2 or 3");
  if (grid.n < 8 || (grid.n & (grid.n - 1)) != 0) {
    throw ConfigError("grid.n must be a power of two >= 8");
  }
  if (!(grid.L > 0.0)) throw ConfigError("grid.L must be positive");
  if (gas.variant != "fn_degenerate") {
    throw ConfigError("gas.variant: only fn_degenerate can be configured from a file");
  }
  if (!(gas.p_infty > 0.0) || !(gas.mu0 > 0.0) || !(gas.kappa0 > 0.0) || gas.a_rad < 0.0) {
    throw ConfigError("gas parameters out of range");
  }
  if (!(ref.rho_bar > 0.0) || !(ref.theta_bar > 0.0)) {
    throw ConfigError("reference state must be positive");
  }
  if (scaling.eps.empty()) throw ConfigError("scaling.eps: at least one value required");
  std::set<double> seen;
  for (double e : scaling.eps) {
    if (!(e > 0.0)) throw ConfigError("scaling.eps: values must be positive");
    if (!seen.insert(e).second) throw ConfigError("scaling.eps: duplicate value " + format_double(e));
  }
  if (!(scaling.b_exp > 0.0)) throw ConfigError("scaling.b_exp: need b > 0");
  if (!(scaling.a_exp > 0.0 && scaling.a_exp < 10.0 / 3.0)) {
    throw ConfigError("scaling.a_exp: need 0 < a < 10/3");
  }
  if (!(scaling.eta > 0.0)) throw ConfigError("scaling.eta must be positive");
  for (double e : scaling.eta_list) {
    if (!(e > 0.0)) throw ConfigError("scaling.eta_list: values must be positive");
  }
  if (!(time.dt > 0.0) || !(time.t_final > 0.0) || !(time.sample_interval > 0.0) ||
      !(time.acoustic_cfl > 0.0)) {
    throw ConfigError("time parameters must be positive");
  }
  if (decay.samples < 5) throw ConfigError("decay.samples must be at least 5");
  if (!(decay.width > 0.0) || !(decay.support_factor > 0.0)) {
    throw ConfigError("decay parameters must be positive");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  auto table = entries(cfg);
  std::set<std::string> assigned;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Entry& e) { return key == e.key; });
    if (it == table.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + key);
    if (!assigned.insert(key).second) throw ConfigError("key given twice: " + key);
    assign(key, it->slot, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  ExperimentConfig copy = cfg;
  std::ostringstream out;
  for (const Entry& e : entries(copy)) out << e.key << " = " << render(e.slot) << '\n';
  return out.str();
}

}  // namespace machlimit
