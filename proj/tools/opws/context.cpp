// Copyright 2026 The opws Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "context.hpp"

#include <bit>
#include <cmath>

#include "opws/rng.hpp"

namespace opws::cli {

std::uint64_t Context::seed_or(std::uint64_t fallback) const {
  if (seed) return *seed;
  if (config.contains("seed")) {
    const auto& v = config.at("seed");
    if (!v.is_number_unsigned()) throw SchemaError("config: 'seed' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }
  return fallback;
}

double Context::tolerance_or(double fallback) const {
  if (tolerance) return *tolerance;
  return number("tolerance", fallback);
}

void Context::check_keys(std::initializer_list<const char*> allowed, const std::string& command) const {
  for (const auto& [key, value] : config.items()) {
    bool ok = key == "seed" || key == "tolerance";
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(command + " config: unknown key '" + key + "'");
  }
}

double Context::number(const char* key, double fallback) const {
  if (!config.contains(key)) return fallback;
  if (!config.at(key).is_number()) throw SchemaError(std::string("config: '") + key + "' must be a number");
  return config.at(key).get<double>();
}

long long Context::integer(const char* key, long long fallback) const {
  if (!config.contains(key)) return fallback;
  if (!config.at(key).is_number_integer()) {
    throw SchemaError(std::string("config: '") + key + "' must be an integer");
  }
  return config.at(key).get<long long>();
}

void Outputs::text(const std::string& name, std::string contents) {
  files_.emplace_back(name, std::move(contents));
}

void Outputs::array(const std::string& stem, const GriddedArray& a) {
  std::string payload;
  payload.reserve(static_cast<std::size_t>(a.values.size()) * 16);
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
      for (double part : {a.values(i, j).real(), a.values(i, j).imag()}) {
        const auto bits = std::bit_cast<std::uint64_t>(part);
        for (int b = 0; b < 8; ++b) payload.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
      }
    }
  }
  text(stem + ".bin", std::move(payload));
  json_file(stem + ".json", {{"t0", a.grid.origin0},
                             {"dt0", a.grid.step0},
                             {"t1", a.grid.origin1},
                             {"dt1", a.grid.step1},
                             {"dims", {a.values.rows(), a.values.cols()}}});
  text(stem + ".csv", array_to_csv(a));
}

void Outputs::commit() const {
  if (files_.empty()) return;
  std::filesystem::create_directories(dir_);
  for (const auto& [name, contents] : files_) write_file_atomic(dir_ / name, contents);
}

double add_noise(CVector& v, double snr_db, std::uint64_t seed) {
  double energy = 0.0;
  for (const auto& x : v) energy += std::norm(x);
  if (v.empty() || energy == 0.0) return 0.0;
  const double sigma = std::sqrt(energy / static_cast<double>(v.size())) * std::pow(10.0, -snr_db / 20.0);
  RandomStream rs(seed, 1);
  double added = 0.0;
  for (auto& x : v) {
    const cplx n = sigma * rs.complex_normal();
    added += std::norm(n);
    x += n;
  }
  return std::sqrt(added / energy);
}

std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 0.0) || v > 1e18 || v != std::floor(v)) {
    throw SchemaError("expected a non-negative integer count, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace opws::cli
