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

#ifndef OPWS_TOOLS_CONTEXT_HPP_
#define OPWS_TOOLS_CONTEXT_HPP_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opws/io.hpp"

namespace opws::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

/// Settings shared by every command. Flags win over config values.
struct Context {
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::filesystem::path out = "opws_out";

  std::uint64_t seed_or(std::uint64_t fallback) const;
  double tolerance_or(double fallback) const;

  /// Rejects config keys outside `allowed` (plus "seed" and "tolerance").
  void check_keys(std::initializer_list<const char*> allowed, const std::string& command) const;

  bool has(const char* key) const { return config.contains(key); }
  double number(const char* key, double fallback) const;
  long long integer(const char* key, long long fallback) const;
};

/// Files are collected while a command runs and written only once it has
/// finished, each through write_file_atomic.
class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void text(const std::string& name, std::string contents);
  void json_file(const std::string& name, const json& j) { text(name, dump(j)); }
  void array(const std::string& stem, const GriddedArray& a);
  void commit() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

/// White complex Gaussian noise at the given SNR (dB) relative to the RMS of
/// `v`; returns the realized noise-to-signal L2 ratio.
double add_noise(CVector& v, double snr_db, std::uint64_t seed);

int run_demo(const Context& ctx, const std::string& name, std::optional<double> snr_db);

struct GlpArgs {
  std::optional<int> L;
  std::string mode = "exhaustive";
  std::optional<std::string> trials;
  std::optional<std::string> c_file;
  std::optional<std::uint64_t> budget;
};
int run_glp(const Context& ctx, const GlpArgs& args);

struct SearchArgs {
  int L = 0;
  int trials = 20;
  std::string objective = "cond";
  std::string mode = "exhaustive";
  std::optional<std::string> scoring_trials;
};
int run_search(const Context& ctx, const SearchArgs& args);

int run_geometry(const Context& ctx, const std::string& sub, const std::optional<std::string>& support_file);

struct SweepArgs {
  std::optional<int> L;
  std::optional<int> trials;
  std::optional<std::string> areas;
};
int run_sweep(const Context& ctx, const SweepArgs& args);

/// "1e6" or "1000000" -> 1000000; throws SchemaError otherwise.
std::uint64_t parse_count(const std::string& text);

}  // namespace opws::cli

#endif  // OPWS_TOOLS_CONTEXT_HPP_
