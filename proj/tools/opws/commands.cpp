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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "context.hpp"
#include "opws/gabor.hpp"
#include "opws/geometry.hpp"
#include "opws/identify.hpp"

namespace opws::cli {
namespace {

GlpMode parse_mode(const std::string& m) {
  if (m == "exhaustive") return GlpMode::kExhaustive;
  if (m == "randomized") return GlpMode::kRandomized;
  if (m == "none") return GlpMode::kNone;
  throw SchemaError("mode must be exhaustive, randomized or none");
}

std::vector<int> int_list(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be a list of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw SchemaError(std::string(what) + " must be a list of integers");
    out.push_back(v.get<int>());
  }
  return out;
}

// "1-8", "1,2,5" or "3".
std::vector<int> parse_areas(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  try {
    while (std::getline(ss, part, ',')) {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoi(part));
      } else {
        const int a = std::stoi(part.substr(0, dash)), b = std::stoi(part.substr(dash + 1));
        for (int v = a; v <= b; ++v) out.push_back(v);
      }
    }
  } catch (const std::logic_error&) {
    throw SchemaError("areas must look like 1-8 or 1,2,5");
  }
  if (out.empty()) throw SchemaError("areas must not be empty");
  return out;
}

}  // namespace

int run_glp(const Context& ctx, const GlpArgs& args) {
  ctx.check_keys({"L", "mode", "trials", "c", "budget"}, "glp");
  GlpOptions opts;
  opts.mode = parse_mode(ctx.config.value("mode", args.mode));
  opts.seed = ctx.seed_or(0);
  opts.rel_tolerance = ctx.tolerance_or(opts.rel_tolerance);
  if (args.trials) {
    opts.trials = parse_count(*args.trials);
  } else if (ctx.has("trials")) {
    opts.trials = static_cast<std::uint64_t>(ctx.integer("trials", 0));
  }
  if (args.budget) {
    opts.budget = *args.budget;
  } else if (ctx.has("budget")) {
    opts.budget = static_cast<std::uint64_t>(ctx.integer("budget", 0));
  }

  std::optional<int> L = args.L;
  if (!L && ctx.has("L")) L = static_cast<int>(ctx.integer("L", 0));
  CVector c;
  if (args.c_file) {
    c = identifier_from_json(read_json_file(*args.c_file));
  } else if (ctx.has("c")) {
    c = identifier_from_json(ctx.config.at("c"));
  }
  if (!c.empty()) {
    if (L && *L != static_cast<int>(c.size())) throw SchemaError("glp: L does not match the identifier length");
    L = static_cast<int>(c.size());
  } else {
    if (!L || *L < 1) throw SchemaError("glp: give L or an identifier");
    c = random_unit_vector(*L, opts.seed);
  }

  const auto cert = check_glp(c, opts);
  json doc = {{"L", *L}, {"c", to_json(c)}, {"seed", opts.seed}, {"certificate", to_json(cert)}};
  Outputs out(ctx.out);
  out.json_file("glp_L" + std::to_string(*L) + ".json", doc);
  out.commit();
  std::fputs(dump(doc).c_str(), stdout);
  if (opts.mode == GlpMode::kNone) return kOk;
  return cert.holds ? kOk : kFailed;
}

int run_search(const Context& ctx, const SearchArgs& args) {
  ctx.check_keys({}, "search");
  if (args.L < 1) throw SchemaError("search: L must be positive");
  SearchOptions opts;
  opts.trials = args.trials;
  opts.seed = ctx.seed_or(0);
  if (args.objective == "cond") {
    opts.objective = IdentifierObjective::kMinWorstCond;
  } else if (args.objective == "det") {
    opts.objective = IdentifierObjective::kMaximinDet;
  } else {
    throw SchemaError("objective must be cond or det");
  }
  opts.scoring.mode = parse_mode(args.mode);
  opts.scoring.seed = opts.seed;
  opts.scoring.rel_tolerance = ctx.tolerance_or(opts.scoring.rel_tolerance);
  if (args.scoring_trials) opts.scoring.trials = parse_count(*args.scoring_trials);
  const auto id = search_identifier(args.L, opts);
  const json doc = to_json(id);
  Outputs out(ctx.out);
  out.json_file("identifier_L" + std::to_string(args.L) + ".json", doc);
  out.commit();
  std::fputs(dump(doc).c_str(), stdout);
  return id.certificate.holds ? kOk : kFailed;
}

int run_geometry(const Context& ctx, const std::string& sub, const std::optional<std::string>& support_file) {
  SupportSet M;
  if (support_file) {
    M = support_from_json(read_json_file(*support_file));
  } else if (ctx.has("support")) {
    M = support_from_json(ctx.config.at("support"));
  } else {
    throw SchemaError("geometry: give --support or a config with 'support'");
  }
  json doc;
  if (sub == "content") {
    ctx.check_keys({"support", "Kmax", "Lmax", "Lset"}, "geometry content");
    ContentOptions o;
    o.Kmax = static_cast<int>(ctx.integer("Kmax", o.Kmax));
    o.Lmax = static_cast<int>(ctx.integer("Lmax", o.Lmax));
    if (ctx.has("Lset")) o.Lset = int_list(ctx.config.at("Lset"), "Lset");
    doc = {{"area", M.area()},
           {"inner", to_json(content(M, ContentSide::kInner, o))},
           {"outer", to_json(content(M, ContentSide::kOuter, o))},
           {"Kmax", o.Kmax},
           {"Lmax", o.Lmax}};
  } else if (sub == "rectify") {
    ctx.check_keys({"support", "Lcandidates", "eps"}, "geometry rectify");
    const auto Ls = ctx.has("Lcandidates") ? int_list(ctx.config.at("Lcandidates"), "Lcandidates") : primes_up_to(23);
    std::vector<Rational> eps = default_eps_grid();
    if (ctx.has("eps")) {
      eps.clear();
      for (const auto& e : ctx.config.at("eps")) eps.push_back(rational_from_json(e));
    }
    doc = to_json(rectify(M, Ls, eps));
  } else if (sub == "normalize") {
    ctx.check_keys({"support"}, "geometry normalize");
    doc = to_json(normalize_support(M));
  } else {
    throw SchemaError("geometry subcommand must be content, rectify or normalize");
  }
  Outputs out(ctx.out);
  out.json_file("geometry_" + sub + ".json", doc);
  out.commit();
  std::fputs(dump(doc).c_str(), stdout);
  return kOk;
}

int run_sweep(const Context& ctx, const SweepArgs& args) {
  ctx.check_keys({"L", "c", "areaCells", "trials"}, "sweep");
  int L = args.L ? *args.L : static_cast<int>(ctx.integer("L", 5));
  const int trials = args.trials ? *args.trials : static_cast<int>(ctx.integer("trials", 100));
  const std::uint64_t seed = ctx.seed_or(0);
  CVector c;
  if (ctx.has("c")) {
    c = identifier_from_json(ctx.config.at("c"));
    if (args.L && *args.L != static_cast<int>(c.size())) throw SchemaError("sweep: L does not match the identifier length");
    L = static_cast<int>(c.size());
  } else {
    if (L < 1) throw SchemaError("sweep: L must be positive");
    c = random_unit_vector(L, seed);
  }
  std::vector<int> areas;
  if (args.areas) {
    areas = parse_areas(*args.areas);
  } else if (ctx.has("areaCells")) {
    areas = int_list(ctx.config.at("areaCells"), "areaCells");
  } else {
    for (int a = 1; a <= L + 3; ++a) areas.push_back(a);
  }
  const auto rows = conditioning_sweep(L, c, areas, trials, seed);
  Outputs out(ctx.out);
  out.text("sweep.csv", sweep_to_csv(rows));
  out.commit();

  std::printf("areaCells  min        median     max        flagged\n");
  double prev = INFINITY;
  bool monotone = true;
  for (int a : areas) {
    std::vector<double> s;
    int flagged = 0;
    for (const auto& r : rows) {
      if (r.area_cells != a) continue;
      s.push_back(r.sigma_min);
      flagged += r.flagged ? 1 : 0;
    }
    if (s.empty()) continue;
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    const double med = n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    monotone = monotone && med <= prev;
    prev = med;
    std::printf("%-10d %-10.4g %-10.4g %-10.4g %d/%zu\n", a, s.front(), med, s.back(), flagged, n);
  }
  std::printf("median sigma_min non-increasing: %s\n", monotone ? "yes" : "no");
  return kOk;
}

}  // namespace opws::cli
