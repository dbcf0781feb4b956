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

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "CLI11.hpp"
#include "context.hpp"
#include "opws/parallel.hpp"

namespace {

using namespace opws;
using namespace opws::cli;

int fail(int code, const std::string& msg) {
  std::fprintf(stderr, "opws: %s\n", msg.c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator sampling experiments: identifiers, geometry, reconstruction demos."};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<unsigned> threads;
  std::string out_dir = "opws_out";
  app.add_option("--config", config_path, "JSON config for the command");
  app.add_option("--seed", seed, "RNG seed (u64)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (default: OPWS_THREADS or 1)");
  app.add_option("--tolerance", tolerance, "Override the command's tolerance");

  auto* demo = app.add_subcommand("demo", "Run a built-in scenario end to end");
  std::string demo_name;
  std::optional<double> snr_db;
  demo->add_option("name", demo_name, "shannon | convolution | rect | multicell")
      ->required()
      ->check(CLI::IsMember({"shannon", "convolution", "rect", "multicell"}));
  demo->add_option("--snr-db", snr_db, "Add white noise at this SNR");

  auto* glp = app.add_subcommand("glp", "Check general linear position of a Gabor system");
  GlpArgs glp_args;
  glp->add_option("L", glp_args.L, "Identifier length");
  glp->add_option("--mode", glp_args.mode, "exhaustive | randomized | none")->capture_default_str();
  glp->add_option("--trials", glp_args.trials, "Random subsets (randomized mode), e.g. 1e6");
  glp->add_option("--c-file", glp_args.c_file, "JSON identifier: list or {L, c}");
  glp->add_option("--budget", glp_args.budget, "Largest exhaustive subset count");

  auto* search = app.add_subcommand("search", "Search seeded candidates for a well-conditioned identifier");
  SearchArgs search_args;
  search->add_option("L", search_args.L, "Identifier length")->required();
  search->add_option("--candidates", search_args.trials, "Candidates to score")->capture_default_str();
  search->add_option("--objective", search_args.objective, "cond | det")->capture_default_str();
  search->add_option("--mode", search_args.mode, "Scoring mode: exhaustive | randomized")->capture_default_str();
  search->add_option("--trials", search_args.scoring_trials, "Subsets per candidate (randomized)");

  auto* geometry = app.add_subcommand("geometry", "Jordan content, rectification, normalization");
  std::string geometry_sub;
  std::optional<std::string> support_file;
  geometry->add_option("what", geometry_sub, "content | rectify | normalize")
      ->required()
      ->check(CLI::IsMember({"content", "rectify", "normalize"}));
  geometry->add_option("--support", support_file, "JSON support set");

  auto* sweep = app.add_subcommand("sweep", "Conditioning sweep over pattern sizes");
  SweepArgs sweep_args;
  sweep->add_option("--L", sweep_args.L, "Identifier length (default 5)");
  sweep->add_option("--trials", sweep_args.trials, "Random patterns per size (default 100)");
  sweep->add_option("--areas", sweep_args.areas, "Pattern sizes, e.g. 1-8 (default 1..L+3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    Context ctx;
    ctx.seed = seed;
    ctx.tolerance = tolerance;
    ctx.out = out_dir;
    if (config_path) {
      ctx.config = read_json_file(*config_path);
      if (!ctx.config.is_object()) throw SchemaError("config must be a JSON object");
    }
    if (threads) {
      if (*threads < 1) throw SchemaError("--threads must be >= 1");
      set_default_threads(*threads);
    }
    if (demo->parsed()) return run_demo(ctx, demo_name, snr_db);
    if (glp->parsed()) return run_glp(ctx, glp_args);
    if (search->parsed()) return run_search(ctx, search_args);
    if (geometry->parsed()) return run_geometry(ctx, geometry_sub, support_file);
    if (sweep->parsed()) return run_sweep(ctx, sweep_args);
    return kUsage;
  } catch (const SchemaError& e) {
    return fail(kUsage, std::string("error: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kUsage, std::string("error: bad config: ") + e.what());
  } catch (const BudgetExceededError& e) {
    return fail(kUsage, std::string("error: ") + e.what());
  } catch (const DomainError& e) {
    return fail(kUsage, std::string("error: ") + e.what());
  } catch (const SizeMismatchError& e) {
    return fail(kUsage, std::string("error: ") + e.what());
  } catch (const InfeasibleError& e) {
    return fail(kFailed, e.what());
  } catch (const SingularSystemError& e) {
    return fail(kFailed, std::string("error: ") + e.what());
  } catch (const std::exception& e) {
    return fail(kFailed, std::string("error: ") + e.what());
  }
}
