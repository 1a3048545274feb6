// Copyright 2026 The semcom Authors.
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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "semcom/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Semantic-communication AIGC delivery simulator"};
  app.set_version_flag("--version", semcom::kVersion);
  app.require_subcommand(1);

  std::string in, kind = "canny", out, id;
  auto* extract = app.add_subcommand("extract", "Extract a semantic map from a PGM image");
  extract->add_option("--in", in, "Source image (binary PGM)")->required();
  extract->add_option("--kind", kind,
                      "Extractor: canny[:sigma=,low=,high=] | sobel | quantize[:k=] | external:template=")
      ->capture_default_str();
  extract->add_option("--out", out, "Output PGM path")->required();
  extract->add_option("--id", id, "Image id for external templates (default: input file stem)");

  std::string config;
  auto* sweep = app.add_subcommand("sweep", "Quality-vs-factor sweep and pair selection");
  sweep->add_option("config", config, "Experiment config")->required();

  std::string solver = "dqn";
  auto* allocate = app.add_subcommand("allocate", "Joint factor allocation under the byte budget");
  allocate->add_option("config", config, "Experiment config")->required();
  allocate->add_option("--solver", solver, "dqn | greedy | exhaustive | random")
      ->capture_default_str()
      ->check(CLI::IsMember({"dqn", "greedy", "exhaustive", "random"}));

  auto* pipeline = app.add_subcommand("pipeline", "Extract, validate, encode, transmit, decode, score");
  pipeline->add_option("config", config, "Experiment config")->required();

  std::string synth_dir;
  int synth_size = 64;
  auto* synth = app.add_subcommand("synth", "Write the synthetic test corpus as PGM files");
  synth->add_option("--out", synth_dir, "Output directory")->required();
  synth->add_option("--size", synth_size, "Image side in pixels")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return semcom::kExitUsage;
  }

  if (*extract) return semcom::cmd_extract(in, kind, out, std::cerr, id);
  if (*sweep) return semcom::cmd_sweep(config, std::cout, std::cerr);
  if (*allocate) {
    return semcom::cmd_allocate(config, semcom::parse_solver(solver), std::cout, std::cerr);
  }
  if (*pipeline) return semcom::cmd_pipeline(config, std::cout, std::cerr);
  if (*synth) return semcom::cmd_synth(synth_dir, synth_size, std::cerr);
  return semcom::kExitUsage;
}
