// Copyright 2026 The nufloquet Authors
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

#include <algorithm>
#include <cstdint>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "nufloquet/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Non-unitary Floquet Majorana chain toolkit"};
  std::string config, out;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;
  std::string engine;
  app.add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "override model.seed");
  auto* engine_opt =
      app.add_option("--engine", engine, "gaussian, exact or both")->check(CLI::IsMember({"gaussian", "exact", "both"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  nufloquet::cli::Overrides overrides;
  if (*seed_opt) overrides.seed = seed;
  if (*engine_opt) overrides.engine = engine;
  return nufloquet::cli::run_from_file(config, out, workers, overrides);
}
