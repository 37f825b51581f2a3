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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nufloquet/model.hpp"

namespace nufloquet::cli {

enum class Task { Spectrum, Edge, Dynamics, PhaseDiagram, Entanglement, Verify };
enum class Engine { Gaussian, Exact, Both };

std::string to_string(Task task);
std::string to_string(Engine engine);

struct RunConfig {
  Task task = Task::Spectrum;
  ModelParams model;
  Engine engine = Engine::Gaussian;
  nlohmann::json options = nlohmann::json::object();
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> engine;
};

// Throws ConfigError on malformed documents or violated engine limits.
RunConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
nlohmann::json to_json(const RunConfig& cfg);

struct RunResult {
  std::vector<std::string> files;
  nlohmann::json summary = nlohmann::json::object();
};

// Executes the task and writes CSV/JSON artifacts under `out`.
RunResult run(const RunConfig& cfg, const std::filesystem::path& out, int workers);

// Full command-line flow: parse, run, manifest, error JSON. Returns the exit
// code (0 success, 2 config error, 3 numerical failure).
int run_from_file(const std::filesystem::path& config, const std::filesystem::path& out, int workers,
                  const Overrides& overrides);

// ----- utilities shared with the tests -----

// Writes through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// Runs body(i) for i in [0, n) on up to `workers` threads and rethrows the
// first exception.
void parallel_for(int n, int workers, const std::function<void(int)>& body);

// Shortest round-trip decimal representation ("nan" for NaN).
std::string format_number(double x);

}  // namespace nufloquet::cli
