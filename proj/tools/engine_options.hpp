#pragma once

#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "wordladders/config.hpp"

namespace wordladders::cli {

// Applies a TOML/INI-style `key = value` file on top of `config`. Keys may
// use either spelling (`depth_cap`, `depth-cap`); unknown keys throw.
void apply_config_file(const std::filesystem::path& path, EngineConfig& config);

// Registers --config followed by one flag per engine setting. --config is
// registered first so explicit flags override values from the file.
void add_engine_options(CLI::App& app, EngineConfig& config);

}  // namespace wordladders::cli
