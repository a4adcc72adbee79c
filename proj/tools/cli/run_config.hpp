#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellgrow/evolve.hpp"
#include "cellgrow/fitness.hpp"
#include "cellgrow/growth.hpp"
#include "cellgrow/neuralnet.hpp"

namespace cellgrow::cli {

/// Bad configuration value or file; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Everything a command can be told, in one place. Flags, config files and
/// manifests all go through the same key table.
struct RunConfig {
  GrowthConfig growth;
  GAConfig ga;
  GridConfig grid;
  Architecture architecture;
  std::uint64_t seed = 0;
  std::size_t count = 250;
  std::uint64_t seed_base = 0;
  /// Genome file for `grow`; empty means none.
  std::string genome;
  bool random = false;
};

enum class KeyGroup { growth, ga, grid, gallery, grow };

struct KeySpec {
  std::string key;
  std::string flag;
  KeyGroup group;
  std::string help;
};

/// Every recognised key.
const std::vector<KeySpec> &key_table();

/// Sets one key from text. Throws ConfigError for unknown keys or values
/// that do not parse.
void apply_key(RunConfig &config, const std::string &key,
               const std::string &value);

/// Reads either "key = value" lines (# comments allowed) or a run manifest
/// (a JSON document with a "config" object).
void apply_config_file(RunConfig &config, const std::filesystem::path &path);

/// Every key with its resolved value.
nlohmann::ordered_json config_to_json(const RunConfig &config);

/// Checks cross-field constraints of the resolved config.
void check_config(const RunConfig &config);

} // namespace cellgrow::cli
