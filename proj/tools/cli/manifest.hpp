#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace cellgrow::cli {

/// Record written next to every command's outputs. Feeding it back through
/// --config reproduces the run.
class Manifest {
public:
  Manifest(std::string command, const RunConfig &config);

  void add_input(const std::filesystem::path &path);
  void add_output(const std::filesystem::path &path);

  /// Stamps the finish time and writes the JSON document.
  void write(const std::filesystem::path &path);

private:
  std::string command_;
  nlohmann::ordered_json config_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::string started_at_;
};

/// UTC, ISO 8601 with seconds.
std::string utc_timestamp();

} // namespace cellgrow::cli
