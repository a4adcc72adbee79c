#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace cellgrow::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalidInput = 2,
  kExitRuntime = 3,
};

/// Missing or unusable input; maps to exit code 2.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GrowOutputs {
  std::filesystem::path mesh = "mesh.obj";
  /// Empty: next to the mesh as <stem>.stats.csv.
  std::filesystem::path stats;
  /// Empty: no heightmap.
  std::filesystem::path heightmap;
};

/// The commands throw on failure; run() turns exceptions into exit codes.
void cmd_grow(const RunConfig &config, const GrowOutputs &outputs,
              std::ostream &log);
void cmd_gallery(const RunConfig &config, const std::filesystem::path &out_dir,
                 std::ostream &log);
void cmd_evolve(const RunConfig &config, const std::filesystem::path &out_dir,
                bool heightmap, std::ostream &log, std::ostream &err);
/// Prints one line per violation. Returns true when there are none.
bool cmd_validate(const std::filesystem::path &path, std::ostream &out);

/// Full command line handling, argv[0] included.
int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err);
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace cellgrow::cli
