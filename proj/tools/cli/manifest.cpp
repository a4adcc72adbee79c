#include "manifest.hpp"

#include <ctime>
#include <fstream>

#ifndef CELLGROW_VERSION
#define CELLGROW_VERSION "unknown"
#endif

namespace cellgrow::cli {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Manifest::Manifest(std::string command, const RunConfig &config)
    : command_(std::move(command)), config_(config_to_json(config)),
      started_at_(utc_timestamp()) {}

void Manifest::add_input(const std::filesystem::path &path) {
  inputs_.push_back(path.generic_string());
}

void Manifest::add_output(const std::filesystem::path &path) {
  outputs_.push_back(path.generic_string());
}

void Manifest::write(const std::filesystem::path &path) {
  nlohmann::ordered_json doc;
  doc["tool"] = "cellgrow";
  doc["version"] = CELLGROW_VERSION;
  doc["command"] = command_;
  doc["config"] = config_;
  doc["inputs"] = inputs_;
  doc["outputs"] = outputs_;
  doc["started_at"] = started_at_;
  doc["finished_at"] = utc_timestamp();

  std::ofstream out(path, std::ios::binary);
  out << doc.dump(2) << '\n';
  if (!out) {
    throw std::ios_base::failure("cannot write " + path.string());
  }
}

} // namespace cellgrow::cli
