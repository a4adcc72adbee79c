#include "cellgrow/genome_io.hpp"

#include <fstream>
#include <iterator>

#include <json.hpp>

namespace cellgrow {

using nlohmann::json;

GenomeFormatError::GenomeFormatError(std::string field, const std::string &what)
    : std::runtime_error("genome field '" + field + "': " + what),
      field_(std::move(field)) {}

std::string genome_to_json(const Genome &genome) {
  json doc;
  doc["format_version"] = kGenomeFormatVersion;
  doc["layer_sizes"] = genome.architecture.layer_sizes;
  doc["params"] = genome.params;
  return doc.dump();
}

Genome genome_from_json(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw GenomeFormatError("<document>", e.what());
  }
  if (!doc.is_object()) {
    throw GenomeFormatError("<document>", "expected a JSON object");
  }

  auto require = [&doc](const char *key) -> const json & {
    auto it = doc.find(key);
    if (it == doc.end()) {
      throw GenomeFormatError(key, "missing");
    }
    return *it;
  };

  const json &version = require("format_version");
  if (!version.is_number_integer() ||
      version.get<int>() != kGenomeFormatVersion) {
    throw GenomeFormatError("format_version",
                            "unsupported value " + version.dump());
  }

  Genome g;
  const json &sizes = require("layer_sizes");
  if (!sizes.is_array()) {
    throw GenomeFormatError("layer_sizes", "expected an array");
  }
  g.architecture.layer_sizes.clear();
  for (const json &n : sizes) {
    if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) {
      throw GenomeFormatError("layer_sizes",
                              "entries must be positive integers, got " +
                                  n.dump());
    }
    g.architecture.layer_sizes.push_back(n.get<std::size_t>());
  }
  if (g.architecture.layer_sizes.size() < 2) {
    throw GenomeFormatError("layer_sizes", "needs at least 2 layers");
  }

  const json &params = require("params");
  if (!params.is_array()) {
    throw GenomeFormatError("params", "expected an array");
  }
  g.params.reserve(params.size());
  for (const json &p : params) {
    if (!p.is_number()) {
      throw GenomeFormatError("params", "non-numeric entry " + p.dump());
    }
    g.params.push_back(p.get<double>());
  }
  const std::size_t expected = g.architecture.param_count();
  if (g.params.size() != expected) {
    throw GenomeFormatError("params", "expected " + std::to_string(expected) +
                                          " values for layer_sizes, got " +
                                          std::to_string(g.params.size()));
  }
  return g;
}

void write_genome(const Genome &genome, std::ostream &out) {
  out << genome_to_json(genome) << '\n';
  if (!out) {
    throw std::ios_base::failure("write_genome: stream write failed");
  }
}

Genome read_genome(std::istream &in) {
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  return genome_from_json(text);
}

void save_genome(const Genome &genome, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open " + path.string() +
                                 " for writing");
  }
  write_genome(genome, out);
}

Genome load_genome(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open " + path.string());
  }
  return read_genome(in);
}

} // namespace cellgrow
