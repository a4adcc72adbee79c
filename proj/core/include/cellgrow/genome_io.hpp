#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cellgrow/neuralnet.hpp"

namespace cellgrow {

inline constexpr int kGenomeFormatVersion = 1;

/// Malformed genome document. `field()` names the offending JSON key.
class GenomeFormatError : public std::runtime_error {
public:
  GenomeFormatError(std::string field, const std::string &what);
  const std::string &field() const { return field_; }

private:
  std::string field_;
};

/// {"format_version":1,"layer_sizes":[...],"params":[...]}, numbers at full
/// round-trip precision.
std::string genome_to_json(const Genome &genome);
Genome genome_from_json(const std::string &text);

void write_genome(const Genome &genome, std::ostream &out);
Genome read_genome(std::istream &in);

void save_genome(const Genome &genome, const std::filesystem::path &path);
Genome load_genome(const std::filesystem::path &path);

} // namespace cellgrow
