#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace cellgrow::cli {

using nlohmann::ordered_json;

namespace {

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T> T parse_number(const std::string &key, const std::string &text) {
  const std::string t = trim(text);
  T value{};
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || end != t.data() + t.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string &key, const std::string &text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") {
    return true;
  }
  if (t == "false" || t == "0" || t == "no") {
    return false;
  }
  throw ConfigError("config key '" + key + "': expected true or false, got '" +
                    text + "'");
}

std::vector<std::size_t> parse_sizes(const std::string &key,
                                     const std::string &text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    out.push_back(parse_number<std::size_t>(key, part));
  }
  return out;
}

struct Entry {
  KeySpec spec;
  std::function<void(RunConfig &, const std::string &)> set;
  std::function<ordered_json(const RunConfig &)> get;
};

template <typename T>
Entry number(std::string key, std::string flag, KeyGroup group,
             std::string help, T RunConfig::*outer) {
  return {{key, flag, group, help},
          [key, outer](RunConfig &c, const std::string &v) {
            c.*outer = parse_number<T>(key, v);
          },
          [outer](const RunConfig &c) { return ordered_json(c.*outer); }};
}

template <typename Section, typename T>
Entry nested(std::string key, std::string flag, KeyGroup group,
             std::string help, Section RunConfig::*section, T Section::*field) {
  return {{key, flag, group, help},
          [key, section, field](RunConfig &c, const std::string &v) {
            (c.*section).*field = parse_number<T>(key, v);
          },
          [section, field](const RunConfig &c) {
            return ordered_json((c.*section).*field);
          }};
}

Entry channel(std::string key, std::string flag, std::string help,
              std::size_t OutputChannels::*field) {
  return {{key, flag, KeyGroup::growth, help},
          [key, field](RunConfig &c, const std::string &v) {
            c.growth.channels.*field = parse_number<std::size_t>(key, v);
          },
          [field](const RunConfig &c) {
            return ordered_json(c.growth.channels.*field);
          }};
}

const std::vector<Entry> &entries() {
  using G = GrowthConfig;
  using A = GAConfig;
  using R = GridConfig;
  static const std::vector<Entry> table = {
      nested("steps", "--steps", KeyGroup::growth, "timesteps per growth run",
             &RunConfig::growth, &G::n_steps),
      nested("base_step", "--base-step", KeyGroup::growth,
             "nominal displacement gain", &RunConfig::growth, &G::base_step),
      nested("max_step", "--max-step", KeyGroup::growth,
             "largest per-step vertex displacement", &RunConfig::growth,
             &G::max_step),
      nested("split_area_base", "--split-area", KeyGroup::growth,
             "face area that triggers a split at neutral output",
             &RunConfig::growth, &G::split_area_base),
      nested("split_modulation", "--split-modulation", KeyGroup::growth,
             "exponential gain of the split channel", &RunConfig::growth,
             &G::split_modulation),
      nested("flip_angle_cos", "--flip-angle-cos", KeyGroup::growth,
             "minimum normal dot product for an edge flip", &RunConfig::growth,
             &G::flip_angle_cos),
      nested("min_valence", "--min-valence", KeyGroup::growth,
             "faces an endpoint needs before a flip", &RunConfig::growth,
             &G::min_valence),
      nested("max_vertices", "--max-vertices", KeyGroup::growth,
             "vertex cap that stops splitting", &RunConfig::growth,
             &G::max_vertices),
      channel("move_channel", "--move-channel", "output channel driving motion",
              &OutputChannels::move),
      channel("split_channel", "--split-channel",
              "output channel modulating splits", &OutputChannels::split),
      channel("blend_channel", "--blend-channel",
              "output channel weighting new growth directions",
              &OutputChannels::blend),
      Entry{{"layer_sizes", "--layers", KeyGroup::growth,
             "network layer sizes, e.g. 45,30,15"},
            [](RunConfig &c, const std::string &v) {
              c.architecture.layer_sizes = parse_sizes("layer_sizes", v);
            },
            [](const RunConfig &c) {
              return ordered_json(c.architecture.layer_sizes);
            }},
      nested("grid_half_extent", "--grid-extent", KeyGroup::grid,
             "half width of the fitness heightmap domain", &RunConfig::grid,
             &R::half_extent),
      nested("grid_resolution", "--grid-resolution", KeyGroup::grid,
             "heightmap cells per side", &RunConfig::grid, &R::resolution),
      nested("population", "--pop", KeyGroup::ga, "population size",
             &RunConfig::ga, &A::population_size),
      nested("generations", "--generations", KeyGroup::ga,
             "generations after the random one", &RunConfig::ga,
             &A::generations),
      nested("tournament_size", "--tournament", KeyGroup::ga,
             "tournament size", &RunConfig::ga, &A::tournament_size),
      nested("elite_count", "--elite", KeyGroup::ga,
             "genomes copied unchanged", &RunConfig::ga, &A::elite_count),
      nested("mutation_rate", "--mutation-rate", KeyGroup::ga,
             "per-parameter perturbation probability", &RunConfig::ga,
             &A::mutation_rate),
      nested("mutation_sigma", "--mutation-sigma", KeyGroup::ga,
             "perturbation standard deviation", &RunConfig::ga,
             &A::mutation_sigma),
      nested("reset_rate", "--reset-rate", KeyGroup::ga,
             "per-parameter redraw probability", &RunConfig::ga,
             &A::reset_rate),
      nested("crossover_rate", "--crossover-rate", KeyGroup::ga,
             "probability a child uses crossover", &RunConfig::ga,
             &A::crossover_rate),
      number("seed", "--seed", KeyGroup::grow, "random seed",
             &RunConfig::seed),
      nested("workers", "--workers", KeyGroup::gallery,
             "parallel evaluations (0 = all cores)", &RunConfig::ga,
             &A::workers),
      number("count", "--count", KeyGroup::gallery, "gallery size",
             &RunConfig::count),
      number("seed_base", "--seed-base", KeyGroup::gallery,
             "first gallery seed", &RunConfig::seed_base),
      Entry{{"genome", "", KeyGroup::grow, "genome file"},
            [](RunConfig &c, const std::string &v) { c.genome = trim(v); },
            [](const RunConfig &c) { return ordered_json(c.genome); }},
      Entry{{"random", "", KeyGroup::grow, "grow a random genome"},
            [](RunConfig &c, const std::string &v) {
              c.random = parse_bool("random", v);
            },
            [](const RunConfig &c) { return ordered_json(c.random); }},
  };
  return table;
}

std::string json_to_text(const ordered_json &v) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_array()) {
    std::string out;
    for (const auto &item : v) {
      if (!out.empty()) {
        out += ',';
      }
      out += json_to_text(item);
    }
    return out;
  }
  return v.dump();
}

} // namespace

const std::vector<KeySpec> &key_table() {
  static const std::vector<KeySpec> specs = [] {
    std::vector<KeySpec> out;
    for (const Entry &e : entries()) {
      out.push_back(e.spec);
    }
    return out;
  }();
  return specs;
}

void apply_key(RunConfig &config, const std::string &key,
               const std::string &value) {
  for (const Entry &e : entries()) {
    if (e.spec.key == key) {
      e.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(RunConfig &config, const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  if (trim(text).starts_with('{')) {
    ordered_json doc;
    try {
      doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error &e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    const auto it = doc.find("config");
    if (it == doc.end() || !it->is_object()) {
      throw ConfigError(path.string() + ": manifest has no \"config\" object");
    }
    for (const auto &[key, value] : it->items()) {
      apply_key(config, key, json_to_text(value));
    }
    return;
  }

  std::stringstream lines(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(lines, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (trim(line).empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    apply_key(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

ordered_json config_to_json(const RunConfig &config) {
  ordered_json out = ordered_json::object();
  for (const Entry &e : entries()) {
    out[e.spec.key] = e.get(config);
  }
  return out;
}

void check_config(const RunConfig &config) {
  try {
    config.architecture.check();
    const std::size_t outputs = config.architecture.outputs();
    if (config.architecture.inputs() != 3 * outputs || 3 * outputs < 4) {
      throw std::invalid_argument(
          "layer_sizes: first layer must be 3x the last, with at least 2 "
          "outputs");
    }
    config.growth.check(outputs);
    config.grid.check();
    config.ga.check();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

} // namespace cellgrow::cli
