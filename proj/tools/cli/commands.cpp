#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cellgrow/evolve.hpp"
#include "cellgrow/fitness.hpp"
#include "cellgrow/format.hpp"
#include "cellgrow/genome_io.hpp"
#include "cellgrow/growth.hpp"
#include "cellgrow/obj.hpp"
#include "cellgrow/parallel.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace cellgrow::cli {

namespace {

std::ofstream open_output(const fs::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot write " + path.string());
  }
  return out;
}

void write_mesh_file(const Mesh &mesh, const fs::path &path) {
  auto out = open_output(path);
  write_obj(mesh, out);
}

void write_stats_file(const RunStats &stats, const fs::path &path) {
  auto out = open_output(path);
  write_stats_csv(stats, out);
}

void write_fitness_file(const FitnessReport &report, const fs::path &path) {
  auto out = open_output(path);
  write_fitness_csv_header(out);
  write_fitness_csv_row(report, out);
}

void write_heightmap_file(const Mesh &mesh, const GridConfig &grid,
                          const fs::path &path) {
  auto out = open_output(path);
  write_pgm(rasterize_heightmap(mesh, grid), out);
}

fs::path sibling(const fs::path &path, const std::string &suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

std::string numbered(const char *pattern, std::uint64_t n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, static_cast<unsigned long long>(n));
  return buf;
}

void ensure_directory(const fs::path &dir) {
  fs::create_directories(dir);
  if (!fs::is_directory(dir)) {
    throw std::ios_base::failure(dir.string() + " is not a directory");
  }
}

void refuse_overwrite(const fs::path &input, const fs::path &output) {
  std::error_code ec;
  if (fs::exists(output, ec) && fs::equivalent(input, output, ec)) {
    throw InputError("refusing to overwrite input " + input.string());
  }
}

Genome require_genome(const fs::path &path) {
  if (!fs::is_regular_file(path)) {
    throw InputError("cannot read genome file " + path.string());
  }
  return load_genome(path);
}

} // namespace

void cmd_grow(const RunConfig &config, const GrowOutputs &outputs,
              std::ostream &log) {
  RunConfig resolved = config;
  Genome genome;
  if (!config.genome.empty()) {
    if (config.random) {
      throw ConfigError("give either a genome file or --random, not both");
    }
    genome = require_genome(config.genome);
    resolved.architecture = genome.architecture;
  } else if (config.random) {
    check_config(resolved);
    Rng rng(config.seed);
    genome = random_genome(config.architecture, rng);
  } else {
    throw ConfigError("grow needs a genome file or --random");
  }
  check_config(resolved);

  const fs::path stats_path =
      outputs.stats.empty() ? sibling(outputs.mesh, ".stats.csv") : outputs.stats;
  const fs::path manifest_path = sibling(outputs.mesh, ".manifest.json");
  Manifest manifest("grow", resolved);
  if (!config.genome.empty()) {
    manifest.add_input(config.genome);
    for (const fs::path &p : {outputs.mesh, stats_path, outputs.heightmap}) {
      if (!p.empty()) {
        refuse_overwrite(config.genome, p);
      }
    }
  }

  const GrowResult result = grow(genome, resolved.growth);
  if (outputs.mesh.has_parent_path()) {
    ensure_directory(outputs.mesh.parent_path());
  }
  write_mesh_file(result.mesh, outputs.mesh);
  write_stats_file(result.stats, stats_path);
  manifest.add_output(outputs.mesh);
  manifest.add_output(stats_path);
  if (!outputs.heightmap.empty()) {
    write_heightmap_file(result.mesh, resolved.grid, outputs.heightmap);
    manifest.add_output(outputs.heightmap);
  }
  manifest.add_output(manifest_path);
  manifest.write(manifest_path);

  const FitnessReport report = canopy_fitness(result.mesh, resolved.grid);
  log << "vertices " << result.mesh.vertex_count() << ", faces "
      << result.mesh.face_count() << ", fitness "
      << format_roundtrip(report.fitness) << '\n';
}

void cmd_gallery(const RunConfig &config, const fs::path &out_dir,
                 std::ostream &log) {
  check_config(config);
  ensure_directory(out_dir);
  Manifest manifest("gallery", config);

  struct Row {
    std::size_t vertices = 0;
    std::size_t faces = 0;
  };
  std::vector<Row> rows(config.count);
  parallel_for(config.count, config.ga.workers, [&](std::size_t i) {
    const std::uint64_t seed = config.seed_base + i;
    Rng rng(seed);
    const Genome genome = random_genome(config.architecture, rng);
    const GrowResult result = grow(genome, config.growth);
    const fs::path stem = out_dir / numbered("seed_%06llu", seed);
    write_mesh_file(result.mesh, fs::path(stem) += ".obj");
    write_stats_file(result.stats, fs::path(stem) += ".stats.csv");
    save_genome(genome, fs::path(stem) += ".genome.json");
    rows[i] = {result.mesh.vertex_count(), result.mesh.face_count()};
  });

  const fs::path summary_path = out_dir / "summary.csv";
  {
    auto out = open_output(summary_path);
    out << "seed,vertices,faces,grew\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << config.seed_base + i << ',' << rows[i].vertices << ','
          << rows[i].faces << ',' << (rows[i].vertices > 12 ? "true" : "false")
          << '\n';
    }
    if (!out) {
      throw std::ios_base::failure("cannot write " + summary_path.string());
    }
  }

  std::size_t grew = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const fs::path stem = out_dir / numbered("seed_%06llu", config.seed_base + i);
    manifest.add_output(fs::path(stem) += ".obj");
    manifest.add_output(fs::path(stem) += ".stats.csv");
    manifest.add_output(fs::path(stem) += ".genome.json");
    grew += rows[i].vertices > 12 ? 1 : 0;
  }
  manifest.add_output(summary_path);
  manifest.add_output(out_dir / "manifest.json");
  manifest.write(out_dir / "manifest.json");
  log << "grew " << grew << " of " << rows.size() << '\n';
}

void cmd_evolve(const RunConfig &config, const fs::path &out_dir,
                bool heightmap, std::ostream &log, std::ostream &err) {
  check_config(config);
  const fs::path genome_dir = out_dir / "genomes";
  ensure_directory(genome_dir);

  RunConfig resolved = config;
  resolved.ga.master_seed = config.seed;
  Manifest manifest("evolve", resolved);

  const GridConfig grid = config.grid;
  const FitnessFunction fitness = [grid](const Mesh &mesh) {
    return canopy_fitness(mesh, grid).fitness;
  };
  GAHooks hooks;
  hooks.on_generation = [&](const GenerationRecord &rec) {
    const fs::path path =
        genome_dir / numbered("gen_%04llu.genome.json", rec.generation);
    save_genome(rec.best_genome, path);
    manifest.add_output(path);
    log << "generation " << rec.generation << ": best "
        << format_roundtrip(rec.best) << ", mean " << format_roundtrip(rec.mean)
        << '\n';
  };
  hooks.on_failure = [&](std::size_t generation, std::size_t slot,
                         const std::string &what) {
    err << "generation " << generation << ", individual " << slot
        << ": growth failed (" << what << "), scored 0\n";
  };

  const GAResult result =
      run_ga(resolved.ga, resolved.growth, resolved.architecture, fitness, hooks);

  const fs::path history_path = out_dir / "history.csv";
  {
    auto out = open_output(history_path);
    write_history_csv(result.history, out);
  }
  save_genome(result.best, out_dir / "best.genome.json");

  const GrowResult best = grow(result.best, resolved.growth);
  write_mesh_file(best.mesh, out_dir / "best.obj");
  write_stats_file(best.stats, out_dir / "best.stats.csv");
  write_fitness_file(canopy_fitness(best.mesh, grid), out_dir / "best.fitness.csv");
  for (const char *name : {"history.csv", "best.genome.json", "best.obj",
                           "best.stats.csv", "best.fitness.csv"}) {
    manifest.add_output(out_dir / name);
  }
  if (heightmap) {
    write_heightmap_file(best.mesh, grid, out_dir / "best.pgm");
    manifest.add_output(out_dir / "best.pgm");
  }
  manifest.add_output(out_dir / "manifest.json");
  manifest.write(out_dir / "manifest.json");
  log << "best fitness " << format_roundtrip(result.best_fitness) << '\n';
}

bool cmd_validate(const fs::path &path, std::ostream &out) {
  if (!fs::is_regular_file(path)) {
    throw InputError("cannot read " + path.string());
  }
  std::vector<std::string> problems;
  if (path.extension() == ".obj") {
    std::ifstream in(path, std::ios::binary);
    const Mesh mesh = mesh_from_obj(read_obj(in));
    problems = validate(mesh, {.vertex_state = false});
  } else {
    const Genome genome = load_genome(path);
    const Architecture &arch = genome.architecture;
    if (arch.inputs() != 3 * arch.outputs()) {
      problems.push_back("layer_sizes: first layer must be 3x the last to "
                         "drive growth");
    } else {
      try {
        GrowthConfig{}.check(arch.outputs());
      } catch (const std::invalid_argument &e) {
        problems.push_back(e.what());
      }
    }
  }
  for (const std::string &p : problems) {
    out << p << '\n';
  }
  if (problems.empty()) {
    out << path.string() << ": ok\n";
  }
  return problems.empty();
}

namespace {

struct Command {
  CLI::App *app = nullptr;
  std::map<std::string, CLI::Option *> options;
  std::map<std::string, std::string> values;
  std::string config_file;
};

bool wants_key(const std::string &command, const KeySpec &spec) {
  if (spec.flag.empty()) {
    return false;
  }
  if (spec.group == KeyGroup::growth || spec.group == KeyGroup::grid) {
    return true;
  }
  if (command == "grow") {
    return spec.key == "seed";
  }
  if (command == "gallery") {
    return spec.group == KeyGroup::gallery;
  }
  if (command == "evolve") {
    return spec.group == KeyGroup::ga || spec.key == "seed" ||
           spec.key == "workers";
  }
  return false;
}

void add_key_options(const std::string &name, Command &cmd) {
  cmd.app->add_option("--config", cmd.config_file,
                      "key = value file or run manifest; flags override it");
  for (const KeySpec &spec : key_table()) {
    if (wants_key(name, spec)) {
      cmd.options[spec.key] =
          cmd.app->add_option(spec.flag, cmd.values[spec.key], spec.help);
    }
  }
}

RunConfig resolve(const Command &cmd) {
  RunConfig config;
  if (!cmd.config_file.empty()) {
    if (!fs::is_regular_file(cmd.config_file)) {
      throw InputError("cannot read config file " + cmd.config_file);
    }
    apply_config_file(config, cmd.config_file);
  }
  for (const auto &[key, option] : cmd.options) {
    if (option->count() > 0) {
      apply_key(config, key, cmd.values.at(key));
    }
  }
  return config;
}

int exit_code_for_current_exception(std::ostream &err) {
  try {
    throw;
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const InputError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const GenomeFormatError &e) {
    err << "error: invalid genome: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const GenomeShapeError &e) {
    err << "error: invalid genome: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const ObjParseError &e) {
    err << "error: invalid OBJ: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err) {
  CLI::App app("Grow triangle meshes with per-vertex neural networks",
               "cellgrow");
  app.require_subcommand(1);
  app.set_version_flag("--version", CELLGROW_VERSION);

  Command grow_cmd, gallery_cmd, evolve_cmd;
  grow_cmd.app = app.add_subcommand("grow", "grow one genome");
  add_key_options("grow", grow_cmd);
  std::string genome_path;
  bool random = false;
  GrowOutputs grow_out;
  auto *genome_opt =
      grow_cmd.app->add_option("genome", genome_path, "genome JSON file");
  auto *random_opt =
      grow_cmd.app->add_flag("--random", random, "grow a random genome");
  grow_cmd.app->add_option("--out", grow_out.mesh, "output mesh")
      ->capture_default_str();
  grow_cmd.app->add_option("--stats", grow_out.stats,
                           "per-step CSV (default <out stem>.stats.csv)");
  grow_cmd.app->add_option("--debug-heightmap", grow_out.heightmap,
                           "write the fitness heightmap as 16-bit PGM");

  gallery_cmd.app = app.add_subcommand("gallery", "grow many random genomes");
  add_key_options("gallery", gallery_cmd);
  fs::path gallery_dir = "gallery";
  gallery_cmd.app->add_option("--out-dir", gallery_dir, "output directory")
      ->capture_default_str();

  evolve_cmd.app = app.add_subcommand("evolve", "evolve genomes for canopy");
  add_key_options("evolve", evolve_cmd);
  fs::path evolve_dir = "evolve";
  bool evolve_heightmap = false;
  evolve_cmd.app->add_option("--out-dir", evolve_dir, "output directory")
      ->capture_default_str();
  evolve_cmd.app->add_flag("--debug-heightmap", evolve_heightmap,
                           "also write best.pgm");

  auto *validate_app =
      app.add_subcommand("validate", "check a mesh (.obj) or genome file");
  fs::path validate_path;
  validate_app->add_option("path", validate_path, "file to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (grow_cmd.app->parsed()) {
      RunConfig config = resolve(grow_cmd);
      if (genome_opt->count() > 0) {
        config.genome = genome_path;
      }
      if (random_opt->count() > 0) {
        config.random = random;
      }
      cmd_grow(config, grow_out, out);
    } else if (gallery_cmd.app->parsed()) {
      cmd_gallery(resolve(gallery_cmd), gallery_dir, out);
    } else if (evolve_cmd.app->parsed()) {
      cmd_evolve(resolve(evolve_cmd), evolve_dir, evolve_heightmap, out, err);
    } else if (validate_app->parsed()) {
      return cmd_validate(validate_path, out) ? kExitOk : kExitInvalidInput;
    }
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
  return kExitOk;
}

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  std::vector<const char *> argv;
  argv.reserve(args.size());
  for (const std::string &a : args) {
    argv.push_back(a.c_str());
  }
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace cellgrow::cli
