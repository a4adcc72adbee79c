#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cellgrow/growth.hpp"
#include "cellgrow/neuralnet.hpp"
#include "cellgrow/random.hpp"

namespace cellgrow {

struct GAConfig {
  std::size_t population_size = 50;
  std::size_t generations = 20;
  std::size_t tournament_size = 3;
  std::size_t elite_count = 1;
  /// Per-parameter probability of a Gaussian perturbation.
  double mutation_rate = 0.05;
  double mutation_sigma = 0.2;
  /// Per-parameter probability of a fresh uniform draw on [-2, 2].
  double reset_rate = 0.005;
  /// Probability that a child comes from uniform crossover of two parents.
  double crossover_rate = 0.5;
  std::uint64_t master_seed = 0;
  /// Concurrent fitness evaluations; 0 = hardware threads.
  std::size_t workers = 0;

  void check() const;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;
  Genome best_genome;
  /// Individuals whose growth threw and were scored 0.
  std::size_t failures = 0;
};

/// Each parameter: with probability reset_rate redrawn on [-2, 2]; otherwise
/// with probability mutation_rate shifted by N(0, sigma); otherwise kept.
Genome mutate(const Genome &g, const GAConfig &cfg, Rng &rng);

/// Uniform crossover. Throws std::invalid_argument if the architectures
/// differ.
Genome crossover(const Genome &a, const Genome &b, Rng &rng);

using FitnessFunction = std::function<double(const Mesh &)>;

/// Canopy heuristic on the default grid.
double default_fitness(const Mesh &mesh);

struct GAHooks {
  /// Called once per generation, in order, after it is evaluated.
  std::function<void(const GenerationRecord &)> on_generation;
  /// Called (from the main thread) for each individual whose growth threw.
  std::function<void(std::size_t generation, std::size_t slot,
                     const std::string &what)>
      on_failure;
};

struct GAResult {
  Genome best;
  double best_fitness = 0.0;
  std::vector<GenerationRecord> history;
};

/// Generation 0 is random. Each later generation keeps the elite_count best
/// unchanged and fills the rest by tournament selection, optional crossover
/// and mutation. Every slot draws from its own stream seeded by
/// (master_seed, generation, slot), so the result is independent of the
/// worker count. history has generations + 1 entries.
GAResult run_ga(const GAConfig &ga, const GrowthConfig &growth,
                const Architecture &arch = {},
                const FitnessFunction &fitness = default_fitness,
                const GAHooks &hooks = {});

/// Header: generation,best,mean,worst
void write_history_csv(const std::vector<GenerationRecord> &history,
                       std::ostream &out);

} // namespace cellgrow
