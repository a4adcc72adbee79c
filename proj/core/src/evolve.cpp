#include "cellgrow/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "cellgrow/fitness.hpp"
#include "cellgrow/format.hpp"
#include "cellgrow/parallel.hpp"

namespace cellgrow {

void GAConfig::check() const {
  auto rate = [](double r, const char *name) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument(std::string("GA config: ") + name +
                                  " must lie in [0, 1]");
    }
  };
  rate(mutation_rate, "mutation_rate");
  rate(reset_rate, "reset_rate");
  rate(crossover_rate, "crossover_rate");
  if (!(mutation_sigma >= 0.0)) {
    throw std::invalid_argument("GA config: mutation_sigma must be >= 0");
  }
  if (population_size == 0) {
    throw std::invalid_argument("GA config: population_size must be >= 1");
  }
  if (elite_count >= population_size) {
    throw std::invalid_argument(
        "GA config: elite_count must be smaller than population_size");
  }
  if (tournament_size == 0) {
    throw std::invalid_argument("GA config: tournament_size must be >= 1");
  }
}

Genome mutate(const Genome &g, const GAConfig &cfg, Rng &rng) {
  Genome out = g;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> fresh(-2.0, 2.0);
  std::normal_distribution<double> shift(0.0, cfg.mutation_sigma);
  for (double &p : out.params) {
    if (unit(rng) < cfg.reset_rate) {
      p = fresh(rng);
    } else if (unit(rng) < cfg.mutation_rate) {
      p += cfg.mutation_sigma > 0.0 ? shift(rng) : 0.0;
    }
  }
  return out;
}

Genome crossover(const Genome &a, const Genome &b, Rng &rng) {
  if (a.architecture != b.architecture || a.params.size() != b.params.size()) {
    throw std::invalid_argument("crossover: parents differ in architecture");
  }
  Genome out = a;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < out.params.size(); ++i) {
    if (coin(rng)) {
      out.params[i] = b.params[i];
    }
  }
  return out;
}

double default_fitness(const Mesh &mesh) {
  return canopy_fitness(mesh).fitness;
}

namespace {

struct Individual {
  Genome genome;
  double fitness = 0.0;
  std::optional<std::string> failure;
};

std::size_t tournament(const std::vector<Individual> &pop, std::size_t size,
                       Rng &rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  std::size_t best = pick(rng);
  for (std::size_t t = 1; t < size; ++t) {
    const std::size_t c = pick(rng);
    if (pop[c].fitness > pop[best].fitness ||
        (pop[c].fitness == pop[best].fitness && c < best)) {
      best = c;
    }
  }
  return best;
}

// Indices by descending fitness, ties broken by slot.
std::vector<std::size_t> ranking(const std::vector<Individual> &pop) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].fitness > pop[b].fitness;
  });
  return order;
}

} // namespace

GAResult run_ga(const GAConfig &ga, const GrowthConfig &growth,
                const Architecture &arch, const FitnessFunction &fitness,
                const GAHooks &hooks) {
  ga.check();
  arch.check();
  growth.check(arch.outputs());

  auto evaluate = [&](std::vector<Individual> &pop, std::size_t from) {
    parallel_for(pop.size() - from, ga.workers, [&](std::size_t k) {
      Individual &ind = pop[from + k];
      try {
        ind.fitness = fitness(grow(ind.genome, growth).mesh);
        if (!std::isfinite(ind.fitness)) {
          throw std::runtime_error("fitness is not finite");
        }
      } catch (const std::exception &e) {
        ind.fitness = 0.0;
        ind.failure = e.what();
      }
    });
  };

  GAResult result;
  auto record = [&](std::size_t gen, std::vector<Individual> &pop,
                    std::size_t first_new) {
    GenerationRecord rec;
    rec.generation = gen;
    const auto order = ranking(pop);
    rec.best = pop[order.front()].fitness;
    rec.worst = pop[order.back()].fitness;
    double sum = 0.0;
    for (const Individual &ind : pop) {
      sum += ind.fitness;
    }
    rec.mean = sum / static_cast<double>(pop.size());
    rec.best_genome = pop[order.front()].genome;
    for (std::size_t slot = first_new; slot < pop.size(); ++slot) {
      if (pop[slot].failure) {
        ++rec.failures;
        if (hooks.on_failure) {
          hooks.on_failure(gen, slot, *pop[slot].failure);
        }
      }
    }
    if (hooks.on_generation) {
      hooks.on_generation(rec);
    }
    result.history.push_back(std::move(rec));
  };

  std::vector<Individual> pop(ga.population_size);
  for (std::size_t slot = 0; slot < pop.size(); ++slot) {
    Rng rng(derive_seed(ga.master_seed, 0, slot));
    pop[slot].genome = random_genome(arch, rng);
  }
  evaluate(pop, 0);
  record(0, pop, 0);

  for (std::size_t gen = 1; gen <= ga.generations; ++gen) {
    const auto order = ranking(pop);
    std::vector<Individual> next(pop.size());
    for (std::size_t e = 0; e < ga.elite_count; ++e) {
      next[e] = pop[order[e]];
      next[e].failure.reset();
    }
    for (std::size_t slot = ga.elite_count; slot < next.size(); ++slot) {
      Rng rng(derive_seed(ga.master_seed, gen, slot));
      const Genome &first = pop[tournament(pop, ga.tournament_size, rng)].genome;
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      Genome child = first;
      if (unit(rng) < ga.crossover_rate) {
        const Genome &second =
            pop[tournament(pop, ga.tournament_size, rng)].genome;
        child = crossover(first, second, rng);
      }
      next[slot].genome = mutate(child, ga, rng);
    }
    // Elites keep their (deterministic) fitness.
    evaluate(next, ga.elite_count);
    pop = std::move(next);
    record(gen, pop, ga.elite_count);
  }

  const auto order = ranking(pop);
  result.best = pop[order.front()].genome;
  result.best_fitness = pop[order.front()].fitness;
  return result;
}

void write_history_csv(const std::vector<GenerationRecord> &history,
                       std::ostream &out) {
  out << "generation,best,mean,worst\n";
  for (const GenerationRecord &r : history) {
    out << r.generation << ',' << format_roundtrip(r.best) << ','
        << format_roundtrip(r.mean) << ',' << format_roundtrip(r.worst)
        << '\n';
  }
  if (!out) {
    throw std::ios_base::failure("write_history_csv: stream write failed");
  }
}

} // namespace cellgrow
