#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cellgrow/evolve.hpp"
#include "cellgrow/fitness.hpp"

using namespace cellgrow;

namespace {

GrowthConfig quick_growth() {
  GrowthConfig cfg;
  cfg.n_steps = 6;
  return cfg;
}

GAConfig small_ga(std::uint64_t seed) {
  GAConfig ga;
  ga.population_size = 8;
  ga.generations = 4;
  ga.master_seed = seed;
  ga.workers = 1;
  return ga;
}

// Cheap, geometry-dependent score: mean vertex height.
double mean_height(const Mesh &m) {
  double z = 0;
  for (const auto &v : m.vertices()) z += v.position.z;
  return z / static_cast<double>(m.vertex_count());
}

std::string history_csv(const GAResult &r) {
  std::ostringstream out;
  write_history_csv(r.history, out);
  return out.str();
}

} // namespace

TEST(Mutate, IdentityCases) {
  Rng rng(1);
  const Genome g = random_genome({}, rng);
  GAConfig none;
  none.mutation_rate = 0;
  none.reset_rate = 0;
  EXPECT_EQ(mutate(g, none, rng), g);
  GAConfig zero_width;
  zero_width.mutation_rate = 1;
  zero_width.mutation_sigma = 0;
  zero_width.reset_rate = 0;
  EXPECT_EQ(mutate(g, zero_width, rng), g);
}

TEST(Mutate, ChangedCountMatchesBinomial) {
  Rng rng(2);
  const Genome g = random_genome({}, rng);
  const GAConfig cfg;
  const double p = cfg.reset_rate + (1 - cfg.reset_rate) * cfg.mutation_rate;
  const double n = static_cast<double>(g.params.size());
  const int trials = 1000;
  double total = 0;
  for (int t = 0; t < trials; ++t) {
    const Genome m = mutate(g, cfg, rng);
    ASSERT_EQ(m.architecture, g.architecture);
    ASSERT_EQ(m.params.size(), g.params.size());
    for (std::size_t i = 0; i < g.params.size(); ++i) {
      total += m.params[i] != g.params[i] ? 1 : 0;
    }
  }
  const double mean = total / trials;
  const double sd = std::sqrt(n * p * (1 - p) / trials);
  EXPECT_NEAR(mean, n * p, 3 * sd);
}

TEST(Mutate, ResetsStayInRange) {
  Rng rng(3);
  Genome g = Genome::zeros();
  for (double &x : g.params) x = 100.0;
  GAConfig all_reset;
  all_reset.reset_rate = 1.0;
  for (double x : mutate(g, all_reset, rng).params) {
    EXPECT_GE(x, -2.0);
    EXPECT_LE(x, 2.0);
  }
}

TEST(Crossover, Basics) {
  Rng rng(4);
  const Genome a = random_genome({}, rng);
  const Genome b = random_genome({}, rng);
  EXPECT_EQ(crossover(a, a, rng), a);
  const Genome c = crossover(a, b, rng);
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    EXPECT_TRUE(c.params[i] == a.params[i] || c.params[i] == b.params[i]);
  }
  EXPECT_THROW(crossover(a, Genome::zeros({{3, 1}}), rng), std::invalid_argument);
}

TEST(Crossover, PerLocusFrequency) {
  Rng rng(5);
  const Architecture arch{{3, 2}};
  const Genome a = Genome::zeros(arch);
  Genome b = a;
  for (double &x : b.params) x = 1.0;
  std::vector<int> from_b(a.params.size(), 0);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Genome c = crossover(a, b, rng);
    for (std::size_t i = 0; i < c.params.size(); ++i) from_b[i] += c.params[i] == 1.0;
  }
  for (int n : from_b) EXPECT_NEAR(n / double(trials), 0.5, 0.02);
}

TEST(RunGa, ZeroGenerations) {
  GAConfig ga = small_ga(3);
  ga.generations = 0;
  const GAResult r = run_ga(ga, quick_growth(), {}, mean_height);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.best_fitness, r.history[0].best);
  EXPECT_EQ(r.best, r.history[0].best_genome);
}

TEST(RunGa, ElitismAndOrdering) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GAResult r = run_ga(small_ga(seed), quick_growth(), {}, mean_height);
    ASSERT_EQ(r.history.size(), 5u);
    for (std::size_t g = 0; g < r.history.size(); ++g) {
      const auto &rec = r.history[g];
      EXPECT_EQ(rec.generation, g);
      EXPECT_GE(rec.best, rec.mean);
      EXPECT_GE(rec.mean, rec.worst);
      if (g > 0) EXPECT_GE(rec.best, r.history[g - 1].best);
    }
    EXPECT_EQ(r.best_fitness, r.history.back().best);
  }
}

TEST(RunGa, ElitesKeepTheirGenome) {
  const GAResult r = run_ga(small_ga(9), quick_growth(), {}, mean_height);
  for (std::size_t g = 1; g < r.history.size(); ++g) {
    if (r.history[g].best == r.history[g - 1].best) {
      EXPECT_EQ(r.history[g].best_genome, r.history[g - 1].best_genome);
    }
  }
}

TEST(RunGa, DeterministicAndWorkerIndependent) {
  GAConfig ga = small_ga(11);
  const GAResult a = run_ga(ga, quick_growth(), {}, mean_height);
  const GAResult b = run_ga(ga, quick_growth(), {}, mean_height);
  ga.workers = 3;
  const GAResult c = run_ga(ga, quick_growth(), {}, mean_height);
  EXPECT_EQ(history_csv(a), history_csv(b));
  EXPECT_EQ(history_csv(a), history_csv(c));
  EXPECT_EQ(a.best, c.best);
}

TEST(RunGa, FailuresScoreZero) {
  std::size_t reported = 0;
  GAHooks hooks;
  hooks.on_failure = [&](std::size_t, std::size_t, const std::string &what) {
    EXPECT_EQ(what, "boom");
    ++reported;
  };
  std::size_t generations_seen = 0;
  hooks.on_generation = [&](const GenerationRecord &rec) {
    EXPECT_EQ(rec.generation, generations_seen++);
  };
  auto flaky = [](const Mesh &m) -> double {
    const double h = mean_height(m);
    if (std::fmod(std::abs(h) * 1e6, 2.0) < 1.0) throw std::runtime_error("boom");
    return h;
  };
  const GAResult r = run_ga(small_ga(5), quick_growth(), {}, flaky, hooks);
  EXPECT_EQ(generations_seen, 5u);
  std::size_t failures = 0;
  for (const auto &rec : r.history) {
    failures += rec.failures;
    EXPECT_GE(rec.worst, 0.0);
  }
  EXPECT_EQ(failures, reported);
  EXPECT_GT(reported, 0u);
}

TEST(RunGa, ConfigChecks) {
  GAConfig bad = small_ga(0);
  bad.elite_count = bad.population_size;
  EXPECT_THROW(run_ga(bad, quick_growth()), std::invalid_argument);
  bad = small_ga(0);
  bad.mutation_rate = 1.5;
  EXPECT_THROW(bad.check(), std::invalid_argument);
  bad = small_ga(0);
  bad.tournament_size = 0;
  EXPECT_THROW(bad.check(), std::invalid_argument);
}

TEST(RunGa, SeedStreamsAreDistinct) {
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 1), derive_seed(1, 1, 0));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(2, 2, 3));
}

TEST(History, Csv) {
  GAConfig ga = small_ga(1);
  ga.generations = 1;
  const std::string text = history_csv(run_ga(ga, quick_growth(), {}, mean_height));
  EXPECT_EQ(text.rfind("generation,best,mean,worst\n0,", 0), 0u);
  EXPECT_NE(text.find("\n1,"), std::string::npos);
}

TEST(DefaultFitness, IsCanopy) {
  const Mesh m = make_seed_mesh();
  EXPECT_EQ(default_fitness(m), canopy_fitness(m).fitness);
}
