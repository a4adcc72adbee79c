#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cellgrow/random.hpp"

namespace cellgrow {

/// Neuron counts per layer, input layer first.
struct Architecture {
  std::vector<std::size_t> layer_sizes{45, 30, 15};

  std::size_t inputs() const { return layer_sizes.front(); }
  std::size_t outputs() const { return layer_sizes.back(); }
  /// Thresholds plus weights of every non-input layer.
  std::size_t param_count() const;
  /// Throws std::invalid_argument unless there are >= 2 layers, all >= 1.
  void check() const;

  friend bool operator==(const Architecture &, const Architecture &) = default;
};

/// Flat parameter vector. For each non-input layer, for each neuron in
/// order: the threshold, then one weight per neuron of the previous layer.
struct Genome {
  Architecture architecture;
  std::vector<double> params;

  static Genome zeros(const Architecture &arch = {});

  friend bool operator==(const Genome &, const Genome &) = default;
};

/// Raised when a parameter vector does not match its architecture.
class GenomeShapeError : public std::invalid_argument {
public:
  GenomeShapeError(std::size_t expected, std::size_t actual);
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Sigmoid arguments are clamped to this magnitude before exponentiation.
inline constexpr double kSigmoidClamp = 60.0;

/// Layered feed-forward sigmoid network. Every neuron sees the previous
/// layer's values shifted by -0.5, including the raw inputs. Immutable and
/// safe to evaluate concurrently.
class Network {
public:
  explicit Network(const Genome &genome);

  const Architecture &architecture() const { return architecture_; }

  /// Throws std::invalid_argument if input.size() != inputs().
  std::vector<double> evaluate(std::span<const double> input) const;

  /// Reusable buffers for allocation-free evaluation.
  struct Scratch {
    std::vector<double> a;
    std::vector<double> b;
  };
  /// `output` must hold architecture().outputs() values.
  void evaluate_into(std::span<const double> input, std::span<double> output,
                     Scratch &scratch) const;

  /// Evaluates `count` inputs at once. `inputs` is feature-major
  /// (inputs[k * count + v] is feature k of sample v) and so is `outputs`.
  /// Each sample's sums run in the same order as evaluate(), so results are
  /// bit-identical to it.
  void evaluate_batch(std::span<const double> inputs, std::size_t count,
                      std::span<double> outputs, Scratch &scratch) const;

private:
  struct Layer {
    std::size_t fan_in = 0;
    std::vector<double> thresholds;
    std::vector<double> weights; // row per neuron
  };

  Architecture architecture_;
  std::vector<Layer> layers_;
};

inline Network realize(const Genome &genome) { return Network(genome); }

/// Every parameter i.i.d. uniform on [-2, 2].
Genome random_genome(const Architecture &arch, Rng &rng);

double sigmoid(double a);

} // namespace cellgrow
