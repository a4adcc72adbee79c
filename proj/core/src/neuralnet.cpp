#include "cellgrow/neuralnet.hpp"

#include <algorithm>
#include <cmath>

namespace cellgrow {

std::size_t Architecture::param_count() const {
  std::size_t total = 0;
  for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
    total += layer_sizes[l] * (1 + layer_sizes[l - 1]);
  }
  return total;
}

void Architecture::check() const {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("architecture needs at least 2 layers");
  }
  for (std::size_t n : layer_sizes) {
    if (n == 0) {
      throw std::invalid_argument("architecture layer sizes must be >= 1");
    }
  }
}

Genome Genome::zeros(const Architecture &arch) {
  arch.check();
  return {arch, std::vector<double>(arch.param_count(), 0.0)};
}

GenomeShapeError::GenomeShapeError(std::size_t expected, std::size_t actual)
    : std::invalid_argument("genome has " + std::to_string(actual) +
                            " params, architecture expects " +
                            std::to_string(expected)),
      expected_(expected), actual_(actual) {}

double sigmoid(double a) {
  constexpr double below_one = 1.0 - 0x1p-53;
  return std::min(
      1.0 / (1.0 + std::exp(-std::clamp(a, -kSigmoidClamp, kSigmoidClamp))),
      below_one);
}

Network::Network(const Genome &genome) : architecture_(genome.architecture) {
  architecture_.check();
  const std::size_t expected = architecture_.param_count();
  if (genome.params.size() != expected) {
    throw GenomeShapeError(expected, genome.params.size());
  }
  const auto &sizes = architecture_.layer_sizes;
  auto it = genome.params.begin();
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    Layer layer;
    layer.fan_in = sizes[l - 1];
    layer.thresholds.reserve(sizes[l]);
    layer.weights.reserve(sizes[l] * layer.fan_in);
    for (std::size_t j = 0; j < sizes[l]; ++j) {
      layer.thresholds.push_back(*it++);
      layer.weights.insert(layer.weights.end(), it,
                           it + static_cast<std::ptrdiff_t>(layer.fan_in));
      it += static_cast<std::ptrdiff_t>(layer.fan_in);
    }
    layers_.push_back(std::move(layer));
  }
}

std::vector<double> Network::evaluate(std::span<const double> input) const {
  std::vector<double> out(architecture_.outputs());
  Scratch scratch;
  evaluate_into(input, out, scratch);
  return out;
}

void Network::evaluate_into(std::span<const double> input,
                            std::span<double> output, Scratch &scratch) const {
  if (input.size() != architecture_.inputs()) {
    throw std::invalid_argument("network expects " +
                                std::to_string(architecture_.inputs()) +
                                " inputs, got " + std::to_string(input.size()));
  }
  if (output.size() != architecture_.outputs()) {
    throw std::invalid_argument("output buffer has wrong size");
  }
  // Buffers hold (value - 0.5) of the previous layer.
  auto &prev = scratch.a;
  auto &next = scratch.b;
  prev.resize(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    prev[k] = input[k] - 0.5;
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer &layer = layers_[l];
    const bool last = l + 1 == layers_.size();
    const std::size_t count = layer.thresholds.size();
    next.resize(count);
    const double *w = layer.weights.data();
    for (std::size_t j = 0; j < count; ++j, w += layer.fan_in) {
      double a = -layer.thresholds[j];
      for (std::size_t k = 0; k < layer.fan_in; ++k) {
        a += prev[k] * w[k];
      }
      const double value = sigmoid(a);
      if (last) {
        output[j] = value;
      } else {
        next[j] = value - 0.5;
      }
    }
    std::swap(prev, next);
  }
}

void Network::evaluate_batch(std::span<const double> inputs,
                             std::size_t count, std::span<double> outputs,
                             Scratch &scratch) const {
  if (inputs.size() != architecture_.inputs() * count ||
      outputs.size() != architecture_.outputs() * count) {
    throw std::invalid_argument("batch buffers have wrong size");
  }
  auto &prev = scratch.a;
  auto &next = scratch.b;
  prev.resize(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    prev[k] = inputs[k] - 0.5;
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer &layer = layers_[l];
    const bool last = l + 1 == layers_.size();
    const std::size_t neurons = layer.thresholds.size();
    next.resize(neurons * count);
    const double *w = layer.weights.data();
    for (std::size_t j = 0; j < neurons; ++j, w += layer.fan_in) {
      double *acc = next.data() + j * count;
      const double t = -layer.thresholds[j];
      for (std::size_t v = 0; v < count; ++v) {
        acc[v] = t;
      }
      for (std::size_t k = 0; k < layer.fan_in; ++k) {
        const double wk = w[k];
        const double *x = prev.data() + k * count;
        for (std::size_t v = 0; v < count; ++v) {
          acc[v] += x[v] * wk;
        }
      }
      double *dst = last ? outputs.data() + j * count : acc;
      for (std::size_t v = 0; v < count; ++v) {
        const double value = sigmoid(acc[v]);
        dst[v] = last ? value : value - 0.5;
      }
    }
    std::swap(prev, next);
  }
}

Genome random_genome(const Architecture &arch, Rng &rng) {
  arch.check();
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  Genome g{arch, std::vector<double>(arch.param_count())};
  for (double &p : g.params) {
    p = dist(rng);
  }
  return g;
}

} // namespace cellgrow
