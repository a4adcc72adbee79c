#include "cellgrow/cellular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cellgrow {

namespace {

// Neighborhoods are small; a branchless insertion sort beats std::sort.
void sort_small(std::vector<double> &v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t k = i; k > 0; --k) {
      const double lo = std::min(v[k - 1], v[k]);
      const double hi = std::max(v[k - 1], v[k]);
      v[k - 1] = lo;
      v[k] = hi;
    }
  }
}

constexpr std::size_t kBatch = 128;

} // namespace

CellState CellState::capture(const Mesh &mesh) {
  CellState state;
  const auto vertices = mesh.vertices();
  if (vertices.empty()) {
    return state;
  }
  state.channels = vertices.front().output.size();
  state.values.reserve(vertices.size() * state.channels);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto &out = vertices[i].output;
    if (out.size() != state.channels) {
      throw std::invalid_argument("vertex " + std::to_string(i) + " has " +
                                  std::to_string(out.size()) +
                                  " output channels, expected " +
                                  std::to_string(state.channels));
    }
    state.values.insert(state.values.end(), out.begin(), out.end());
  }
  return state;
}

void CellState::store(Mesh &mesh) const {
  if (vertex_count() != mesh.vertex_count()) {
    throw std::invalid_argument("cell state does not match mesh size");
  }
  auto vertices = mesh.vertices();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto src = of(i);
    vertices[i].output.assign(src.begin(), src.end());
  }
}

double dispersion(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("dispersion of an empty list");
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) {
    sq += (v - mean) * (v - mean);
  }
  return std::sqrt(sq / n);
}

void assemble_input_into(const CellState &state, const Mesh &mesh,
                         VertexIndex i, std::span<const VertexIndex> neighbors,
                         std::span<double> out, std::vector<double> &scratch) {
  const std::size_t n = state.channels;
  if (out.size() != 3 * n || 3 * n < kOverriddenInputs) {
    throw std::invalid_argument("input buffer must hold 3N >= 4 values");
  }
  if (neighbors.empty()) {
    throw std::domain_error("vertex " + std::to_string(i) +
                            " has no neighbors");
  }
  const auto own = state.of(i);
  const double count = static_cast<double>(neighbors.size());
  for (std::size_t j = 0; j < n; ++j) {
    scratch.clear();
    for (VertexIndex nb : neighbors) {
      scratch.push_back(state.values[nb * n + j]);
    }
    sort_small(scratch);
    double sum = 0.0;
    for (double v : scratch) {
      sum += v;
    }
    const double mean = sum / count;
    double sq = 0.0;
    for (double v : scratch) {
      sq += (v - mean) * (v - mean);
    }
    out[3 * j] = own[j];
    out[3 * j + 1] = mean;
    out[3 * j + 2] = std::sqrt(sq / count);
  }
  const Vertex &v = mesh.vertex(i);
  const std::size_t base = 3 * n - kOverriddenInputs;
  out[base] = v.growth_dir.x;
  out[base + 1] = v.growth_dir.y;
  out[base + 2] = v.growth_dir.z;
  out[base + 3] = v.position.z;
}

std::vector<double> assemble_input(const CellState &state, const Mesh &mesh,
                                   VertexIndex i) {
  std::vector<double> out(3 * state.channels);
  std::vector<double> scratch;
  const auto nbs = mesh.neighbors(i);
  assemble_input_into(state, mesh, i, nbs, out, scratch);
  return out;
}

CellState step_outputs(const CellState &state, const Mesh &mesh,
                       const Network &net) {
  const std::size_t n = state.channels;
  if (state.vertex_count() != mesh.vertex_count() ||
      state.values.size() != mesh.vertex_count() * n) {
    throw std::invalid_argument("cell state does not match mesh size");
  }
  const auto &arch = net.architecture();
  if (arch.inputs() != 3 * n || arch.outputs() != n) {
    throw std::invalid_argument(
        "network shape does not match the cell state: expected " +
        std::to_string(3 * n) + " inputs and " + std::to_string(n) +
        " outputs");
  }

  CellState next{n, std::vector<double>(state.values.size())};
  const std::size_t in_width = 3 * n;
  std::vector<VertexIndex> nbs;
  std::vector<double> input(in_width);
  std::vector<double> scratch;
  std::vector<double> batch_in(in_width * kBatch);
  std::vector<double> batch_out(n * kBatch);
  Network::Scratch net_scratch;
  const std::size_t total = mesh.vertex_count();
  for (std::size_t first = 0; first < total; first += kBatch) {
    const std::size_t count = std::min(kBatch, total - first);
    batch_in.resize(in_width * count);
    batch_out.resize(n * count);
    for (std::size_t v = 0; v < count; ++v) {
      const auto vi = static_cast<VertexIndex>(first + v);
      mesh.neighbors_into(vi, nbs);
      assemble_input_into(state, mesh, vi, nbs, input, scratch);
      for (std::size_t k = 0; k < in_width; ++k) {
        batch_in[k * count + v] = input[k];
      }
    }
    net.evaluate_batch(batch_in, count, batch_out, net_scratch);
    for (std::size_t v = 0; v < count; ++v) {
      auto dst = next.of(first + v);
      for (std::size_t j = 0; j < n; ++j) {
        dst[j] = batch_out[j * count + v];
      }
    }
  }
  return next;
}

} // namespace cellgrow
