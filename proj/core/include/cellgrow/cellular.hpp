#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cellgrow/mesh.hpp"
#include "cellgrow/neuralnet.hpp"

namespace cellgrow {

/// Snapshot of every vertex's output vector, vertex-major.
struct CellState {
  std::size_t channels = 0;
  std::vector<double> values;

  std::size_t vertex_count() const {
    return channels == 0 ? 0 : values.size() / channels;
  }
  std::span<const double> of(std::size_t vertex) const {
    return {values.data() + vertex * channels, channels};
  }
  std::span<double> of(std::size_t vertex) {
    return {values.data() + vertex * channels, channels};
  }

  /// Copies the outputs stored on the mesh vertices. Throws
  /// std::invalid_argument if their lengths differ.
  static CellState capture(const Mesh &mesh);
  /// Writes the snapshot back onto the mesh vertices.
  void store(Mesh &mesh) const;

  friend bool operator==(const CellState &, const CellState &) = default;
};

/// The last four input slots carry growth direction (x, y, z) and height.
inline constexpr std::size_t kOverriddenInputs = 4;

/// Population standard deviation. Throws std::invalid_argument when empty.
double dispersion(std::span<const double> values);

/// Length-3N input for vertex i: for each channel j, slot 3j is the vertex's
/// own previous output, 3j+1 the neighbor mean and 3j+2 the neighbor
/// dispersion; the last four slots are then overwritten with the growth
/// direction and the z coordinate. Neighbor aggregates are summed in sorted
/// value order so they do not depend on vertex labelling. Throws
/// std::domain_error for a vertex without neighbors.
std::vector<double> assemble_input(const CellState &state, const Mesh &mesh,
                                   VertexIndex i);

/// Allocation-free variant; `out` must hold 3N values.
void assemble_input_into(const CellState &state, const Mesh &mesh,
                         VertexIndex i, std::span<const VertexIndex> neighbors,
                         std::span<double> out, std::vector<double> &scratch);

/// Synchronous update: every vertex's next output is the network applied to
/// its input assembled from `state`. `state` is not modified.
CellState step_outputs(const CellState &state, const Mesh &mesh,
                       const Network &net);

} // namespace cellgrow
