#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <ostream>
#include <vector>

#include "cellgrow/cellular.hpp"
#include "cellgrow/mesh.hpp"
#include "cellgrow/neuralnet.hpp"

namespace cellgrow {

/// Which output channel drives which growth behaviour.
struct OutputChannels {
  std::size_t move = 0;
  std::size_t split = 1;
  std::size_t blend = 2;
};

struct GrowthConfig {
  std::size_t n_steps = 200;
  /// Nominal displacement gain k0 (world units per unit of rectified output).
  double base_step = 0.3;
  /// Largest displacement any vertex may make in one step.
  double max_step = 0.1;
  /// Face area that triggers a split when the split channel is neutral.
  double split_area_base = 2.0 * seed_face_area();
  /// Exponential gain of the split channel on the split threshold.
  double split_modulation = 2.0;
  double flip_angle_cos = std::cos(40.0 * std::numbers::pi / 180.0);
  std::size_t min_valence = 5;
  std::size_t max_vertices = 20000;
  OutputChannels channels;

  /// Throws std::invalid_argument if a constant is non-positive or a channel
  /// index is repeated or >= output_channels.
  void check(std::size_t output_channels) const;

  FlipCriteria flip_criteria() const { return {flip_angle_cos, min_valence}; }
};

struct Displacements {
  std::vector<Vec3> delta;
  /// Normalization factor actually applied (<= base_step).
  double k = 0.0;
  double max_magnitude = 0.0;
};

/// delta_i = k * max(0, w_move - 1/2) * h_i, with k = base_step unless that
/// would move some vertex further than max_step, in which case k is reduced
/// so the largest move is exactly max_step.
Displacements compute_displacements(const Mesh &mesh, const CellState &state,
                                    const GrowthConfig &config);

struct SplitResult {
  std::size_t splits = 0;
  bool capped = false;
};

/// Splits every face present at the start of the pass whose area exceeds
/// split_area_base * exp(c * (mean split output - 1/2)). New vertices get a
/// direction blended from the face normal and the parents' growth
/// directions, and the mean of the parents' outputs, which is appended to
/// `state` as well.
SplitResult split_pass(Mesh &mesh, CellState &state,
                       const GrowthConfig &config);

/// Tries every edge present at the start of the pass, in sorted order.
std::size_t flip_pass(Mesh &mesh, const GrowthConfig &config);

struct StepRecord {
  std::size_t step = 0;
  std::size_t vertices = 0;
  std::size_t faces = 0;
  std::size_t splits = 0;
  std::size_t flips = 0;
  double max_displacement = 0.0;
  double total_displacement = 0.0;
  bool capped = false;
};

/// One timestep: outputs, then displacement, then splits, then flips. The
/// mesh vertices carry the cell state between steps.
StepRecord step(Mesh &mesh, const Network &net, const GrowthConfig &config);

struct RunStats {
  std::vector<StepRecord> steps;
  double total_displacement = 0.0;
  std::size_t total_splits = 0;
  std::size_t total_flips = 0;
  /// The vertex cap stopped splitting at least once.
  bool capped = false;
};

struct GrowResult {
  Mesh mesh;
  RunStats stats;
};

using StepObserver = std::function<void(const Mesh &, const StepRecord &)>;

/// Seed mesh plus config.n_steps calls to step().
GrowResult grow(const Genome &genome, const GrowthConfig &config,
                const StepObserver &observer = {});

/// Header: step,vertices,faces,splits,flips,max_displacement
void write_stats_csv(const RunStats &stats, std::ostream &out);

} // namespace cellgrow
