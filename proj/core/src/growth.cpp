#include "cellgrow/growth.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cellgrow/format.hpp"

namespace cellgrow {

void GrowthConfig::check(std::size_t output_channels) const {
  auto positive = [](double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("growth config: ") + name +
                                  " must be positive and finite");
    }
  };
  positive(base_step, "base_step");
  positive(max_step, "max_step");
  positive(split_area_base, "split_area_base");
  positive(split_modulation, "split_modulation");
  if (!(flip_angle_cos > -1.0 && flip_angle_cos <= 1.0)) {
    throw std::invalid_argument("growth config: flip_angle_cos outside (-1, 1]");
  }
  if (min_valence == 0 || max_vertices == 0) {
    throw std::invalid_argument(
        "growth config: min_valence and max_vertices must be positive");
  }
  const std::size_t c[] = {channels.move, channels.split, channels.blend};
  for (std::size_t ch : c) {
    if (ch >= output_channels) {
      throw std::invalid_argument("growth config: output channel " +
                                  std::to_string(ch) + " out of range for " +
                                  std::to_string(output_channels) +
                                  " outputs");
    }
  }
  if (c[0] == c[1] || c[1] == c[2] || c[0] == c[2]) {
    throw std::invalid_argument("growth config: output channels must differ");
  }
}

Displacements compute_displacements(const Mesh &mesh, const CellState &state,
                                    const GrowthConfig &config) {
  const std::size_t count = mesh.vertex_count();
  if (state.vertex_count() != count) {
    throw std::invalid_argument("cell state does not match mesh size");
  }
  std::vector<double> drive(count);
  double peak = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    drive[i] = std::max(0.0, state.of(i)[config.channels.move] - 0.5);
    peak = std::max(peak, drive[i]);
  }

  Displacements out;
  out.k = config.base_step;
  if (config.base_step * peak > config.max_step) {
    out.k = config.max_step / peak;
  }
  out.delta.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (drive[i] > 0.0) {
      out.delta[i] =
          mesh.vertex(static_cast<VertexIndex>(i)).growth_dir * (out.k * drive[i]);
      out.max_magnitude = std::max(out.max_magnitude, norm(out.delta[i]));
    }
  }
  return out;
}

SplitResult split_pass(Mesh &mesh, CellState &state,
                       const GrowthConfig &config) {
  const std::size_t n = state.channels;
  const std::size_t snapshot = mesh.face_count();
  SplitResult result;
  std::vector<double> parent_mean(n);
  for (std::size_t fi = 0; fi < snapshot; ++fi) {
    const auto f = static_cast<FaceIndex>(fi);
    const auto parents = mesh.face(f).v;
    const auto wa = state.of(parents[0]);
    const auto wb = state.of(parents[1]);
    const auto wc = state.of(parents[2]);

    const std::size_t sc = config.channels.split;
    const double split_signal = (wa[sc] + wb[sc] + wc[sc]) / 3.0;
    const double threshold =
        config.split_area_base *
        std::exp(config.split_modulation * (split_signal - 0.5));
    if (!(face_area(mesh, f) > threshold)) {
      continue;
    }
    const auto normal = try_face_normal(mesh, f);
    if (!normal) {
      continue;
    }
    if (mesh.vertex_count() >= config.max_vertices) {
      result.capped = true;
      break;
    }

    const std::size_t bc = config.channels.blend;
    Vec3 dir = *normal;
    dir += mesh.vertex(parents[0]).growth_dir * wa[bc];
    dir += mesh.vertex(parents[1]).growth_dir * wb[bc];
    dir += mesh.vertex(parents[2]).growth_dir * wc[bc];
    const double len = norm(dir);
    dir = len < 1e-9 ? *normal : dir * (1.0 / len);

    for (std::size_t j = 0; j < n; ++j) {
      parent_mean[j] = (wa[j] + wb[j] + wc[j]) / 3.0;
    }
    // `wa`..`wc` may dangle once the state grows.
    state.values.insert(state.values.end(), parent_mean.begin(),
                        parent_mean.end());
    mesh.split_face(f, dir, parent_mean);
    ++result.splits;
  }
  return result;
}

std::size_t flip_pass(Mesh &mesh, const GrowthConfig &config) {
  const auto criteria = config.flip_criteria();
  std::size_t flips = 0;
  for (const Edge &e : mesh.edges()) {
    if (mesh.flip_edge_if_better(e, criteria) == Mesh::FlipOutcome::flipped) {
      ++flips;
    }
  }
  return flips;
}

StepRecord step(Mesh &mesh, const Network &net, const GrowthConfig &config) {
  StepRecord rec;
  CellState state = step_outputs(CellState::capture(mesh), mesh, net);
  state.store(mesh);

  const Displacements moves = compute_displacements(mesh, state, config);
  auto vertices = mesh.vertices();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    vertices[i].position += moves.delta[i];
    rec.total_displacement += norm(moves.delta[i]);
  }
  rec.max_displacement = moves.max_magnitude;

  const SplitResult split = split_pass(mesh, state, config);
  rec.splits = split.splits;
  rec.capped = split.capped;
  rec.flips = flip_pass(mesh, config);
  rec.vertices = mesh.vertex_count();
  rec.faces = mesh.face_count();
  return rec;
}

GrowResult grow(const Genome &genome, const GrowthConfig &config,
                const StepObserver &observer) {
  const Network net(genome);
  const std::size_t channels = genome.architecture.outputs();
  if (genome.architecture.inputs() != 3 * channels) {
    throw std::invalid_argument(
        "genome architecture must have 3x as many inputs as outputs");
  }
  config.check(channels);

  GrowResult result{make_seed_mesh(channels), {}};
  result.stats.steps.reserve(config.n_steps);
  for (std::size_t s = 1; s <= config.n_steps; ++s) {
    StepRecord rec = step(result.mesh, net, config);
    rec.step = s;
    result.stats.total_displacement += rec.total_displacement;
    result.stats.total_splits += rec.splits;
    result.stats.total_flips += rec.flips;
    result.stats.capped = result.stats.capped || rec.capped;
    result.stats.steps.push_back(rec);
    if (observer) {
      observer(result.mesh, rec);
    }
  }
  return result;
}

void write_stats_csv(const RunStats &stats, std::ostream &out) {
  out << "step,vertices,faces,splits,flips,max_displacement\n";
  for (const StepRecord &r : stats.steps) {
    out << r.step << ',' << r.vertices << ',' << r.faces << ',' << r.splits
        << ',' << r.flips << ',' << format_roundtrip(r.max_displacement)
        << '\n';
  }
  if (!out) {
    throw std::ios_base::failure("write_stats_csv: stream write failed");
  }
}

} // namespace cellgrow
