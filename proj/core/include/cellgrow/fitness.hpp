#pragma once

#include <cstddef>
#include <limits>
#include <ostream>
#include <vector>

#include "cellgrow/mesh.hpp"

namespace cellgrow {

/// Square sampling domain [-half_extent, half_extent]^2 split into
/// resolution x resolution cells, sampled at cell centers.
struct GridConfig {
  double half_extent = 20.0;
  std::size_t resolution = 128;

  double cell_size() const {
    return 2.0 * half_extent / static_cast<double>(resolution);
  }
  double cell_center(std::size_t i) const {
    return -half_extent + (static_cast<double>(i) + 0.5) * cell_size();
  }
  /// Throws std::invalid_argument unless resolution >= 8 and the extent is
  /// positive.
  void check() const;
};

inline constexpr double kUncovered = -std::numeric_limits<double>::infinity();

struct HeightGrid {
  GridConfig grid;
  /// Row-major, row = y index. kUncovered where no triangle projects.
  std::vector<double> heights;
  /// Faces whose xy footprint leaves the domain.
  std::size_t faces_outside = 0;

  double at(std::size_t ix, std::size_t iy) const {
    return heights[iy * grid.resolution + ix];
  }
  bool covered(std::size_t ix, std::size_t iy) const {
    return at(ix, iy) != kUncovered;
  }
  std::size_t covered_count() const;
};

/// Per cell center, the largest z of any triangle whose xy projection
/// contains it (edges included), interpolated barycentrically. Triangles
/// seen edge-on from above are skipped.
HeightGrid rasterize_heightmap(const Mesh &mesh, const GridConfig &grid = {});

/// Midpoint-rule integral of 1 / (1 + exp(10 - h)) over covered cells.
double canopy_integral(const HeightGrid &heights);

struct FitnessReport {
  double canopy_integral = 0.0;
  std::size_t vertex_count = 0;
  double fitness = 0.0;
  std::size_t faces_outside = 0;
};

/// canopy integral / (1000 + vertex count)
FitnessReport canopy_fitness(const Mesh &mesh, const GridConfig &grid = {});

/// Binary 16-bit PGM, first row at +y. Heights map linearly from [0, z_max]
/// onto [0, 65535]; uncovered and negative cells are 0.
void write_pgm(const HeightGrid &heights, std::ostream &out);

/// canopy_integral,vertex_count,fitness,faces_outside
void write_fitness_csv_header(std::ostream &out);
void write_fitness_csv_row(const FitnessReport &report, std::ostream &out);

} // namespace cellgrow
