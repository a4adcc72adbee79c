#include "cellgrow/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cellgrow/format.hpp"

namespace cellgrow {

void GridConfig::check() const {
  if (resolution < 8) {
    throw std::invalid_argument("grid resolution must be >= 8");
  }
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw std::invalid_argument("grid half extent must be positive");
  }
}

std::size_t HeightGrid::covered_count() const {
  return static_cast<std::size_t>(
      std::count_if(heights.begin(), heights.end(),
                    [](double h) { return h != kUncovered; }));
}

namespace {

double orient(double ax, double ay, double bx, double by, double px,
              double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

// Inclusive index range of cell centers inside [lo, hi] along one axis.
bool cell_range(const GridConfig &grid, double lo, double hi,
                std::size_t &first, std::size_t &last) {
  const double cs = grid.cell_size();
  const double r = static_cast<double>(grid.resolution);
  const double a = std::ceil((lo + grid.half_extent) / cs - 0.5);
  const double b = std::floor((hi + grid.half_extent) / cs - 0.5);
  const double ca = std::max(a, 0.0);
  const double cb = std::min(b, r - 1.0);
  if (ca > cb) {
    return false;
  }
  first = static_cast<std::size_t>(ca);
  last = static_cast<std::size_t>(cb);
  return true;
}

} // namespace

HeightGrid rasterize_heightmap(const Mesh &mesh, const GridConfig &grid) {
  grid.check();
  HeightGrid out{grid,
                 std::vector<double>(grid.resolution * grid.resolution,
                                     kUncovered),
                 0};
  constexpr double kEdgeTolerance = 1e-12;

  for (const Face &face : mesh.faces()) {
    const Vec3 &a = mesh.vertex(face.v[0]).position;
    const Vec3 &b = mesh.vertex(face.v[1]).position;
    const Vec3 &c = mesh.vertex(face.v[2]).position;

    const double xmin = std::min({a.x, b.x, c.x});
    const double xmax = std::max({a.x, b.x, c.x});
    const double ymin = std::min({a.y, b.y, c.y});
    const double ymax = std::max({a.y, b.y, c.y});
    if (xmin < -grid.half_extent || xmax > grid.half_extent ||
        ymin < -grid.half_extent || ymax > grid.half_extent) {
      ++out.faces_outside;
    }

    const double area2 = orient(a.x, a.y, b.x, b.y, c.x, c.y);
    const double scale = std::max(xmax - xmin, ymax - ymin);
    if (!(std::abs(area2) > 1e-14 * scale * scale)) {
      continue;
    }

    std::size_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    if (!cell_range(grid, xmin, xmax, x0, x1) ||
        !cell_range(grid, ymin, ymax, y0, y1)) {
      continue;
    }
    const double inv = 1.0 / area2;
    for (std::size_t iy = y0; iy <= y1; ++iy) {
      const double py = grid.cell_center(iy);
      for (std::size_t ix = x0; ix <= x1; ++ix) {
        const double px = grid.cell_center(ix);
        const double la = orient(b.x, b.y, c.x, c.y, px, py) * inv;
        const double lb = orient(c.x, c.y, a.x, a.y, px, py) * inv;
        const double lc = orient(a.x, a.y, b.x, b.y, px, py) * inv;
        if (la < -kEdgeTolerance || lb < -kEdgeTolerance ||
            lc < -kEdgeTolerance) {
          continue;
        }
        const double z = a.z + lb * (b.z - a.z) + lc * (c.z - a.z);
        double &cell = out.heights[iy * grid.resolution + ix];
        cell = std::max(cell, z);
      }
    }
  }
  return out;
}

double canopy_integral(const HeightGrid &heights) {
  const double cell_area = heights.grid.cell_size() * heights.grid.cell_size();
  double total = 0.0;
  for (double h : heights.heights) {
    if (h != kUncovered) {
      total += cell_area / (1.0 + std::exp(10.0 - h));
    }
  }
  return total;
}

FitnessReport canopy_fitness(const Mesh &mesh, const GridConfig &grid) {
  const HeightGrid heights = rasterize_heightmap(mesh, grid);
  FitnessReport report;
  report.canopy_integral = canopy_integral(heights);
  report.vertex_count = mesh.vertex_count();
  report.fitness = report.canopy_integral /
                   (1000.0 + static_cast<double>(report.vertex_count));
  report.faces_outside = heights.faces_outside;
  return report;
}

void write_pgm(const HeightGrid &heights, std::ostream &out) {
  const std::size_t r = heights.grid.resolution;
  double z_max = 0.0;
  for (double h : heights.heights) {
    if (h != kUncovered) {
      z_max = std::max(z_max, h);
    }
  }
  out << "P5\n" << r << ' ' << r << "\n65535\n";
  for (std::size_t row = 0; row < r; ++row) {
    const std::size_t iy = r - 1 - row;
    for (std::size_t ix = 0; ix < r; ++ix) {
      const double h = heights.at(ix, iy);
      unsigned value = 0;
      if (h != kUncovered && z_max > 0.0) {
        value = static_cast<unsigned>(
            std::lround(std::clamp(h / z_max, 0.0, 1.0) * 65535.0));
      }
      out.put(static_cast<char>((value >> 8) & 0xff));
      out.put(static_cast<char>(value & 0xff));
    }
  }
  if (!out) {
    throw std::ios_base::failure("write_pgm: stream write failed");
  }
}

void write_fitness_csv_header(std::ostream &out) {
  out << "canopy_integral,vertex_count,fitness,faces_outside\n";
}

void write_fitness_csv_row(const FitnessReport &report, std::ostream &out) {
  out << format_roundtrip(report.canopy_integral) << ',' << report.vertex_count
      << ',' << format_roundtrip(report.fitness) << ',' << report.faces_outside
      << '\n';
}

} // namespace cellgrow
