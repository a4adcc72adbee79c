#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cellgrow/mesh.hpp"
#include "cellgrow/random.hpp"

namespace fixture {

using cellgrow::Mesh;
using cellgrow::Vec3;

// Vertices get growth_dir (0,0,1) and `channels` outputs of 0.5.
Mesh make_mesh(const std::vector<Vec3> &positions,
               const std::vector<std::array<cellgrow::VertexIndex, 3>> &faces,
               std::size_t channels = 1);

// Quad ABD + BCD sharing diagonal BD, with B = 1 at (-2,0,0) and D = 3 at
// (2,0,0). Fans of ears give B and D six faces each. A = 0 and C = 2 sit at
// (0,-1,0) and (0,1,0) unless overridden.
Mesh rhombus(Vec3 a = {0, -1, 0}, Vec3 c = {0, 1, 0});
inline constexpr cellgrow::VertexIndex kA = 0, kB = 1, kC = 2, kD = 3;

// Axis-aligned square [-half, half]^2 at height z, two triangles.
Mesh platform(double half, double z);

// Relabels vertex i as perm[i]; face order is kept.
Mesh permute(const Mesh &mesh, const std::vector<cellgrow::VertexIndex> &perm);

std::vector<cellgrow::VertexIndex> random_permutation(std::size_t n,
                                                      cellgrow::Rng &rng);

} // namespace fixture
