#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace fixture {

Mesh make_mesh(const std::vector<Vec3> &positions,
               const std::vector<std::array<cellgrow::VertexIndex, 3>> &faces,
               std::size_t channels) {
  std::vector<cellgrow::Vertex> vs;
  for (const Vec3 &p : positions) {
    vs.push_back({p, {0, 0, 1}, std::vector<double>(channels, 0.5)});
  }
  std::vector<cellgrow::Face> fs;
  for (const auto &f : faces) {
    fs.push_back({f});
  }
  return Mesh(std::move(vs), std::move(fs));
}

Mesh rhombus(Vec3 a, Vec3 c) {
  // 0 A, 1 B, 2 C, 3 D, 4-6 ears of B, 7-9 ears of D
  const std::vector<Vec3> p = {a,          {-2, 0, 0}, c,          {2, 0, 0},
                               {-3, -1, 0}, {-4, 0, 0}, {-3, 1, 0}, {3, -1, 0},
                               {4, 0, 0},   {3, 1, 0}};
  return make_mesh(p, {{0, 1, 3},
                       {1, 2, 3},
                       {1, 0, 4},
                       {1, 4, 5},
                       {1, 5, 6},
                       {1, 6, 2},
                       {0, 3, 7},
                       {3, 8, 7},
                       {3, 9, 8},
                       {3, 2, 9}});
}

Mesh platform(double half, double z) {
  return make_mesh({{-half, -half, z}, {half, -half, z}, {half, half, z},
                    {-half, half, z}},
                   {{0, 1, 2}, {0, 2, 3}});
}

Mesh permute(const Mesh &mesh, const std::vector<cellgrow::VertexIndex> &perm) {
  std::vector<cellgrow::Vertex> vs(mesh.vertex_count());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    vs[perm[i]] = mesh.vertex(static_cast<cellgrow::VertexIndex>(i));
  }
  std::vector<cellgrow::Face> fs;
  for (const auto &f : mesh.faces()) {
    fs.push_back({{perm[f.v[0]], perm[f.v[1]], perm[f.v[2]]}});
  }
  return Mesh(std::move(vs), std::move(fs));
}

std::vector<cellgrow::VertexIndex> random_permutation(std::size_t n,
                                                      cellgrow::Rng &rng) {
  std::vector<cellgrow::VertexIndex> p(n);
  std::iota(p.begin(), p.end(), 0u);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

} // namespace fixture
