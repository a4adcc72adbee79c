#include "cellgrow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cellgrow {

namespace {

void insert_sorted(std::vector<FaceIndex> &list, FaceIndex f) {
  list.insert(std::lower_bound(list.begin(), list.end(), f), f);
}

VertexIndex third_vertex(const Face &face, VertexIndex u, VertexIndex v) {
  for (VertexIndex w : face.v) {
    if (w != u && w != v) {
      return w;
    }
  }
  return face.v[0];
}

// True if the face traverses u -> v in its cyclic order.
bool has_directed_edge(const Face &face, VertexIndex u, VertexIndex v) {
  for (int k = 0; k < 3; ++k) {
    if (face.v[k] == u && face.v[(k + 1) % 3] == v) {
      return true;
    }
  }
  return false;
}

Vec3 raw_cross(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  return cross(b - a, c - a);
}

} // namespace

DegenerateFaceError::DegenerateFaceError(FaceIndex f)
    : std::domain_error("face " + std::to_string(f) +
                        " is degenerate and has no defined normal"),
      face_(f) {}

Mesh::Mesh(std::vector<Vertex> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)),
      vertex_faces_(vertices_.size()) {
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto &v = faces_[f].v;
    for (VertexIndex idx : v) {
      if (idx >= vertices_.size()) {
        throw std::invalid_argument("face " + std::to_string(f) +
                                    " references vertex " +
                                    std::to_string(idx) + " out of range");
      }
    }
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
      throw std::invalid_argument("face " + std::to_string(f) +
                                  " repeats a vertex index");
    }
    for (VertexIndex idx : v) {
      vertex_faces_[idx].push_back(static_cast<FaceIndex>(f));
    }
  }
}

std::span<const FaceIndex> Mesh::incident_faces(VertexIndex i) const {
  return vertex_faces_.at(i);
}

std::vector<VertexIndex> Mesh::neighbors(VertexIndex i) const {
  std::vector<VertexIndex> out;
  neighbors_into(i, out);
  return out;
}

void Mesh::neighbors_into(VertexIndex i, std::vector<VertexIndex> &out) const {
  out.clear();
  for (FaceIndex f : vertex_faces_.at(i)) {
    for (VertexIndex w : faces_[f].v) {
      if (w != i) {
        out.push_back(w);
      }
    }
  }
  for (std::size_t k = 1; k < out.size(); ++k) {
    const VertexIndex x = out[k];
    std::size_t j = k;
    for (; j > 0 && out[j - 1] > x; --j) {
      out[j] = out[j - 1];
    }
    out[j] = x;
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::vector<FaceIndex> Mesh::edge_faces(Edge e) const {
  const auto &fa = vertex_faces_.at(e.a);
  const auto &fb = vertex_faces_.at(e.b);
  std::vector<FaceIndex> shared;
  std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(),
                        std::back_inserter(shared));
  return shared;
}

bool Mesh::has_edge(Edge e) const {
  if (e.a == e.b || e.b >= vertices_.size()) {
    return false;
  }
  const auto &fa = vertex_faces_[e.a];
  const auto &fb = vertex_faces_[e.b];
  auto ia = fa.begin();
  auto ib = fb.begin();
  while (ia != fa.end() && ib != fb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

std::vector<Edge> Mesh::edges() const {
  // Each vertex's neighbor list is ascending, so emitting (v, w) with w > v
  // in vertex order yields the edges already sorted.
  std::vector<Edge> out;
  out.reserve(faces_.size() * 3 / 2 + 3);
  std::vector<VertexIndex> nbs;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    neighbors_into(static_cast<VertexIndex>(v), nbs);
    for (VertexIndex w : nbs) {
      if (w > v) {
        out.emplace_back(static_cast<VertexIndex>(v), w);
      }
    }
  }
  return out;
}

std::vector<std::vector<FaceIndex>> Mesh::rebuild_adjacency() const {
  std::vector<std::vector<FaceIndex>> lists(vertices_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (VertexIndex v : faces_[f].v) {
      lists[v].push_back(static_cast<FaceIndex>(f));
    }
  }
  return lists;
}

bool Mesh::adjacency_consistent() const {
  return rebuild_adjacency() == vertex_faces_;
}

void Mesh::attach(FaceIndex f) {
  for (VertexIndex v : faces_[f].v) {
    insert_sorted(vertex_faces_[v], f);
  }
}

void Mesh::detach(FaceIndex f, VertexIndex v) {
  auto &list = vertex_faces_[v];
  auto it = std::lower_bound(list.begin(), list.end(), f);
  if (it != list.end() && *it == f) {
    list.erase(it);
  }
}

VertexIndex Mesh::split_face(FaceIndex f, const Vec3 &growth_dir,
                             std::vector<double> output) {
  if (face_area(*this, f) <= kDegenerateArea) {
    throw DegenerateFaceError(f);
  }
  const auto [a, b, c] = faces_[f].v;
  const auto m = static_cast<VertexIndex>(vertices_.size());
  vertices_.push_back({face_centroid(*this, f), growth_dir, std::move(output)});
  vertex_faces_.emplace_back();

  const auto bcm = static_cast<FaceIndex>(faces_.size());
  const auto cam = bcm + 1;
  faces_[f] = Face{{a, b, m}};
  faces_.push_back(Face{{b, c, m}});
  faces_.push_back(Face{{c, a, m}});

  detach(f, c);
  insert_sorted(vertex_faces_[a], cam);
  insert_sorted(vertex_faces_[b], bcm);
  insert_sorted(vertex_faces_[c], bcm);
  insert_sorted(vertex_faces_[c], cam);
  vertex_faces_[m] = {f, bcm, cam};
  return m;
}

bool Mesh::try_flip_edge(Edge bd, const FlipCriteria &criteria) {
  const FlipOutcome outcome = flip_edge_if_better(bd, criteria);
  if (outcome == FlipOutcome::missing_edge) {
    throw std::out_of_range("edge (" + std::to_string(bd.a) + ", " +
                            std::to_string(bd.b) + ") is not in the mesh");
  }
  return outcome == FlipOutcome::flipped;
}

Mesh::FlipOutcome Mesh::flip_edge_if_better(Edge bd,
                                            const FlipCriteria &criteria) {
  if (bd.a == bd.b || bd.b >= vertices_.size()) {
    return FlipOutcome::missing_edge;
  }
  // Faces containing both endpoints; more than two means non-manifold.
  std::array<FaceIndex, 3> shared{};
  std::size_t count = 0;
  {
    const auto &fa = vertex_faces_[bd.a];
    const auto &fb = vertex_faces_[bd.b];
    auto ia = fa.begin();
    auto ib = fb.begin();
    while (ia != fa.end() && ib != fb.end() && count < shared.size()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        shared[count++] = *ia;
        ++ia;
        ++ib;
      }
    }
  }
  if (count == 0) {
    return FlipOutcome::missing_edge;
  }
  if (count != 2) {
    return FlipOutcome::rejected;
  }

  // Name the quad so that face `abd` traverses B -> D and `bcd` traverses
  // D -> B. Inconsistently oriented pairs are left alone.
  const VertexIndex b = bd.a;
  const VertexIndex d = bd.b;
  FaceIndex abd = shared[0];
  FaceIndex bcd = shared[1];
  if (!has_directed_edge(faces_[abd], b, d)) {
    std::swap(abd, bcd);
  }
  if (!has_directed_edge(faces_[abd], b, d) ||
      !has_directed_edge(faces_[bcd], d, b)) {
    return FlipOutcome::rejected;
  }
  if (vertex_faces_[b].size() < criteria.min_valence ||
      vertex_faces_[d].size() < criteria.min_valence) {
    return FlipOutcome::rejected;
  }
  const VertexIndex a = third_vertex(faces_[abd], b, d);
  const VertexIndex c = third_vertex(faces_[bcd], b, d);
  if (a == c) {
    return FlipOutcome::rejected;
  }

  const Vec3 &pa = vertices_[a].position;
  const Vec3 &pb = vertices_[b].position;
  const Vec3 &pc = vertices_[c].position;
  const Vec3 &pd = vertices_[d].position;
  if (!(norm(pc - pa) < norm(pd - pb))) {
    return FlipOutcome::rejected;
  }
  const auto n1 = try_face_normal(*this, abd);
  const auto n2 = try_face_normal(*this, bcd);
  if (!n1 || !n2 || !(dot(*n1, *n2) > criteria.min_normal_dot)) {
    return FlipOutcome::rejected;
  }
  if (has_edge(Edge(a, c))) {
    return FlipOutcome::rejected;
  }

  faces_[abd] = Face{{a, b, c}};
  faces_[bcd] = Face{{c, d, a}};
  detach(bcd, b);
  detach(abd, d);
  insert_sorted(vertex_faces_[a], bcd);
  insert_sorted(vertex_faces_[c], abd);
  return FlipOutcome::flipped;
}

double face_area(const Mesh &mesh, FaceIndex f) {
  const auto &v = mesh.face(f).v;
  return 0.5 * norm(raw_cross(mesh.vertex(v[0]).position,
                              mesh.vertex(v[1]).position,
                              mesh.vertex(v[2]).position));
}

Vec3 face_centroid(const Mesh &mesh, FaceIndex f) {
  const auto &v = mesh.face(f).v;
  return (mesh.vertex(v[0]).position + mesh.vertex(v[1]).position +
          mesh.vertex(v[2]).position) *
         (1.0 / 3.0);
}

std::optional<Vec3> try_face_normal(const Mesh &mesh, FaceIndex f) {
  const auto &v = mesh.face(f).v;
  const Vec3 n = raw_cross(mesh.vertex(v[0]).position,
                           mesh.vertex(v[1]).position,
                           mesh.vertex(v[2]).position);
  const double len = norm(n);
  if (!(0.5 * len > kDegenerateArea)) {
    return std::nullopt;
  }
  return n * (1.0 / len);
}

Vec3 face_normal(const Mesh &mesh, FaceIndex f) {
  if (auto n = try_face_normal(mesh, f)) {
    return *n;
  }
  throw DegenerateFaceError(f);
}

Mesh make_seed_mesh(std::size_t output_channels) {
  // Polar icosahedron: poles on the z axis, two staggered rings of five.
  const double ring_z = 1.0 / std::sqrt(5.0);
  const double ring_r = 2.0 / std::sqrt(5.0);
  const double step = 2.0 * std::numbers::pi / 5.0;

  std::vector<Vec3> unit;
  unit.push_back({0.0, 0.0, 1.0});
  for (int k = 0; k < 5; ++k) {
    unit.push_back({ring_r * std::cos(k * step), ring_r * std::sin(k * step),
                    ring_z});
  }
  for (int k = 0; k < 5; ++k) {
    const double angle = k * step + step / 2.0;
    unit.push_back(
        {ring_r * std::cos(angle), ring_r * std::sin(angle), -ring_z});
  }
  unit.push_back({0.0, 0.0, -1.0});

  const VertexIndex top = 0;
  const VertexIndex bottom = 11;
  auto upper = [](int k) { return static_cast<VertexIndex>(1 + (k + 5) % 5); };
  auto lower = [](int k) { return static_cast<VertexIndex>(6 + (k + 5) % 5); };

  std::vector<Face> faces;
  for (int k = 0; k < 5; ++k) {
    faces.push_back({{top, upper(k), upper(k + 1)}});
  }
  for (int k = 0; k < 5; ++k) {
    faces.push_back({{upper(k), lower(k), upper(k + 1)}});
    faces.push_back({{upper(k + 1), lower(k), lower(k + 1)}});
  }
  for (int k = 0; k < 5; ++k) {
    faces.push_back({{bottom, lower(k + 1), lower(k)}});
  }
  // Orient every face outward.
  for (Face &face : faces) {
    const Vec3 &p0 = unit[face.v[0]];
    const Vec3 &p1 = unit[face.v[1]];
    const Vec3 &p2 = unit[face.v[2]];
    if (dot(raw_cross(p0, p1, p2), p0 + p1 + p2) < 0.0) {
      std::swap(face.v[1], face.v[2]);
    }
  }

  std::vector<Vertex> vertices;
  vertices.reserve(unit.size());
  for (const Vec3 &u : unit) {
    vertices.push_back({u + Vec3{0.0, 0.0, 1.0}, normalized(u),
                        std::vector<double>(output_channels, 0.5)});
  }
  return Mesh(std::move(vertices), std::move(faces));
}

double seed_face_area() {
  // Edge length of the unit-circumradius icosahedron.
  const double phi = std::numbers::phi;
  const double edge = 2.0 / std::sqrt(phi * std::sqrt(5.0));
  return std::sqrt(3.0) / 4.0 * edge * edge;
}

std::vector<std::string> validate(const Mesh &mesh,
                                  const ValidateOptions &options) {
  std::vector<std::string> issues;
  auto report = [&issues](auto &&...parts) {
    std::ostringstream os;
    (os << ... << parts);
    issues.push_back(os.str());
  };

  const auto faces = mesh.faces();
  const auto vertices = mesh.vertices();

  std::vector<std::pair<std::array<VertexIndex, 3>, FaceIndex>> keys;
  keys.reserve(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    auto key = faces[f].v;
    std::sort(key.begin(), key.end());
    keys.emplace_back(key, static_cast<FaceIndex>(f));
  }
  std::sort(keys.begin(), keys.end());
  // Duplicates are reported once and kept out of the edge checks below.
  std::vector<bool> duplicate(faces.size(), false);
  for (std::size_t k = 1; k < keys.size(); ++k) {
    if (keys[k].first == keys[k - 1].first) {
      duplicate[keys[k].second] = true;
      report("duplicate face ", keys[k].second,
             " repeats the vertex set of face ", keys[k - 1].second);
    }
  }

  std::vector<std::pair<VertexIndex, VertexIndex>> directed;
  directed.reserve(faces.size() * 3);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (duplicate[f]) {
      continue;
    }
    for (int k = 0; k < 3; ++k) {
      directed.emplace_back(faces[f].v[k], faces[f].v[(k + 1) % 3]);
    }
  }

  std::vector<Edge> undirected;
  undirected.reserve(directed.size());
  for (const auto &[u, w] : directed) {
    undirected.emplace_back(u, w);
  }
  std::sort(undirected.begin(), undirected.end());
  for (std::size_t k = 0; k < undirected.size();) {
    std::size_t run = k + 1;
    while (run < undirected.size() && undirected[run] == undirected[k]) {
      ++run;
    }
    if (run - k > 2) {
      report("edge (", undirected[k].a, ", ", undirected[k].b,
             ") is shared by ", run - k, " faces");
    }
    k = run;
  }

  std::sort(directed.begin(), directed.end());
  for (std::size_t k = 0; k < directed.size();) {
    std::size_t run = k + 1;
    while (run < directed.size() && directed[run] == directed[k]) {
      ++run;
    }
    if (run - k > 1) {
      report("edge ", directed[k].first, " -> ", directed[k].second,
             " is traversed ", run - k,
             " times in the same direction (inconsistent orientation)");
    }
    k = run;
  }

  const std::size_t channels =
      vertices.empty() ? 0 : vertices.front().output.size();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex &v = vertices[i];
    if (!is_finite(v.position)) {
      report("vertex ", i, " has a non-finite position");
    }
    if (mesh.valence(static_cast<VertexIndex>(i)) == 0) {
      report("vertex ", i, " is not referenced by any face");
    }
    if (!options.vertex_state) {
      continue;
    }
    const double len = norm(v.growth_dir);
    if (!(std::abs(len - 1.0) <= 1e-9)) {
      report("vertex ", i, " growth direction has length ", len);
    }
    if (v.output.size() != channels) {
      report("vertex ", i, " output has ", v.output.size(),
             " channels, expected ", channels);
    }
    for (double w : v.output) {
      if (!(w > 0.0 && w < 1.0)) {
        report("vertex ", i, " output value ", w, " outside (0, 1)");
        break;
      }
    }
  }

  if (!mesh.adjacency_consistent()) {
    report("incident-face lists disagree with the face list");
  }
  return issues;
}

} // namespace cellgrow
