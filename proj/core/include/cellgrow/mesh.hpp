#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cellgrow/vec3.hpp"

namespace cellgrow {

using VertexIndex = std::uint32_t;
using FaceIndex = std::uint32_t;

/// Faces with area at or below this have no defined normal.
inline constexpr double kDegenerateArea = 1e-12;

struct Vertex {
  Vec3 position;
  Vec3 growth_dir; // unit length
  std::vector<double> output;
};

/// Triangle, counter-clockwise when viewed from outside.
struct Face {
  std::array<VertexIndex, 3> v{};

  friend bool operator==(const Face &, const Face &) = default;
};

/// Undirected edge, stored with a < b.
struct Edge {
  VertexIndex a = 0;
  VertexIndex b = 0;

  Edge() = default;
  Edge(VertexIndex u, VertexIndex v) : a(u < v ? u : v), b(u < v ? v : u) {}

  friend auto operator<=>(const Edge &, const Edge &) = default;
};

class DegenerateFaceError : public std::domain_error {
public:
  explicit DegenerateFaceError(FaceIndex f);
  FaceIndex face() const { return face_; }

private:
  FaceIndex face_;
};

struct FlipCriteria {
  /// Minimum dot product between the unit normals of the two faces.
  double min_normal_dot = 0.7660444431189780; // cos(40 deg)
  /// Both endpoints of the old diagonal need at least this many faces.
  std::size_t min_valence = 5;
};

/// Indexed triangle mesh. Keeps a per-vertex incident-face list in sync with
/// every topology edit; neighbor and edge queries are derived from it.
class Mesh {
public:
  Mesh() = default;
  /// Throws std::invalid_argument if a face has out-of-range or repeated
  /// indices. Duplicate faces and non-manifold edges are accepted here and
  /// reported by validate().
  Mesh(std::vector<Vertex> vertices, std::vector<Face> faces);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }

  const Vertex &vertex(VertexIndex i) const { return vertices_.at(i); }
  Vertex &vertex(VertexIndex i) { return vertices_.at(i); }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<Vertex> vertices() { return vertices_; }

  const Face &face(FaceIndex f) const { return faces_.at(f); }
  std::span<const Face> faces() const { return faces_; }

  /// Faces touching vertex i, ascending.
  std::span<const FaceIndex> incident_faces(VertexIndex i) const;
  std::size_t valence(VertexIndex i) const {
    return incident_faces(i).size();
  }

  /// Vertices sharing a face with i, deduplicated and ascending.
  std::vector<VertexIndex> neighbors(VertexIndex i) const;
  void neighbors_into(VertexIndex i, std::vector<VertexIndex> &out) const;

  /// Faces containing both endpoints of e, ascending.
  std::vector<FaceIndex> edge_faces(Edge e) const;
  bool has_edge(Edge e) const;

  /// All distinct edges, sorted by (a, b).
  std::vector<Edge> edges() const;

  /// Incident-face lists recomputed from the face list alone.
  std::vector<std::vector<FaceIndex>> rebuild_adjacency() const;
  bool adjacency_consistent() const;

  /// Inserts a vertex at the centroid of face f = ABC and replaces f with
  /// ABM (in place), BCM and CAM (appended). Returns M. Throws
  /// DegenerateFaceError and leaves the mesh unchanged if f has no area.
  VertexIndex split_face(FaceIndex f, const Vec3 &growth_dir,
                         std::vector<double> output);

  /// Replaces faces ABD, BCD sharing edge BD with ABC, CDA when the quad is
  /// near-planar, the new diagonal is strictly shorter, both B and D keep
  /// enough faces, and AC is not already an edge. Throws std::out_of_range
  /// if the edge does not exist.
  bool try_flip_edge(Edge bd, const FlipCriteria &criteria = {});

  enum class FlipOutcome { missing_edge, rejected, flipped };
  /// Same as try_flip_edge but reports a missing edge instead of throwing.
  FlipOutcome flip_edge_if_better(Edge bd, const FlipCriteria &criteria = {});

private:
  void attach(FaceIndex f);
  void detach(FaceIndex f, VertexIndex v);

  std::vector<Vertex> vertices_;
  std::vector<Face> faces_;
  std::vector<std::vector<FaceIndex>> vertex_faces_;
};

double face_area(const Mesh &mesh, FaceIndex f);
Vec3 face_centroid(const Mesh &mesh, FaceIndex f);
/// Throws DegenerateFaceError when the face area is <= kDegenerateArea.
Vec3 face_normal(const Mesh &mesh, FaceIndex f);
std::optional<Vec3> try_face_normal(const Mesh &mesh, FaceIndex f);

/// Regular icosahedron of circumradius 1 with one vertex at the origin and
/// the opposite vertex at z = 2. Growth directions point away from the
/// center (0, 0, 1); outputs start at 0.5.
Mesh make_seed_mesh(std::size_t output_channels = 15);

/// Area of one face of the seed icosahedron.
double seed_face_area();

struct ValidateOptions {
  /// Check growth directions and output vectors as well as geometry.
  bool vertex_state = true;
};

/// One human-readable entry per violated invariant; empty when valid.
std::vector<std::string> validate(const Mesh &mesh,
                                  const ValidateOptions &options = {});

} // namespace cellgrow
