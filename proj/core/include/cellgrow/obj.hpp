#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cellgrow/mesh.hpp"

namespace cellgrow {

/// Writes "v x y z" per vertex (fixed notation, 9 significant digits) and
/// "f a b c" per face (1-based), both in storage order. Throws
/// std::ios_base::failure if the stream goes bad.
void write_obj(const Mesh &mesh, std::ostream &out);

class ObjParseError : public std::runtime_error {
public:
  ObjParseError(std::size_t line, const std::string &what);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct ObjData {
  std::vector<Vec3> positions;
  std::vector<std::array<VertexIndex, 3>> triangles;
};

/// Reads the "v" and "f" records of a triangle-only OBJ. Face entries may
/// use the v/vt/vn forms and negative (relative) indices. Other record types
/// are ignored. Polygons with more than three vertices are rejected.
ObjData read_obj(std::istream &in);

/// Mesh over the OBJ geometry. Growth directions are zero and outputs empty,
/// so validate it with ValidateOptions{.vertex_state = false}.
Mesh mesh_from_obj(const ObjData &data);

} // namespace cellgrow
