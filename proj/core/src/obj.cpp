#include "cellgrow/obj.hpp"

#include <charconv>
#include <sstream>

#include "cellgrow/format.hpp"

namespace cellgrow {

void write_obj(const Mesh &mesh, std::ostream &out) {
  std::string line;
  for (const Vertex &v : mesh.vertices()) {
    line = "v ";
    line += format_fixed(v.position.x);
    line += ' ';
    line += format_fixed(v.position.y);
    line += ' ';
    line += format_fixed(v.position.z);
    line += '\n';
    out << line;
  }
  for (const Face &f : mesh.faces()) {
    out << "f " << f.v[0] + 1 << ' ' << f.v[1] + 1 << ' ' << f.v[2] + 1
        << '\n';
  }
  out.flush();
  if (!out) {
    throw std::ios_base::failure("write_obj: stream write failed");
  }
}

ObjParseError::ObjParseError(std::size_t line, const std::string &what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw ObjParseError(line, "invalid number '" + std::string(token) + "'");
  }
  return value;
}

VertexIndex parse_index(std::string_view token, std::size_t vertex_count,
                        std::size_t line) {
  const auto slash = token.find('/');
  const std::string_view head = token.substr(0, slash);
  long long idx = 0;
  auto [end, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
  if (ec != std::errc{} || end != head.data() + head.size() || idx == 0) {
    throw ObjParseError(line,
                        "invalid face index '" + std::string(token) + "'");
  }
  const long long resolved =
      idx > 0 ? idx - 1 : static_cast<long long>(vertex_count) + idx;
  if (resolved < 0 || resolved >= static_cast<long long>(vertex_count)) {
    throw ObjParseError(line, "face index " + std::to_string(idx) +
                                  " out of range");
  }
  return static_cast<VertexIndex>(resolved);
}

} // namespace

ObjData read_obj(std::istream &in) {
  ObjData data;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    std::istringstream ls(raw);
    std::string kind;
    if (!(ls >> kind)) {
      continue;
    }
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) {
      tokens.push_back(std::move(t));
    }
    if (kind == "v") {
      if (tokens.size() < 3) {
        throw ObjParseError(line_no, "vertex record needs 3 coordinates");
      }
      data.positions.push_back({parse_double(tokens[0], line_no),
                                parse_double(tokens[1], line_no),
                                parse_double(tokens[2], line_no)});
    } else if (kind == "f") {
      if (tokens.size() != 3) {
        throw ObjParseError(line_no, "face has " +
                                         std::to_string(tokens.size()) +
                                         " vertices; only triangles are "
                                         "supported");
      }
      std::array<VertexIndex, 3> tri{};
      for (int k = 0; k < 3; ++k) {
        tri[k] = parse_index(tokens[k], data.positions.size(), line_no);
      }
      data.triangles.push_back(tri);
    }
  }
  if (in.bad()) {
    throw std::ios_base::failure("read_obj: stream read failed");
  }
  return data;
}

Mesh mesh_from_obj(const ObjData &data) {
  std::vector<Vertex> vertices;
  vertices.reserve(data.positions.size());
  for (const Vec3 &p : data.positions) {
    vertices.push_back({p, {}, {}});
  }
  std::vector<Face> faces;
  faces.reserve(data.triangles.size());
  for (const auto &t : data.triangles) {
    faces.push_back({t});
  }
  return Mesh(std::move(vertices), std::move(faces));
}

} // namespace cellgrow
