#pragma once

#include "crof/mesh.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace crof::test {

inline std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(CROF_TEST_TMP);
  return (std::filesystem::path(CROF_TEST_TMP) / name).string();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_obj(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.precision(17);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    out << "v " << mesh.vertices()(v, 0) << ' ' << mesh.vertices()(v, 1) << ' ' << mesh.vertices()(v, 2) << '\n';
  for (int f = 0; f < mesh.face_count(); ++f)
    out << "f " << mesh.faces()(f, 0) + 1 << ' ' << mesh.faces()(f, 1) + 1 << ' ' << mesh.faces()(f, 2) + 1 << '\n';
}

}  // namespace crof::test
