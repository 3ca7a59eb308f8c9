#pragma once

#include "crof/mesh.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crof::io {

enum class MeshFormat { Obj, Off, Ply };
enum class FieldFormat { Csv, Ply };

struct MeshData {
  Positions vertices;
  Triangles faces;
};

// Picks the format from the file extension (case-insensitive). Throws
// UnsupportedElement for anything else.
MeshFormat mesh_format_from_path(const std::string& path);

// Reads positions and faces; polygons are fan-triangulated, texture and
// normal data are ignored. Throws IoError, ParseError (with the line
// number) or UnsupportedElement.
MeshData load_mesh(const std::string& path, MeshFormat format);
MeshData load_mesh(const std::string& path);

// load_mesh followed by TriMesh::build.
TriMesh read_mesh(const std::string& path);

// Named per-vertex columns attached to a mesh; `positions` overrides the
// mesh positions in the output (used for fairing results).
class FieldExport {
 public:
  explicit FieldExport(const TriMesh& mesh) : mesh_(&mesh) {}

  // Throws InvalidName for empty or duplicate names, DimensionMismatch when
  // the column length differs from the vertex count.
  FieldExport& add(std::string name, Eigen::VectorXd values);
  FieldExport& set_positions(Positions positions);

  const TriMesh& mesh() const { return *mesh_; }
  const std::vector<std::pair<std::string, Eigen::VectorXd>>& columns() const { return columns_; }
  const Positions& positions() const { return positions_ ? *positions_ : mesh_->vertices(); }

 private:
  const TriMesh* mesh_;
  std::vector<std::pair<std::string, Eigen::VectorXd>> columns_;
  std::optional<Positions> positions_;
};

void save_field(const FieldExport& field, const std::string& path, FieldFormat format);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Column by header name; throws InvalidName if absent.
  Eigen::VectorXd column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

// Matrix Market coordinate format; symmetric storage (lower triangle) when
// the matrix equals its transpose exactly.
void save_matrix(const Eigen::SparseMatrix<double>& matrix, const std::string& path);
Eigen::SparseMatrix<double> load_matrix(const std::string& path);

// Reads (vertex, value) pairs, one per line; a non-numeric first line is
// treated as a header.
std::vector<std::pair<int, double>> read_constraints(const std::string& path);

// Shortest round-trip-safe decimal text for a double, locale independent
// (17 significant digits).
std::string format_double(double value);

}  // namespace crof::io
