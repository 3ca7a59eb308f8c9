#include "crof/io.hpp"

#include "crof/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace crof::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& why) {
  raise(ErrorCode::ParseError, path + ":" + std::to_string(line) + ": " + why);
}

template <class T>
bool to_number(std::string_view token, T& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write failed for '" + path + "'");
}

MeshData assemble(const std::vector<Eigen::Vector3d>& pts, const std::vector<Eigen::Vector3i>& tris) {
  MeshData data;
  data.vertices.resize(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) data.vertices.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  data.faces.resize(static_cast<Eigen::Index>(tris.size()), 3);
  for (std::size_t i = 0; i < tris.size(); ++i) data.faces.row(static_cast<Eigen::Index>(i)) = tris[i].transpose();
  return data;
}

void fan(const std::vector<int>& poly, std::vector<Eigen::Vector3i>& tris) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) tris.emplace_back(poly[0], poly[k], poly[k + 1]);
}

MeshData load_obj(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<Eigen::Vector3d> pts;
  std::vector<Eigen::Vector3i> tris;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string_view key = tok[0];
    if (key == "v") {
      if (tok.size() < 4) parse_fail(path, lineno, "vertex needs three coordinates");
      Eigen::Vector3d p;
      for (int c = 0; c < 3; ++c)
        if (!to_number(tok[c + 1], p[c])) parse_fail(path, lineno, "bad coordinate");
      pts.push_back(p);
    } else if (key == "f") {
      if (tok.size() < 4) parse_fail(path, lineno, "face needs at least three vertices");
      std::vector<int> poly;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        const std::string_view ref = tok[k].substr(0, tok[k].find('/'));
        long idx = 0;
        if (!to_number(ref, idx) || idx == 0) parse_fail(path, lineno, "bad vertex reference");
        const long resolved = idx > 0 ? idx - 1 : static_cast<long>(pts.size()) + idx;
        if (resolved < 0 || resolved >= static_cast<long>(pts.size()))
          parse_fail(path, lineno, "vertex reference out of range");
        poly.push_back(static_cast<int>(resolved));
      }
      fan(poly, tris);
    } else if (key == "l" || key == "p" || key == "curv" || key == "curv2" || key == "surf") {
      raise(ErrorCode::UnsupportedElement,
            path + ":" + std::to_string(lineno) + ": element '" + std::string(key) + "'");
    }
    // vt, vn, g, o, s, usemtl, mtllib and friends carry nothing we use.
  }
  return assemble(pts, tris);
}

// Tokens of a whitespace-separated stream with line tracking, skipping
// '#' comments.
class TokenReader {
 public:
  TokenReader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  bool next_line(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++lineno_;
      if (const auto hash = line_.find('#'); hash != std::string::npos) line_.erase(hash);
      tokens = split_ws(line_);
      if (!tokens.empty()) return true;
    }
    return false;
  }
  std::size_t line() const { return lineno_; }
  const std::string& path() const { return path_; }

 private:
  std::istream& in_;
  std::string path_;
  std::string line_;
  std::size_t lineno_ = 0;
};

MeshData load_off(const std::string& path) {
  std::ifstream in = open_input(path);
  TokenReader reader(in, path);
  std::vector<std::string_view> tok;
  if (!reader.next_line(tok)) parse_fail(path, reader.line(), "empty file");
  if (tok[0] != "OFF") parse_fail(path, reader.line(), "missing OFF header");
  std::vector<std::string_view> counts(tok.begin() + 1, tok.end());
  std::vector<std::string> owned;
  if (counts.empty()) {
    if (!reader.next_line(tok)) parse_fail(path, reader.line(), "missing counts");
    owned.assign(tok.begin(), tok.end());
    counts.assign(owned.begin(), owned.end());
  }
  long nv = 0, nf = 0;
  if (counts.size() < 2 || !to_number(counts[0], nv) || !to_number(counts[1], nf) || nv < 0 || nf < 0)
    parse_fail(path, reader.line(), "bad element counts");

  std::vector<Eigen::Vector3d> pts;
  std::vector<Eigen::Vector3i> tris;
  for (long i = 0; i < nv; ++i) {
    if (!reader.next_line(tok)) parse_fail(path, reader.line(), "fewer vertices than declared");
    Eigen::Vector3d p;
    if (tok.size() < 3) parse_fail(path, reader.line(), "vertex needs three coordinates");
    for (int c = 0; c < 3; ++c)
      if (!to_number(tok[c], p[c])) parse_fail(path, reader.line(), "bad coordinate");
    pts.push_back(p);
  }
  for (long i = 0; i < nf; ++i) {
    if (!reader.next_line(tok)) parse_fail(path, reader.line(), "fewer faces than declared");
    long k = 0;
    if (!to_number(tok[0], k) || k < 1 || static_cast<std::size_t>(k) + 1 > tok.size())
      parse_fail(path, reader.line(), "bad face record");
    if (k < 3) raise(ErrorCode::UnsupportedElement, path + ":" + std::to_string(reader.line()) + ": face with fewer than three vertices");
    std::vector<int> poly;
    for (long c = 1; c <= k; ++c) {
      long idx = 0;
      if (!to_number(tok[c], idx) || idx < 0 || idx >= nv)
        parse_fail(path, reader.line(), "vertex index out of range");
      poly.push_back(static_cast<int>(idx));
    }
    fan(poly, tris);
  }
  if (reader.next_line(tok)) parse_fail(path, reader.line(), "more records than declared");
  return assemble(pts, tris);
}

MeshData load_ply(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t lineno = 0;
  auto getline = [&]() {
    if (!std::getline(in, line)) parse_fail(path, lineno, "unexpected end of file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  getline();
  if (line != "ply") parse_fail(path, lineno, "missing 'ply' magic");

  struct Element {
    std::string name;
    long count = 0;
    std::vector<std::string> properties;
    std::vector<bool> is_list;
  };
  std::vector<Element> elements;
  bool ascii = false;
  for (;;) {
    getline();
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2) parse_fail(path, lineno, "bad format line");
      if (tok[1] != "ascii")
        raise(ErrorCode::UnsupportedElement, path + ": only ascii PLY is supported");
      ascii = true;
    } else if (tok[0] == "element") {
      Element el;
      if (tok.size() != 3 || !to_number(tok[2], el.count) || el.count < 0)
        parse_fail(path, lineno, "bad element line");
      el.name = std::string(tok[1]);
      elements.push_back(el);
    } else if (tok[0] == "property") {
      if (elements.empty()) parse_fail(path, lineno, "property before element");
      if (tok.size() >= 5 && tok[1] == "list") {
        elements.back().properties.emplace_back(tok[4]);
        elements.back().is_list.push_back(true);
      } else if (tok.size() == 3) {
        elements.back().properties.emplace_back(tok[2]);
        elements.back().is_list.push_back(false);
      } else {
        parse_fail(path, lineno, "bad property line");
      }
    } else {
      parse_fail(path, lineno, "unknown header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!ascii) parse_fail(path, lineno, "missing format line");

  std::vector<Eigen::Vector3d> pts;
  std::vector<Eigen::Vector3i> tris;
  for (const Element& el : elements) {
    int ix = -1, iy = -1, iz = -1, iface = -1;
    for (std::size_t p = 0; p < el.properties.size(); ++p) {
      const std::string& n = el.properties[p];
      if (n == "x") ix = static_cast<int>(p);
      if (n == "y") iy = static_cast<int>(p);
      if (n == "z") iz = static_cast<int>(p);
      if ((n == "vertex_indices" || n == "vertex_index") && el.is_list[p]) iface = static_cast<int>(p);
    }
    if (el.name == "vertex" && (ix < 0 || iy < 0 || iz < 0))
      parse_fail(path, lineno, "vertex element lacks x/y/z");
    if (el.name == "face" && iface < 0) parse_fail(path, lineno, "face element lacks vertex_indices");
    for (long r = 0; r < el.count; ++r) {
      getline();
      const auto tok = split_ws(line);
      std::size_t t = 0;
      std::vector<double> scalars(el.properties.size(), 0.0);
      std::vector<int> poly;
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        if (t >= tok.size()) parse_fail(path, lineno, "too few values");
        if (el.is_list[p]) {
          long k = 0;
          if (!to_number(tok[t++], k) || k < 0 || t + static_cast<std::size_t>(k) > tok.size())
            parse_fail(path, lineno, "bad list");
          for (long c = 0; c < k; ++c) {
            long idx = 0;
            if (!to_number(tok[t++], idx)) parse_fail(path, lineno, "bad list entry");
            if (static_cast<int>(p) == iface) poly.push_back(static_cast<int>(idx));
          }
        } else {
          if (!to_number(tok[t++], scalars[p])) parse_fail(path, lineno, "bad scalar");
        }
      }
      if (t != tok.size()) parse_fail(path, lineno, "too many values");
      if (el.name == "vertex") {
        pts.emplace_back(scalars[ix], scalars[iy], scalars[iz]);
      } else if (el.name == "face") {
        if (poly.size() < 3)
          raise(ErrorCode::UnsupportedElement, path + ":" + std::to_string(lineno) + ": face with fewer than three vertices");
        for (int idx : poly)
          if (idx < 0) parse_fail(path, lineno, "negative vertex index");
        fan(poly, tris);
      } else if (el.name == "edge" || el.name == "line") {
        raise(ErrorCode::UnsupportedElement, path + ": element '" + el.name + "'");
      }
    }
  }
  if (std::getline(in, line) && !split_ws(line).empty())
    parse_fail(path, lineno + 1, "data after the declared elements");
  for (const auto& t : tris)
    for (int c = 0; c < 3; ++c)
      if (t[c] >= static_cast<int>(pts.size())) raise(ErrorCode::ParseError, path + ": face index out of range");
  return assemble(pts, tris);
}

bool valid_column_name(const std::string& name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isspace(c) || c == ',' || c == '"' || std::iscntrl(c);
  });
}

std::string format_float(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(value),
                                 std::chars_format::general, 9);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

MeshFormat mesh_format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
  if (ext == "obj") return MeshFormat::Obj;
  if (ext == "off") return MeshFormat::Off;
  if (ext == "ply") return MeshFormat::Ply;
  raise(ErrorCode::UnsupportedElement, "unknown mesh extension for '" + path + "'");
}

MeshData load_mesh(const std::string& path, MeshFormat format) {
  switch (format) {
    case MeshFormat::Obj: return load_obj(path);
    case MeshFormat::Off: return load_off(path);
    case MeshFormat::Ply: return load_ply(path);
  }
  raise(ErrorCode::UnsupportedElement, "unknown mesh format");
}

MeshData load_mesh(const std::string& path) { return load_mesh(path, mesh_format_from_path(path)); }

TriMesh read_mesh(const std::string& path) {
  MeshData data = load_mesh(path);
  return TriMesh::build(std::move(data.vertices), std::move(data.faces));
}

FieldExport& FieldExport::add(std::string name, Eigen::VectorXd values) {
  if (!valid_column_name(name)) raise(ErrorCode::InvalidName, "invalid column name '" + name + "'");
  for (const auto& [existing, _] : columns_)
    if (existing == name) raise(ErrorCode::InvalidName, "duplicate column name '" + name + "'");
  if (values.size() != mesh_->vertex_count())
    raise(ErrorCode::DimensionMismatch, "column '" + name + "' has " + std::to_string(values.size()) +
                                            " values for " + std::to_string(mesh_->vertex_count()) + " vertices");
  columns_.emplace_back(std::move(name), std::move(values));
  return *this;
}

FieldExport& FieldExport::set_positions(Positions positions) {
  if (positions.rows() != mesh_->vertex_count())
    raise(ErrorCode::DimensionMismatch, "positions must have one row per vertex");
  positions_ = std::move(positions);
  return *this;
}

void save_field(const FieldExport& field, const std::string& path, FieldFormat format) {
  std::ofstream out = open_output(path);
  const Positions& P = field.positions();
  const auto& cols = field.columns();
  const int n = field.mesh().vertex_count();
  if (format == FieldFormat::Csv) {
    out << "index,x,y,z";
    for (const auto& [name, _] : cols) out << ',' << name;
    out << '\n';
    for (int v = 0; v < n; ++v) {
      out << v << ',' << format_double(P(v, 0)) << ',' << format_double(P(v, 1)) << ','
          << format_double(P(v, 2));
      for (const auto& [_, values] : cols) out << ',' << format_double(values[v]);
      out << '\n';
    }
  } else {
    const auto& F = field.mesh().faces();
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << n << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    for (const auto& [name, _] : cols) out << "property float " << name << "\n";
    out << "element face " << F.rows() << "\n";
    out << "property list uchar int vertex_indices\nend_header\n";
    for (int v = 0; v < n; ++v) {
      out << format_float(P(v, 0)) << ' ' << format_float(P(v, 1)) << ' ' << format_float(P(v, 2));
      for (const auto& [_, values] : cols) out << ' ' << format_float(values[v]);
      out << '\n';
    }
    for (Eigen::Index f = 0; f < F.rows(); ++f)
      out << "3 " << F(f, 0) << ' ' << F(f, 1) << ' ' << F(f, 2) << '\n';
  }
  finish(out, path);
}

Eigen::VectorXd CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) raise(ErrorCode::InvalidName, "no column '" + name + "'");
  const auto c = static_cast<std::size_t>(it - header.begin());
  Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) v[static_cast<Eigen::Index>(r)] = rows[r][c];
  return v;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (table.header.empty()) {
      for (auto c : cells) table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size()) parse_fail(path, lineno, "column count differs from header");
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!to_number(cells[c], row[c])) parse_fail(path, lineno, "bad number");
    table.rows.push_back(std::move(row));
  }
  return table;
}

void save_matrix(const Eigen::SparseMatrix<double>& matrix, const std::string& path) {
  Eigen::SparseMatrix<double> A = matrix;
  A.makeCompressed();
  bool symmetric = A.rows() == A.cols();
  if (symmetric) {
    const Eigen::SparseMatrix<double> At = A.transpose();
    const Eigen::SparseMatrix<double> diff = A - At;
    for (Eigen::Index k = 0; k < diff.outerSize() && symmetric; ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
        if (it.value() != 0.0) {
          symmetric = false;
          break;
        }
  }
  std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
  for (Eigen::Index k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      if (it.value() == 0.0) continue;
      if (symmetric && it.row() < it.col()) continue;
      entries.emplace_back(it.row(), it.col(), it.value());
    }
  std::ofstream out = open_output(path);
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  out << A.rows() << ' ' << A.cols() << ' ' << entries.size() << '\n';
  for (const auto& [r, c, v] : entries) out << r + 1 << ' ' << c + 1 << ' ' << format_double(v) << '\n';
  finish(out, path);
}

Eigen::SparseMatrix<double> load_matrix(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate real", 0) != 0)
    parse_fail(path, lineno, "not a real coordinate Matrix Market file");
  const bool symmetric = line.find("symmetric") != std::string::npos;
  long rows = -1, cols = -1, nnz = -1;
  std::vector<Eigen::Triplet<double>> trips;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    const auto tok = split_ws(line);
    if (rows < 0) {
      if (tok.size() != 3 || !to_number(tok[0], rows) || !to_number(tok[1], cols) || !to_number(tok[2], nnz))
        parse_fail(path, lineno, "bad size line");
      continue;
    }
    long r = 0, c = 0;
    double v = 0.0;
    if (tok.size() != 3 || !to_number(tok[0], r) || !to_number(tok[1], c) || !to_number(tok[2], v) ||
        r < 1 || c < 1 || r > rows || c > cols)
      parse_fail(path, lineno, "bad entry");
    trips.emplace_back(r - 1, c - 1, v);
    if (symmetric && r != c) trips.emplace_back(c - 1, r - 1, v);
  }
  if (rows < 0) parse_fail(path, lineno, "missing size line");
  Eigen::SparseMatrix<double> A(rows, cols);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

std::vector<std::pair<int, double>> read_constraints(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::pair<int, double>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    long v = 0;
    double value = 0.0;
    if (tok.size() != 2 || !to_number(tok[0], v) || !to_number(tok[1], value)) {
      if (out.empty() && lineno == 1) continue;  // header
      parse_fail(path, lineno, "expected '<vertex>,<value>'");
    }
    out.emplace_back(static_cast<int>(v), value);
  }
  return out;
}

}  // namespace crof::io
