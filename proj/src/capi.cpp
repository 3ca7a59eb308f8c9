#include "crof/crof.h"

#include "crof/convergence.hpp"
#include "crof/curvature.hpp"
#include "crof/energy.hpp"
#include "crof/error.hpp"
#include "crof/io.hpp"
#include "crof/solvers.hpp"
#include "crof/subdivision.hpp"
#include "crof/surface.hpp"

#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>

struct crof_mesh {
  crof::TriMesh mesh;
};

struct crof_energy {
  crof::EnergyOperator op;
};

struct crof_constraints {
  crof::Constraints constraints;
};

struct crof_record {
  crof::ConvergenceRecord record;
  std::string description;
};

namespace {

thread_local std::string last_error;

crof_status status_of(crof::ErrorCode code) {
  using crof::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidIndex: return CROF_INVALID_INDEX;
    case ErrorCode::NonManifoldEdge: return CROF_NON_MANIFOLD_EDGE;
    case ErrorCode::NonOrientable: return CROF_NON_ORIENTABLE;
    case ErrorCode::DegenerateFace: return CROF_DEGENERATE_FACE;
    case ErrorCode::ParseError: return CROF_PARSE_ERROR;
    case ErrorCode::UnsupportedElement: return CROF_UNSUPPORTED_ELEMENT;
    case ErrorCode::IoError: return CROF_IO_ERROR;
    case ErrorCode::InvalidName: return CROF_INVALID_NAME;
    case ErrorCode::InvalidArgument: return CROF_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return CROF_DIMENSION_MISMATCH;
    case ErrorCode::InsufficientConstraints: return CROF_INSUFFICIENT_CONSTRAINTS;
    case ErrorCode::SolveFailure: return CROF_SOLVE_FAILURE;
    case ErrorCode::NoConvergence: return CROF_NO_CONVERGENCE;
    case ErrorCode::ProjectionDiverged: return CROF_PROJECTION_DIVERGED;
  }
  return CROF_INTERNAL_ERROR;
}

crof_status fail(crof_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
crof_status guarded(F&& body) {
  try {
    body();
    return CROF_OK;
  } catch (const crof::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CROF_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(CROF_INTERNAL_ERROR, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) crof::raise(crof::ErrorCode::InvalidArgument, what);
}

crof::EnergyKind kind_of(crof_energy_kind kind) {
  switch (kind) {
    case CROF_CURVED_HESSIAN: return crof::EnergyKind::CurvedHessian;
    case CROF_SQUARED_LAPLACIAN: return crof::EnergyKind::SquaredLaplacian;
  }
  crof::raise(crof::ErrorCode::InvalidArgument, "unknown energy kind");
}

crof::BoundaryRule rule_of(crof_boundary_rule rule) {
  switch (rule) {
    case CROF_BOUNDARY_FIXED: return crof::BoundaryRule::Fixed;
    case CROF_BOUNDARY_SMOOTH_CURVE: return crof::BoundaryRule::SmoothBoundaryCurve;
  }
  crof::raise(crof::ErrorCode::InvalidArgument, "unknown boundary rule");
}

std::optional<crof::SmoothSurface> surface_of(const char* spec) {
  if (spec == nullptr || *spec == '\0') return std::nullopt;
  return crof::SmoothSurface::parse(spec);
}

Eigen::Map<const Eigen::VectorXd> vector_view(const double* data, int n) {
  return Eigen::Map<const Eigen::VectorXd>(data, n);
}

crof_record* wrap(crof::ConvergenceRecord record) {
  auto* out = new crof_record{std::move(record), {}};
  out->description = out->record.problem + " | " + out->record.error_kind + " | " + out->record.strategy;
  return out;
}

}  // namespace

extern "C" {

const char* crof_last_error(void) { return last_error.c_str(); }

const char* crof_status_name(crof_status status) {
  switch (status) {
    case CROF_OK: return "Ok";
    case CROF_INVALID_INDEX: return "InvalidIndex";
    case CROF_NON_MANIFOLD_EDGE: return "NonManifoldEdge";
    case CROF_NON_ORIENTABLE: return "NonOrientable";
    case CROF_DEGENERATE_FACE: return "DegenerateFace";
    case CROF_PARSE_ERROR: return "ParseError";
    case CROF_UNSUPPORTED_ELEMENT: return "UnsupportedElement";
    case CROF_IO_ERROR: return "IoError";
    case CROF_INVALID_NAME: return "InvalidName";
    case CROF_INVALID_ARGUMENT: return "InvalidArgument";
    case CROF_DIMENSION_MISMATCH: return "DimensionMismatch";
    case CROF_INSUFFICIENT_CONSTRAINTS: return "InsufficientConstraints";
    case CROF_SOLVE_FAILURE: return "SolveFailure";
    case CROF_NO_CONVERGENCE: return "NoConvergence";
    case CROF_PROJECTION_DIVERGED: return "ProjectionDiverged";
    case CROF_INTERNAL_ERROR: return "InternalError";
  }
  return "Unknown";
}

crof_status crof_parse_energy_kind(const char* text, crof_energy_kind* out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = crof::parse_energy_kind(text) == crof::EnergyKind::CurvedHessian ? CROF_CURVED_HESSIAN
                                                                            : CROF_SQUARED_LAPLACIAN;
  });
}

const char* crof_energy_kind_name(crof_energy_kind kind) {
  return kind == CROF_SQUARED_LAPLACIAN ? "squared-laplacian" : "curved-hessian";
}

crof_status crof_mesh_load(const char* path, crof_mesh** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new crof_mesh{crof::io::read_mesh(path)};
  });
}

crof_status crof_mesh_create(const double* vertices, int vertex_count, const int* faces, int face_count,
                             crof_mesh** out) {
  return guarded([&] {
    require(vertices != nullptr && faces != nullptr && out != nullptr, "null argument");
    require(vertex_count > 0 && face_count > 0, "empty mesh");
    crof::Positions V = Eigen::Map<const crof::Positions>(vertices, vertex_count, 3);
    crof::Triangles F = Eigen::Map<const crof::Triangles>(faces, face_count, 3);
    *out = new crof_mesh{crof::TriMesh::build(std::move(V), std::move(F))};
  });
}

void crof_mesh_destroy(crof_mesh* mesh) { delete mesh; }

int crof_mesh_vertex_count(const crof_mesh* mesh) { return mesh ? mesh->mesh.vertex_count() : 0; }
int crof_mesh_face_count(const crof_mesh* mesh) { return mesh ? mesh->mesh.face_count() : 0; }
int crof_mesh_edge_count(const crof_mesh* mesh) { return mesh ? mesh->mesh.edge_count() : 0; }
int crof_mesh_boundary_edge_count(const crof_mesh* mesh) { return mesh ? mesh->mesh.boundary_edge_count() : 0; }

crof_status crof_mesh_vertices(const crof_mesh* mesh, double* vertices) {
  return guarded([&] {
    require(mesh != nullptr && vertices != nullptr, "null argument");
    Eigen::Map<crof::Positions>(vertices, mesh->mesh.vertex_count(), 3) = mesh->mesh.vertices();
  });
}

crof_status crof_mesh_faces(const crof_mesh* mesh, int* faces) {
  return guarded([&] {
    require(mesh != nullptr && faces != nullptr, "null argument");
    Eigen::Map<crof::Triangles>(faces, mesh->mesh.face_count(), 3) = mesh->mesh.faces();
  });
}

crof_status crof_mesh_angle_defects(const crof_mesh* mesh, double* defects, double* angle_sums, double* total) {
  return guarded([&] {
    require(mesh != nullptr, "null mesh");
    const crof::AngleDefects d = crof::angle_defects(mesh->mesh, crof::geometry(mesh->mesh));
    const int n = mesh->mesh.vertex_count();
    if (defects) Eigen::Map<Eigen::VectorXd>(defects, n) = d.defects;
    if (angle_sums) Eigen::Map<Eigen::VectorXd>(angle_sums, n) = d.angle_sums;
    if (total) *total = d.total();
  });
}

crof_status crof_mesh_refine(const crof_mesh* mesh, crof_boundary_rule rule, const char* surface, crof_mesh** out) {
  return guarded([&] {
    require(mesh != nullptr && out != nullptr, "null argument");
    const auto target = surface_of(surface);
    crof::TriMesh fine = crof::loop_subdivide(mesh->mesh, rule_of(rule)).mesh;
    if (target) fine = crof::project_to_surface(fine, *target);
    *out = new crof_mesh{std::move(fine)};
  });
}

crof_status crof_save_field(const crof_mesh* mesh, const char* path, const double* positions,
                            const char* const* names, const double* const* columns, int column_count) {
  return guarded([&] {
    require(mesh != nullptr && path != nullptr, "null argument");
    require(column_count >= 0 && (column_count == 0 || (names != nullptr && columns != nullptr)),
            "bad column arguments");
    const int n = mesh->mesh.vertex_count();
    crof::io::FieldExport field(mesh->mesh);
    for (int c = 0; c < column_count; ++c) {
      require(names[c] != nullptr && columns[c] != nullptr, "null column");
      field.add(names[c], vector_view(columns[c], n));
    }
    if (positions) field.set_positions(Eigen::Map<const crof::Positions>(positions, n, 3));
    std::string ext = std::filesystem::path(path).extension().string();
    for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    crof::io::FieldFormat format;
    if (ext == ".csv")
      format = crof::io::FieldFormat::Csv;
    else if (ext == ".ply")
      format = crof::io::FieldFormat::Ply;
    else
      crof::raise(crof::ErrorCode::UnsupportedElement, "field output must be .csv or .ply: '" + std::string(path) + "'");
    crof::io::save_field(field, path, format);
  });
}

crof_status crof_load_field_column(const char* path, const char* name, double* values, int count) {
  return guarded([&] {
    require(path != nullptr && name != nullptr && values != nullptr, "null argument");
    const Eigen::VectorXd column = crof::io::read_csv(path).column(name);
    if (column.size() != count)
      crof::raise(crof::ErrorCode::DimensionMismatch, "column '" + std::string(name) + "' has " +
                                                          std::to_string(column.size()) + " rows, expected " +
                                                          std::to_string(count));
    Eigen::Map<Eigen::VectorXd>(values, count) = column;
  });
}

crof_status crof_eval_polynomial(const crof_mesh* mesh, const char* polynomial, double* values) {
  return guarded([&] {
    require(mesh != nullptr && polynomial != nullptr && values != nullptr, "null argument");
    const crof::Polynomial2 p = crof::Polynomial2::parse(polynomial);
    const auto& V = mesh->mesh.vertices();
    for (Eigen::Index v = 0; v < V.rows(); ++v) values[v] = p(V(v, 0), V(v, 1));
  });
}

crof_status crof_energy_build(const crof_mesh* mesh, crof_energy_kind kind, crof_energy** out) {
  return guarded([&] {
    require(mesh != nullptr && out != nullptr, "null argument");
    *out = new crof_energy{crof::build_energy(mesh->mesh, kind_of(kind))};
  });
}

void crof_energy_destroy(crof_energy* energy) { delete energy; }

int crof_energy_size(const crof_energy* energy) { return energy ? energy->op.size() : 0; }

crof_energy_kind crof_energy_get_kind(const crof_energy* energy) {
  return energy && energy->op.kind() == crof::EnergyKind::SquaredLaplacian ? CROF_SQUARED_LAPLACIAN
                                                                            : CROF_CURVED_HESSIAN;
}

double crof_energy_scale(const crof_energy* energy) { return energy ? energy->op.scale() : 0.0; }

crof_status crof_energy_value(const crof_energy* energy, const double* u, double* out) {
  return guarded([&] {
    require(energy != nullptr && u != nullptr && out != nullptr, "null argument");
    *out = crof::energy_value(energy->op, vector_view(u, energy->op.size()));
  });
}

crof_status crof_energy_apply(const crof_energy* energy, const double* u, double* out) {
  return guarded([&] {
    require(energy != nullptr && u != nullptr && out != nullptr, "null argument");
    const int n = energy->op.size();
    Eigen::Map<Eigen::VectorXd>(out, n) = energy->op.Q() * vector_view(u, n);
  });
}

crof_status crof_energy_save_matrix(const crof_energy* energy, crof_matrix which, const char* path,
                                    crof_matrix_info* info) {
  return guarded([&] {
    require(energy != nullptr, "null energy");
    const auto& c = energy->op.components();
    const crof::SparseMatrix* A = nullptr;
    switch (which) {
      case CROF_MATRIX_L: A = &c.L; break;
      case CROF_MATRIX_M: A = &c.M; break;
      case CROF_MATRIX_D: A = &c.D; break;
      case CROF_MATRIX_K: A = &c.K; break;
      case CROF_MATRIX_B: A = &energy->op.B(); break;
      case CROF_MATRIX_Q: A = &energy->op.Q(); break;
      case CROF_MATRIX_COTAN: A = &c.cotan; break;
    }
    require(A != nullptr, "unknown matrix");
    require(A->rows() > 0, "matrix is not part of this energy");
    if (path) crof::io::save_matrix(*A, path);
    if (info) {
      info->rows = static_cast<int>(A->rows());
      info->cols = static_cast<int>(A->cols());
      info->nonzeros = static_cast<int64_t>(A->nonZeros());
      info->symmetry_residual = A->rows() == A->cols() ? crof::symmetry_residual(*A) : -1.0;
    }
  });
}

crof_status crof_constraints_load(const char* path, crof_constraints** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new crof_constraints{crof::Constraints(crof::io::read_constraints(path))};
  });
}

crof_status crof_constraints_create(const int* vertices, const double* values, int count, crof_constraints** out) {
  return guarded([&] {
    require(out != nullptr && count >= 0, "bad argument");
    require(count == 0 || (vertices != nullptr && values != nullptr), "null argument");
    crof::Constraints c;
    for (int i = 0; i < count; ++i) c.add(vertices[i], values[i]);
    *out = new crof_constraints{std::move(c)};
  });
}

void crof_constraints_destroy(crof_constraints* constraints) { delete constraints; }

int crof_constraints_count(const crof_constraints* constraints) {
  return constraints ? static_cast<int>(constraints->constraints.size()) : 0;
}

crof_status crof_constraints_get(const crof_constraints* constraints, int i, int* vertex, double* value) {
  return guarded([&] {
    require(constraints != nullptr, "null constraints");
    const auto& e = constraints->constraints.entries();
    if (i < 0 || i >= static_cast<int>(e.size()))
      crof::raise(crof::ErrorCode::InvalidIndex, "constraint index " + std::to_string(i) + " out of range");
    if (vertex) *vertex = e[static_cast<std::size_t>(i)].first;
    if (value) *value = e[static_cast<std::size_t>(i)].second;
  });
}

crof_status crof_interpolate(const crof_energy* energy, const crof_constraints* constraints, double* u) {
  return guarded([&] {
    require(energy != nullptr && constraints != nullptr && u != nullptr, "null argument");
    Eigen::Map<Eigen::VectorXd>(u, energy->op.size()) = crof::min_with_fixed(energy->op, constraints->constraints);
  });
}

crof_status crof_smooth(const crof_energy* energy, const double* f, double alpha, double* u) {
  return guarded([&] {
    require(energy != nullptr && f != nullptr && u != nullptr, "null argument");
    const int n = energy->op.size();
    Eigen::Map<Eigen::VectorXd>(u, n) = crof::smooth(energy->op, vector_view(f, n), alpha);
  });
}

crof_status crof_fairing_flow(const crof_mesh* mesh, crof_energy_kind kind, double alpha, int steps,
                              crof_mesh** out, double* defect_totals) {
  return guarded([&] {
    require(mesh != nullptr && out != nullptr, "null argument");
    crof::FlowResult result = crof::fairing_flow(mesh->mesh, kind_of(kind), alpha, steps);
    if (defect_totals)
      for (std::size_t i = 0; i < result.defects.size(); ++i) defect_totals[i] = result.defects[i].sum();
    *out = new crof_mesh{std::move(result.mesh)};
  });
}

crof_status crof_smallest_eigs(const crof_energy* energy, int k, double* values, double* vectors) {
  return guarded([&] {
    require(energy != nullptr && values != nullptr, "null argument");
    const crof::EigenResult r = crof::smallest_eigs(energy->op, k);
    Eigen::Map<Eigen::VectorXd>(values, k) = r.values;
    if (vectors) Eigen::Map<Eigen::MatrixXd>(vectors, energy->op.size(), k) = r.vectors;
  });
}

crof_status crof_study_forward(const char* surface, const char* function, int base_cells, int levels,
                               crof_energy_kind kind, crof_record** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    crof::ForwardProblem problem;
    if (const auto s = surface_of(surface)) problem.surface = *s;
    if (function && *function) problem.f = crof::Polynomial2::parse(function);
    if (base_cells > 0) problem.base_cells = base_cells;
    if (levels > 0) problem.levels = levels;
    problem.energy = kind_of(kind);
    *out = wrap(crof::forward_energy_study(problem));
  });
}

crof_status crof_study_sphere(int first_level, int last_level, crof_energy_kind kind, crof_record** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    require(first_level >= 0 && last_level > first_level, "need first_level < last_level");
    crof::SphereEigenProblem problem;
    problem.first_level = first_level;
    problem.last_level = last_level;
    problem.energy = kind_of(kind);
    *out = wrap(crof::sphere_eigenvalue_study(problem));
  });
}

crof_status crof_study_interpolation(const crof_mesh* base, const crof_constraints* constraints, int levels,
                                     crof_boundary_rule rule, crof_refinement strategy, const char* surface,
                                     crof_energy_kind kind, uint64_t seed, crof_record** out) {
  return guarded([&] {
    require(base != nullptr && constraints != nullptr && out != nullptr, "null argument");
    require(strategy == CROF_REFINE_LOOP || strategy == CROF_REFINE_RANDOM_SPLIT, "unknown refinement");
    const crof::SelfConvergenceProblem problem{
        base->mesh,
        constraints->constraints,
        levels,
        rule_of(rule),
        strategy == CROF_REFINE_LOOP ? crof::RefinementStrategy::Loop : crof::RefinementStrategy::RandomSplit,
        surface_of(surface),
        kind_of(kind),
        seed,
    };
    *out = wrap(crof::self_convergence_study(problem));
  });
}

void crof_record_destroy(crof_record* record) { delete record; }

int crof_record_level_count(const crof_record* record) {
  return record ? static_cast<int>(record->record.levels.size()) : 0;
}

crof_status crof_record_level(const crof_record* record, int i, int* level, int* vertices, double* h,
                              double* error) {
  return guarded([&] {
    require(record != nullptr, "null record");
    if (i < 0 || i >= crof_record_level_count(record))
      crof::raise(crof::ErrorCode::InvalidIndex, "level " + std::to_string(i) + " out of range");
    const auto& l = record->record.levels[static_cast<std::size_t>(i)];
    if (level) *level = l.level;
    if (vertices) *vertices = l.vertices;
    if (h) *h = l.h;
    if (error) *error = l.error;
  });
}

double crof_record_slope(const crof_record* record) { return record ? record->record.slope : 0.0; }
double crof_record_reference(const crof_record* record) { return record ? record->record.reference : 0.0; }
double crof_record_reference_agreement(const crof_record* record) {
  return record ? record->record.reference_agreement : 0.0;
}
int crof_record_monotone(const crof_record* record) { return record && record->record.monotone_decreasing(); }
const char* crof_record_description(const crof_record* record) {
  return record ? record->description.c_str() : "";
}

crof_status crof_record_save_csv(const crof_record* record, const char* path) {
  return guarded([&] {
    require(record != nullptr && path != nullptr, "null argument");
    crof::save_convergence_csv(record->record, path);
  });
}

}  // extern "C"
