/* C interface to the curved Hessian energy library.
 *
 * All objects are opaque handles created by the library and released with
 * the matching *_destroy function. Every fallible call returns a
 * crof_status; on failure crof_last_error() describes the problem for the
 * calling thread until the next failing call. Arrays are caller-owned and
 * sized as documented per function. Vertex data is row-major (x, y, z).
 */
#ifndef CROF_CROF_H
#define CROF_CROF_H

#include <stddef.h>
#include <stdint.h>

#if defined(CROF_BUILDING_LIBRARY)
#define CROF_API __attribute__((visibility("default")))
#else
#define CROF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crof_status {
  CROF_OK = 0,
  CROF_INVALID_INDEX,
  CROF_NON_MANIFOLD_EDGE,
  CROF_NON_ORIENTABLE,
  CROF_DEGENERATE_FACE,
  CROF_PARSE_ERROR,
  CROF_UNSUPPORTED_ELEMENT,
  CROF_IO_ERROR,
  CROF_INVALID_NAME,
  CROF_INVALID_ARGUMENT,
  CROF_DIMENSION_MISMATCH,
  CROF_INSUFFICIENT_CONSTRAINTS,
  CROF_SOLVE_FAILURE,
  CROF_NO_CONVERGENCE,
  CROF_PROJECTION_DIVERGED,
  CROF_INTERNAL_ERROR
} crof_status;

typedef enum crof_energy_kind {
  CROF_CURVED_HESSIAN = 0,
  CROF_SQUARED_LAPLACIAN = 1
} crof_energy_kind;

/* Matrices that can be exported from an energy. The one-form matrices
 * (L, M, D, K) exist only for the curved Hessian, COTAN only for the
 * squared Laplacian. */
typedef enum crof_matrix {
  CROF_MATRIX_L = 0,
  CROF_MATRIX_M,
  CROF_MATRIX_D,
  CROF_MATRIX_K,
  CROF_MATRIX_B,
  CROF_MATRIX_Q,
  CROF_MATRIX_COTAN
} crof_matrix;

typedef enum crof_boundary_rule {
  CROF_BOUNDARY_FIXED = 0,
  CROF_BOUNDARY_SMOOTH_CURVE = 1
} crof_boundary_rule;

typedef enum crof_refinement {
  CROF_REFINE_LOOP = 0,
  CROF_REFINE_RANDOM_SPLIT = 1
} crof_refinement;

typedef struct crof_mesh crof_mesh;
typedef struct crof_energy crof_energy;
typedef struct crof_constraints crof_constraints;
typedef struct crof_record crof_record;

typedef struct crof_matrix_info {
  int rows;
  int cols;
  int64_t nonzeros;
  double symmetry_residual; /* max |A - A^T|, -1 for rectangular matrices */
} crof_matrix_info;

CROF_API const char* crof_last_error(void);
/* Canonical error name, e.g. "NonManifoldEdge"; "Ok" for CROF_OK. */
CROF_API const char* crof_status_name(crof_status status);
CROF_API crof_status crof_parse_energy_kind(const char* text, crof_energy_kind* out);
CROF_API const char* crof_energy_kind_name(crof_energy_kind kind);

/* Meshes */
CROF_API crof_status crof_mesh_load(const char* path, crof_mesh** out);
CROF_API crof_status crof_mesh_create(const double* vertices, int vertex_count, const int* faces,
                                      int face_count, crof_mesh** out);
CROF_API void crof_mesh_destroy(crof_mesh* mesh);
CROF_API int crof_mesh_vertex_count(const crof_mesh* mesh);
CROF_API int crof_mesh_face_count(const crof_mesh* mesh);
CROF_API int crof_mesh_edge_count(const crof_mesh* mesh);
CROF_API int crof_mesh_boundary_edge_count(const crof_mesh* mesh);
/* vertices: 3 * vertex_count, faces: 3 * face_count. */
CROF_API crof_status crof_mesh_vertices(const crof_mesh* mesh, double* vertices);
CROF_API crof_status crof_mesh_faces(const crof_mesh* mesh, int* faces);
/* defects and angle_sums: vertex_count each (either may be NULL). */
CROF_API crof_status crof_mesh_angle_defects(const crof_mesh* mesh, double* defects, double* angle_sums,
                                             double* total);
/* One Loop subdivision step, optionally followed by projection onto a
 * surface ("sphere:<r>", "ellipsoid:<a>,<b>,<c>", "monge:<poly>"; NULL for
 * none). */
CROF_API crof_status crof_mesh_refine(const crof_mesh* mesh, crof_boundary_rule rule, const char* surface,
                                      crof_mesh** out);
/* Writes named per-vertex columns (each vertex_count long) as CSV or ASCII
 * PLY, chosen from the file extension. positions may be NULL. */
CROF_API crof_status crof_save_field(const crof_mesh* mesh, const char* path, const double* positions,
                                     const char* const* names, const double* const* columns, int column_count);

/* Reads column `name` of a field CSV (header row, one row per vertex) into
 * values (count entries). */
CROF_API crof_status crof_load_field_column(const char* path, const char* name, double* values, int count);
/* Evaluates a polynomial in x, y (e.g. "1 + 2x - y") at every vertex. */
CROF_API crof_status crof_eval_polynomial(const crof_mesh* mesh, const char* polynomial, double* values);

/* Energies */
CROF_API crof_status crof_energy_build(const crof_mesh* mesh, crof_energy_kind kind, crof_energy** out);
CROF_API void crof_energy_destroy(crof_energy* energy);
CROF_API int crof_energy_size(const crof_energy* energy);
CROF_API crof_energy_kind crof_energy_get_kind(const crof_energy* energy);
/* max |Q| / max B */
CROF_API double crof_energy_scale(const crof_energy* energy);
/* 1/2 u^T Q u, u of length size. */
CROF_API crof_status crof_energy_value(const crof_energy* energy, const double* u, double* out);
/* out = Q u */
CROF_API crof_status crof_energy_apply(const crof_energy* energy, const double* u, double* out);
/* Writes the matrix in Matrix Market format. path may be NULL to query
 * info only. */
CROF_API crof_status crof_energy_save_matrix(const crof_energy* energy, crof_matrix which, const char* path,
                                             crof_matrix_info* info);

/* Constraints: (vertex, value) pairs */
CROF_API crof_status crof_constraints_load(const char* path, crof_constraints** out);
CROF_API crof_status crof_constraints_create(const int* vertices, const double* values, int count,
                                             crof_constraints** out);
CROF_API void crof_constraints_destroy(crof_constraints* constraints);
CROF_API int crof_constraints_count(const crof_constraints* constraints);
CROF_API crof_status crof_constraints_get(const crof_constraints* constraints, int i, int* vertex,
                                          double* value);

/* Solvers. Output vectors have length crof_energy_size(). */
CROF_API crof_status crof_interpolate(const crof_energy* energy, const crof_constraints* constraints,
                                      double* u);
CROF_API crof_status crof_smooth(const crof_energy* energy, const double* f, double alpha, double* u);
/* Result mesh in *out; defect_totals (steps + 1 entries, may be NULL)
 * receives the total angle defect before and after every step. */
CROF_API crof_status crof_fairing_flow(const crof_mesh* mesh, crof_energy_kind kind, double alpha, int steps,
                                       crof_mesh** out, double* defect_totals);
/* k smallest eigenpairs of Q x = mu B x. values: k; vectors: size * k,
 * column-major, B-orthonormal (may be NULL). */
CROF_API crof_status crof_smallest_eigs(const crof_energy* energy, int k, double* values, double* vectors);

/* Convergence studies */
CROF_API crof_status crof_study_forward(const char* surface, const char* function, int base_cells, int levels,
                                        crof_energy_kind kind, crof_record** out);
CROF_API crof_status crof_study_sphere(int first_level, int last_level, crof_energy_kind kind,
                                       crof_record** out);
/* Interpolation self-convergence from a coarse mesh; the last of `levels`
 * refinements is the reference. surface may be NULL. */
CROF_API crof_status crof_study_interpolation(const crof_mesh* base, const crof_constraints* constraints,
                                              int levels, crof_boundary_rule rule, crof_refinement strategy,
                                              const char* surface, crof_energy_kind kind, uint64_t seed,
                                              crof_record** out);
CROF_API void crof_record_destroy(crof_record* record);
CROF_API int crof_record_level_count(const crof_record* record);
CROF_API crof_status crof_record_level(const crof_record* record, int i, int* level, int* vertices, double* h,
                                       double* error);
CROF_API double crof_record_slope(const crof_record* record);
CROF_API double crof_record_reference(const crof_record* record);
CROF_API double crof_record_reference_agreement(const crof_record* record);
CROF_API int crof_record_monotone(const crof_record* record);
CROF_API const char* crof_record_description(const crof_record* record);
CROF_API crof_status crof_record_save_csv(const crof_record* record, const char* path);

#ifdef __cplusplus
}
#endif

#endif
