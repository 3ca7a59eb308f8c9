// crof: command-line front end over the C API.
#include "crof/crof.h"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConstraint = 2;
constexpr int kExitSolver = 3;

struct Failure {
  crof_status status;
  std::string message;
};

int exit_code_for(crof_status status) {
  switch (status) {
    case CROF_OK: return kExitOk;
    case CROF_INSUFFICIENT_CONSTRAINTS: return kExitConstraint;
    case CROF_NO_CONVERGENCE:
    case CROF_SOLVE_FAILURE:
    case CROF_PROJECTION_DIVERGED: return kExitSolver;
    default: return kExitInput;
  }
}

// Library messages already start with the error name.
void check(crof_status status, const std::string& context) {
  if (status != CROF_OK) throw Failure{status, context + ": " + crof_last_error()};
}

[[noreturn]] void fail(crof_status status, const std::string& what) {
  throw Failure{status, std::string(crof_status_name(status)) + ": " + what};
}

struct MeshDeleter {
  void operator()(crof_mesh* m) const { crof_mesh_destroy(m); }
};
struct EnergyDeleter {
  void operator()(crof_energy* e) const { crof_energy_destroy(e); }
};
struct ConstraintsDeleter {
  void operator()(crof_constraints* c) const { crof_constraints_destroy(c); }
};
struct RecordDeleter {
  void operator()(crof_record* r) const { crof_record_destroy(r); }
};
using MeshPtr = std::unique_ptr<crof_mesh, MeshDeleter>;
using EnergyPtr = std::unique_ptr<crof_energy, EnergyDeleter>;
using ConstraintsPtr = std::unique_ptr<crof_constraints, ConstraintsDeleter>;
using RecordPtr = std::unique_ptr<crof_record, RecordDeleter>;

MeshPtr load_mesh(const std::string& path) {
  crof_mesh* m = nullptr;
  check(crof_mesh_load(path.c_str(), &m), "loading mesh '" + path + "'");
  return MeshPtr(m);
}

crof_energy_kind energy_kind(const std::string& name) {
  crof_energy_kind kind{};
  check(crof_parse_energy_kind(name.c_str(), &kind), "--energy");
  return kind;
}

EnergyPtr build_energy(const crof_mesh* mesh, crof_energy_kind kind) {
  crof_energy* e = nullptr;
  check(crof_energy_build(mesh, kind, &e), std::string("assembling ") + crof_energy_kind_name(kind));
  return EnergyPtr(e);
}

ConstraintsPtr load_constraints(const std::string& path) {
  crof_constraints* c = nullptr;
  check(crof_constraints_load(path.c_str(), &c), "reading constraints '" + path + "'");
  return ConstraintsPtr(c);
}

std::vector<double> vertices_of(const crof_mesh* mesh) {
  std::vector<double> v(3 * static_cast<std::size_t>(crof_mesh_vertex_count(mesh)));
  check(crof_mesh_vertices(mesh, v.data()), "reading vertices");
  return v;
}

// Writes <prefix>.csv and <prefix>.ply.
void save_field_pair(const crof_mesh* mesh, const std::string& prefix, const double* positions,
                     const std::vector<std::pair<std::string, const std::vector<double>*>>& columns) {
  std::vector<const char*> names;
  std::vector<const double*> data;
  for (const auto& [name, values] : columns) {
    names.push_back(name.c_str());
    data.push_back(values->data());
  }
  if (const fs::path parent = fs::path(prefix).parent_path(); !parent.empty()) fs::create_directories(parent);
  for (const char* ext : {".csv", ".ply"}) {
    const std::string path = prefix + ext;
    check(crof_save_field(mesh, path.c_str(), positions, names.data(), data.data(), static_cast<int>(names.size())),
          "writing '" + path + "'");
    std::printf("wrote %s\n", path.c_str());
  }
}

std::string strip_extension(const std::string& path) {
  const fs::path p(path);
  const std::string ext = p.extension().string();
  return ext == ".csv" || ext == ".ply" ? (p.parent_path() / p.stem()).string() : path;
}

// Least-squares affine fit a + b x + c y of the constraint values.
bool affine_fit(const crof_constraints* constraints, const std::vector<double>& xyz, std::array<double, 3>& coef) {
  double A[3][3] = {}, r[3] = {};
  const int n = crof_constraints_count(constraints);
  for (int i = 0; i < n; ++i) {
    int v = 0;
    double value = 0.0;
    check(crof_constraints_get(constraints, i, &v, &value), "constraints");
    const double phi[3] = {1.0, xyz[3 * v], xyz[3 * v + 1]};
    for (int a = 0; a < 3; ++a) {
      r[a] += phi[a] * value;
      for (int b = 0; b < 3; ++b) A[a][b] += phi[a] * phi[b];
    }
  }
  const auto det3 = [](const double M[3][3]) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  const double det = det3(A);
  if (std::abs(det) < 1e-14) return false;
  for (int k = 0; k < 3; ++k) {
    double Ak[3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) Ak[a][b] = b == k ? r[a] : A[a][b];
    coef[static_cast<std::size_t>(k)] = det3(Ak) / det;
  }
  return true;
}

struct Options {
  std::string mesh;
  std::string energy = "curved-hessian";
  std::string out;
  std::string out_dir;
  std::string constraints;
  std::string input;
  std::string column = "u";
  std::string function;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double alpha = 1.0;
  int steps = 1;
  int k = 6;
  std::string problem = "forward";
  std::string surface;
  int levels = 4;
  int base_cells = 4;
  int first_level = 2;
  int last_level = 5;
  std::string boundary = "fixed";
  std::string strategy = "loop";
};

int cmd_assemble(const Options& o) {
  const MeshPtr mesh = load_mesh(o.mesh);
  const crof_energy_kind kind = energy_kind(o.energy);
  const EnergyPtr energy = build_energy(mesh.get(), kind);
  fs::create_directories(o.out_dir);
  std::vector<std::pair<const char*, crof_matrix>> outputs;
  if (kind == CROF_CURVED_HESSIAN)
    outputs = {{"L", CROF_MATRIX_L}, {"M", CROF_MATRIX_M}, {"D", CROF_MATRIX_D},
               {"K", CROF_MATRIX_K}, {"B", CROF_MATRIX_B}, {"Q", CROF_MATRIX_Q}};
  else
    outputs = {{"cotan", CROF_MATRIX_COTAN}, {"B", CROF_MATRIX_B}, {"Q", CROF_MATRIX_Q}};
  std::printf("mesh: %d vertices, %d edges, %d faces\n", crof_mesh_vertex_count(mesh.get()),
              crof_mesh_edge_count(mesh.get()), crof_mesh_face_count(mesh.get()));
  std::printf("energy: %s\n", crof_energy_kind_name(kind));
  for (const auto& [name, which] : outputs) {
    const std::string path = (fs::path(o.out_dir) / (std::string(name) + ".mtx")).string();
    crof_matrix_info info{};
    check(crof_energy_save_matrix(energy.get(), which, path.c_str(), &info), "writing '" + path + "'");
    if (info.symmetry_residual >= 0.0)
      std::printf("%-5s %d x %d  nnz %lld  symmetry residual %.3e  -> %s\n", name, info.rows, info.cols,
                  static_cast<long long>(info.nonzeros), info.symmetry_residual, path.c_str());
    else
      std::printf("%-5s %d x %d  nnz %lld  -> %s\n", name, info.rows, info.cols,
                  static_cast<long long>(info.nonzeros), path.c_str());
  }
  return kExitOk;
}

int cmd_interpolate(const Options& o) {
  const MeshPtr mesh = load_mesh(o.mesh);
  const crof_energy_kind kind = energy_kind(o.energy);
  const ConstraintsPtr constraints = load_constraints(o.constraints);
  const EnergyPtr energy = build_energy(mesh.get(), kind);
  std::vector<double> u(static_cast<std::size_t>(crof_energy_size(energy.get())));
  check(crof_interpolate(energy.get(), constraints.get(), u.data()), "interpolating");
  double value = 0.0;
  check(crof_energy_value(energy.get(), u.data(), &value), "energy");
  std::printf("energy: %s\nconstraints: %d\nenergy value: %.17g\n", crof_energy_kind_name(kind),
              crof_constraints_count(constraints.get()), value);

  const std::vector<double> xyz = vertices_of(mesh.get());
  bool planar = true;
  for (std::size_t v = 0; v < u.size(); ++v) planar = planar && xyz[3 * v + 2] == 0.0;
  std::array<double, 3> coef{};
  if (planar && affine_fit(constraints.get(), xyz, coef)) {
    double dev = 0.0;
    for (std::size_t v = 0; v < u.size(); ++v)
      dev = std::max(dev, std::abs(u[v] - (coef[0] + coef[1] * xyz[3 * v] + coef[2] * xyz[3 * v + 1])));
    std::printf("max deviation from affine fit of constraints: %.3e\n", dev);
  }
  save_field_pair(mesh.get(), strip_extension(o.out), nullptr, {{"u", &u}});
  return kExitOk;
}

int cmd_smooth(const Options& o) {
  const MeshPtr mesh = load_mesh(o.mesh);
  const crof_energy_kind kind = energy_kind(o.energy);
  const int n = crof_mesh_vertex_count(mesh.get());
  std::vector<double> f(static_cast<std::size_t>(n));
  if (!o.input.empty())
    check(crof_load_field_column(o.input.c_str(), o.column.c_str(), f.data(), n), "reading '" + o.input + "'");
  else if (!o.function.empty())
    check(crof_eval_polynomial(mesh.get(), o.function.c_str(), f.data()), "--function");
  else
    fail(CROF_INVALID_ARGUMENT, "smooth needs --input or --function");
  if (o.noise > 0.0) {
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss(0.0, o.noise);
    for (double& x : f) x += gauss(rng);
  }
  const EnergyPtr energy = build_energy(mesh.get(), kind);
  std::vector<double> u(f.size());
  check(crof_smooth(energy.get(), f.data(), o.alpha, u.data()), "smoothing");
  double diff = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) diff = std::max(diff, std::abs(u[i] - f[i]));
  double ef = 0.0, eu = 0.0;
  check(crof_energy_value(energy.get(), f.data(), &ef), "energy");
  check(crof_energy_value(energy.get(), u.data(), &eu), "energy");
  std::printf("energy: %s\nalpha: %.17g\nenergy of input: %.17g\nenergy of output: %.17g\n",
              crof_energy_kind_name(kind), o.alpha, ef, eu);
  std::printf("max |output - input|: %.3e\n", diff);
  save_field_pair(mesh.get(), strip_extension(o.out), nullptr, {{"input", &f}, {"u", &u}});
  return kExitOk;
}

int cmd_flow(const Options& o) {
  const MeshPtr mesh = load_mesh(o.mesh);
  const crof_energy_kind kind = energy_kind(o.energy);
  if (o.steps < 1) fail(CROF_INVALID_ARGUMENT, "--steps must be at least 1");
  std::vector<double> totals(static_cast<std::size_t>(o.steps) + 1);
  crof_mesh* result = nullptr;
  check(crof_fairing_flow(mesh.get(), kind, o.alpha, o.steps, &result, totals.data()), "fairing flow");
  const MeshPtr faired(result);
  std::printf("energy: %s\nalpha: %.17g\nstep,total_angle_defect\n", crof_energy_kind_name(kind), o.alpha);
  for (std::size_t i = 0; i < totals.size(); ++i) std::printf("%zu,%.17g\n", i, totals[i]);
  const int n = crof_mesh_vertex_count(faired.get());
  std::vector<double> defects(static_cast<std::size_t>(n));
  check(crof_mesh_angle_defects(faired.get(), defects.data(), nullptr, nullptr), "angle defects");
  save_field_pair(faired.get(), strip_extension(o.out), nullptr, {{"angle_defect", &defects}});
  return kExitOk;
}

int cmd_eigs(const Options& o) {
  const MeshPtr mesh = load_mesh(o.mesh);
  const crof_energy_kind kind = energy_kind(o.energy);
  const EnergyPtr energy = build_energy(mesh.get(), kind);
  const int n = crof_energy_size(energy.get());
  if (o.k < 1 || o.k > n) fail(CROF_INVALID_ARGUMENT, "-k must be between 1 and " + std::to_string(n));
  std::vector<double> values(static_cast<std::size_t>(o.k));
  std::vector<double> vectors(static_cast<std::size_t>(n) * static_cast<std::size_t>(o.k));
  check(crof_smallest_eigs(energy.get(), o.k, values.data(), vectors.data()), "eigensolver");
  const double scale = crof_energy_scale(energy.get());
  int zeros = 0;
  for (double mu : values) zeros += mu < 1e-8 * scale;
  std::printf("energy: %s\nscale: %.17g\nzero eigenvalues (< 1e-8 scale): %d\nindex,eigenvalue\n",
              crof_energy_kind_name(kind), scale, zeros);
  for (int i = 0; i < o.k; ++i) std::printf("%d,%.17g\n", i, values[static_cast<std::size_t>(i)]);
  if (!o.out.empty()) {
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(o.k));
    std::vector<std::string> names(static_cast<std::size_t>(o.k));
    std::vector<std::pair<std::string, const std::vector<double>*>> columns;
    for (int i = 0; i < o.k; ++i) {
      const auto first = vectors.begin() + static_cast<std::ptrdiff_t>(i) * n;
      cols[static_cast<std::size_t>(i)].assign(first, first + n);
      columns.emplace_back("eig" + std::to_string(i), &cols[static_cast<std::size_t>(i)]);
    }
    save_field_pair(mesh.get(), strip_extension(o.out), nullptr, columns);
  }
  return kExitOk;
}

int cmd_converge(const Options& o) {
  const crof_energy_kind kind = energy_kind(o.energy);
  crof_record* raw = nullptr;
  if (o.problem == "forward") {
    check(crof_study_forward(o.surface.empty() ? nullptr : o.surface.c_str(),
                             o.function.empty() ? nullptr : o.function.c_str(), o.base_cells, o.levels, kind, &raw),
          "forward-energy study");
  } else if (o.problem == "sphere") {
    check(crof_study_sphere(o.first_level, o.last_level, kind, &raw), "sphere eigenvalue study");
  } else if (o.problem == "interpolation") {
    if (o.mesh.empty() || o.constraints.empty())
      fail(CROF_INVALID_ARGUMENT, "interpolation study needs --mesh and --constraints");
    const MeshPtr mesh = load_mesh(o.mesh);
    const ConstraintsPtr constraints = load_constraints(o.constraints);
    const crof_boundary_rule rule = o.boundary == "smooth" ? CROF_BOUNDARY_SMOOTH_CURVE : CROF_BOUNDARY_FIXED;
    const crof_refinement strategy = o.strategy == "random-split" ? CROF_REFINE_RANDOM_SPLIT : CROF_REFINE_LOOP;
    check(crof_study_interpolation(mesh.get(), constraints.get(), o.levels, rule, strategy,
                                   o.surface.empty() ? nullptr : o.surface.c_str(), kind, o.seed, &raw),
          "interpolation study");
  } else {
    fail(CROF_INVALID_ARGUMENT, "unknown problem '" + o.problem + "'");
  }
  const RecordPtr record(raw);
  std::printf("study: %s\nenergy: %s\n", crof_record_description(record.get()), crof_energy_kind_name(kind));
  if (o.problem == "forward")
    std::printf("reference energy: %.17g\ndegree-4 / degree-7 relative agreement: %.3e\n",
                crof_record_reference(record.get()), crof_record_reference_agreement(record.get()));
  std::printf("level,vertices,h,error\n");
  for (int i = 0; i < crof_record_level_count(record.get()); ++i) {
    int level = 0, vertices = 0;
    double h = 0.0, error = 0.0;
    check(crof_record_level(record.get(), i, &level, &vertices, &h, &error), "record");
    std::printf("%d,%d,%.17g,%.17g\n", level, vertices, h, error);
  }
  std::printf("monotone: %s\nslope: %.6f\n", crof_record_monotone(record.get()) ? "yes" : "no",
              crof_record_slope(record.get()));
  if (!o.out.empty()) {
    if (const fs::path parent = fs::path(o.out).parent_path(); !parent.empty()) fs::create_directories(parent);
    check(crof_record_save_csv(record.get(), o.out.c_str()), "writing '" + o.out + "'");
    std::printf("wrote %s\n", o.out.c_str());
  }
  return kExitOk;
}

int cmd_curvature(const Options& o) {
  const MeshPtr mesh = load_mesh(o.mesh);
  const int n = crof_mesh_vertex_count(mesh.get());
  std::vector<double> defects(static_cast<std::size_t>(n)), sums(static_cast<std::size_t>(n));
  double total = 0.0;
  check(crof_mesh_angle_defects(mesh.get(), defects.data(), sums.data(), &total), "angle defects");
  const int chi = n - crof_mesh_edge_count(mesh.get()) + crof_mesh_face_count(mesh.get());
  std::printf("vertices: %d\nboundary edges: %d\nEuler characteristic: %d\n", n,
              crof_mesh_boundary_edge_count(mesh.get()), chi);
  std::printf("total angle defect: %.17g\n2 pi chi: %.17g\n", total, 2.0 * M_PI * chi);
  if (!o.out.empty())
    save_field_pair(mesh.get(), strip_extension(o.out), nullptr, {{"angle_defect", &defects}, {"angle_sum", &sums}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curved Hessian energy on triangle meshes"};
  app.require_subcommand(1);
  Options o;

  const auto add_energy = [&o](CLI::App* sub) {
    sub->add_option("--energy", o.energy, "curved-hessian or squared-laplacian")->capture_default_str();
  };

  CLI::App* assemble = app.add_subcommand("assemble", "Write the energy matrices in Matrix Market format");
  assemble->add_option("--mesh", o.mesh, "Input mesh (.obj, .off, .ply)")->required();
  add_energy(assemble);
  assemble->add_option("--out-dir", o.out_dir, "Output directory")->required();

  CLI::App* interpolate = app.add_subcommand("interpolate", "Minimize the energy subject to fixed values");
  interpolate->add_option("--mesh", o.mesh, "Input mesh")->required();
  interpolate->add_option("--constraints", o.constraints, "CSV of vertex,value rows")->required();
  add_energy(interpolate);
  interpolate->add_option("--out", o.out, "Output prefix; writes .csv and .ply")->required();

  CLI::App* smooth = app.add_subcommand("smooth", "Solve (Q + alpha B) u = alpha B f");
  smooth->add_option("--mesh", o.mesh, "Input mesh")->required();
  smooth->add_option("--input", o.input, "Field CSV to smooth");
  smooth->add_option("--column", o.column, "Column of --input")->capture_default_str();
  smooth->add_option("--function", o.function, "Polynomial in x, y sampled at the vertices");
  smooth->add_option("--noise", o.noise, "Standard deviation of added Gaussian noise")->capture_default_str();
  smooth->add_option("--seed", o.seed, "Noise seed")->capture_default_str();
  smooth->add_option("--alpha", o.alpha, "Data fidelity weight")->capture_default_str();
  add_energy(smooth);
  smooth->add_option("--out", o.out, "Output prefix; writes .csv and .ply")->required();

  CLI::App* flow = app.add_subcommand("flow", "Fairing flow: repeatedly smooth the vertex positions");
  flow->add_option("--mesh", o.mesh, "Input mesh")->required();
  flow->add_option("--alpha", o.alpha, "Data fidelity weight per step")->capture_default_str();
  flow->add_option("--steps", o.steps, "Number of steps")->capture_default_str();
  add_energy(flow);
  flow->add_option("--out", o.out, "Output prefix; writes .csv and .ply")->required();

  CLI::App* eigs = app.add_subcommand("eigs", "Smallest generalized eigenvalues of (Q, B)");
  eigs->add_option("--mesh", o.mesh, "Input mesh")->required();
  eigs->add_option("-k", o.k, "Number of eigenpairs")->capture_default_str();
  add_energy(eigs);
  eigs->add_option("--out", o.out, "Optional prefix for the eigenvector fields");

  CLI::App* converge = app.add_subcommand("converge", "Convergence study under refinement");
  converge->add_option("--problem", o.problem, "forward, sphere or interpolation")->capture_default_str();
  converge->add_option("--surface", o.surface, "sphere:<r>, ellipsoid:<a>,<b>,<c> or monge:<poly>");
  converge->add_option("--function", o.function, "Polynomial f(x, y) for the forward problem");
  converge->add_option("--levels", o.levels, "Number of levels (forward) or refinements (interpolation)")
      ->capture_default_str();
  converge->add_option("--base-cells", o.base_cells, "Coarse grid cells per side (forward)")->capture_default_str();
  converge->add_option("--first-level", o.first_level, "First icosphere level (sphere)")->capture_default_str();
  converge->add_option("--last-level", o.last_level, "Last icosphere level (sphere)")->capture_default_str();
  converge->add_option("--mesh", o.mesh, "Coarse mesh (interpolation)");
  converge->add_option("--constraints", o.constraints, "Constraints CSV (interpolation)");
  converge->add_option("--boundary", o.boundary, "fixed or smooth")
      ->check(CLI::IsMember({"fixed", "smooth"}))
      ->capture_default_str();
  converge->add_option("--strategy", o.strategy, "loop or random-split")
      ->check(CLI::IsMember({"loop", "random-split"}))
      ->capture_default_str();
  converge->add_option("--seed", o.seed, "Seed for random-split")->capture_default_str();
  add_energy(converge);
  converge->add_option("--out", o.out, "Record CSV (level, vertices, h, error)");

  CLI::App* curvature = app.add_subcommand("curvature", "Angle defects per vertex");
  curvature->add_option("--mesh", o.mesh, "Input mesh")->required();
  curvature->add_option("--out", o.out, "Optional output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*assemble) return cmd_assemble(o);
    if (*interpolate) return cmd_interpolate(o);
    if (*smooth) return cmd_smooth(o);
    if (*flow) return cmd_flow(o);
    if (*eigs) return cmd_eigs(o);
    if (*converge) return cmd_converge(o);
    if (*curvature) return cmd_curvature(o);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
