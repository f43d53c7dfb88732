#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "stlcfs/constraint_block.hpp"

namespace stlcfs {

struct Cone {
  ConeKind kind = ConeKind::zero;
  int dim = 0;
};

/// minimize 0.5 z'Pz + q'z  subject to  A z + s = b,  s in K = K_1 x ... x K_p.
/// P holds the full symmetric matrix (both triangles).
struct ConicProgram {
  Eigen::SparseMatrix<double> P;
  Eigen::VectorXd q;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::vector<Cone> cones;

  int num_vars() const { return static_cast<int>(q.size()); }
  int num_rows() const { return static_cast<int>(b.size()); }
  double objective(const Eigen::VectorXd& z) const { return 0.5 * z.dot(P * z) + q.dot(z); }
};

/// Structural checks: dimensions, cone sizes, finiteness, symmetry and a
/// sampled PSD test on P. Empty means valid.
std::vector<std::string> validate_program(const ConicProgram& prog);

/// Euclidean projection onto K, cone by cone.
Eigen::VectorXd cone_project(const Eigen::VectorXd& s, std::span<const Cone> cones);
void cone_project_in_place(Eigen::Ref<Eigen::VectorXd> s, std::span<const Cone> cones);

/// Projection onto the dual cone K* (zero cone -> free).
Eigen::VectorXd dual_cone_project(const Eigen::VectorXd& y, std::span<const Cone> cones);

enum class SolveStatus { optimal, max_iters, infeasible_detected, numerical_failure };
enum class Infeasibility { none, primal, dual };

std::string to_string(SolveStatus status);

struct SolverSettings {
  double tol = 1e-6;
  int max_iters = 50000;
  double rho = 0.1;
  double sigma = 1e-6;
  double relaxation = 1.6;
  double eq_rho_scale = 1e3;
  int scaling_iters = 10;
  bool adaptive_rho = true;
  double adaptive_rho_tolerance = 5.0;
  int check_interval = 25;
  double infeasibility_tol = 1e-5;
};

struct WarmStart {
  Eigen::VectorXd z;
  Eigen::VectorXd s;  // optional (empty)
  Eigen::VectorXd y;  // optional (empty)
  double rho = 0.0;   // <= 0 keeps settings.rho
};

struct SolveResult {
  SolveStatus status = SolveStatus::numerical_failure;
  Infeasibility infeasibility = Infeasibility::none;
  Eigen::VectorXd z;
  Eigen::VectorXd s;
  Eigen::VectorXd y;  // in K*, with P z + q + A'y = 0 at optimality
  double objective = 0.0;
  // Relative KKT measures: ||Az+s-b||/(1+||b||), ||Pz+q+A'y||/(1+||q||),
  // |pobj-dobj|/(1+|pobj|+|dobj|), all infinity norms.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  int refactorizations = 0;
  double rho = 0.0;
  double solve_time = 0.0;
};

SolveResult solve(const ConicProgram& prog, const SolverSettings& settings = {},
                  const WarmStart* warm_start = nullptr);

/// Self-describing sparse text dump (triplets) for offline inspection.
void dump_program(const ConicProgram& prog, std::ostream& out);

}  // namespace stlcfs
