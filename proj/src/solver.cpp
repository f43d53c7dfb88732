#include "stlcfs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <Eigen/SparseCholesky>

namespace stlcfs {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

constexpr double kMinScaling = 1e-4;
constexpr double kMaxScaling = 1e4;
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double clamp_scale(double norm) {
  if (norm < kMinScaling) return 1.0;
  return std::min(norm, kMaxScaling);
}

void project_soc(Eigen::Ref<Vec> block) {
  const double t = block[0];
  const double nu = block.tail(block.size() - 1).norm();
  if (nu <= t) return;
  if (nu <= -t) {
    block.setZero();
    return;
  }
  const double scale = 0.5 * (t + nu);
  block.tail(block.size() - 1) *= scale / nu;
  block[0] = scale;
}

// Column-wise infinity norms of a sparse matrix.
Vec col_inf_norms(const SpMat& M) {
  Vec out = Vec::Zero(M.cols());
  for (int j = 0; j < M.outerSize(); ++j) {
    for (SpMat::InnerIterator it(M, j); it; ++it) out[j] = std::max(out[j], std::abs(it.value()));
  }
  return out;
}

Vec row_inf_norms(const SpMat& M) {
  Vec out = Vec::Zero(M.rows());
  for (int j = 0; j < M.outerSize(); ++j) {
    for (SpMat::InnerIterator it(M, j); it; ++it) out[it.row()] = std::max(out[it.row()], std::abs(it.value()));
  }
  return out;
}

bool all_finite(const Vec& v) { return v.allFinite(); }

// Ruiz equilibration of the KKT matrix [P A'; A 0] plus cost scaling.
// Scaled data: P^ = c D P D, q^ = c D q, A^ = E A D, b^ = E b.
struct Scaling {
  Vec D, E;
  double c = 1.0;
};

Scaling equilibrate(const ConicProgram& prog, int iters, SpMat& P, Vec& q, SpMat& A, Vec& b) {
  const int n = prog.num_vars();
  const int m = prog.num_rows();
  Scaling sc{Vec::Ones(n), Vec::Ones(m), 1.0};
  P = prog.P;
  q = prog.q;
  A = prog.A;
  b = prog.b;
  for (int it = 0; it < iters; ++it) {
    Vec dcol = col_inf_norms(P).cwiseMax(col_inf_norms(A));
    Vec erow = row_inf_norms(A);
    for (int j = 0; j < n; ++j) dcol[j] = 1.0 / std::sqrt(clamp_scale(dcol[j]));
    for (int i = 0; i < m; ++i) erow[i] = 1.0 / std::sqrt(clamp_scale(erow[i]));
    // A second-order cone only survives a uniform positive scaling.
    int row = 0;
    for (const Cone& cone : prog.cones) {
      if (cone.kind == ConeKind::soc) {
        const double mean = erow.segment(row, cone.dim).mean();
        erow.segment(row, cone.dim).setConstant(mean);
      }
      row += cone.dim;
    }
    P = dcol.asDiagonal() * P * dcol.asDiagonal();
    A = erow.asDiagonal() * A * dcol.asDiagonal();
    q = dcol.cwiseProduct(q);
    b = erow.cwiseProduct(b);
    sc.D = sc.D.cwiseProduct(dcol);
    sc.E = sc.E.cwiseProduct(erow);

    const double p_mean = n > 0 ? col_inf_norms(P).mean() : 0.0;
    const double gamma = 1.0 / clamp_scale(std::max(p_mean, inf_norm(q)));
    P *= gamma;
    q *= gamma;
    sc.c *= gamma;
  }
  return sc;
}

class AdmmWorkspace {
 public:
  AdmmWorkspace(const ConicProgram& prog, const SolverSettings& settings)
      : prog_(prog), settings_(settings), n_(prog.num_vars()), m_(prog.num_rows()) {
    scaling_ = equilibrate(prog, settings.scaling_iters, P_, q_, A_, b_);
    rho_vec_.resize(m_);
    is_eq_.assign(m_, false);
    int row = 0;
    for (const Cone& cone : prog.cones) {
      if (cone.kind == ConeKind::zero) {
        for (int i = 0; i < cone.dim; ++i) is_eq_[row + i] = true;
      }
      row += cone.dim;
    }
  }

  bool set_rho(double rho) {
    rho_ = std::clamp(rho, kRhoMin, kRhoMax);
    for (int i = 0; i < m_; ++i) rho_vec_[i] = is_eq_[i] ? rho_ * settings_.eq_rho_scale : rho_;
    rho_inv_ = rho_vec_.cwiseInverse();
    if (kkt_.rows() == 0) {
      build_kkt();
      ldlt_.analyzePattern(kkt_);
    } else {
      for (int i = 0; i < m_; ++i) kkt_.valuePtr()[rho_diag_[i]] = -rho_inv_[i];
    }
    ldlt_.factorize(kkt_);
    ++factorizations_;
    return ldlt_.info() == Eigen::Success;
  }

  SolveResult run(const WarmStart* warm) {
    const auto start = std::chrono::steady_clock::now();
    SolveResult res;

    x_ = Vec::Zero(n_);
    s_ = Vec::Zero(m_);
    y_ = Vec::Zero(m_);
    double rho0 = settings_.rho;
    if (warm != nullptr) {
      if (warm->z.size() == n_) x_ = warm->z.cwiseQuotient(scaling_.D);
      if (warm->s.size() == m_) {
        s_ = scaling_.E.cwiseProduct(warm->s);
      } else {
        s_ = b_ - A_ * x_;
      }
      if (warm->y.size() == m_) y_ = scaling_.c * warm->y.cwiseQuotient(scaling_.E);
      if (warm->rho > 0.0) rho0 = warm->rho;
    }
    cone_project_in_place(s_, prog_.cones);

    if (!set_rho(rho0)) return finish(res, SolveStatus::numerical_failure, 0, start);

    Vec rhs(n_ + m_), sol(n_ + m_), s_relax(m_), v(m_), x_prev(n_), y_prev(m_);
    const double alpha = settings_.relaxation;
    const double sigma = settings_.sigma;
    int iter = 0;
    while (iter < settings_.max_iters) {
      ++iter;
      x_prev = x_;
      y_prev = y_;
      rhs.head(n_) = sigma * x_ - q_;
      rhs.tail(m_) = b_ - s_ - y_.cwiseProduct(rho_inv_);
      sol = ldlt_.solve(rhs);
      const auto x_tilde = sol.head(n_);
      const auto nu = sol.tail(m_);
      // s_tilde = s + (y - nu) / rho
      s_relax = alpha * (s_ + (y_ - nu).cwiseProduct(rho_inv_)) + (1.0 - alpha) * s_;
      x_ = alpha * x_tilde + (1.0 - alpha) * x_;
      v = s_relax - y_.cwiseProduct(rho_inv_);
      s_ = v;
      cone_project_in_place(s_, prog_.cones);
      y_ = rho_vec_.cwiseProduct(s_ - v);

      const bool check = iter % settings_.check_interval == 0 || iter == settings_.max_iters;
      if (!check) continue;

      if (!all_finite(x_) || !all_finite(y_) || !all_finite(s_)) {
        return finish(res, SolveStatus::numerical_failure, iter, start);
      }
      compute_residuals(res);
      if (res.primal_residual <= settings_.tol && res.dual_residual <= settings_.tol &&
          res.duality_gap <= settings_.tol) {
        return finish(res, SolveStatus::optimal, iter, start);
      }
      if (primal_infeasible(y_ - y_prev)) {
        res.infeasibility = Infeasibility::primal;
        return finish(res, SolveStatus::infeasible_detected, iter, start);
      }
      if (dual_infeasible(x_ - x_prev)) {
        res.infeasibility = Infeasibility::dual;
        return finish(res, SolveStatus::infeasible_detected, iter, start);
      }
      if (settings_.adaptive_rho && iter < settings_.max_iters) {
        const double rho_new = std::clamp(rho_ * std::sqrt(prim_ratio_ / std::max(dual_ratio_, 1e-30)), kRhoMin, kRhoMax);
        if (rho_new > rho_ * settings_.adaptive_rho_tolerance || rho_new < rho_ / settings_.adaptive_rho_tolerance) {
          if (!set_rho(rho_new)) return finish(res, SolveStatus::numerical_failure, iter, start);
        }
      }
    }
    return finish(res, SolveStatus::max_iters, iter, start);
  }

 private:
  void build_kkt() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(P_.nonZeros() + A_.nonZeros() + n_ + m_);
    for (int j = 0; j < P_.outerSize(); ++j) {
      for (SpMat::InnerIterator it(P_, j); it; ++it) {
        if (it.row() > j) trip.emplace_back(it.row(), j, it.value());
      }
    }
    Vec pdiag = P_.diagonal();
    for (int j = 0; j < n_; ++j) trip.emplace_back(j, j, pdiag[j] + settings_.sigma);
    for (int j = 0; j < A_.outerSize(); ++j) {
      for (SpMat::InnerIterator it(A_, j); it; ++it) trip.emplace_back(n_ + it.row(), j, it.value());
    }
    for (int i = 0; i < m_; ++i) trip.emplace_back(n_ + i, n_ + i, -rho_inv_[i]);
    kkt_.resize(n_ + m_, n_ + m_);
    kkt_.setFromTriplets(trip.begin(), trip.end());
    kkt_.makeCompressed();
    rho_diag_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const int col = n_ + i;
      // Diagonal is the first stored entry of its column in the lower triangle.
      rho_diag_[i] = kkt_.outerIndexPtr()[col];
    }
  }

  void compute_residuals(SolveResult& res) {
    const Vec Ax = A_ * x_;
    const Vec Px = P_ * x_;
    const Vec Aty = A_.transpose() * y_;
    const Vec rp_scaled = Ax + s_ - b_;
    const Vec rd_scaled = Px + q_ + Aty;
    const Vec rp = rp_scaled.cwiseQuotient(scaling_.E);
    const Vec rd = rd_scaled.cwiseQuotient(scaling_.D) / scaling_.c;
    const double xPx = x_.dot(Px);
    const double pobj = (0.5 * xPx + q_.dot(x_)) / scaling_.c;
    const double dobj = (-0.5 * xPx - b_.dot(y_)) / scaling_.c;
    res.primal_residual = inf_norm(rp) / (1.0 + inf_norm(prog_.b));
    res.dual_residual = inf_norm(rd) / (1.0 + inf_norm(prog_.q));
    res.duality_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    prim_ratio_ = inf_norm(rp_scaled) / std::max({inf_norm(Ax), inf_norm(s_), inf_norm(b_), 1e-30});
    dual_ratio_ = inf_norm(rd_scaled) / std::max({inf_norm(Px), inf_norm(Aty), inf_norm(q_), 1e-30});
  }

  // Certificate: dy in K*, A'dy = 0, b'dy < 0.
  bool primal_infeasible(const Vec& dy_scaled) const {
    Vec dy = scaling_.E.cwiseProduct(dy_scaled);
    const double norm = inf_norm(dy);
    if (!(norm > 1e-12)) return false;
    dy /= norm;
    const double eps = settings_.infeasibility_tol;
    if (!(prog_.b.dot(dy) < -eps)) return false;
    if (inf_norm(prog_.A.transpose() * dy) > eps) return false;
    return inf_norm(dy - dual_cone_project(dy, prog_.cones)) <= eps;
  }

  // Certificate: P dx = 0, q'dx < 0, -A dx in K.
  bool dual_infeasible(const Vec& dx_scaled) const {
    Vec dx = scaling_.D.cwiseProduct(dx_scaled);
    const double norm = inf_norm(dx);
    if (!(norm > 1e-12)) return false;
    dx /= norm;
    const double eps = settings_.infeasibility_tol;
    if (!(prog_.q.dot(dx) < -eps)) return false;
    if (inf_norm(prog_.P * dx) > eps) return false;
    const Vec w = -(prog_.A * dx);
    return inf_norm(w - cone_project(w, prog_.cones)) <= eps;
  }

  SolveResult& finish(SolveResult& res, SolveStatus status, int iter,
                      std::chrono::steady_clock::time_point start) {
    res.status = status;
    res.iterations = iter;
    res.refactorizations = std::max(0, factorizations_ - 1);
    res.rho = rho_;
    res.z = x_.cwiseProduct(scaling_.D);
    res.s = s_.cwiseQuotient(scaling_.E);
    res.y = scaling_.E.cwiseProduct(y_) / scaling_.c;
    if (status != SolveStatus::numerical_failure) compute_residuals(res);
    res.objective = all_finite(res.z) ? prog_.objective(res.z) : std::numeric_limits<double>::quiet_NaN();
    res.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }

  const ConicProgram& prog_;
  const SolverSettings& settings_;
  int n_, m_;
  Scaling scaling_;
  SpMat P_, A_;
  Vec q_, b_;
  SpMat kkt_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  std::vector<int> rho_diag_;
  std::vector<bool> is_eq_;
  Vec rho_vec_, rho_inv_;
  double rho_ = 0.1;
  int factorizations_ = 0;
  Vec x_, s_, y_;
  double prim_ratio_ = 1.0, dual_ratio_ = 1.0;
};

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::infeasible_detected: return "infeasible_detected";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

void cone_project_in_place(Eigen::Ref<Vec> s, std::span<const Cone> cones) {
  int row = 0;
  for (const Cone& cone : cones) {
    auto block = s.segment(row, cone.dim);
    switch (cone.kind) {
      case ConeKind::zero: block.setZero(); break;
      case ConeKind::nonneg: block = block.cwiseMax(0.0); break;
      case ConeKind::soc: project_soc(block); break;
    }
    row += cone.dim;
  }
}

Vec cone_project(const Vec& s, std::span<const Cone> cones) {
  Vec out = s;
  cone_project_in_place(out, cones);
  return out;
}

Vec dual_cone_project(const Vec& y, std::span<const Cone> cones) {
  Vec out = y;
  int row = 0;
  for (const Cone& cone : cones) {
    auto block = out.segment(row, cone.dim);
    if (cone.kind == ConeKind::nonneg) block = block.cwiseMax(0.0);
    if (cone.kind == ConeKind::soc) project_soc(block);
    row += cone.dim;
  }
  return out;
}

std::vector<std::string> validate_program(const ConicProgram& prog) {
  std::vector<std::string> out;
  const int n = prog.num_vars();
  const int m = prog.num_rows();
  if (prog.P.rows() != n || prog.P.cols() != n) out.push_back("P must be n x n");
  if (prog.A.rows() != m || prog.A.cols() != n) out.push_back("A must be m x n");
  int total = 0;
  for (const Cone& c : prog.cones) {
    if (c.dim < 0) out.push_back("negative cone dimension");
    if (c.kind == ConeKind::soc && c.dim < 2) out.push_back("second-order cone dimension must be at least 2");
    total += c.dim;
  }
  if (total != m) out.push_back("cone dimensions must sum to the row count of A");
  if (!prog.q.allFinite() || !prog.b.allFinite()) out.push_back("q and b must be finite");
  if (!out.empty()) return out;

  const SpMat Pt = prog.P.transpose();
  const double asym = (prog.P - Pt).norm();
  if (asym > 1e-12 * (1.0 + prog.P.norm())) out.push_back("P must be symmetric");
  std::mt19937 rng(12345);
  std::normal_distribution<double> normal;
  for (int sample = 0; sample < 16 && n > 0; ++sample) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    if (v.dot(prog.P * v) < -1e-10 * (1.0 + prog.P.norm()) * v.squaredNorm()) {
      out.push_back("P must be positive semidefinite");
      break;
    }
  }
  return out;
}

SolveResult solve(const ConicProgram& prog, const SolverSettings& settings, const WarmStart* warm_start) {
  AdmmWorkspace ws(prog, settings);
  return ws.run(warm_start);
}

void dump_program(const ConicProgram& prog, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "# stlcfs conic program: minimize 0.5 z'Pz + q'z s.t. Az + s = b, s in K\n";
  out << "n " << prog.num_vars() << "\nm " << prog.num_rows() << "\n";
  out << "cones " << prog.cones.size() << "\n";
  for (const Cone& c : prog.cones) {
    out << (c.kind == ConeKind::zero ? "zero " : c.kind == ConeKind::nonneg ? "nonneg " : "soc ") << c.dim << "\n";
  }
  auto triplets = [&out](const char* name, const SpMat& M) {
    out << name << " " << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
    for (int j = 0; j < M.outerSize(); ++j) {
      for (SpMat::InnerIterator it(M, j); it; ++it) out << it.row() << " " << it.col() << " " << it.value() << "\n";
    }
  };
  auto dense = [&out](const char* name, const Vec& v) {
    out << name << " " << v.size() << "\n";
    for (int i = 0; i < v.size(); ++i) out << v[i] << "\n";
  };
  triplets("P", prog.P);
  dense("q", prog.q);
  triplets("A", prog.A);
  dense("b", prog.b);
  out.precision(old_precision);
}

}  // namespace stlcfs
