#include "phmin/am.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "phmin/phgen.hpp"

namespace phmin::am {

double objective(const Matrix& P, const Matrix& A, const jordan::RealJordanForm& jf) {
  return (P * A - jf.dense * P).squaredNorm();
}

Matrix hessian_in_P(const Matrix& A, const jordan::RealJordanForm& jf) {
  const int n = jf.n;
  Matrix M = Matrix::Zero(n * n, n * n);
  int off = 0;
  for (const auto& blk : jf.blocks) {
    if (std::holds_alternative<jordan::RealBlock>(blk)) {
      const auto& rb = std::get<jordan::RealBlock>(blk);
      const int d = n * rb.m;
      Matrix B = Matrix::Zero(d, d);
      for (int r = 0; r < rb.m; ++r) {
        B.block(r * n, r * n, n, n) = A - rb.lambda * Matrix::Identity(n, n);
        if (r + 1 < rb.m) B.block(r * n, (r + 1) * n, n, n) = -Matrix::Identity(n, n);
      }
      M.block(off, off, d, d) = B * B.transpose();
      off += d;
    } else {
      const auto& cb = std::get<jordan::ComplexBlock>(blk);
      const int two_n = 2 * n;
      Matrix Amu(two_n, two_n);
      Amu.topLeftCorner(n, n) = A - cb.mu * Matrix::Identity(n, n);
      Amu.topRightCorner(n, n) = -cb.omega * Matrix::Identity(n, n);
      Amu.bottomLeftCorner(n, n) = cb.omega * Matrix::Identity(n, n);
      Amu.bottomRightCorner(n, n) = A - cb.mu * Matrix::Identity(n, n);
      const int d = two_n * cb.m;
      Matrix B = Matrix::Zero(d, d);
      for (int r = 0; r < cb.m; ++r) {
        B.block(r * two_n, r * two_n, two_n, two_n) = Amu;
        if (r + 1 < cb.m)
          B.block(r * two_n, (r + 1) * two_n, two_n, two_n) = -Matrix::Identity(two_n, two_n);
      }
      M.block(off, off, d, d) = B * B.transpose();
      off += d;
    }
  }
  return M;
}

namespace {

Vector vec_rows(const Matrix& M) {
  const int n = static_cast<int>(M.rows());
  Vector x(n * M.cols());
  for (int i = 0; i < n; ++i) x.segment(i * M.cols(), M.cols()) = M.row(i).transpose();
  return x;
}

Matrix unvec_rows(const Vector& x, int rows, int cols) {
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i) M.row(i) = x.segment(i * cols, cols).transpose();
  return M;
}

}  // namespace

SubproblemResult solve_op_a(const Matrix& A, const Vector& beta,
                            const jordan::RealJordanForm& jf, double qp_tol, const Matrix* warm,
                            const std::vector<int>* active_hint) {
  const int n = jf.n;
  qp::QpSpec spec;
  spec.H = 2.0 * hessian_in_P(A, jf);
  spec.c = Vector::Zero(n * n);
  spec.E = Matrix::Zero(n, n * n);
  spec.e = Vector::Ones(n);
  for (int i = 0; i < n; ++i) spec.E.block(i, i * n, 1, n).setOnes();
  spec.G = Matrix::Zero(n, n * n);
  spec.g = Vector::Zero(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) spec.G(j, i * n + j) = -beta(i);
  spec.tol_kkt = qp_tol;
  if (warm) spec.x0 = vec_rows(*warm);
  if (active_hint) spec.active_hint = *active_hint;

  if (!spec.x0) {
    // rows all equal to the uniform distribution satisfy both constraint
    // families whenever sum(beta) = L(0) = 1
    Matrix P0 = Matrix::Constant(n, n, 1.0 / n);
    Vector x0 = vec_rows(P0);
    if ((spec.G * x0 - spec.g).maxCoeff() <= 0.0) spec.x0 = x0;
  }

  SubproblemResult res;
  res.qp = qp::solve_qp(spec);
  if (res.qp.status == qp::QpStatus::Infeasible) {
    res.infeasible = true;
    return res;
  }
  res.value = unvec_rows(res.qp.x, n, n);
  return res;
}

SubproblemResult solve_op_p(const Matrix& P, double xi, const jordan::RealJordanForm& jf,
                            double qp_tol, const Matrix* warm,
                            const std::vector<int>* active_hint) {
  const int n = jf.n;
  const Matrix C = jf.dense * P;
  const Matrix PtP = P.transpose() * P;
  qp::QpSpec spec;
  spec.H = Matrix::Zero(n * n, n * n);
  spec.c = Vector::Zero(n * n);
  // row-major vec(A); columns of A decouple in the objective
  for (int j = 0; j < n; ++j) {
    for (int k1 = 0; k1 < n; ++k1) {
      for (int k2 = 0; k2 < n; ++k2) spec.H(k1 * n + j, k2 * n + j) = 2.0 * PtP(k1, k2);
      spec.c(k1 * n + j) = -2.0 * P.col(k1).dot(C.col(j));
    }
  }
  spec.E = Matrix(0, n * n);
  spec.e = Vector(0);
  const int mi = n + 2 * n * n;
  spec.G = Matrix::Zero(mi, n * n);
  spec.g = Vector::Zero(mi);
  for (int i = 0; i < n; ++i) spec.G.block(i, i * n, 1, n).setOnes();  // A 1 <= 0
  int row = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        spec.G(row, i * n + j) = 1.0;  // a_ii <= 0
        spec.g(row++) = 0.0;
        spec.G(row, i * n + j) = -1.0;  // -a_ii <= xi
        spec.g(row++) = xi;
      } else {
        spec.G(row, i * n + j) = 1.0;  // a_ij <= xi
        spec.g(row++) = xi;
        spec.G(row, i * n + j) = -1.0;  // -a_ij <= 0
        spec.g(row++) = 0.0;
      }
    }
  spec.tol_kkt = qp_tol;
  if (warm) spec.x0 = vec_rows(*warm);
  if (!spec.x0) spec.x0 = Vector::Zero(n * n);  // A = 0 is always feasible
  if (active_hint) spec.active_hint = *active_hint;

  SubproblemResult res;
  res.qp = qp::solve_qp(spec);
  res.value = unvec_rows(res.qp.x, n, n);
  return res;
}

Matrix default_init(const jordan::RealJordanForm& jf, InitKind kind, double xi) {
  const int n = jf.n;
  switch (kind) {
    case InitKind::JordanPlusOnesMinusI:
      return jf.dense + Matrix::Ones(n, n) - Matrix::Identity(n, n);
    case InitKind::Jordan:
      return jf.dense;
    case InitKind::MinusXiI:
      return -xi * Matrix::Identity(n, n);
    case InitKind::Custom:
      throw Error(ErrorCode::DimensionMismatch, "custom init requires a matrix");
  }
  return jf.dense;
}

Matrix random_feasible_init(int n, double xi, std::uint64_t seed) {
  auto [alpha, A] = phgen::sample_ph({n, 1.0, phgen::Variant::Balanced, seed});
  (void)alpha;
  const double amax = A.cwiseAbs().maxCoeff();
  if (amax > xi) A *= xi / amax;
  return A;
}

AmReport run_am(const jordan::ProblemData& problem, const AmConfig& config) {
  if (config.tol_term <= 0.0 || config.max_outer_iter < 1)
    throw Error(ErrorCode::DimensionMismatch, "tol_term must be > 0 and max_outer_iter >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const int n = problem.n;
  const auto& jf = problem.jordan;

  AmReport rep;
  rep.init_label = config.label;
  if (config.init == InitKind::Custom && !config.custom_init)
    throw Error(ErrorCode::DimensionMismatch, "custom init requires a matrix");
  Matrix A = config.init == InitKind::Custom ? *config.custom_init
                                             : default_init(jf, config.init, problem.xi);
  if (A.rows() != n || A.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "initial A has wrong dimensions");

  rep.diagnostics.min_beta_P = std::numeric_limits<double>::infinity();

  Matrix P;
  std::optional<Matrix> warm_P;
  std::optional<Matrix> warm_A;
  std::vector<int> hint_P, hint_A;
  double F_final = 0.0;
  bool terminated = false;

  for (int l = 0; l < config.max_outer_iter; ++l) {
    auto op_a = solve_op_a(A, problem.beta, jf, config.qp_tol,
                           warm_P ? &*warm_P : nullptr, l > 0 ? &hint_P : nullptr);
    if (op_a.infeasible) {
      rep.outcome = Outcome::InfeasibleBeta;
      rep.iterations = l;
      rep.wallclock_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return rep;
    }
    P = op_a.value;
    hint_P = op_a.qp.active_set;
    rep.diagnostics.max_row_sum_dev_P = std::max(
        rep.diagnostics.max_row_sum_dev_P,
        (P * Vector::Ones(n) - Vector::Ones(n)).cwiseAbs().maxCoeff());
    rep.diagnostics.min_beta_P =
        std::min(rep.diagnostics.min_beta_P, (problem.beta.transpose() * P).minCoeff());

    const double F_curr = objective(P, A, jf);
    rep.f_trace.push_back(F_curr);
    rep.iterations = l + 1;

    auto op_p = solve_op_p(P, problem.xi, jf, config.qp_tol, warm_A ? &*warm_A : nullptr,
                           l > 0 ? &hint_A : nullptr);
    const Matrix A_next = op_p.value;
    hint_A = op_p.qp.active_set;
    rep.diagnostics.max_row_sum_A =
        std::max(rep.diagnostics.max_row_sum_A, (A_next * Vector::Ones(n)).maxCoeff());
    double box = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double a = A_next(i, j);
        if (i == j)
          box = std::max({box, a, -problem.xi - a});
        else
          box = std::max({box, -a, a - problem.xi});
      }
    rep.diagnostics.max_box_violation_A = std::max(rep.diagnostics.max_box_violation_A, box);

    const double F_next = objective(P, A_next, jf);
    A = A_next;
    warm_A = A;
    warm_P = P;
    F_final = F_next;
    if (std::abs(F_next - F_curr) <= config.tol_term) {
      rep.f_trace.push_back(F_next);
      terminated = true;
      break;
    }
  }
  if (!terminated && !rep.f_trace.empty()) rep.f_trace.push_back(F_final);

  rep.final.A = A;
  rep.final.P = P;
  rep.final.F = F_final;
  rep.final.iter = rep.iterations;
  rep.outcome = (F_final < n * n * config.success_threshold_factor)
                    ? Outcome::RepresentationFound
                    : Outcome::NotFound;
  if (rep.outcome == Outcome::RepresentationFound)
    rep.alpha = (problem.beta.transpose() * P).transpose();
  rep.wallclock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::pair<AmReport, std::vector<AmReport>> run_multistart(
    const jordan::ProblemData& problem, const std::vector<AmConfig>& configs) {
  std::vector<AmReport> all;
  all.reserve(configs.size());
  for (const auto& cfg : configs) all.push_back(run_am(problem, cfg));
  const AmReport* best = &all.front();
  for (const auto& r : all) {
    const bool r_found = r.outcome == Outcome::RepresentationFound;
    const bool b_found = best->outcome == Outcome::RepresentationFound;
    if ((r_found && !b_found) || (r_found == b_found && r.final.F < best->final.F)) best = &r;
  }
  return {*best, all};
}

PhRepresentation extract_representation(const Vector& alpha_raw, const Matrix& A) {
  PhRepresentation rep;
  rep.A = A;
  rep.alpha = alpha_raw;
  for (int i = 0; i < rep.alpha.size(); ++i)
    if (rep.alpha(i) < 0.0 && rep.alpha(i) > -1e-8) rep.alpha(i) = 0.0;
  const double sum = rep.alpha.sum();
  if (sum > 0.0) rep.alpha /= sum;

  auto& d = rep.diagnostics;
  d.alpha_nonnegative = (rep.alpha.array() >= -1e-8).all();
  d.alpha_sums_to_one = std::abs(rep.alpha.sum() - 1.0) <= 1e-8;
  d.diagonal_nonpositive = true;
  d.offdiagonal_nonnegative = true;
  d.row_sums_nonpositive = true;
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    if (A(i, i) > 0.0) d.diagonal_nonpositive = false;
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      row += A(i, j);
      if (i != j && A(i, j) < -1e-8) d.offdiagonal_nonnegative = false;
    }
    if (row > 1e-8) d.row_sums_nonpositive = false;
  }
  d.valid = d.alpha_nonnegative && d.alpha_sums_to_one && d.diagonal_nonpositive &&
            d.offdiagonal_nonnegative && d.row_sums_nonpositive;
  return rep;
}

}  // namespace phmin::am
