#include "phmin/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace phmin::qp {

namespace {

constexpr double kRegMagnitude = 1e-12;
constexpr double kRankTol = 1e-11;

struct Workspace {
  Matrix H_eff;
  Matrix H_true;
  Vector c;
  const QpSpec* spec = nullptr;
  int n = 0, me = 0, mi = 0;
};

// Null-space basis of the stacked active rows [E; G_W].
Matrix null_basis(const Workspace& ws, const std::vector<int>& W) {
  const int m = ws.me + static_cast<int>(W.size());
  if (m == 0) return Matrix::Identity(ws.n, ws.n);
  Matrix At(ws.n, m);
  for (int i = 0; i < ws.me; ++i) At.col(i) = ws.spec->E.row(i).transpose();
  for (size_t k = 0; k < W.size(); ++k)
    At.col(ws.me + static_cast<int>(k)) = ws.spec->G.row(W[k]).transpose();
  Eigen::ColPivHouseholderQR<Matrix> qr(At);
  qr.setThreshold(kRankTol);
  const int rank = static_cast<int>(qr.rank());
  if (rank >= ws.n) return Matrix(ws.n, 0);
  Matrix Q = qr.householderQ();
  return Q.rightCols(ws.n - rank);
}

// Least-squares multipliers for A' * nu = -grad over the active rows.
Vector multipliers(const Workspace& ws, const std::vector<int>& W, const Vector& grad) {
  const int m = ws.me + static_cast<int>(W.size());
  if (m == 0) return Vector(0);
  Matrix At(ws.n, m);
  for (int i = 0; i < ws.me; ++i) At.col(i) = ws.spec->E.row(i).transpose();
  for (size_t k = 0; k < W.size(); ++k)
    At.col(ws.me + static_cast<int>(k)) = ws.spec->G.row(W[k]).transpose();
  return At.completeOrthogonalDecomposition().solve(-grad);
}

double objective_true(const Workspace& ws, const Vector& x) {
  return 0.5 * x.dot(ws.H_true * x) + ws.c.dot(x);
}

bool all_feasible(const QpSpec& spec, const Vector& x, double tol) {
  if (spec.E.rows() > 0 && ((spec.E * x - spec.e).cwiseAbs().maxCoeff() > tol)) return false;
  if (spec.G.rows() > 0 && ((spec.G * x - spec.g).maxCoeff() > tol)) return false;
  return true;
}

// Exact minimizer of the true objective over the current face, accepted only
// when it stays feasible and does not increase the objective; undoes the
// Tikhonov shift at the solution.
void polish_on_face(const Workspace& ws, const std::vector<int>& W, Vector& x) {
  const Matrix Z = null_basis(ws, W);
  if (Z.cols() == 0) return;
  const Vector gz = Z.transpose() * (ws.H_true * x + ws.c);
  const Matrix Mz = Z.transpose() * ws.H_true * Z;
  const Vector z = Mz.completeOrthogonalDecomposition().solve(-gz);
  if ((Mz * z + gz).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + gz.cwiseAbs().maxCoeff()))
    return;  // inconsistent: face minimum not attained along the shift
  const Vector cand = x + Z * z;
  if (!all_feasible(*ws.spec, cand, 1e-9)) return;
  if (objective_true(ws, cand) <= objective_true(ws, x)) x = cand;
}

QpSolution finalize(const Workspace& ws, Vector x, std::vector<int> W, QpStatus status,
                    int iterations, double reg) {
  QpSolution sol;
  polish_on_face(ws, W, x);
  sol.x = x;
  sol.objective = objective_true(ws, x);
  sol.status = status;
  sol.iterations = iterations;
  sol.regularization = reg;
  sol.active_set = W;

  const Vector grad = ws.H_true * x + ws.c;
  const Vector nu = multipliers(ws, W, grad);
  sol.eq_multipliers = Vector::Zero(ws.me);
  sol.ineq_multipliers = Vector::Zero(ws.mi);
  for (int i = 0; i < ws.me; ++i) sol.eq_multipliers(i) = nu(i);
  for (size_t k = 0; k < W.size(); ++k)
    sol.ineq_multipliers(W[k]) = nu(ws.me + static_cast<int>(k));

  Vector dual_res = grad;
  if (ws.me > 0) dual_res += ws.spec->E.transpose() * sol.eq_multipliers;
  if (ws.mi > 0) dual_res += ws.spec->G.transpose() * sol.ineq_multipliers;
  sol.kkt.dual = ws.n > 0 ? dual_res.cwiseAbs().maxCoeff() : 0.0;
  sol.kkt.primal_eq =
      ws.me > 0 ? (ws.spec->E * x - ws.spec->e).cwiseAbs().maxCoeff() : 0.0;
  sol.kkt.primal_ineq =
      ws.mi > 0 ? std::max(0.0, (ws.spec->G * x - ws.spec->g).maxCoeff()) : 0.0;
  double comp = 0.0;
  for (int i = 0; i < ws.mi; ++i)
    comp = std::max(comp, std::abs(sol.ineq_multipliers(i) *
                                   (ws.spec->G.row(i).dot(x) - ws.spec->g(i))));
  sol.kkt.complementarity = comp;

  if (status == QpStatus::Optimal) {
    const double scale = ws.spec->tol_kkt * (1.0 + x.norm());
    if (sol.kkt.primal_eq > scale || sol.kkt.primal_ineq > scale || sol.kkt.dual > scale ||
        sol.kkt.complementarity > scale)
      sol.status = QpStatus::IterLimit;
  }
  return sol;
}

QpSolution solve_with_start(const QpSpec& spec, const Vector& x_start) {
  Workspace ws;
  ws.spec = &spec;
  ws.n = spec.num_vars();
  ws.me = static_cast<int>(spec.E.rows());
  ws.mi = static_cast<int>(spec.G.rows());
  ws.H_true = 0.5 * (spec.H + spec.H.transpose());
  ws.c = spec.c;

  double reg = 0.0;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(ws.H_true, Eigen::EigenvaluesOnly);
    const double eigmin = es.eigenvalues().minCoeff();
    if (eigmin < -1e-8)
      throw Error(ErrorCode::DimensionMismatch, "H is not positive semidefinite");
    if (eigmin < kRegMagnitude) reg = kRegMagnitude;
  }
  ws.H_eff = ws.H_true + reg * Matrix::Identity(ws.n, ws.n);

  Vector x = x_start;
  std::vector<int> W;
  // honor the hint for constraints that are tight at the start, keeping the
  // active rows linearly independent
  for (int idx : spec.active_hint) {
    if (idx < 0 || idx >= ws.mi) continue;
    if (std::find(W.begin(), W.end(), idx) != W.end()) continue;
    if (std::abs(spec.G.row(idx).dot(x) - spec.g(idx)) > 1e-9 * (1.0 + x.norm())) continue;
    std::vector<int> trial = W;
    trial.push_back(idx);
    if (null_basis(ws, trial).cols() == null_basis(ws, W).cols() - 1) W = trial;
  }
  std::sort(W.begin(), W.end());

  const int cap = spec.max_iter > 0 ? spec.max_iter : 60 * (ws.n + ws.mi) + 200;
  int it = 0;
  int stalled = 0;
  for (; it < cap; ++it) {
    const Vector grad = ws.H_eff * x + ws.c;
    const Matrix Z = null_basis(ws, W);
    Vector p = Vector::Zero(ws.n);
    bool ray = false;       // direction of linear descent along a flat direction
    bool stationary = true; // no meaningful decrease available on this face
    if (Z.cols() > 0) {
      const Matrix Mz = Z.transpose() * ws.H_eff * Z;
      const Vector gz = Z.transpose() * grad;
      // spectral split: directions whose curvature is indistinguishable from
      // the Tikhonov shift are flat (linear model), the rest get an exact
      // Newton step; this keeps tiny genuine curvatures from turning into
      // solver noise
      Eigen::SelfAdjointEigenSolver<Matrix> es(Mz);
      const double floor = 1.5 * kRegMagnitude + 8.0 * 1e-16 * es.eigenvalues().cwiseAbs().maxCoeff();
      Vector z = Vector::Zero(Z.cols());
      Vector flat_grad = Vector::Zero(Z.cols());
      double predicted_decrease = 0.0;
      for (int k = 0; k < Z.cols(); ++k) {
        const double sigma = es.eigenvalues()(k);
        const double gamma = es.eigenvectors().col(k).dot(gz);
        if (sigma <= floor) {
          flat_grad += gamma * es.eigenvectors().col(k);
        } else {
          z -= (gamma / sigma) * es.eigenvectors().col(k);
          predicted_decrease += 0.5 * gamma * gamma / sigma;
        }
      }
      const double obj_scale = 1.0 + std::abs(0.5 * x.dot(ws.H_eff * x) + ws.c.dot(x));
      if (flat_grad.cwiseAbs().maxCoeff() > 1e-10 * (1.0 + gz.cwiseAbs().maxCoeff())) {
        p = -Z * flat_grad / flat_grad.norm();
        ray = true;
        stationary = false;
      } else if (predicted_decrease > 1e-16 * obj_scale) {
        p = Z * z;
        stationary = false;
      }
    }

    if (stationary) {
      const Vector nu = multipliers(ws, W, grad);
      int drop = -1;
      double most_neg = -spec.tol_kkt;
      for (size_t k = 0; k < W.size(); ++k) {
        const double mu = nu(ws.me + static_cast<int>(k));
        if (mu < most_neg) {
          most_neg = mu;
          drop = static_cast<int>(k);
        }
      }
      if (drop < 0) return finalize(ws, x, W, QpStatus::Optimal, it, reg);
      W.erase(W.begin() + drop);
      continue;
    }

    // largest step along p keeping every inactive constraint satisfied
    double alpha = ray ? std::numeric_limits<double>::infinity() : 1.0;
    int blocking = -1;
    for (int i = 0; i < ws.mi; ++i) {
      if (std::find(W.begin(), W.end(), i) != W.end()) continue;
      const double gi_p = spec.G.row(i).dot(p);
      if (gi_p <= 1e-13 * (1.0 + p.norm())) continue;
      const double slack = spec.g(i) - spec.G.row(i).dot(x);
      const double ai = std::max(0.0, slack) / gi_p;
      if (ai < alpha - 1e-15) {
        alpha = ai;
        blocking = i;
      }
    }
    if (ray && blocking < 0)  // feasible set unbounded along a flat direction
      return finalize(ws, x, W, QpStatus::IterLimit, it, reg);
    x += alpha * p;
    if (blocking >= 0) {
      W.insert(std::upper_bound(W.begin(), W.end(), blocking), blocking);
      stalled = (alpha <= 1e-15) ? stalled + 1 : 0;
      if (stalled > ws.mi + ws.n + 8)
        return finalize(ws, x, W, QpStatus::IterLimit, it, reg);
    } else {
      stalled = 0;
    }
  }
  return finalize(ws, x, W, QpStatus::IterLimit, it, reg);
}

}  // namespace

FeasiblePointResult feasible_point(const Matrix& E, const Vector& e, const Matrix& G,
                                   const Vector& g) {
  FeasiblePointResult res;
  const int n = static_cast<int>(E.cols() > 0 ? E.cols() : G.cols());
  if (n == 0) {
    res.feasible = true;
    res.x = Vector(0);
    return res;
  }
  Vector x0 = Vector::Zero(n);
  if (E.rows() > 0) {
    x0 = E.completeOrthogonalDecomposition().solve(e);
    if ((E * x0 - e).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + e.cwiseAbs().maxCoeff())) {
      // inconsistent equalities; the least-squares residual separates
      Vector y = E * x0 - e;
      res.feasible = false;
      res.certificate = std::make_pair(Vector::Zero(G.rows()), y);
      return res;
    }
  }
  if (G.rows() == 0) {
    res.feasible = true;
    res.x = x0;
    return res;
  }
  if ((G * x0 - g).maxCoeff() <= 1e-12) {
    res.feasible = true;
    res.x = x0;
    return res;
  }

  // phase-1 over (x, s): minimize |s|^2 with Gx - s <= g, -s <= 0, Ex = e
  const int mi = static_cast<int>(G.rows());
  const int me = static_cast<int>(E.rows());
  QpSpec ph;
  ph.H = Matrix::Zero(n + mi, n + mi);
  ph.H.bottomRightCorner(mi, mi) = 2.0 * Matrix::Identity(mi, mi);
  ph.c = Vector::Zero(n + mi);
  ph.E = Matrix::Zero(me, n + mi);
  if (me > 0) ph.E.leftCols(n) = E;
  ph.e = e;
  ph.G = Matrix::Zero(2 * mi, n + mi);
  ph.G.topLeftCorner(mi, n) = G;
  ph.G.topRightCorner(mi, mi) = -Matrix::Identity(mi, mi);
  ph.G.bottomRightCorner(mi, mi) = -Matrix::Identity(mi, mi);
  ph.g = Vector::Zero(2 * mi);
  ph.g.head(mi) = g;
  ph.tol_kkt = 1e-10;

  Vector start = Vector::Zero(n + mi);
  start.head(n) = x0;
  start.tail(mi) = (G * x0 - g).cwiseMax(0.0);
  QpSolution sol = solve_with_start(ph, start);
  const Vector s = sol.x.tail(mi);
  if (s.cwiseAbs().maxCoeff() <= 1e-10) {
    res.feasible = true;
    res.x = sol.x.head(n);
    return res;
  }
  res.feasible = false;
  // Farkas pair from the phase-1 multipliers on Gx - s <= g
  Vector y = sol.ineq_multipliers.head(mi).cwiseMax(0.0);
  Vector z = sol.eq_multipliers;
  const double ynorm = y.cwiseAbs().maxCoeff();
  if (ynorm > 0) {
    y /= ynorm;
    z /= ynorm;
    Vector station = G.transpose() * y;
    if (me > 0) station += E.transpose() * z;
    const double value = y.dot(g) + (me > 0 ? z.dot(e) : 0.0);
    if (station.cwiseAbs().maxCoeff() <= 1e-7 && value < 0)
      res.certificate = std::make_pair(y, z);
  }
  return res;
}

QpSolution solve_qp(const QpSpec& spec) {
  const int n = spec.num_vars();
  if (spec.H.rows() != spec.H.cols() || spec.c.size() != n ||
      (spec.E.rows() > 0 && spec.E.cols() != n) || (spec.G.rows() > 0 && spec.G.cols() != n) ||
      spec.E.rows() != spec.e.size() || spec.G.rows() != spec.g.size())
    throw Error(ErrorCode::DimensionMismatch, "inconsistent QP dimensions");

  Vector start;
  if (spec.x0 && all_feasible(spec, *spec.x0, 1e-9)) {
    start = *spec.x0;
  } else {
    auto fp = feasible_point(spec.E, spec.e, spec.G, spec.g);
    if (!fp.feasible) {
      QpSolution sol;
      sol.status = QpStatus::Infeasible;
      sol.x = Vector::Zero(n);
      sol.infeasibility_certificate = fp.certificate;
      return sol;
    }
    start = fp.x;
  }
  return solve_with_start(spec, start);
}

}  // namespace phmin::qp
