#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "phmin/errors.hpp"

namespace phmin::qp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense convex QP: minimize 1/2 x'Hx + c'x subject to Ex = e, Gx <= g.
/// H is symmetrized on use; PSD (possibly singular) is expected.
struct QpSpec {
  Matrix H;
  Vector c;
  Matrix E;  // may have zero rows
  Vector e;
  Matrix G;  // may have zero rows
  Vector g;
  double tol_kkt = 1e-10;
  int max_iter = 0;  // 0 = automatic cap from problem size

  std::optional<Vector> x0;               // optional feasible warm start
  std::vector<int> active_hint;           // optional initial working set

  int num_vars() const { return static_cast<int>(H.rows()); }
};

enum class QpStatus { Optimal, Infeasible, IterLimit };

struct KktResiduals {
  double primal_eq = 0.0;
  double primal_ineq = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
};

struct QpSolution {
  Vector x;
  double objective = 0.0;
  Vector eq_multipliers;
  Vector ineq_multipliers;
  QpStatus status = QpStatus::IterLimit;
  KktResiduals kkt;
  double regularization = 0.0;
  int iterations = 0;
  std::vector<int> active_set;

  // Farkas certificate (y, z): y >= 0, G'y + E'z = 0, g'y + e'z < 0
  std::optional<std::pair<Vector, Vector>> infeasibility_certificate;
};

struct FeasiblePointResult {
  bool feasible = false;
  Vector x;
  std::optional<std::pair<Vector, Vector>> certificate;
};

/// Primal active-set solver. Deterministic: ties on entering/leaving
/// constraints break toward the smallest index.
QpSolution solve_qp(const QpSpec& spec);

/// Phase-1: a point with Ex = e and Gx <= g within 1e-10, or an
/// infeasibility certificate.
FeasiblePointResult feasible_point(const Matrix& E, const Vector& e, const Matrix& G,
                                   const Vector& g);

}  // namespace phmin::qp
