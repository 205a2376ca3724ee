#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "phmin/poly.hpp"

namespace phmin::jordan {

struct RealBlock {
  double lambda = 0.0;
  int m = 1;  // block size
};

struct ComplexBlock {
  double mu = 0.0;
  double omega = 0.0;  // stored positive; Theta(mu,omega) = [[mu,-omega],[omega,mu]]
  int m = 1;           // number of 2x2 cells, block size 2m
};

using Block = std::variant<RealBlock, ComplexBlock>;

/// Real Jordan form with exactly one block per distinct pole, real blocks
/// first. Blocks are lower bidiagonal: eigenvalue cells on the diagonal,
/// identity cells on the subdiagonal.
struct RealJordanForm {
  std::vector<Block> blocks;
  int n = 0;
  Eigen::MatrixXd dense;

  /// Row offset and row count of each block in the dense matrix.
  std::vector<std::pair<int, int>> row_groups() const;
};

/// Everything the alternating-minimization loop consumes.
struct ProblemData {
  RealJordanForm jordan;
  Eigen::VectorXd beta;
  double xi = 0.0;
  int n = 0;
};

RealJordanForm build_jordan(const poly::PoleMultiset& poles);

double compute_xi(const poly::PoleMultiset& poles);

/// Unique beta with -beta J (sI-J)^{-1} 1^T = L(s), from the n x n sampling
/// linear solve at deterministic integer points (near-pole points skipped).
/// Retries with shifted points up to 5 times before failing.
Eigen::VectorXd compute_beta(const poly::RationalLst& lst, const RealJordanForm& jordan);

/// beta per the closed-form recursions of the defining equation's proof,
/// retained as a cross-check; the complex-block expressions carry the
/// printed (1-i)/sqrt(2) factor, which is known to disagree with the
/// defining-equation solution by ~sqrt(2) (see compute_beta for the
/// authoritative route).
Eigen::VectorXd beta_closed_form(const poly::RationalLst& lst, const RealJordanForm& jordan);

/// -J (sI - J)^{-1} 1^T, the column the defining equation samples.
Eigen::VectorXd beta_basis_column(const RealJordanForm& jordan, double s);

/// Max relative residual of the defining equation over 16 fresh sample
/// points (not used by the solve).
double beta_residual(const Eigen::VectorXd& beta, const poly::RationalLst& lst,
                     const RealJordanForm& jordan);

ProblemData make_problem_data(const poly::RationalLst& lst);

}  // namespace phmin::jordan
