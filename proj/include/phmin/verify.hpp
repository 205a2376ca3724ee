#pragma once

#include <Eigen/Dense>
#include <string>

#include "phmin/poly.hpp"

namespace phmin::verify {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct PhValidity {
  bool alpha_nonnegative = false;
  bool alpha_sums_to_one = false;
  bool diagonal_nonpositive = false;
  bool offdiagonal_nonnegative = false;
  bool row_sums_nonpositive = false;
  bool valid = false;
};

struct VerifyReport {
  PhValidity validity;
  double lst_max_rel_err = 0.0;
  double spectrum_max_err = 0.0;
  bool lst_match = false;
  bool spectrum_match = false;
  bool pass = false;
};

PhValidity ph_validity(const Vector& alpha, const Matrix& A);

/// Confirms a claimed representation independently of the solver:
/// (a) PH validity, (b) resolvent-vs-L(s) match at 20 deterministic sample
/// points, (c) spectrum of A against the pole multiset. Eigenvalues are
/// matched to poles multiplicity-aware and compared through cluster means,
/// since an m-fold eigenvalue of a floating-point matrix splits by
/// ~(perturbation)^(1/m) even when the matrix is numerically similar to J.
VerifyReport check_representation(const Vector& alpha, const Matrix& A,
                                  const poly::RationalLst& lst, double tol);

/// F(t) = 1 - alpha e^{At} 1^T via scaling-and-squaring Pade.
double cdf(const Vector& alpha, const Matrix& A, double t);

/// m_k = k! alpha (-A)^{-k} 1^T.
double moments(const Vector& alpha, const Matrix& A, int k);

}  // namespace phmin::verify
