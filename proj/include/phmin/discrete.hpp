#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "phmin/am.hpp"
#include "phmin/poly.hpp"

namespace phmin::discrete {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Probability generating function G(z) = p~(z)/q~(z), p~ with zero constant
/// term, q~ with constant term 1.
struct GeneratingFunction {
  poly::Polynomial p_tilde;
  poly::Polynomial q_tilde;

  int order() const {
    return std::max(p_tilde.degree(), q_tilde.degree());
  }
  double eval(double z) const { return p_tilde.eval(z) / q_tilde.eval(z); }
  poly::Complex eval(poly::Complex z) const { return p_tilde.eval(z) / q_tilde.eval(z); }
};

struct GfValidation {
  bool zero_mass_at_zero = false;   // p~(0) = 0
  bool unit_constant_term = false;  // q~(0) = 1
  bool top_coefficient = false;     // p~_n^2 + q~_n^2 != 0
  bool coprime = false;
  bool sums_to_one = false;         // G(1) = 1
  bool min_modulus_root_ok = false; // real, simple-dominant, > 1
  bool valid = false;
  std::string detail;
};

struct DiscretePhRepresentation {
  Vector alpha_tilde;
  Matrix A_tilde;
};

struct DiscreteSolveResult {
  am::AmReport am_report;
  poly::RationalLst continuous;  // L0(s) the solver ran on
  std::optional<DiscretePhRepresentation> representation;  // on success
};

GfValidation validate_gf(const GeneratingFunction& g, double tol_cluster = 1e-6);

/// Exact reduction L0(s) = G(1/(s+1)) assembled by binomial expansion:
/// p0(s) = sum_r p~_r (s+1)^{n-r}, q0(s) = sum_r q~_r (s+1)^{n-r}.
poly::RationalLst to_continuous(const GeneratingFunction& g, double tol_cluster = 1e-6);

/// Continuous pipeline on to_continuous(g) with xi overridden to 1; on
/// success lifts back via A~ = A + I.
DiscreteSolveResult solve_discrete(const GeneratingFunction& g, const am::AmConfig& config);

/// Generating function of a discrete representation, reduced to coprime form
/// with q~(0) = 1.
GeneratingFunction gf_of(const Vector& alpha_tilde, const Matrix& A_tilde);

/// Cancels common roots of p~ and q~ and rescales so q~(0) = 1.
GeneratingFunction reduce_gf(const poly::Polynomial& p_in, const poly::Polynomial& q_in,
                             double tol_cluster = 1e-6);

}  // namespace phmin::discrete
