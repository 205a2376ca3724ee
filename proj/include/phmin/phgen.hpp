#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "phmin/poly.hpp"

namespace phmin::phgen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// xoshiro256++ with splitmix64 seeding: bit-reproducible across platforms.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 significant bits.
  double u01();
  double uniform(double a, double b) { return a + (b - a) * u01(); }

 private:
  std::uint64_t s_[4];
};

enum class Variant { Balanced, Sparse, Stiff };

struct GenSpec {
  int n = 3;
  double c = 1.0;
  Variant variant = Variant::Balanced;
  std::uint64_t seed = 0;
  double p = 0.0;  // sparsity / stiffness probability
};

/// Random continuous PH representation: alpha by stick-breaking, off-diagonal
/// rates per variant, diagonal a_ii = -sum_offdiag - theta_i.
std::pair<Vector, Matrix> sample_ph(const GenSpec& spec);

/// Random discrete PH representation: alpha by stick-breaking, rows of
/// A_tilde drawn Dirichlet and scaled so every row sum stays <= 0.95.
std::pair<Vector, Matrix> sample_discrete_ph(int n, std::uint64_t seed);

/// Exact LST of (alpha, A): q from the spectrum of A, p by interpolation of
/// q(s) * L(s) at points away from the spectrum, then normalized to coprime
/// form with L(0) = 1.
poly::RationalLst lst_of(const Vector& alpha, const Matrix& A);

/// Degree of q after common-root cancellation.
int algebraic_degree(const Vector& alpha, const Matrix& A);

/// Resolvent evaluation -alpha A (sI - A)^{-1} 1^T, the oracle the rational
/// form is checked against.
double lst_resolvent(const Vector& alpha, const Matrix& A, double s);

}  // namespace phmin::phgen
