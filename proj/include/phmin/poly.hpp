#pragma once

#include <complex>
#include <string>
#include <vector>

#include "phmin/errors.hpp"

namespace phmin::poly {

using Complex = std::complex<double>;

/// Real polynomial with coefficients stored in ascending degree order.
/// The zero polynomial is the empty coefficient list.
struct Polynomial {
  std::vector<double> coeffs;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) {}

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  double leading() const { return coeffs.empty() ? 0.0 : coeffs.back(); }

  double eval(double s) const;
  Complex eval(Complex s) const;
  Polynomial derivative() const;

  /// Drops trailing coefficients that are exactly zero (or denormal noise).
  Polynomial trimmed(double abs_tol = 0.0) const;
};

Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double k, const Polynomial& a);

/// Quotient of p by the linear factor (s - r); p must be divisible (remainder
/// is discarded, which is the standard deflation step).
Polynomial deflate_linear(const Polynomial& p, double r);
/// Quotient of p by the monic quadratic s^2 + b s + c.
Polynomial deflate_quadratic(const Polynomial& p, double b, double c);

/// Monic polynomial with the given roots; conjugate pairs are expanded as
/// real quadratics so the coefficients stay exactly real.
Polynomial from_roots(const std::vector<Complex>& roots);

struct RealPole {
  double lambda = 0.0;
  int mult = 1;
};

struct ComplexPolePair {
  double mu = 0.0;
  double omega = 0.0;  // stored positive
  int mult = 1;
};

/// Clustered spectrum of q: distinct real poles and distinct conjugate pairs,
/// each with its multiplicity. Canonical order: real poles by descending
/// lambda, then pairs by descending mu (ties by ascending omega).
struct PoleMultiset {
  std::vector<RealPole> real_poles;
  std::vector<ComplexPolePair> complex_pairs;

  int order() const;          // sum n_i + 2 sum n_j
  void canonicalize();        // sort into canonical order, force omega > 0
  /// True when there is exactly one pole of maximal real part and it is real.
  bool dominant_real_simple() const;
  /// All poles as a flat complex multiset (conjugates included).
  std::vector<Complex> expand_all() const;
};

/// Partial-fraction coefficients, blocked like the pole multiset:
/// real_coeffs[i][r-1] multiplies (s-lambda_i)^{-r}; complex_coeffs[j][r-1]
/// multiplies (s-mu_j-i*omega_j)^{-r} (the conjugate pole's coefficients are
/// implied).
struct PfCoefficients {
  std::vector<std::vector<double>> real_coeffs;
  std::vector<std::vector<Complex>> complex_coeffs;
};

enum class LstSource { Coefficients, PartialFractions };

/// A rational Laplace-Stieltjes transform L(s) = p(s)/q(s), q monic, with its
/// pole multiset and partial-fraction expansion.
struct RationalLst {
  Polynomial p;
  Polynomial q;  // monic
  PoleMultiset poles;
  PfCoefficients pf;
  LstSource source = LstSource::Coefficients;

  int order() const { return q.degree(); }
  double eval(double s) const;
  Complex eval(Complex s) const;
  double eval_pf(double s) const;
};

struct ValidationReport {
  bool real_coefficients = true;  // (A1), true by representation
  bool coprime = false;           // (A2)
  bool lst_at_zero_is_one = false;
  bool dominant_real_simple = false;
  bool admissible = false;
  std::string detail;
};

/// Makes q monic, cancels common roots of p and q (within tol_cluster) by
/// deflation, and rescales p by the same factor as q so the value of p/q is
/// preserved.
std::pair<Polynomial, Polynomial> normalize(const Polynomial& p, const Polynomial& q,
                                            double tol_cluster = 1e-6);

/// Clustered roots of a monic polynomial via companion-matrix eigenvalues,
/// one Newton polish step, and multiplicity-aware cluster merging.
PoleMultiset roots(const Polynomial& q, double tol_cluster = 1e-6);

/// Partial-fraction coefficients of p/q for the given poles, obtained from
/// the linear system that matches p's coefficients against the PF basis
/// expanded over q.
PfCoefficients partial_fractions(const Polynomial& p, const Polynomial& q,
                                 const PoleMultiset& poles);

ValidationReport validate_lst(const RationalLst& lst, double tol_cluster = 1e-6);

/// Assembles a RationalLst from coefficient form (normalize + roots + pf).
RationalLst make_lst_from_coeffs(const Polynomial& p, const Polynomial& q,
                                 double tol_cluster = 1e-6);

/// Assembles a RationalLst directly from poles and PF coefficients, bypassing
/// root finding; q is expanded from the poles and p from the PF sum.
RationalLst make_lst_from_pf(const PoleMultiset& poles, const PfCoefficients& pf);

}  // namespace phmin::poly
