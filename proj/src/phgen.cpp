#include "phmin/phgen.hpp"

#include <cmath>

namespace phmin::phgen {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Xoshiro256pp::next() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::pair<Vector, Matrix> sample_ph(const GenSpec& spec) {
  const int n = spec.n;
  Xoshiro256pp rng(spec.seed);
  Vector alpha(n);
  double rem = 1.0;
  for (int i = 0; i < n - 1; ++i) {
    alpha(i) = rng.uniform(0.0, rem);
    rem -= alpha(i);
  }
  alpha(n - 1) = rem;

  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double offsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double a = 0.0;
      switch (spec.variant) {
        case Variant::Balanced:
          a = rng.uniform(0.0, spec.c);
          break;
        case Variant::Sparse:
          a = (rng.u01() < spec.p) ? 0.0 : rng.uniform(0.0, spec.c);
          break;
        case Variant::Stiff:
          a = (rng.u01() < spec.p) ? rng.uniform(0.0, 1000.0 * spec.c)
                                   : rng.uniform(0.0, spec.c);
          break;
      }
      A(i, j) = a;
      offsum += a;
    }
    const double theta = rng.uniform(0.0, spec.c);
    A(i, i) = -offsum - theta;
  }
  return {alpha, A};
}

std::pair<Vector, Matrix> sample_discrete_ph(int n, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  Vector alpha(n);
  double rem = 1.0;
  for (int i = 0; i < n - 1; ++i) {
    alpha(i) = rng.uniform(0.0, rem);
    rem -= alpha(i);
  }
  alpha(n - 1) = rem;

  Matrix At = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    // Dirichlet over n transition cells plus one exit cell, via exponentials
    Vector gam(n + 1);
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
      gam(k) = -std::log(1.0 - rng.u01());
      total += gam(k);
    }
    const double scale = rng.uniform(0.3, 0.95);
    for (int j = 0; j < n; ++j) At(i, j) = scale * gam(j) / total;
  }
  return {alpha, At};
}

double lst_resolvent(const Vector& alpha, const Matrix& A, double s) {
  const int n = static_cast<int>(A.rows());
  const Matrix M = s * Matrix::Identity(n, n) - A;
  const Vector x = M.partialPivLu().solve(Vector::Ones(n));
  return -alpha.dot(A * x);
}

poly::RationalLst lst_of(const Vector& alpha, const Matrix& A) {
  const int n = static_cast<int>(A.rows());
  if (A.fullPivLu().rank() < n) throw Error(ErrorCode::SingularA, "A is singular");

  Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
  std::vector<poly::Complex> eigs;
  for (int i = 0; i < n; ++i)
    eigs.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
  // exact conjugate pairing for real coefficients
  for (auto& z : eigs)
    if (std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z))) z = poly::Complex(z.real(), 0.0);
  poly::Polynomial q = poly::from_roots(eigs);

  // p interpolated from q(s) L(s) at integer points away from the spectrum
  std::vector<double> pts;
  double s = 1.0;
  while (static_cast<int>(pts.size()) < n) {
    bool ok = true;
    for (const auto& z : eigs)
      if (std::abs(poly::Complex(s, 0.0) - z) < 1e-3) ok = false;
    if (ok) pts.push_back(s);
    s += 1.0;
  }
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd rhs(n);
  for (int r = 0; r < n; ++r) {
    double pw = 1.0;
    for (int c = 0; c < n; ++c) {
      V(r, c) = pw;
      pw *= pts[static_cast<size_t>(r)];
    }
    rhs(r) = q.eval(pts[static_cast<size_t>(r)]) * lst_resolvent(alpha, A, pts[static_cast<size_t>(r)]);
  }
  Eigen::VectorXd pc = V.fullPivLu().solve(rhs);
  std::vector<double> pcoef(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pcoef[static_cast<size_t>(i)] = pc(i);
  poly::Polynomial p(std::move(pcoef));
  const double pscale = p.coeffs.empty() ? 0.0 : p.eval(0.0);
  p = p.trimmed(1e-13 * std::abs(pscale));

  poly::RationalLst lst = poly::make_lst_from_coeffs(p, q);
  // L(0) = alpha 1 = 1 holds exactly for the true transform; strip the
  // interpolation round-off so downstream admissibility checks see it
  const double L0 = lst.p.eval(0.0) / lst.q.eval(0.0);
  if (L0 != 0.0 && std::abs(L0 - 1.0) < 1e-6) {
    for (double& x : lst.p.coeffs) x /= L0;
    lst.pf = poly::partial_fractions(lst.p, lst.q, lst.poles);
  }
  return lst;
}

int algebraic_degree(const Vector& alpha, const Matrix& A) {
  return lst_of(alpha, A).q.degree();
}

}  // namespace phmin::phgen
