#include "phmin/verify.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "phmin/phgen.hpp"

namespace phmin::verify {

PhValidity ph_validity(const Vector& alpha, const Matrix& A) {
  PhValidity v;
  v.alpha_nonnegative = (alpha.array() >= -1e-8).all();
  v.alpha_sums_to_one = std::abs(alpha.sum() - 1.0) <= 1e-8;
  v.diagonal_nonpositive = true;
  v.offdiagonal_nonnegative = true;
  v.row_sums_nonpositive = true;
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    if (A(i, i) > 0.0) v.diagonal_nonpositive = false;
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      row += A(i, j);
      if (i != j && A(i, j) < -1e-8) v.offdiagonal_nonnegative = false;
    }
    if (row > 1e-8) v.row_sums_nonpositive = false;
  }
  v.valid = v.alpha_nonnegative && v.alpha_sums_to_one && v.diagonal_nonpositive &&
            v.offdiagonal_nonnegative && v.row_sums_nonpositive;
  return v;
}

namespace {

std::vector<double> verify_sample_points(const poly::PoleMultiset& poles) {
  std::vector<double> pts = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int m = 1; m <= 15; ++m) pts.push_back(static_cast<double>(m));
  std::vector<double> out;
  const auto all = poles.expand_all();
  for (double s : pts) {
    bool near = false;
    for (const auto& z : all)
      if (std::abs(std::complex<double>(s, 0.0) - z) < 1e-6) near = true;
    if (!near) out.push_back(s);
  }
  return out;
}

}  // namespace

VerifyReport check_representation(const Vector& alpha, const Matrix& A,
                                  const poly::RationalLst& lst, double tol) {
  VerifyReport rep;
  rep.validity = ph_validity(alpha, A);

  const int n = static_cast<int>(A.rows());
  if (n != lst.order()) throw Error(ErrorCode::DimensionMismatch, "order mismatch");

  for (double s : verify_sample_points(lst.poles)) {
    const double lhs = phgen::lst_resolvent(alpha, A, s);
    const double rhs = lst.eval(s);
    rep.lst_max_rel_err =
        std::max(rep.lst_max_rel_err, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  rep.lst_match = rep.lst_max_rel_err <= tol;

  // multiplicity-aware greedy assignment of eigenvalues to poles, compared
  // via cluster means
  Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> eigs;
  for (int i = 0; i < n; ++i)
    eigs.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());

  struct Slot {
    std::complex<double> pole;
    int capacity;
    std::complex<double> sum = 0.0;
    int used = 0;
  };
  std::vector<Slot> slots;
  for (const auto& rp : lst.poles.real_poles)
    slots.push_back({{rp.lambda, 0.0}, rp.mult});
  for (const auto& cp : lst.poles.complex_pairs) {
    slots.push_back({{cp.mu, cp.omega}, cp.mult});
    slots.push_back({{cp.mu, -cp.omega}, cp.mult});
  }
  struct Pair {
    double dist;
    size_t ei, si;
  };
  std::vector<Pair> pairs;
  for (size_t ei = 0; ei < eigs.size(); ++ei)
    for (size_t si = 0; si < slots.size(); ++si)
      pairs.push_back({std::abs(eigs[ei] - slots[si].pole), ei, si});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.ei != b.ei) return a.ei < b.ei;
    return a.si < b.si;
  });
  std::vector<bool> assigned(eigs.size(), false);
  for (const auto& pr : pairs) {
    if (assigned[pr.ei] || slots[pr.si].used >= slots[pr.si].capacity) continue;
    assigned[pr.ei] = true;
    slots[pr.si].sum += eigs[pr.ei];
    slots[pr.si].used++;
  }
  for (const auto& sl : slots) {
    if (sl.used != sl.capacity) {
      rep.spectrum_max_err = std::numeric_limits<double>::infinity();
      break;
    }
    const std::complex<double> mean = sl.sum / static_cast<double>(sl.used);
    rep.spectrum_max_err = std::max(rep.spectrum_max_err, std::abs(mean - sl.pole));
  }
  rep.spectrum_match = rep.spectrum_max_err <= 1e-4;

  rep.pass = rep.validity.valid && rep.lst_match && rep.spectrum_match;
  return rep;
}

double cdf(const Vector& alpha, const Matrix& A, double t) {
  if (t < 0.0) throw Error(ErrorCode::DimensionMismatch, "t must be nonnegative");
  const Matrix E = (A * t).exp();
  return 1.0 - alpha.dot(E * Vector::Ones(A.rows()));
}

double moments(const Vector& alpha, const Matrix& A, int k) {
  const int n = static_cast<int>(A.rows());
  if (A.fullPivLu().rank() < n) throw Error(ErrorCode::SingularA, "A is singular");
  if (k == 0) return 1.0;
  Eigen::PartialPivLU<Matrix> lu((-A).eval());
  Vector v = Vector::Ones(n);
  double fact = 1.0;
  for (int j = 1; j <= k; ++j) {
    v = lu.solve(v);
    fact *= static_cast<double>(j);
  }
  return fact * alpha.dot(v);
}

}  // namespace phmin::verify
