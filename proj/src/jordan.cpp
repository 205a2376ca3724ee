#include "phmin/jordan.hpp"

#include <cmath>
#include <complex>

namespace phmin::jordan {

using poly::Complex;

std::vector<std::pair<int, int>> RealJordanForm::row_groups() const {
  std::vector<std::pair<int, int>> groups;
  int off = 0;
  for (const auto& b : blocks) {
    const int rows = std::holds_alternative<RealBlock>(b)
                         ? std::get<RealBlock>(b).m
                         : 2 * std::get<ComplexBlock>(b).m;
    groups.emplace_back(off, rows);
    off += rows;
  }
  return groups;
}

RealJordanForm build_jordan(const poly::PoleMultiset& poles) {
  RealJordanForm jf;
  jf.n = poles.order();
  jf.dense = Eigen::MatrixXd::Zero(jf.n, jf.n);
  int off = 0;
  for (const auto& rp : poles.real_poles) {
    jf.blocks.push_back(RealBlock{rp.lambda, rp.mult});
    for (int r = 0; r < rp.mult; ++r) {
      jf.dense(off + r, off + r) = rp.lambda;
      if (r > 0) jf.dense(off + r, off + r - 1) = 1.0;
    }
    off += rp.mult;
  }
  for (const auto& cp : poles.complex_pairs) {
    jf.blocks.push_back(ComplexBlock{cp.mu, cp.omega, cp.mult});
    for (int r = 0; r < cp.mult; ++r) {
      const int i = off + 2 * r;
      jf.dense(i, i) = cp.mu;
      jf.dense(i, i + 1) = -cp.omega;
      jf.dense(i + 1, i) = cp.omega;
      jf.dense(i + 1, i + 1) = cp.mu;
      if (r > 0) {
        jf.dense(i, i - 2) = 1.0;
        jf.dense(i + 1, i - 1) = 1.0;
      }
    }
    off += 2 * cp.mult;
  }
  return jf;
}

double compute_xi(const poly::PoleMultiset& poles) {
  double acc = 0.0;
  for (const auto& rp : poles.real_poles) acc += rp.mult * rp.lambda;
  for (const auto& cp : poles.complex_pairs) acc += 2.0 * cp.mult * cp.mu;
  return -acc;
}

Eigen::VectorXd beta_basis_column(const RealJordanForm& jordan, double s) {
  const int n = jordan.n;
  Eigen::MatrixXd M = s * Eigen::MatrixXd::Identity(n, n) - jordan.dense;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  return -(jordan.dense * M.partialPivLu().solve(ones));
}

namespace {

bool near_pole(const poly::PoleMultiset& poles, double s) {
  for (const auto& z : poles.expand_all())
    if (std::abs(Complex(s, 0.0) - z) < 1e-6) return true;
  return false;
}

std::vector<double> sample_points(const poly::RationalLst& lst, int count, double start) {
  std::vector<double> pts;
  double s = start;
  while (static_cast<int>(pts.size()) < count) {
    if (!near_pole(lst.poles, s)) pts.push_back(s);
    s += 1.0;
  }
  return pts;
}

}  // namespace

double beta_residual(const Eigen::VectorXd& beta, const poly::RationalLst& lst,
                     const RealJordanForm& jordan) {
  double worst = 0.0;
  double s = 1.5;  // half-integers, disjoint from the solve's integer points
  int used = 0;
  while (used < 16) {
    if (!near_pole(lst.poles, s)) {
      const double model = beta.dot(beta_basis_column(jordan, s));
      const double target = lst.eval(s);
      worst = std::max(worst, std::abs(model - target) / (1.0 + std::abs(target)));
      ++used;
    }
    s += 1.0;
  }
  return worst;
}

Eigen::VectorXd compute_beta(const poly::RationalLst& lst, const RealJordanForm& jordan) {
  const int n = jordan.n;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const auto pts = sample_points(lst, n, 1.0 + attempt);
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) {
      M.col(k) = beta_basis_column(jordan, pts[static_cast<size_t>(k)]);
      v(k) = lst.eval(pts[static_cast<size_t>(k)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M.transpose());
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd beta = lu.solve(v);
    if (beta_residual(beta, lst, jordan) <= 1e-9) return beta;
  }
  throw Error(ErrorCode::SingularSampleSystem,
              "defining-equation sample system singular or residual too large");
}

Eigen::VectorXd beta_closed_form(const poly::RationalLst& lst, const RealJordanForm& jordan) {
  const auto& poles = lst.poles;
  Eigen::VectorXd beta(jordan.n);
  int off = 0;
  for (size_t i = 0; i < poles.real_poles.size(); ++i) {
    const double lam = poles.real_poles[i].lambda;
    const int m = poles.real_poles[i].mult;
    if (lam == 0.0) throw Error(ErrorCode::ZeroPole, "real pole at zero");
    const auto& c = lst.pf.real_coeffs[i];
    for (int r = 1; r <= m; ++r) {
      if (r == m) {
        beta(off + r - 1) = -c[static_cast<size_t>(m - 1)] / lam;
      } else {
        double tail = 0.0;
        double pw = 1.0;
        for (int l = 1; l <= m - r; ++l) {
          pw *= -1.0 / lam;
          tail += pw * c[static_cast<size_t>(r + l - 1)];
        }
        beta(off + r - 1) = -(c[static_cast<size_t>(r - 1)] + (lam + 1.0) * tail) / lam;
      }
    }
    off += m;
  }
  const double rt2 = std::sqrt(2.0);
  for (size_t j = 0; j < poles.complex_pairs.size(); ++j) {
    const auto& cp = poles.complex_pairs[j];
    const Complex z(cp.mu, cp.omega);
    if (std::abs(z) == 0.0) throw Error(ErrorCode::ZeroPole, "complex pole at zero");
    const auto& c = lst.pf.complex_coeffs[j];
    const Complex one_minus_i(1.0, -1.0);
    for (int r = 1; r <= cp.mult; ++r) {
      Complex val;
      if (r == cp.mult) {
        val = one_minus_i * c[static_cast<size_t>(r - 1)] / (rt2 * z);
      } else {
        Complex tail = 0.0;
        Complex pw = 1.0;
        for (int l = 1; l <= cp.mult - r; ++l) {
          pw *= -1.0 / z;
          tail += pw * c[static_cast<size_t>(r + l - 1)];
        }
        val = one_minus_i / (rt2 * z) * (c[static_cast<size_t>(r - 1)] + (1.0 + z) * tail);
      }
      beta(off + 2 * (r - 1)) = -val.real();
      beta(off + 2 * (r - 1) + 1) = val.imag();
    }
    off += 2 * cp.mult;
  }
  return beta;
}

ProblemData make_problem_data(const poly::RationalLst& lst) {
  ProblemData pd;
  pd.jordan = build_jordan(lst.poles);
  pd.beta = compute_beta(lst, pd.jordan);
  pd.xi = compute_xi(lst.poles);
  pd.n = pd.jordan.n;
  return pd;
}

}  // namespace phmin::jordan
