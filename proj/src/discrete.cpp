#include "phmin/discrete.hpp"

#include <cmath>
#include <limits>

namespace phmin::discrete {

GfValidation validate_gf(const GeneratingFunction& g, double tol_cluster) {
  GfValidation v;
  const poly::Polynomial p = g.p_tilde.trimmed(0.0);
  const poly::Polynomial q = g.q_tilde.trimmed(0.0);

  v.zero_mass_at_zero = p.coeffs.empty() || p.coeffs[0] == 0.0;
  if (!v.zero_mass_at_zero) v.detail += "p~ has nonzero constant term (mass at zero); ";
  v.unit_constant_term = !q.coeffs.empty() && std::abs(q.coeffs[0] - 1.0) <= 1e-12;
  if (!v.unit_constant_term) v.detail += "q~(0) != 1; ";

  const int n = std::max(p.degree(), q.degree());
  if (n < 1) {
    v.detail += "degenerate GF; ";
    return v;
  }
  auto coeff_at = [](const poly::Polynomial& poly_, int k) {
    return k >= 0 && k <= poly_.degree() ? poly_.coeffs[static_cast<size_t>(k)] : 0.0;
  };
  const double pn = coeff_at(p, n), qn = coeff_at(q, n);
  v.top_coefficient = pn * pn + qn * qn != 0.0;

  v.sums_to_one = std::abs(g.eval(1.0) - 1.0) <= 1e-12;
  if (!v.sums_to_one) v.detail += "G(1) != 1; ";

  // coprimality in z, by root matching
  v.coprime = true;
  try {
    if (!p.is_zero() && p.degree() >= 1 && q.degree() >= 1) {
      poly::Polynomial pm = p, qm = q;
      const double plc = pm.leading(), qlc = qm.leading();
      for (double& x : pm.coeffs) x /= plc;
      for (double& x : qm.coeffs) x /= qlc;
      const auto proots = poly::roots(pm, tol_cluster).expand_all();
      const auto qroots = poly::roots(qm, tol_cluster).expand_all();
      for (const auto& z : qroots)
        for (const auto& w : proots)
          if (std::abs(z - w) <= tol_cluster * (1.0 + std::abs(z))) v.coprime = false;
    }
  } catch (const Error&) {
    v.coprime = false;
  }
  if (!v.coprime) v.detail += "p~ and q~ share a root; ";

  v.min_modulus_root_ok = false;
  try {
    poly::Polynomial qm = q;
    const double qlc = qm.leading();
    for (double& x : qm.coeffs) x /= qlc;
    const auto qroots = poly::roots(qm, tol_cluster).expand_all();
    double min_mod = std::numeric_limits<double>::infinity();
    poly::Complex min_root;
    for (const auto& z : qroots)
      if (std::abs(z) < min_mod) {
        min_mod = std::abs(z);
        min_root = z;
      }
    bool unique = true;
    for (const auto& z : qroots)
      if (std::abs(z - min_root) > tol_cluster * (1.0 + min_mod) &&
          std::abs(std::abs(z) - min_mod) <= tol_cluster * (1.0 + min_mod))
        unique = false;
    v.min_modulus_root_ok = unique && min_root.imag() == 0.0 && min_root.real() > 1.0;
  } catch (const Error&) {
  }
  if (!v.min_modulus_root_ok) v.detail += "minimal-modulus root of q~ not real > 1; ";

  v.valid = v.zero_mass_at_zero && v.unit_constant_term && v.top_coefficient && v.coprime &&
            v.sums_to_one && v.min_modulus_root_ok;
  return v;
}

poly::RationalLst to_continuous(const GeneratingFunction& g, double tol_cluster) {
  const GfValidation v = validate_gf(g, tol_cluster);
  if (!v.valid) throw Error(ErrorCode::InvalidGf, v.detail);

  const int n = g.order();
  auto coeff_at = [](const poly::Polynomial& poly_, int k) {
    return k >= 0 && k <= poly_.degree() ? poly_.coeffs[static_cast<size_t>(k)] : 0.0;
  };
  // (s+1)^k by binomial expansion in exact double arithmetic
  std::vector<poly::Polynomial> s_plus_1_pow(static_cast<size_t>(n) + 1);
  s_plus_1_pow[0] = poly::Polynomial({1.0});
  for (int k = 1; k <= n; ++k)
    s_plus_1_pow[static_cast<size_t>(k)] =
        s_plus_1_pow[static_cast<size_t>(k - 1)] * poly::Polynomial({1.0, 1.0});

  poly::Polynomial p0, q0;
  for (int r = 1; r <= n; ++r)
    p0 = p0 + coeff_at(g.p_tilde, r) * s_plus_1_pow[static_cast<size_t>(n - r)];
  for (int r = 0; r <= n; ++r)
    q0 = q0 + coeff_at(g.q_tilde, r) * s_plus_1_pow[static_cast<size_t>(n - r)];

  return poly::make_lst_from_coeffs(p0, q0, tol_cluster);
}

DiscreteSolveResult solve_discrete(const GeneratingFunction& g, const am::AmConfig& config) {
  DiscreteSolveResult res;
  res.continuous = to_continuous(g);
  jordan::ProblemData pd = jordan::make_problem_data(res.continuous);
  pd.xi = 1.0;  // enforces a_ii >= -1 so A~ = A + I is entrywise nonnegative
  res.am_report = am::run_am(pd, config);
  if (res.am_report.outcome == am::Outcome::RepresentationFound) {
    const auto rep = am::extract_representation(res.am_report.alpha, res.am_report.final.A);
    DiscretePhRepresentation d;
    d.alpha_tilde = rep.alpha;
    d.A_tilde = rep.A + Matrix::Identity(rep.A.rows(), rep.A.cols());
    res.representation = d;
  }
  return res;
}

GeneratingFunction gf_of(const Vector& alpha_tilde, const Matrix& A_tilde) {
  const int n = static_cast<int>(A_tilde.rows());
  // q~(z) = det(I - z A~) = prod(1 - gamma_i z) over the spectrum
  Eigen::EigenSolver<Matrix> es(A_tilde, /*computeEigenvectors=*/false);
  std::vector<poly::Complex> gammas;
  for (int i = 0; i < n; ++i) {
    poly::Complex gz(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    if (std::abs(gz.imag()) <= 1e-12 * (1.0 + std::abs(gz))) gz = poly::Complex(gz.real(), 0.0);
    gammas.push_back(gz);
  }
  poly::Polynomial q({1.0});
  std::vector<bool> used(gammas.size(), false);
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (used[i]) continue;
    const poly::Complex gam = gammas[i];
    if (gam.imag() == 0.0) {
      q = q * poly::Polynomial({1.0, -gam.real()});
      used[i] = true;
    } else {
      size_t partner = gammas.size();
      double best = std::numeric_limits<double>::infinity();
      for (size_t j = i + 1; j < gammas.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(gammas[j] - std::conj(gam));
        if (d < best) {
          best = d;
          partner = j;
        }
      }
      if (partner == gammas.size())
        throw Error(ErrorCode::ClusterAmbiguity, "unpaired complex eigenvalue");
      used[i] = used[partner] = true;
      // (1 - gz)(1 - conj(g) z) = 1 - 2 Re(g) z + |g|^2 z^2
      q = q * poly::Polynomial({1.0, -2.0 * gam.real(), std::norm(gam)});
    }
  }

  // p~ interpolated from G(z) q~(z); p~(0) = 0 pinned, so n unknowns
  const Matrix IA = Matrix::Identity(n, n) - A_tilde;
  auto G = [&](double z) {
    const Matrix M = Matrix::Identity(n, n) - z * A_tilde;
    return z * alpha_tilde.dot(IA * M.partialPivLu().solve(Vector::Ones(n)));
  };
  std::vector<double> pts;
  double z = 0.15;
  while (static_cast<int>(pts.size()) < n) {
    pts.push_back(z);
    z += 0.1;
  }
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd rhs(n);
  for (int r = 0; r < n; ++r) {
    const double zr = pts[static_cast<size_t>(r)];
    double pw = zr;
    for (int c = 0; c < n; ++c) {
      V(r, c) = pw;
      pw *= zr;
    }
    rhs(r) = G(zr) * q.eval(zr);
  }
  Eigen::VectorXd pc = V.fullPivLu().solve(rhs);
  std::vector<double> pcoef(static_cast<size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) pcoef[static_cast<size_t>(i + 1)] = pc(i);
  poly::Polynomial p(std::move(pcoef));
  const double pmax = [&] {
    double m = 0.0;
    for (double x : p.coeffs) m = std::max(m, std::abs(x));
    return m;
  }();
  p = p.trimmed(1e-12 * pmax);

  return reduce_gf(p, q);
}

GeneratingFunction reduce_gf(const poly::Polynomial& p_in, const poly::Polynomial& q_in,
                             double tol_cluster) {
  poly::Polynomial p = p_in.trimmed(0.0), q = q_in.trimmed(0.0);
  if (q.is_zero() || q.coeffs[0] == 0.0)
    throw Error(ErrorCode::InvalidGf, "q~(0) must be nonzero");
  if (!p.is_zero() && p.degree() >= 1 && q.degree() >= 1) {
    poly::Polynomial pm = p, qm = q;
    const double plc = pm.leading(), qlc = qm.leading();
    for (double& x : pm.coeffs) x /= plc;
    for (double& x : qm.coeffs) x /= qlc;
    auto proots = poly::roots(pm, tol_cluster).expand_all();
    auto qroots = poly::roots(qm, tol_cluster).expand_all();
    std::vector<bool> p_used(proots.size(), false), q_used(qroots.size(), false);
    bool cancelled = false;
    for (size_t i = 0; i < qroots.size(); ++i)
      for (size_t j = 0; j < proots.size(); ++j) {
        if (p_used[j]) continue;
        if (std::abs(qroots[i] - proots[j]) <= tol_cluster * (1.0 + std::abs(qroots[i]))) {
          p_used[j] = true;
          q_used[i] = true;
          cancelled = true;
          break;
        }
      }
    if (cancelled) {
      std::vector<poly::Complex> pr, qr;
      for (size_t j = 0; j < proots.size(); ++j)
        if (!p_used[j]) pr.push_back(proots[j]);
      for (size_t i = 0; i < qroots.size(); ++i)
        if (!q_used[i]) qr.push_back(qroots[i]);
      p = plc * poly::from_roots(pr);
      q = qlc * poly::from_roots(qr);
      if (q.coeffs.empty() || q.coeffs[0] == 0.0)
        throw Error(ErrorCode::InvalidGf, "q~(0) vanished after cancellation");
    }
  }
  const double q0 = q.coeffs[0];
  for (double& x : q.coeffs) x /= q0;
  for (double& x : p.coeffs) x /= q0;
  GeneratingFunction out;
  out.p_tilde = p;
  out.q_tilde = q;
  return out;
}

}  // namespace phmin::discrete
