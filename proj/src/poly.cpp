#include "phmin/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace phmin::poly {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double Polynomial::eval(double s) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Complex Polynomial::eval(Complex s) const {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs.size() <= 1) return Polynomial{};
  std::vector<double> d(coeffs.size() - 1);
  for (size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = coeffs[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::trimmed(double abs_tol) const {
  std::vector<double> c = coeffs;
  while (!c.empty() && std::abs(c.back()) <= abs_tol) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  std::vector<double> c(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(double k, const Polynomial& a) {
  std::vector<double> c = a.coeffs;
  for (double& x : c) x *= k;
  return Polynomial(std::move(c));
}

Polynomial deflate_linear(const Polynomial& p, double r) {
  const int n = p.degree();
  if (n < 1) return Polynomial{};
  std::vector<double> q(static_cast<size_t>(n), 0.0);
  double carry = p.coeffs[static_cast<size_t>(n)];
  for (int k = n - 1; k >= 0; --k) {
    q[static_cast<size_t>(k)] = carry;
    carry = p.coeffs[static_cast<size_t>(k)] + r * carry;
  }
  return Polynomial(std::move(q));
}

Polynomial deflate_quadratic(const Polynomial& p, double b, double c) {
  const int n = p.degree();
  if (n < 2) return Polynomial{};
  std::vector<double> q(static_cast<size_t>(n - 1), 0.0);
  std::vector<double> r = p.coeffs;
  for (int k = n - 2; k >= 0; --k) {
    const double qk = r[static_cast<size_t>(k + 2)];
    q[static_cast<size_t>(k)] = qk;
    r[static_cast<size_t>(k + 1)] -= qk * b;
    r[static_cast<size_t>(k)] -= qk * c;
  }
  return Polynomial(std::move(q));
}

Polynomial from_roots(const std::vector<Complex>& roots) {
  Polynomial acc({1.0});
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    const Complex z = roots[i];
    if (z.imag() == 0.0) {
      acc = acc * Polynomial({-z.real(), 1.0});
      used[i] = true;
      continue;
    }
    // find the conjugate partner
    size_t partner = roots.size();
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(roots[j] - std::conj(z));
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    if (partner == roots.size()) throw Error(ErrorCode::ClusterAmbiguity, "unpaired complex root");
    used[i] = used[partner] = true;
    acc = acc * Polynomial({std::norm(z), -2.0 * z.real(), 1.0});
  }
  return acc;
}

int PoleMultiset::order() const {
  int n = 0;
  for (const auto& r : real_poles) n += r.mult;
  for (const auto& c : complex_pairs) n += 2 * c.mult;
  return n;
}

void PoleMultiset::canonicalize() {
  for (auto& c : complex_pairs) c.omega = std::abs(c.omega);
  std::sort(real_poles.begin(), real_poles.end(),
            [](const RealPole& a, const RealPole& b) { return a.lambda > b.lambda; });
  std::sort(complex_pairs.begin(), complex_pairs.end(),
            [](const ComplexPolePair& a, const ComplexPolePair& b) {
              if (a.mu != b.mu) return a.mu > b.mu;
              return a.omega < b.omega;
            });
}

bool PoleMultiset::dominant_real_simple() const {
  if (real_poles.empty()) return false;
  double lam1 = -std::numeric_limits<double>::infinity();
  for (const auto& r : real_poles) lam1 = std::max(lam1, r.lambda);
  if (lam1 >= 0.0) return false;  // an LST pole lies in the open left half-plane
  for (const auto& c : complex_pairs)
    if (c.mu >= lam1) return false;
  return true;
}

std::vector<Complex> PoleMultiset::expand_all() const {
  std::vector<Complex> all;
  for (const auto& r : real_poles)
    for (int k = 0; k < r.mult; ++k) all.emplace_back(r.lambda, 0.0);
  for (const auto& c : complex_pairs)
    for (int k = 0; k < c.mult; ++k) {
      all.emplace_back(c.mu, c.omega);
      all.emplace_back(c.mu, -c.omega);
    }
  return all;
}

double RationalLst::eval(double s) const {
  if (source == LstSource::PartialFractions) return eval_pf(s);
  return p.eval(s) / q.eval(s);
}

Complex RationalLst::eval(Complex s) const {
  if (source == LstSource::PartialFractions) {
    Complex acc = 0.0;
    for (size_t i = 0; i < poles.real_poles.size(); ++i) {
      const auto& rp = poles.real_poles[i];
      Complex d = s - rp.lambda;
      Complex dp = 1.0;
      for (int r = 1; r <= rp.mult; ++r) {
        dp *= d;
        acc += pf.real_coeffs[i][static_cast<size_t>(r - 1)] / dp;
      }
    }
    for (size_t j = 0; j < poles.complex_pairs.size(); ++j) {
      const auto& cp = poles.complex_pairs[j];
      const Complex z(cp.mu, cp.omega);
      Complex d1 = s - z, d2 = s - std::conj(z);
      Complex dp1 = 1.0, dp2 = 1.0;
      for (int r = 1; r <= cp.mult; ++r) {
        dp1 *= d1;
        dp2 *= d2;
        const Complex c = pf.complex_coeffs[j][static_cast<size_t>(r - 1)];
        acc += c / dp1 + std::conj(c) / dp2;
      }
    }
    return acc;
  }
  return p.eval(s) / q.eval(s);
}

double RationalLst::eval_pf(double s) const {
  return eval(Complex(s, 0.0)).real();
}

std::pair<Polynomial, Polynomial> normalize(const Polynomial& p_in, const Polynomial& q_in,
                                            double tol_cluster) {
  Polynomial q = q_in.trimmed(0.0);
  Polynomial p = p_in.trimmed(0.0);
  if (q.is_zero()) throw Error(ErrorCode::ZeroDenominator, "q is the zero polynomial");
  if (q.coeffs[0] == 0.0) throw Error(ErrorCode::ZeroDenominator, "q(0) = 0");

  const double lc = q.leading();
  if (lc != 1.0) {
    for (double& x : q.coeffs) x /= lc;
    for (double& x : p.coeffs) x /= lc;
    q.coeffs.back() = 1.0;
  }

  if (!p.is_zero() && p.degree() >= 1 && q.degree() >= 1) {
    // common-root cancellation; only rebuild from roots when a pair matched,
    // so inputs that are already coprime stay bit-identical
    PoleMultiset qp = roots(q, tol_cluster);
    std::vector<Complex> qroots = qp.expand_all();
    Polynomial pm = p;
    const double plc = pm.leading();
    for (double& x : pm.coeffs) x /= plc;
    std::vector<Complex> proots = roots(pm, tol_cluster).expand_all();

    std::vector<bool> p_used(proots.size(), false), q_used(qroots.size(), false);
    bool cancelled = false;
    for (size_t i = 0; i < qroots.size(); ++i) {
      for (size_t j = 0; j < proots.size(); ++j) {
        if (p_used[j]) continue;
        const double tol = tol_cluster * (1.0 + std::abs(qroots[i]));
        if (std::abs(qroots[i] - proots[j]) <= tol) {
          p_used[j] = true;
          q_used[i] = true;
          cancelled = true;
          break;
        }
      }
    }
    if (cancelled) {
      std::vector<Complex> qr, pr;
      for (size_t i = 0; i < qroots.size(); ++i)
        if (!q_used[i]) qr.push_back(qroots[i]);
      for (size_t j = 0; j < proots.size(); ++j)
        if (!p_used[j]) pr.push_back(proots[j]);
      q = from_roots(qr);
      p = plc * from_roots(pr);
      if (q.coeffs.empty() || q.coeffs[0] == 0.0)
        throw Error(ErrorCode::ZeroDenominator, "q(0) = 0 after cancellation");
    }
  }

  if (!p.is_zero() && p.degree() >= q.degree())
    throw Error(ErrorCode::DegreeViolation, "deg p >= deg q after cancellation");
  return {p, q};
}

namespace {

// Newton refinement of an m-fold root: z is a simple root of q^(m-1).
Complex refine_multiple_root(const Polynomial& q, Complex z, int mult) {
  Polynomial d = q;
  for (int k = 1; k < mult; ++k) d = d.derivative();
  const Polynomial dd = d.derivative();
  for (int it = 0; it < 30; ++it) {
    const Complex f = d.eval(z);
    const Complex fp = dd.eval(z);
    if (std::abs(fp) < 1e-300) break;
    const Complex step = f / fp;
    z -= step;
    if (std::abs(step) <= 4.0 * kEps * (1.0 + std::abs(z))) break;
  }
  return z;
}

// Termwise evaluation bound: sum_k |c_k| |z|^k, the scale below which a
// computed polynomial value is indistinguishable from zero.
double eval_noise_scale(const Polynomial& p, Complex z) {
  const double az = std::abs(z);
  double acc = 0.0, pw = 1.0;
  for (double c : p.coeffs) {
    acc += std::abs(c) * pw;
    pw *= az;
  }
  return acc;
}

// Checks that z looks like an m-fold root: every lower derivative vanishes to
// within rel_tol of its own evaluation-noise scale, and the m-th does not.
// Distinct roots clustered at spacing eta leave residuals ~eta^(m-j) in the
// j-th derivative, which this rejects for eta well above rel_tol.
bool confirm_multiplicity(const Polynomial& q, Complex z, int mult, double rel_tol) {
  Polynomial d = q;
  for (int j = 0; j < mult; ++j) {
    if (std::abs(d.eval(z)) > rel_tol * eval_noise_scale(d, z)) return false;
    d = d.derivative();
  }
  return std::abs(d.eval(z)) > rel_tol * eval_noise_scale(d, z);
}

struct Cluster {
  Complex center;
  std::vector<Complex> members;
};

}  // namespace

PoleMultiset roots(const Polynomial& q_in, double tol_cluster) {
  Polynomial q = q_in.trimmed(0.0);
  const int n = q.degree();
  if (n < 1) throw Error(ErrorCode::DegreeViolation, "roots: degree must be >= 1");
  if (n > 64) throw Error(ErrorCode::DegreeViolation, "roots: degree > 64 unsupported");
  if (q.leading() != 1.0) {
    const double lc = q.leading();
    for (double& x : q.coeffs) x /= lc;
    q.coeffs.back() = 1.0;
  }

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -q.coeffs[static_cast<size_t>(i)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::ClusterAmbiguity, "companion eigensolver failed");

  const Polynomial dq = q.derivative();
  std::vector<Complex> zs;
  zs.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Complex z(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    const Complex f = q.eval(z);
    const Complex fp = dq.eval(z);
    if (std::abs(fp) > 1e-12 * (1.0 + std::abs(f))) z -= f / fp;
    if (std::abs(z.imag()) <= tol_cluster * (1.0 + std::abs(z))) z = Complex(z.real(), 0.0);
    zs.push_back(z);
  }

  // pass 1: union-find at the base clustering radius
  std::vector<int> parent(zs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<size_t>(a)] != a) a = parent[static_cast<size_t>(a)];
    return a;
  };
  for (size_t i = 0; i < zs.size(); ++i)
    for (size_t j = i + 1; j < zs.size(); ++j) {
      const double tol = tol_cluster * (1.0 + std::max(std::abs(zs[i]), std::abs(zs[j])));
      if (std::abs(zs[i] - zs[j]) <= tol) {
        const int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  std::vector<Cluster> clusters;
  {
    std::vector<int> label(zs.size(), -1);
    for (size_t i = 0; i < zs.size(); ++i) {
      const int r = find(static_cast<int>(i));
      if (label[static_cast<size_t>(r)] < 0) {
        label[static_cast<size_t>(r)] = static_cast<int>(clusters.size());
        clusters.push_back({});
      }
      clusters[static_cast<size_t>(label[static_cast<size_t>(r)])].members.push_back(zs[i]);
    }
  }
  for (auto& cl : clusters) {
    Complex mean = 0.0;
    for (const auto& z : cl.members) mean += z;
    cl.center = mean / static_cast<double>(cl.members.size());
    // a cluster whose diameter greatly exceeds the radius indicates chained
    // merges of roots that are not actually coincident
    double diam = 0.0;
    for (size_t i = 0; i < cl.members.size(); ++i)
      for (size_t j = i + 1; j < cl.members.size(); ++j)
        diam = std::max(diam, std::abs(cl.members[i] - cl.members[j]));
    if (diam > 4.0 * tol_cluster * (1.0 + std::abs(cl.center)) && cl.members.size() > 1) {
      if (!confirm_multiplicity(q, refine_multiple_root(q, cl.center,
                                                        static_cast<int>(cl.members.size())),
                                static_cast<int>(cl.members.size()), 1e-11))
        throw Error(ErrorCode::ClusterAmbiguity, "overlapping clusters cannot be merged");
    }
  }

  // pass 2: multiplicity-aware merging; an m-fold root's companion eigenvalues
  // split by ~eps^(1/m), which exceeds the base radius for m >= 3, so clusters
  // near an anchor are gathered and merged whenever the derivative test
  // confirms the combined multiplicity at the refined center
  bool merged = true;
  while (merged && clusters.size() > 1) {
    merged = false;
    for (size_t i = 0; i < clusters.size() && !merged; ++i) {
      for (int m = n; m >= 3 && !merged; --m) {
        const double scale = 1.0 + std::abs(clusters[i].center);
        const double radius =
            scale * std::max(tol_cluster, std::pow(300.0 * kEps, 1.0 / static_cast<double>(m)));
        std::vector<size_t> group;
        int total = 0;
        Complex mean = 0.0;
        for (size_t j = 0; j < clusters.size(); ++j) {
          if (std::abs(clusters[j].center - clusters[i].center) <= radius) {
            group.push_back(j);
            total += static_cast<int>(clusters[j].members.size());
            mean += clusters[j].center * static_cast<double>(clusters[j].members.size());
          }
        }
        if (group.size() < 2 || total != m) continue;
        Complex cand = refine_multiple_root(q, mean / static_cast<double>(m), m);
        if (!confirm_multiplicity(q, cand, m, 1e-11)) continue;
        Cluster fused;
        fused.center = cand;
        for (size_t j : group)
          fused.members.insert(fused.members.end(), clusters[j].members.begin(),
                               clusters[j].members.end());
        for (auto it = group.rbegin(); it != group.rend(); ++it)
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(*it));
        clusters.push_back(fused);
        merged = true;
      }
    }
  }

  // refine every multiple root through the derivative chain
  for (auto& cl : clusters) {
    const int m = static_cast<int>(cl.members.size());
    if (m > 1) cl.center = refine_multiple_root(q, cl.center, m);
    if (std::abs(cl.center.imag()) <= tol_cluster * (1.0 + std::abs(cl.center)))
      cl.center = Complex(cl.center.real(), 0.0);
  }

  PoleMultiset out;
  std::vector<bool> used(clusters.size(), false);
  for (size_t i = 0; i < clusters.size(); ++i) {
    if (used[i]) continue;
    const Complex z = clusters[i].center;
    const int m = static_cast<int>(clusters[i].members.size());
    if (z.imag() == 0.0) {
      out.real_poles.push_back({z.real(), m});
      used[i] = true;
      continue;
    }
    size_t partner = clusters.size();
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < clusters.size(); ++j) {
      if (j == i || used[j]) continue;
      const double d = std::abs(clusters[j].center - std::conj(z));
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    const double tol = 16.0 * tol_cluster * (1.0 + std::abs(z));
    if (partner == clusters.size() || best > tol ||
        clusters[partner].members.size() != clusters[i].members.size())
      throw Error(ErrorCode::ClusterAmbiguity, "conjugate pairing failed");
    used[i] = used[partner] = true;
    const Complex zp = 0.5 * (z + std::conj(clusters[partner].center));
    out.complex_pairs.push_back({zp.real(), std::abs(zp.imag()), m});
  }
  out.canonicalize();
  return out;
}

namespace {

// Real basis polynomials for the PF expansion over monic q.
// Real pole lambda, order r: W = q/(s-lambda)^r.
// Complex pair (mu, omega), order r: the pair c/(s-z)^r + conj dissolves into
// 2 Re(c) * Re((s-conj z)^r) * q/D^r - 2 Im(c) * Im((s-conj z)^r) * q/D^r
// with D = (s-mu)^2 + omega^2.
struct PfBasis {
  std::vector<Polynomial> cols;   // one polynomial per real unknown
  int n = 0;
};

PfBasis pf_basis(const Polynomial& q, const PoleMultiset& poles) {
  PfBasis b;
  b.n = q.degree();
  for (const auto& rp : poles.real_poles) {
    Polynomial w = q;
    for (int r = 1; r <= rp.mult; ++r) {
      w = deflate_linear(w, rp.lambda);
      b.cols.push_back(w);
    }
  }
  for (const auto& cp : poles.complex_pairs) {
    const double bq = -2.0 * cp.mu;
    const double cq = cp.mu * cp.mu + cp.omega * cp.omega;
    Polynomial w = q;
    Polynomial u({1.0});  // Re((s - conj z)^r)
    Polynomial v;         // Im((s - conj z)^r)
    for (int r = 1; r <= cp.mult; ++r) {
      w = deflate_quadratic(w, bq, cq);
      // (u + iv) * (s - mu + i omega)
      Polynomial u2 = u * Polynomial({-cp.mu, 1.0}) + (-cp.omega) * v;
      Polynomial v2 = v * Polynomial({-cp.mu, 1.0}) + cp.omega * u;
      u = u2;
      v = v2;
      b.cols.push_back(2.0 * (u * w));
      b.cols.push_back(-2.0 * (v * w));
    }
  }
  return b;
}

}  // namespace

PfCoefficients partial_fractions(const Polynomial& p, const Polynomial& q,
                                 const PoleMultiset& poles) {
  const int n = q.degree();
  if (poles.order() != n)
    throw Error(ErrorCode::DimensionMismatch, "pole multiplicities do not sum to deg q");
  const PfBasis basis = pf_basis(q, poles);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    const auto& w = basis.cols[static_cast<size_t>(col)].coeffs;
    for (size_t row = 0; row < w.size() && row < static_cast<size_t>(n); ++row)
      M(static_cast<int>(row), col) = w[row];
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (size_t i = 0; i < p.coeffs.size() && i < static_cast<size_t>(n); ++i)
    rhs(static_cast<int>(i)) = p.coeffs[i];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible())
    throw Error(ErrorCode::SingularSystem, "PF basis system singular (pole clustering error?)");
  Eigen::VectorXd x = lu.solve(rhs);

  PfCoefficients out;
  int k = 0;
  for (const auto& rp : poles.real_poles) {
    std::vector<double> cs(static_cast<size_t>(rp.mult));
    for (int r = 0; r < rp.mult; ++r) cs[static_cast<size_t>(r)] = x(k++);
    out.real_coeffs.push_back(std::move(cs));
  }
  for (const auto& cp : poles.complex_pairs) {
    std::vector<Complex> cs(static_cast<size_t>(cp.mult));
    for (int r = 0; r < cp.mult; ++r) {
      const double re = x(k++);
      const double im = x(k++);
      cs[static_cast<size_t>(r)] = Complex(re, im);
    }
    out.complex_coeffs.push_back(std::move(cs));
  }
  return out;
}

ValidationReport validate_lst(const RationalLst& lst, double tol_cluster) {
  ValidationReport rep;
  rep.real_coefficients = true;

  // coprimality: no pole of q is a root of p within the clustering tolerance
  rep.coprime = true;
  if (!lst.p.is_zero() && lst.p.degree() >= 1) {
    Polynomial pm = lst.p;
    const double lc = pm.leading();
    for (double& x : pm.coeffs) x /= lc;
    try {
      const auto proots = roots(pm, tol_cluster).expand_all();
      for (const auto& z : lst.poles.expand_all()) {
        for (const auto& w : proots) {
          if (std::abs(z - w) <= tol_cluster * (1.0 + std::abs(z))) {
            rep.coprime = false;
            break;
          }
        }
        if (!rep.coprime) break;
      }
    } catch (const Error&) {
      rep.coprime = false;
      rep.detail += "p root extraction failed; ";
    }
  } else if (lst.p.is_zero()) {
    rep.coprime = false;
    rep.detail += "p is zero; ";
  }

  const double L0 = lst.eval(0.0);
  rep.lst_at_zero_is_one = std::abs(L0 - 1.0) <= 1e-12;
  if (!rep.lst_at_zero_is_one) rep.detail += "L(0) != 1; ";

  rep.dominant_real_simple = lst.poles.dominant_real_simple();
  if (!rep.dominant_real_simple) rep.detail += "no unique real dominant pole (A3); ";

  rep.admissible =
      rep.real_coefficients && rep.coprime && rep.lst_at_zero_is_one && rep.dominant_real_simple;
  return rep;
}

RationalLst make_lst_from_coeffs(const Polynomial& p, const Polynomial& q, double tol_cluster) {
  RationalLst lst;
  auto [pn, qn] = normalize(p, q, tol_cluster);
  lst.p = pn;
  lst.q = qn;
  lst.poles = roots(qn, tol_cluster);
  lst.pf = partial_fractions(pn, qn, lst.poles);
  lst.source = LstSource::Coefficients;
  return lst;
}

RationalLst make_lst_from_pf(const PoleMultiset& poles_in, const PfCoefficients& pf) {
  RationalLst lst;
  lst.poles = poles_in;
  lst.poles.canonicalize();
  // canonicalization may permute blocks; permute the coefficients along
  PfCoefficients pfc;
  pfc.real_coeffs.resize(lst.poles.real_poles.size());
  pfc.complex_coeffs.resize(lst.poles.complex_pairs.size());
  {
    std::vector<bool> used(poles_in.real_poles.size(), false);
    for (size_t i = 0; i < lst.poles.real_poles.size(); ++i) {
      for (size_t j = 0; j < poles_in.real_poles.size(); ++j) {
        if (!used[j] && poles_in.real_poles[j].lambda == lst.poles.real_poles[i].lambda &&
            poles_in.real_poles[j].mult == lst.poles.real_poles[i].mult) {
          pfc.real_coeffs[i] = pf.real_coeffs[j];
          used[j] = true;
          break;
        }
      }
    }
    std::vector<bool> cused(poles_in.complex_pairs.size(), false);
    for (size_t i = 0; i < lst.poles.complex_pairs.size(); ++i) {
      for (size_t j = 0; j < poles_in.complex_pairs.size(); ++j) {
        if (cused[j]) continue;
        const auto& a = poles_in.complex_pairs[j];
        const auto& b = lst.poles.complex_pairs[i];
        if (a.mu == b.mu && std::abs(a.omega) == b.omega && a.mult == b.mult) {
          pfc.complex_coeffs[i] = pf.complex_coeffs[j];
          // a pole supplied as mu - i*omega carries the conjugate coefficients
          if (a.omega < 0)
            for (auto& c : pfc.complex_coeffs[i]) c = std::conj(c);
          cused[j] = true;
          break;
        }
      }
    }
  }
  lst.pf = pfc;

  lst.q = from_roots(lst.poles.expand_all());
  // p = sum of PF terms multiplied by q
  const PfBasis basis = pf_basis(lst.q, lst.poles);
  Polynomial p;
  int k = 0;
  for (size_t i = 0; i < lst.poles.real_poles.size(); ++i)
    for (int r = 0; r < lst.poles.real_poles[i].mult; ++r)
      p = p + pfc.real_coeffs[i][static_cast<size_t>(r)] * basis.cols[static_cast<size_t>(k++)];
  for (size_t j = 0; j < lst.poles.complex_pairs.size(); ++j)
    for (int r = 0; r < lst.poles.complex_pairs[j].mult; ++r) {
      const Complex c = pfc.complex_coeffs[j][static_cast<size_t>(r)];
      p = p + c.real() * basis.cols[static_cast<size_t>(k)];
      p = p + c.imag() * basis.cols[static_cast<size_t>(k + 1)];
      k += 2;
    }
  const double scale = max_abs(p.coeffs);
  lst.p = p.trimmed(scale * 1e-14);
  lst.source = LstSource::PartialFractions;
  return lst;
}

}  // namespace phmin::poly
