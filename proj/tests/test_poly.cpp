#include <cmath>
#include <complex>

#include "doctest.h"
#include "phmin/phgen.hpp"
#include "phmin/poly.hpp"

using namespace phmin;
using poly::Complex;
using poly::Polynomial;

TEST_CASE("normalize leaves a monic coprime pair unchanged") {
  auto [p, q] = poly::normalize(Polynomial({1.0}), Polynomial({1.0, 1.0}));
  CHECK(p.coeffs == std::vector<double>{1.0});
  CHECK(q.coeffs == std::vector<double>{1.0, 1.0});
}

TEST_CASE("normalize cancels a common factor") {
  // 2(s+1) / 2(s+1)^2  ->  1 / (s+1)
  auto [p, q] = poly::normalize(Polynomial({2.0, 2.0}), Polynomial({2.0, 4.0, 2.0}));
  REQUIRE(p.degree() == 0);
  REQUIRE(q.degree() == 1);
  CHECK(p.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.coeffs[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize makes Example 5.2's denominator monic") {
  // p unchanged, q = (s+0.5)(s+0.8)^2 = s^3 + 2.1 s^2 + 1.44 s + 0.32
  Polynomial p({0.32, -0.536, 0.0294});
  Polynomial q = Polynomial({0.5, 1.0}) * Polynomial({0.8, 1.0}) * Polynomial({0.8, 1.0});
  auto [pn, qn] = poly::normalize(p, q);
  CHECK(qn.coeffs[3] == 1.0);
  CHECK(qn.coeffs[2] == doctest::Approx(2.1).epsilon(1e-14));
  CHECK(qn.coeffs[1] == doctest::Approx(1.44).epsilon(1e-14));
  CHECK(qn.coeffs[0] == doctest::Approx(0.32).epsilon(1e-14));
  CHECK(pn.coeffs == p.coeffs);
}

TEST_CASE("normalize errors") {
  CHECK_THROWS_AS((void)poly::normalize(Polynomial({1.0}), Polynomial{}), Error);
  CHECK_THROWS_AS((void)poly::normalize(Polynomial({1.0}), Polynomial({0.0, 1.0})), Error);
  // deg p >= deg q
  CHECK_THROWS_AS((void)poly::normalize(Polynomial({1.0, 2.0}), Polynomial({1.0, 1.0})), Error);
}

TEST_CASE("normalize is idempotent") {
  Polynomial p({0.32, -0.536, 0.0294});
  Polynomial q({0.32, 1.44, 2.1, 1.0});
  auto [p1, q1] = poly::normalize(p, q);
  auto [p2, q2] = poly::normalize(p1, q1);
  CHECK(p1.coeffs == p2.coeffs);
  CHECK(q1.coeffs == q2.coeffs);
}

TEST_CASE("roots: Example 5.1 spectrum") {
  // (s+1)((s+2.8)^2+0.16)
  Polynomial q = Polynomial({1.0, 1.0}) * Polynomial({2.8 * 2.8 + 0.16, 5.6, 1.0});
  auto ps = poly::roots(q);
  REQUIRE(ps.real_poles.size() == 1);
  REQUIRE(ps.complex_pairs.size() == 1);
  CHECK(ps.real_poles[0].lambda == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(ps.real_poles[0].mult == 1);
  CHECK(ps.complex_pairs[0].mu == doctest::Approx(-2.8).epsilon(1e-10));
  CHECK(ps.complex_pairs[0].omega == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(ps.complex_pairs[0].mult == 1);
}

TEST_CASE("roots: triple real root is one cluster") {
  Polynomial q({1.0, 3.0, 3.0, 1.0});  // (s+1)^3
  auto ps = poly::roots(q);
  REQUIRE(ps.real_poles.size() == 1);
  CHECK(ps.complex_pairs.empty());
  CHECK(ps.real_poles[0].mult == 3);
  CHECK(ps.real_poles[0].lambda == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("roots: a chain of distinct roots under a coarse tolerance is ambiguous") {
  // eight simple roots spaced 0.1 apart: adjacent pairs fall inside a 0.05
  // clustering radius, but the resulting chain is far too wide to be one
  // root and the derivative test refuses the merge
  std::vector<poly::Complex> rs;
  for (int k = 0; k < 8; ++k) rs.emplace_back(-1.0 - 0.1 * k, 0.0);
  Polynomial q = poly::from_roots(rs);
  CHECK_THROWS_AS((void)poly::roots(q, 0.05), Error);
  // at the default tolerance the same roots resolve cleanly
  auto ps = poly::roots(q);
  CHECK(ps.real_poles.size() == 8);
}

TEST_CASE("roots: random cubics match the factor oracle") {
  phgen::Xoshiro256pp rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const double r1 = rng.uniform(-3.0, -0.5);
    const double r2 = r1 + rng.uniform(0.2, 2.0) * (rng.u01() < 0.5 ? -1.0 : 1.0);
    const double r3 = r1 + rng.uniform(0.2, 2.0) * 2.0;
    Polynomial q = Polynomial({-r1, 1.0}) * Polynomial({-r2, 1.0}) * Polynomial({-r3, 1.0});
    auto ps = poly::roots(q);
    std::vector<double> got;
    for (const auto& rp : ps.real_poles)
      for (int k = 0; k < rp.mult; ++k) got.push_back(rp.lambda);
    REQUIRE(got.size() == 3);
    std::vector<double> want = {r1, r2, r3};
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-8));
  }
}

TEST_CASE("roots then expand is the identity for separated poles") {
  phgen::Xoshiro256pp rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    poly::PoleMultiset ps;
    ps.real_poles.push_back({rng.uniform(-1.0, -0.5), 1});
    ps.real_poles.push_back({rng.uniform(-3.0, -2.0), trial % 2 ? 2 : 1});
    ps.complex_pairs.push_back({rng.uniform(-6.0, -5.0), rng.uniform(0.5, 2.0), 1});
    ps.canonicalize();
    Polynomial q = poly::from_roots(ps.expand_all());
    auto rec = poly::roots(q);
    REQUIRE(rec.real_poles.size() == ps.real_poles.size());
    REQUIRE(rec.complex_pairs.size() == ps.complex_pairs.size());
    for (size_t i = 0; i < ps.real_poles.size(); ++i) {
      CHECK(rec.real_poles[i].mult == ps.real_poles[i].mult);
      CHECK(rec.real_poles[i].lambda == doctest::Approx(ps.real_poles[i].lambda).epsilon(1e-8));
    }
    for (size_t j = 0; j < ps.complex_pairs.size(); ++j) {
      CHECK(rec.complex_pairs[j].mult == ps.complex_pairs[j].mult);
      CHECK(rec.complex_pairs[j].mu == doctest::Approx(ps.complex_pairs[j].mu).epsilon(1e-8));
      CHECK(rec.complex_pairs[j].omega ==
            doctest::Approx(ps.complex_pairs[j].omega).epsilon(1e-8));
    }
  }
}

TEST_CASE("partial fractions: single pole") {
  auto lst = poly::make_lst_from_coeffs(Polynomial({1.0}), Polynomial({1.0, 1.0}));
  REQUIRE(lst.pf.real_coeffs.size() == 1);
  CHECK(lst.pf.real_coeffs[0][0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("partial fractions: Example 5.1 from expanded coefficients") {
  // L = 1.161/(s+1) - 0.23/(s+2.8+0.4i) - 0.23/(s+2.8-0.4i)
  poly::PoleMultiset ps;
  ps.real_poles.push_back({-1.0, 1});
  ps.complex_pairs.push_back({-2.8, 0.4, 1});
  poly::PfCoefficients pf;
  pf.real_coeffs.push_back({1.161});
  pf.complex_coeffs.push_back({Complex(-0.23, 0.0)});
  auto lst = poly::make_lst_from_pf(ps, pf);
  // round-trip through the coefficient route
  auto lst2 = poly::make_lst_from_coeffs(lst.p, lst.q);
  REQUIRE(lst2.pf.real_coeffs.size() == 1);
  REQUIRE(lst2.pf.complex_coeffs.size() == 1);
  CHECK(lst2.pf.real_coeffs[0][0] == doctest::Approx(1.161).epsilon(1e-10));
  CHECK(lst2.pf.complex_coeffs[0][0].real() == doctest::Approx(-0.23).epsilon(1e-10));
  CHECK(lst2.pf.complex_coeffs[0][0].imag() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("partial fractions agree with the resolvent oracle on random instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto [alpha, A] = phgen::sample_ph({3, 1.0, phgen::Variant::Balanced, seed});
    auto lst = phgen::lst_of(alpha, A);
    int checked = 0;
    double s = 1.25;
    while (checked < 16) {
      const double pf_val = lst.eval_pf(s);
      const double direct = phgen::lst_resolvent(alpha, A, s);
      CHECK(std::abs(pf_val - direct) <= 1e-8 * (1.0 + std::abs(direct)));
      s += 1.0;
      ++checked;
    }
  }
}

TEST_CASE("PF expansion reconstructs p/q at 16 integer points") {
  for (std::uint64_t seed = 3; seed <= 8; ++seed) {
    auto [alpha, A] = phgen::sample_ph({4, 1.0, phgen::Variant::Balanced, seed});
    auto lst = phgen::lst_of(alpha, A);
    int m = 1, checked = 0;
    while (checked < 16) {
      const double s = static_cast<double>(m++);
      bool near = false;
      for (const auto& z : lst.poles.expand_all())
        if (std::abs(Complex(s, 0.0) - z) < 1e-6) near = true;
      if (near) continue;
      const double lhs = lst.eval_pf(s);
      const double rhs = lst.p.eval(s) / lst.q.eval(s);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs) + 1e-15);
      ++checked;
    }
  }
}

TEST_CASE("validate_lst: Example 5.1 is admissible") {
  poly::PoleMultiset ps;
  ps.real_poles.push_back({-1.0, 1});
  ps.complex_pairs.push_back({-2.8, 0.4, 1});
  poly::PfCoefficients pf;
  pf.real_coeffs.push_back({1.161});
  pf.complex_coeffs.push_back({Complex(-0.23, 0.0)});
  auto rep = poly::validate_lst(poly::make_lst_from_pf(ps, pf));
  CHECK(rep.coprime);
  CHECK(rep.lst_at_zero_is_one);
  CHECK(rep.dominant_real_simple);
  CHECK(rep.admissible);
}

TEST_CASE("validate_lst: complex dominant pair fails (A3)") {
  // L = 2/((s+1)^2+1): L(0) = 1 but the dominant poles are -1 +- i
  auto lst = poly::make_lst_from_coeffs(Polynomial({2.0}), Polynomial({2.0, 2.0, 1.0}));
  auto rep = poly::validate_lst(lst);
  CHECK(rep.lst_at_zero_is_one);
  CHECK_FALSE(rep.dominant_real_simple);
  CHECK_FALSE(rep.admissible);
}

TEST_CASE("validate_lst: coprimality repaired by normalize") {
  // (s+2)/((s+1)(s+2)) -> 1/(s+1)
  Polynomial p({2.0, 1.0});
  Polynomial q = Polynomial({1.0, 1.0}) * Polynomial({2.0, 1.0});
  auto lst = poly::make_lst_from_coeffs(p, q);
  CHECK(lst.q.degree() == 1);
  auto rep = poly::validate_lst(lst);
  CHECK(rep.admissible);
}
