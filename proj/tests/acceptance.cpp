// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "phmin/io.hpp"
#include "phmin/phgen.hpp"
#include "phmin/verify.hpp"
#include "test_helpers.hpp"

using namespace phmin;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::string g_data_dir = "data";
std::vector<std::vector<double>> g_traces;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << detail
            << std::endl;
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

io::SolveResult run_file(const std::string& name, const io::SolveOptions& opts) {
  auto input = io::parse_input_file(g_data_dir + "/" + name);
  auto res = io::solve_pipeline(input, opts);
  for (const auto& r : res.all_runs) g_traces.push_back(r.f_trace);
  return res;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  io::SolveOptions opts;
  opts.init = "jordan-plus-ones";
  auto res = run_file("ex51.json", opts);
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  bool pass = true;
  pass &= res.best.outcome == am::Outcome::RepresentationFound;
  pass &= res.best.final.F <= 1e-8;
  pass &= res.verification && res.verification->pass;
  pass &= res.problem.xi == 6.6;
  const double resid = jordan::beta_residual(res.problem.beta, res.lst, res.problem.jordan);
  pass &= resid <= 1e-9;
  pass &= elapsed <= 1.0;
  d << "Example 5.1 jordan-plus-ones: F=" << io::format_g17(res.best.final.F)
    << " verified=" << (res.verification && res.verification->pass) << " xi=" << res.problem.xi
    << " beta_resid=" << io::format_g17(resid) << " time=" << elapsed << "s";
  report(1, pass, d.str());
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  io::SolveOptions opts;
  opts.init = "jordan";
  auto found = run_file("ex53.json", opts);
  opts.init = "minus-xi-i";
  auto stalled = run_file("ex53.json", opts);
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  bool pass = true;
  pass &= found.best.outcome == am::Outcome::RepresentationFound;
  pass &= found.best.final.F <= 1e-8;
  pass &= found.verification && found.verification->pass;
  pass &= stalled.best.outcome == am::Outcome::NotFound;
  pass &= stalled.best.final.F >= 0.1 && stalled.best.final.F <= 0.4;
  pass &= elapsed <= 5.0;
  d << "Example 5.3 two-way: jordan F=" << io::format_g17(found.best.final.F)
    << " verified=" << (found.verification && found.verification->pass)
    << "; minus-xi-i F=" << io::format_g17(stalled.best.final.F) << " time=" << elapsed << "s";
  report(2, pass, d.str());
}

void criterion3() {
  std::ostringstream d;
  bool pass = true;
  d << "Example 5.4 robustness:";
  for (const char* name : {"ex54_h0545.json", "ex54_h0552.json"}) {
    const auto t0 = std::chrono::steady_clock::now();
    io::SolveOptions opts;
    opts.init = "jordan-plus-ones";
    opts.max_iter = 100000;  // h = 0.552 needs ~10k iterations to converge
    auto res = run_file(name, opts);
    const double elapsed = seconds_since(t0);
    pass &= res.best.outcome == am::Outcome::RepresentationFound;
    pass &= res.best.final.F <= 9e-10;
    pass &= res.verification && res.verification->pass;
    pass &= elapsed <= 2.0;
    d << " " << name << " F=" << io::format_g17(res.best.final.F) << " time=" << elapsed << "s";
  }
  report(3, pass, d.str());
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream d;
  bool pass = true;

  // conversion reproduces L0's coefficients to 1e-12
  auto input = io::parse_input_file(g_data_dir + "/ex52_gf.json");
  auto g = io::to_gf(input);
  auto lst = discrete::to_continuous(g);
  const double want_q[4] = {0.32, 1.44, 2.1, 1.0};
  const double want_p[3] = {0.32, -0.536, 0.0294};
  for (int i = 0; i < 4; ++i) pass &= std::abs(lst.q.coeffs[i] - want_q[i]) <= 1e-12;
  for (int i = 0; i < 3; ++i) pass &= std::abs(lst.p.coeffs[i] - want_p[i]) <= 1e-12;

  auto pd = jordan::make_problem_data(lst);
  pass &= std::abs(pd.beta(0) - 13.23) <= 5e-4;
  pass &= std::abs(pd.beta(1) + 9.0316) <= 5e-4;
  pass &= std::abs(pd.beta(2) + 3.1984) <= 5e-4;

  io::SolveOptions opts;
  opts.multistart = 10;
  opts.seed = 1;
  auto res = run_file("ex52_gf.json", opts);
  pass &= res.all_runs.size() == 10;
  int not_found = 0;
  double min_f = 1e300;
  for (const auto& r : res.all_runs) {
    if (r.outcome == am::Outcome::NotFound && r.final.F >= 9.0 * 1e-10) ++not_found;
    min_f = std::min(min_f, r.final.F);
  }
  pass &= not_found == static_cast<int>(res.all_runs.size());
  const double elapsed = seconds_since(t0);
  pass &= elapsed <= 30.0;
  d << "Example 5.2 non-existence: beta=(" << pd.beta(0) << "," << pd.beta(1) << ","
    << pd.beta(2) << ") NotFound=" << not_found << "/10 min_F=" << io::format_g17(min_f)
    << " time=" << elapsed << "s";
  report(4, pass, d.str());
}

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream d;
  bool pass = true;
  d << "Table 1 desk scale:";
  const int want_min[2] = {48, 45};
  int idx = 0;
  for (int n : {3, 4}) {
    io::BenchOptions opts;
    opts.n_min = opts.n_max = n;
    opts.count = 50;
    opts.variant = "balanced";
    opts.seed = 7;
    auto rows = io::run_bench(opts);
    const auto& r = rows[0];
    const int succ = r.real_succ + r.complex_succ;
    const int attempts = r.real_attempts + r.complex_attempts;
    pass &= attempts == 50;
    pass &= succ >= want_min[idx++];
    pass &= r.verified == succ;
    d << " n=" << n << ": " << succ << "/50 verified=" << r.verified
      << " mean_iter=" << r.mean_iterations;
  }
  const double elapsed = seconds_since(t0);
  pass &= elapsed <= 300.0;
  d << " time=" << elapsed << "s";
  report(5, pass, d.str());

  // refresh traces for criterion 6 with sequential reruns of a sample would
  // be redundant; run_bench does not expose per-run traces, so collect a few
  // here explicitly
  for (std::uint64_t seed = 7; seed < 12; ++seed) {
    auto [alpha, A] = phgen::sample_ph({3, 1.0, phgen::Variant::Balanced, seed});
    try {
      auto lst = phgen::lst_of(alpha, A);
      if (lst.q.degree() != 3) continue;
      auto pd = jordan::make_problem_data(lst);
      am::AmConfig cfg;
      g_traces.push_back(am::run_am(pd, cfg).f_trace);
    } catch (const Error&) {
    }
  }
}

void criterion6() {
  int violations = 0;
  size_t total = 0;
  for (const auto& trace : g_traces) {
    for (size_t k = 2; k < trace.size(); ++k) {
      ++total;
      if (trace[k] > trace[k - 1] + 1e-12) ++violations;
    }
  }
  std::ostringstream d;
  d << "monotone descent: " << g_traces.size() << " traces, " << total << " steps, "
    << violations << " violations (slack 1e-12)";
  report(6, violations == 0 && !g_traces.empty(), d.str());
}

void criterion7() {
  phgen::Xoshiro256pp rng(777);
  int ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    poly::PoleMultiset ps;
    int n = 0;
    ps.real_poles.push_back({rng.uniform(-2.0, -0.5), 1});
    n += 1;
    if (rng.u01() < 0.4 && n + 2 <= 6) {
      ps.real_poles.push_back({rng.uniform(-5.0, -3.0), 2});
      n += 2;
    }
    if (rng.u01() < 0.6 && n + 2 <= 6) {
      ps.complex_pairs.push_back({rng.uniform(-8.0, -6.0), rng.uniform(0.3, 2.0), 1});
      n += 2;
    }
    if (n + 1 <= 6 && rng.u01() < 0.3) {
      ps.real_poles.push_back({rng.uniform(-10.0, -9.0), 1});
      n += 1;
    }
    ps.canonicalize();
    auto jf = jordan::build_jordan(ps);
    MatrixXd A(n, n), P(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        A(i, j) = rng.uniform(-3.0, 3.0);
        P(i, j) = rng.uniform(-3.0, 3.0);
      }
    const double direct = am::objective(P, A, jf);
    auto M = am::hessian_in_P(A, jf);
    VectorXd x(n * n);
    for (int i = 0; i < n; ++i) x.segment(i * n, n) = P.row(i).transpose();
    const double blocked = x.dot(M * x);
    if (std::abs(blocked - direct) <= 1e-9 * (1.0 + std::abs(direct))) ++ok;
  }
  std::ostringstream d;
  d << "Frobenius vs blocked quadratic form: " << ok << "/200 within 1e-9 relative";
  report(7, ok == 200, d.str());
}

void criterion8() {
  phgen::Xoshiro256pp rng(888);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next() % 5);
    auto q = testutil::random_box_qp(n, rng, trial % 3 == 0);
    qp::QpSpec spec;
    spec.H = q.H;
    spec.c = q.c;
    spec.E = q.E;
    spec.e = q.e;
    spec.G = q.G;
    spec.g = q.g;
    auto sol = qp::solve_qp(spec);
    const double oracle = testutil::brute_force_qp(q.H, q.c, q.E, q.e, q.G, q.g);
    if (sol.status == qp::QpStatus::Optimal && std::abs(sol.objective - oracle) <= 1e-6) ++ok;
  }
  std::ostringstream d;
  d << "QP vs active-set enumeration oracle: " << ok << "/100 within 1e-6";
  report(8, ok == 100, d.str());
}

void criterion9() {
  int valid_gfs = 0, props_ok = 0;
  std::uint64_t seed = 0;
  while (valid_gfs < 100 && seed < 2000) {
    const int n = 2 + static_cast<int>(seed % 3);
    auto [at, At] = phgen::sample_discrete_ph(n, seed++);
    discrete::GeneratingFunction g;
    try {
      g = discrete::gf_of(at, At);
    } catch (const Error&) {
      continue;
    }
    if (!discrete::validate_gf(g).valid) continue;
    ++valid_gfs;
    try {
      auto lst = discrete::to_continuous(g);
      const bool zero_ok = std::abs(lst.eval(0.0) - 1.0) <= 1e-9;
      const auto v = poly::validate_lst(lst);
      if (zero_ok && v.coprime && v.dominant_real_simple) ++props_ok;
    } catch (const Error&) {
    }
  }

  int round_trips = 0, solved = 0, attempts = 0;
  seed = 5000;
  while (attempts < 100 && seed < 8000) {
    auto [at, At] = phgen::sample_discrete_ph(3, seed++);
    discrete::GeneratingFunction g;
    try {
      g = discrete::gf_of(at, At);
    } catch (const Error&) {
      continue;
    }
    if (!discrete::validate_gf(g).valid || g.q_tilde.degree() != 3) continue;
    ++attempts;
    am::AmConfig cfg;
    discrete::DiscreteSolveResult res;
    try {
      res = discrete::solve_discrete(g, cfg);
    } catch (const Error&) {
      continue;
    }
    if (res.am_report.outcome != am::Outcome::RepresentationFound) continue;
    ++solved;
    auto g2 = discrete::gf_of(res.representation->alpha_tilde, res.representation->A_tilde);
    bool match = true;
    for (int k = 0; k < 16; ++k) {
      const double z = -1.0 + 2.0 * k / 15.0;
      const double want = g.eval(z);
      if (std::abs(g2.eval(z) - want) > 1e-4 * (1.0 + std::abs(want))) match = false;
    }
    if (match) ++round_trips;
  }
  std::ostringstream d;
  d << "discrete reduction: " << props_ok << "/" << valid_gfs
    << " GFs satisfy the (A) properties; round-trip " << round_trips << "/" << solved
    << " of " << attempts << " instances where AM succeeded";
  report(9, valid_gfs == 100 && props_ok == 100 && solved > 0 && round_trips == solved, d.str());
}

void criterion10() {
  int checked = 0, passed = 0, filtered = 0;
  std::uint64_t seed = 0;
  const phgen::Variant variants[3] = {phgen::Variant::Balanced, phgen::Variant::Sparse,
                                      phgen::Variant::Stiff};
  while (checked + filtered < 500) {
    const int n = 2 + static_cast<int>(seed % 4);  // 2..5
    const phgen::Variant v = variants[seed % 3];
    const double p = v == phgen::Variant::Balanced ? 0.0 : 0.5;
    auto [alpha, A] = phgen::sample_ph({n, 1.0, v, seed++, p});
    poly::RationalLst lst;
    try {
      lst = phgen::lst_of(alpha, A);
    } catch (const Error&) {
      ++filtered;
      continue;
    }
    if (lst.q.degree() != n) {
      ++filtered;  // degree-deficient: check_representation's order precondition fails
      continue;
    }
    ++checked;
    if (verify::check_representation(alpha, A, lst, 1e-8).pass) ++passed;
  }
  std::ostringstream d;
  d << "generator/verifier closure: " << passed << "/" << checked << " pass at 1e-8 ("
    << filtered << " degree-filtered)";
  report(10, passed == checked && filtered <= 25, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--data-dir") == 0 && i + 1 < argc) g_data_dir = argv[++i];
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  using Fn = void (*)();
  const Fn criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                         criterion6, criterion7, criterion8, criterion9, criterion10};
  for (int k = 1; k <= 10; ++k) {
    if (only != 0 && only != k) continue;
    if (only != 0 && k == 6)
      std::cout << "note: criterion 6 checks traces collected by criteria 1-5,9\n";
    criteria[k - 1]();
  }
  return g_failures;
}
