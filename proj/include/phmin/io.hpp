#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phmin/am.hpp"
#include "phmin/discrete.hpp"
#include "phmin/poly.hpp"
#include "phmin/verify.hpp"

namespace phmin::io {

/// Parsed input file: either coefficient form or partial-fraction form, in s
/// (continuous LST) or z (generating function, "z_form": true).
struct LstInput {
  bool z_form = false;
  std::optional<std::pair<poly::Polynomial, poly::Polynomial>> coeffs;  // (p, q)
  std::optional<std::pair<poly::PoleMultiset, poly::PfCoefficients>> pf;
};

LstInput parse_input_file(const std::string& path);
LstInput parse_input_string(const std::string& text);

poly::RationalLst to_lst(const LstInput& in, double tol_cluster = 1e-6);
discrete::GeneratingFunction to_gf(const LstInput& in);

struct SolveOptions {
  std::string init = "jordan-plus-ones";  // jordan-plus-ones | jordan | minus-xi-i | file:PATH
  int max_iter = 5000;
  double tol_term = 1e-13;
  double success_factor = 1e-10;
  double qp_tol = 1e-10;
  std::uint64_t seed = 0;
  int multistart = 1;
  std::string out_path;
  bool trace_full = false;
  double tol_cluster = 1e-6;
};

/// validate -> jordan -> beta -> xi -> run_am -> verify; writes the report.
/// Exit code: 0 found and verified, 2 not found / infeasible beta, 1 invalid
/// input.
int cmd_solve(const std::string& input_path, const SolveOptions& opts, std::ostream& log);

/// Wraps the discrete-to-continuous reduction; writes a coefficient-form LST
/// file. Exit code 1 on generating-function violations.
int cmd_convert(const std::string& input_path, const std::string& out_path, std::ostream& log);

struct BenchOptions {
  int n_min = 3;
  int n_max = 3;
  int count = 50;
  std::string variant = "balanced";  // balanced | sparse | stiff
  double p = 0.5;
  double c = 1.0;
  std::uint64_t seed = 0;
  std::string out_path;
  int jobs = 0;  // 0 = hardware concurrency
  SolveOptions am;
};

struct BenchRow {
  int n = 0;
  int real_succ = 0, real_attempts = 0;
  int complex_succ = 0, complex_attempts = 0;
  int verified = 0;
  double mean_iterations = 0.0;
  double mean_wallclock_ms = 0.0;
};

std::vector<BenchRow> run_bench(const BenchOptions& opts);
int cmd_bench(const BenchOptions& opts, std::ostream& log);

/// Everything cmd_solve learned about one input, for reuse by tests and the
/// acceptance suite.
struct SolveResult {
  int exit_code = 1;
  am::AmReport best;
  std::vector<am::AmReport> all_runs;
  std::optional<verify::VerifyReport> verification;
  std::optional<discrete::DiscreteSolveResult> discrete_result;
  poly::RationalLst lst;
  jordan::ProblemData problem;
  std::string error;
};

SolveResult solve_pipeline(const LstInput& input, const SolveOptions& opts);

std::string format_g17(double v);
std::string report_json(const SolveResult& res, const SolveOptions& opts);

}  // namespace phmin::io
