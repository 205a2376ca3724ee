#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phmin/jordan.hpp"
#include "phmin/qp.hpp"

namespace phmin::am {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class InitKind { JordanPlusOnesMinusI, Jordan, MinusXiI, Custom };

struct AmConfig {
  InitKind init = InitKind::JordanPlusOnesMinusI;
  std::optional<Matrix> custom_init;
  double tol_term = 1e-13;
  double success_threshold_factor = 1e-10;  // success iff F < n^2 * factor
  int max_outer_iter = 5000;
  double qp_tol = 1e-10;
  std::string label;  // carried into reports for multistart summaries
};

struct IterateState {
  Matrix A;
  Matrix P;
  double F = 0.0;
  int iter = 0;
};

/// Worst constraint violations seen across all iterates of a run.
struct ConstraintDiagnostics {
  double max_row_sum_dev_P = 0.0;   // ||P 1 - 1||_inf after each OP[A]
  double min_beta_P = 0.0;          // min entry of beta*P after each OP[A]
  double max_row_sum_A = 0.0;       // max entry of A 1 after each OP[P]
  double max_box_violation_A = 0.0; // box constraint violation after each OP[P]
};

enum class Outcome { RepresentationFound, NotFound, InfeasibleBeta };

struct AmReport {
  Outcome outcome = Outcome::NotFound;
  IterateState final;
  Vector alpha;  // = beta * P_final, only meaningful on success
  std::vector<double> f_trace;
  double wallclock_seconds = 0.0;
  int iterations = 0;  // number of OP[A] solves
  ConstraintDiagnostics diagnostics;
  std::string init_label;
};

struct PhRepresentation {
  Vector alpha;
  Matrix A;
  struct Diagnostics {
    bool alpha_nonnegative = false;
    bool alpha_sums_to_one = false;
    bool diagonal_nonpositive = false;
    bool offdiagonal_nonnegative = false;
    bool row_sums_nonpositive = false;
    bool valid = false;
  } diagnostics;
};

double objective(const Matrix& P, const Matrix& A, const jordan::RealJordanForm& jf);

/// Block-diagonal quadratic form of the objective in P for fixed A:
/// F = x' M x with x the row-major vectorization of P. Returns M.
Matrix hessian_in_P(const Matrix& A, const jordan::RealJordanForm& jf);

struct SubproblemResult {
  Matrix value;
  qp::QpSolution qp;
  bool infeasible = false;
};

SubproblemResult solve_op_a(const Matrix& A, const Vector& beta,
                            const jordan::RealJordanForm& jf, double qp_tol,
                            const Matrix* warm = nullptr,
                            const std::vector<int>* active_hint = nullptr);

SubproblemResult solve_op_p(const Matrix& P, double xi, const jordan::RealJordanForm& jf,
                            double qp_tol, const Matrix* warm = nullptr,
                            const std::vector<int>* active_hint = nullptr);

Matrix default_init(const jordan::RealJordanForm& jf, InitKind kind, double xi);

AmReport run_am(const jordan::ProblemData& problem, const AmConfig& config);

/// Runs every config and returns the best report (success with smallest F
/// first, otherwise smallest F); all reports are returned for summaries.
std::pair<AmReport, std::vector<AmReport>> run_multistart(const jordan::ProblemData& problem,
                                                          const std::vector<AmConfig>& configs);

/// Clamps tiny negative entries of beta*P to zero and renormalizes to sum 1.
PhRepresentation extract_representation(const Vector& alpha_raw, const Matrix& A);

/// A random matrix satisfying the OP[P] constraint box, drawn from the
/// subgenerator sampler and scaled into the xi-box; used for multistart.
Matrix random_feasible_init(int n, double xi, std::uint64_t seed);

}  // namespace phmin::am
