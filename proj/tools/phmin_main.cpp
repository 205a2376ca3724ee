#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "phmin/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"phmin: algebraic-degree phase-type representations from rational transforms"};
  app.require_subcommand(1);

  phmin::io::SolveOptions sopts;
  std::string solve_input;
  auto* solve = app.add_subcommand("solve", "find an (alpha, A) representation for an LST file");
  solve->add_option("input", solve_input, "input JSON file")->required();
  solve->add_option("--init", sopts.init, "jordan-plus-ones | jordan | minus-xi-i | file:PATH");
  solve->add_option("--max-iter", sopts.max_iter, "outer iteration cap");
  solve->add_option("--tol-term", sopts.tol_term, "termination tolerance on |dF|");
  solve->add_option("--success-factor", sopts.success_factor, "success iff F < n^2 * factor");
  solve->add_option("--qp-tol", sopts.qp_tol, "KKT tolerance for the QP subproblems");
  solve->add_option("--seed", sopts.seed, "seed for random multistart inits");
  solve->add_option("--multistart", sopts.multistart, "number of initializations");
  solve->add_option("--out", sopts.out_path, "report file path");
  solve->add_flag("--trace-full", sopts.trace_full, "do not cap f_trace at 10000 entries");
  solve->add_option("--tol-cluster", sopts.tol_cluster, "root clustering tolerance");

  std::string conv_input, conv_out;
  auto* convert = app.add_subcommand("convert", "reduce a generating-function file to an LST file");
  convert->add_option("input", conv_input, "input JSON file (z_form)")->required();
  convert->add_option("--out", conv_out, "output LST file path");

  phmin::io::BenchOptions bopts;
  std::string n_range = "3";
  auto* bench = app.add_subcommand("bench", "random-instance benchmark");
  bench->add_option("--n", n_range, "order or range, e.g. 3 or 3-5");
  bench->add_option("--count", bopts.count, "instances per order (after degree filter)");
  bench->add_option("--variant", bopts.variant, "balanced | sparse | stiff");
  bench->add_option("--p", bopts.p, "sparsity/stiffness probability");
  bench->add_option("--c", bopts.c, "rate scale");
  bench->add_option("--seed", bopts.seed, "base seed; instance k uses seed+k");
  bench->add_option("--out", bopts.out_path, "summary file path");
  bench->add_option("--jobs", bopts.jobs, "worker threads (0 = hardware)");
  bench->add_option("--max-iter", bopts.am.max_iter, "outer iteration cap");
  bench->add_option("--tol-term", bopts.am.tol_term, "termination tolerance");
  bench->add_option("--success-factor", bopts.am.success_factor, "success threshold factor");
  bench->add_option("--qp-tol", bopts.am.qp_tol, "QP KKT tolerance");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return phmin::io::cmd_solve(solve_input, sopts, std::cout);
  if (convert->parsed()) return phmin::io::cmd_convert(conv_input, conv_out, std::cout);
  if (bench->parsed()) {
    const auto dash = n_range.find('-');
    try {
      bopts.n_min = std::stoi(n_range.substr(0, dash));
      bopts.n_max = dash == std::string::npos ? bopts.n_min : std::stoi(n_range.substr(dash + 1));
    } catch (const std::exception&) {
      std::cerr << "error: bad --n range '" << n_range << "'\n";
      return 1;
    }
    return phmin::io::cmd_bench(bopts, std::cout);
  }
  return 1;
}
