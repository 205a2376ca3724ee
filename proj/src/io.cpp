#include "phmin/io.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "phmin/phgen.hpp"
#include "phmin/verify.hpp"

namespace phmin::io {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

std::vector<double> as_doubles(const json& j, const std::string& field) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "field '" + field + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::ParseError, "field '" + field + "' must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

LstInput parse_json(const json& j) {
  LstInput in;
  in.z_form = j.value("z_form", false);
  const std::string form = j.value("form", "");
  if (form == "coeffs") {
    if (!j.contains("p") || !j.contains("q"))
      throw Error(ErrorCode::ParseError, "coeffs form requires fields 'p' and 'q'");
    poly::Polynomial p(as_doubles(j.at("p"), "p"));
    poly::Polynomial q(as_doubles(j.at("q"), "q"));
    in.coeffs = std::make_pair(p, q);
  } else if (form == "partial_fractions") {
    if (!j.contains("terms"))
      throw Error(ErrorCode::ParseError, "partial_fractions form requires field 'terms'");
    poly::PoleMultiset poles;
    poly::PfCoefficients pf;
    for (const auto& t : j.at("terms")) {
      if (!t.contains("pole") || !t.contains("mult") || !t.contains("coeffs"))
        throw Error(ErrorCode::ParseError, "each term requires 'pole', 'mult', 'coeffs'");
      const double re = t.at("pole").value("re", 0.0);
      const double im = t.at("pole").value("im", 0.0);
      const int mult = t.at("mult").get<int>();
      if (mult < 1) throw Error(ErrorCode::ParseError, "'mult' must be >= 1");
      std::vector<poly::Complex> cs;
      for (const auto& c : t.at("coeffs"))
        cs.emplace_back(c.value("re", 0.0), c.value("im", 0.0));
      if (static_cast<int>(cs.size()) != mult)
        throw Error(ErrorCode::ParseError, "'coeffs' length must equal 'mult'");
      if (im == 0.0) {
        for (const auto& c : cs)
          if (c.imag() != 0.0)
            throw Error(ErrorCode::ParseError, "real pole with complex coefficient");
        std::vector<double> rc;
        for (const auto& c : cs) rc.push_back(c.real());
        poles.real_poles.push_back({re, mult});
        pf.real_coeffs.push_back(std::move(rc));
      } else {
        poles.complex_pairs.push_back({re, im, mult});
        pf.complex_coeffs.push_back(std::move(cs));
      }
    }
    in.pf = std::make_pair(poles, pf);
  } else {
    throw Error(ErrorCode::ParseError, "'form' must be 'coeffs' or 'partial_fractions'");
  }
  return in;
}

}  // namespace

LstInput parse_input_file(const std::string& path) { return parse_json(load_json(path)); }

LstInput parse_input_string(const std::string& text) {
  try {
    return parse_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

poly::RationalLst to_lst(const LstInput& in, double tol_cluster) {
  if (in.z_form)
    throw Error(ErrorCode::ParseError, "z_form input is a generating function, not an LST");
  if (in.coeffs) return poly::make_lst_from_coeffs(in.coeffs->first, in.coeffs->second, tol_cluster);
  return poly::make_lst_from_pf(in.pf->first, in.pf->second);
}

discrete::GeneratingFunction to_gf(const LstInput& in) {
  if (!in.z_form) throw Error(ErrorCode::ParseError, "input is not marked z_form");
  if (in.coeffs) {
    discrete::GeneratingFunction g;
    g.p_tilde = in.coeffs->first;
    g.q_tilde = in.coeffs->second;
    return g;
  }
  // PF form in z: expand terms over the common denominator
  const auto& poles = in.pf->first;
  const auto& pf = in.pf->second;
  poly::RationalLst as_rational = poly::make_lst_from_pf(poles, pf);
  return discrete::reduce_gf(as_rational.p, as_rational.q);
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void emit_doubles(std::ostream& os, const std::vector<double>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << format_g17(v[i]);
  }
  os << ']';
}

void emit_vector(std::ostream& os, const Eigen::VectorXd& v) {
  os << '[';
  for (int i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << format_g17(v(i));
  }
  os << ']';
}

void emit_matrix(std::ostream& os, const Eigen::MatrixXd& M) {
  os << '[';
  for (int i = 0; i < M.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (int j = 0; j < M.cols(); ++j) {
      if (j) os << ',';
      os << format_g17(M(i, j));
    }
    os << ']';
  }
  os << ']';
}

const char* outcome_name(am::Outcome o) {
  switch (o) {
    case am::Outcome::RepresentationFound: return "RepresentationFound";
    case am::Outcome::NotFound: return "NotFound";
    case am::Outcome::InfeasibleBeta: return "InfeasibleBeta";
  }
  return "NotFound";
}

std::vector<am::AmConfig> build_configs(const SolveOptions& opts, const jordan::ProblemData& pd) {
  std::vector<am::AmConfig> configs;
  am::AmConfig base;
  base.tol_term = opts.tol_term;
  base.success_threshold_factor = opts.success_factor;
  base.max_outer_iter = opts.max_iter;
  base.qp_tol = opts.qp_tol;

  auto named = [&](const std::string& name) {
    am::AmConfig c = base;
    c.label = name;
    if (name == "jordan-plus-ones") c.init = am::InitKind::JordanPlusOnesMinusI;
    else if (name == "jordan") c.init = am::InitKind::Jordan;
    else if (name == "minus-xi-i") c.init = am::InitKind::MinusXiI;
    else if (name.rfind("file:", 0) == 0) {
      c.init = am::InitKind::Custom;
      const json j = load_json(name.substr(5));
      if (!j.contains("A0")) throw Error(ErrorCode::ParseError, "init file requires field 'A0'");
      const auto rows = j.at("A0");
      const int n = static_cast<int>(rows.size());
      Eigen::MatrixXd A0(n, n);
      for (int i = 0; i < n; ++i) {
        const auto r = as_doubles(rows[static_cast<size_t>(i)], "A0");
        if (static_cast<int>(r.size()) != n)
          throw Error(ErrorCode::ParseError, "'A0' must be square");
        for (int jcol = 0; jcol < n; ++jcol) A0(i, jcol) = r[static_cast<size_t>(jcol)];
      }
      c.custom_init = A0;
    } else {
      throw Error(ErrorCode::ParseError, "unknown --init '" + name + "'");
    }
    return c;
  };

  configs.push_back(named(opts.init));
  if (opts.multistart > 1) {
    for (const char* name : {"jordan-plus-ones", "jordan", "minus-xi-i"}) {
      if (static_cast<int>(configs.size()) >= opts.multistart) break;
      if (name == opts.init) continue;
      configs.push_back(named(name));
    }
    int k = 0;
    while (static_cast<int>(configs.size()) < opts.multistart) {
      am::AmConfig c = base;
      c.init = am::InitKind::Custom;
      c.custom_init = am::random_feasible_init(pd.n, pd.xi, opts.seed + k);
      c.label = "random-" + std::to_string(k);
      configs.push_back(c);
      ++k;
    }
  }
  return configs;
}

}  // namespace

SolveResult solve_pipeline(const LstInput& input, const SolveOptions& opts) {
  SolveResult res;
  if (input.z_form) {
    const auto g = to_gf(input);
    const auto gv = discrete::validate_gf(g, opts.tol_cluster);
    if (!gv.valid) {
      res.exit_code = 1;
      res.error = "invalid generating function: " + gv.detail;
      return res;
    }
    res.lst = discrete::to_continuous(g, opts.tol_cluster);
  } else {
    res.lst = to_lst(input, opts.tol_cluster);
    const auto v = poly::validate_lst(res.lst, opts.tol_cluster);
    if (!v.admissible) {
      res.exit_code = 1;
      res.error = "inadmissible LST: " + v.detail;
      return res;
    }
  }

  res.problem = jordan::make_problem_data(res.lst);
  if (input.z_form) res.problem.xi = 1.0;

  const auto configs = build_configs(opts, res.problem);
  auto [best, all] = am::run_multistart(res.problem, configs);
  res.best = best;
  res.all_runs = all;

  if (best.outcome == am::Outcome::RepresentationFound) {
    const auto rep = am::extract_representation(best.alpha, best.final.A);
    res.verification = verify::check_representation(rep.alpha, rep.A, res.lst, 1e-4);
    if (input.z_form) {
      discrete::DiscreteSolveResult d;
      d.am_report = best;
      d.continuous = res.lst;
      discrete::DiscretePhRepresentation dp;
      dp.alpha_tilde = rep.alpha;
      dp.A_tilde = rep.A + Eigen::MatrixXd::Identity(rep.A.rows(), rep.A.cols());
      d.representation = dp;
      res.discrete_result = d;
    }
    res.exit_code = res.verification->pass ? 0 : 2;
  } else {
    res.exit_code = 2;
  }
  return res;
}

std::string report_json(const SolveResult& res, const SolveOptions& opts) {
  std::ostringstream os;
  os << "{\"schema\":\"phmin/1\"";
  if (res.exit_code == 1) {
    os << ",\"outcome\":\"InvalidInput\",\"error\":" << json(res.error).dump() << "}";
    return os.str();
  }
  const auto& best = res.best;
  os << ",\"outcome\":\"" << outcome_name(best.outcome) << "\"";
  os << ",\"f_final\":" << format_g17(best.final.F);
  os << ",\"iterations\":" << best.iterations;
  os << ",\"alpha\":";
  if (best.outcome == am::Outcome::RepresentationFound && res.verification) {
    const auto rep = am::extract_representation(best.alpha, best.final.A);
    emit_vector(os, rep.alpha);
  } else {
    os << "[]";
  }
  os << ",\"A\":";
  if (best.final.A.size() > 0)
    emit_matrix(os, best.final.A);
  else
    os << "[]";
  os << ",\"verify\":";
  if (res.verification) {
    const auto& v = *res.verification;
    os << "{\"validity\":" << (v.validity.valid ? "true" : "false")
       << ",\"lst_max_rel_err\":" << format_g17(v.lst_max_rel_err)
       << ",\"spectrum_max_err\":" << format_g17(v.spectrum_max_err)
       << ",\"pass\":" << (v.pass ? "true" : "false") << "}";
  } else {
    os << "null";
  }
  os << ",\"f_trace\":";
  {
    std::vector<double> trace = best.f_trace;
    if (!opts.trace_full && trace.size() > 10000) trace.resize(10000);
    emit_doubles(os, trace);
  }
  if (res.discrete_result && res.discrete_result->representation) {
    os << ",\"discrete\":{\"alpha_tilde\":";
    emit_vector(os, res.discrete_result->representation->alpha_tilde);
    os << ",\"A_tilde\":";
    emit_matrix(os, res.discrete_result->representation->A_tilde);
    os << "}";
  }
  if (res.all_runs.size() > 1) {
    os << ",\"multistart\":[";
    for (size_t i = 0; i < res.all_runs.size(); ++i) {
      const auto& r = res.all_runs[i];
      if (i) os << ',';
      os << "{\"init\":" << json(r.init_label).dump() << ",\"outcome\":\"" << outcome_name(r.outcome)
         << "\",\"f_final\":" << format_g17(r.final.F) << ",\"iterations\":" << r.iterations << "}";
    }
    os << "]";
  }
  os << ",\"wallclock_ms\":" << format_g17(best.wallclock_seconds * 1e3);
  os << "}";
  return os.str();
}

int cmd_solve(const std::string& input_path, const SolveOptions& opts, std::ostream& log) {
  SolveResult res;
  try {
    const LstInput input = parse_input_file(input_path);
    res = solve_pipeline(input, opts);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
  const std::string report = report_json(res, opts);
  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    out << report << "\n";
  }
  if (res.exit_code == 1) {
    log << "invalid input: " << res.error << "\n";
  } else {
    log << "outcome: " << outcome_name(res.best.outcome) << "  F=" << format_g17(res.best.final.F)
        << "  iterations=" << res.best.iterations << "\n";
    if (opts.out_path.empty()) log << report << "\n";
  }
  return res.exit_code;
}

int cmd_convert(const std::string& input_path, const std::string& out_path, std::ostream& log) {
  try {
    const LstInput input = parse_input_file(input_path);
    if (!input.z_form) {
      log << "error: convert expects a z_form generating-function file\n";
      return 1;
    }
    const auto g = to_gf(input);
    const auto gv = discrete::validate_gf(g);
    if (!gv.valid) {
      log << "invalid generating function: " << gv.detail << "\n";
      return 1;
    }
    const auto lst = discrete::to_continuous(g);
    std::ostringstream os;
    os << "{\"schema\":\"phmin/1\",\"form\":\"coeffs\",\"p\":";
    emit_doubles(os, lst.p.coeffs);
    os << ",\"q\":";
    emit_doubles(os, lst.q.coeffs);
    os << "}";
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << os.str() << "\n";
    } else {
      log << os.str() << "\n";
    }
    return 0;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  phgen::Variant variant = phgen::Variant::Balanced;
  if (opts.variant == "sparse") variant = phgen::Variant::Sparse;
  else if (opts.variant == "stiff") variant = phgen::Variant::Stiff;
  else if (opts.variant != "balanced")
    throw Error(ErrorCode::ParseError, "unknown variant '" + opts.variant + "'");

  std::vector<BenchRow> rows;
  for (int n = opts.n_min; n <= opts.n_max; ++n) {
    // deterministically enumerate instances until `count` pass the degree filter
    struct Instance {
      Eigen::VectorXd alpha;
      Eigen::MatrixXd A;
      std::uint64_t seed;
    };
    std::vector<Instance> accepted;
    std::uint64_t idx = 0;
    while (static_cast<int>(accepted.size()) < opts.count && idx < 100000ULL * static_cast<std::uint64_t>(opts.count)) {
      phgen::GenSpec gs{n, opts.c, variant, opts.seed + idx, opts.p};
      auto [alpha, A] = phgen::sample_ph(gs);
      ++idx;
      try {
        if (phgen::algebraic_degree(alpha, A) == n) accepted.push_back({alpha, A, gs.seed});
      } catch (const Error&) {
        // degenerate sample; skip
      }
    }

    struct Result {
      bool complex_poles = false;
      bool success = false;
      bool verified = false;
      int iterations = 0;
      double ms = 0.0;
    };
    std::vector<Result> results(accepted.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
      for (;;) {
        const size_t k = cursor.fetch_add(1);
        if (k >= accepted.size()) return;
        const auto& inst = accepted[k];
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
          const auto lst = phgen::lst_of(inst.alpha, inst.A);
          r.complex_poles = !lst.poles.complex_pairs.empty();
          const auto pd = jordan::make_problem_data(lst);
          am::AmConfig cfg;
          cfg.init = am::InitKind::JordanPlusOnesMinusI;
          cfg.tol_term = opts.am.tol_term;
          cfg.success_threshold_factor = opts.am.success_factor;
          cfg.max_outer_iter = opts.am.max_iter;
          cfg.qp_tol = opts.am.qp_tol;
          const auto rep = am::run_am(pd, cfg);
          r.iterations = rep.iterations;
          r.success = rep.outcome == am::Outcome::RepresentationFound;
          if (r.success) {
            const auto ph = am::extract_representation(rep.alpha, rep.final.A);
            r.verified = verify::check_representation(ph.alpha, ph.A, lst, 1e-4).pass;
          }
        } catch (const Error&) {
          r.success = false;
        }
        r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();
        results[k] = r;
      }
    };
    const int jobs = opts.jobs > 0
                         ? opts.jobs
                         : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    BenchRow row;
    row.n = n;
    double iter_sum = 0.0, ms_sum = 0.0;
    for (const auto& r : results) {
      if (r.complex_poles) {
        row.complex_attempts++;
        row.complex_succ += r.success;
      } else {
        row.real_attempts++;
        row.real_succ += r.success;
      }
      row.verified += r.verified;
      iter_sum += r.iterations;
      ms_sum += r.ms;
    }
    if (!results.empty()) {
      row.mean_iterations = iter_sum / static_cast<double>(results.size());
      row.mean_wallclock_ms = ms_sum / static_cast<double>(results.size());
    }
    rows.push_back(row);
  }
  return rows;
}

int cmd_bench(const BenchOptions& opts, std::ostream& log) {
  std::vector<BenchRow> rows;
  try {
    rows = run_bench(opts);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
  std::ostringstream os;
  os << "{\"schema\":\"phmin/1\",\"variant\":\"" << opts.variant << "\",\"count\":" << opts.count
     << ",\"rows\":[";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i) os << ',';
    os << "{\"n\":" << r.n << ",\"real_succ\":" << r.real_succ
       << ",\"real_attempts\":" << r.real_attempts << ",\"complex_succ\":" << r.complex_succ
       << ",\"complex_attempts\":" << r.complex_attempts << ",\"verified\":" << r.verified
       << ",\"mean_iterations\":" << format_g17(r.mean_iterations)
       << ",\"mean_wallclock_ms\":" << format_g17(r.mean_wallclock_ms) << "}";
  }
  os << "]}";
  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    out << os.str() << "\n";
  }
  log << os.str() << "\n";
  return 0;
}

}  // namespace phmin::io
