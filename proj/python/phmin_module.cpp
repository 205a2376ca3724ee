#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phmin/io.hpp"
#include "phmin/phgen.hpp"

namespace py = pybind11;
using namespace phmin;

namespace {

am::AmConfig make_config(const std::string& init, double tol_term, double success_factor,
                         int max_iter, double qp_tol,
                         std::optional<Eigen::MatrixXd> custom_init) {
  am::AmConfig cfg;
  cfg.tol_term = tol_term;
  cfg.success_threshold_factor = success_factor;
  cfg.max_outer_iter = max_iter;
  cfg.qp_tol = qp_tol;
  cfg.label = init;
  if (init == "jordan-plus-ones") cfg.init = am::InitKind::JordanPlusOnesMinusI;
  else if (init == "jordan") cfg.init = am::InitKind::Jordan;
  else if (init == "minus-xi-i") cfg.init = am::InitKind::MinusXiI;
  else if (init == "custom") {
    cfg.init = am::InitKind::Custom;
    if (!custom_init) throw Error(ErrorCode::ParseError, "custom init requires a matrix");
    cfg.custom_init = *custom_init;
  } else {
    throw Error(ErrorCode::ParseError, "unknown init '" + init + "'");
  }
  return cfg;
}

py::dict report_to_dict(const am::AmReport& rep) {
  py::dict d;
  switch (rep.outcome) {
    case am::Outcome::RepresentationFound: d["outcome"] = "RepresentationFound"; break;
    case am::Outcome::NotFound: d["outcome"] = "NotFound"; break;
    case am::Outcome::InfeasibleBeta: d["outcome"] = "InfeasibleBeta"; break;
  }
  d["f_final"] = rep.final.F;
  d["iterations"] = rep.iterations;
  d["f_trace"] = rep.f_trace;
  if (rep.outcome == am::Outcome::RepresentationFound) {
    const auto ph = am::extract_representation(rep.alpha, rep.final.A);
    d["alpha"] = ph.alpha;
    d["A"] = ph.A;
    d["valid"] = ph.diagnostics.valid;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_phmin, m) {
  m.doc() = "Phase-type representations of algebraic-degree order from rational transforms";

  py::register_exception<Error>(m, "PhminError");

  py::class_<poly::RationalLst>(m, "RationalLst")
      .def_property_readonly("order", &poly::RationalLst::order)
      .def_property_readonly("p", [](const poly::RationalLst& l) { return l.p.coeffs; })
      .def_property_readonly("q", [](const poly::RationalLst& l) { return l.q.coeffs; })
      .def_property_readonly("poles",
                             [](const poly::RationalLst& l) {
                               py::list out;
                               for (const auto& r : l.poles.real_poles)
                                 out.append(py::make_tuple(std::complex<double>(r.lambda, 0.0),
                                                           r.mult));
                               for (const auto& c : l.poles.complex_pairs)
                                 out.append(py::make_tuple(std::complex<double>(c.mu, c.omega),
                                                           c.mult));
                               return out;
                             })
      .def("__call__", [](const poly::RationalLst& l, double s) { return l.eval(s); })
      .def("__repr__", [](const poly::RationalLst& l) {
        return "<RationalLst order " + std::to_string(l.order()) + ">";
      });

  py::class_<jordan::ProblemData>(m, "ProblemData")
      .def_property_readonly("jordan",
                             [](const jordan::ProblemData& pd) { return pd.jordan.dense; })
      .def_readonly("beta", &jordan::ProblemData::beta)
      .def_readonly("xi", &jordan::ProblemData::xi)
      .def_readonly("n", &jordan::ProblemData::n);

  m.def(
      "lst_from_coeffs",
      [](const std::vector<double>& p, const std::vector<double>& q) {
        return poly::make_lst_from_coeffs(poly::Polynomial(p), poly::Polynomial(q));
      },
      py::arg("p"), py::arg("q"),
      "Rational LST p(s)/q(s) from ascending coefficient arrays");

  m.def(
      "lst_from_json",
      [](const std::string& text) { return io::to_lst(io::parse_input_string(text)); },
      py::arg("text"), "Rational LST from an input-file JSON string");

  m.def(
      "validate_lst",
      [](const poly::RationalLst& lst) {
        const auto v = poly::validate_lst(lst);
        py::dict d;
        d["coprime"] = v.coprime;
        d["lst_at_zero_is_one"] = v.lst_at_zero_is_one;
        d["dominant_real_simple"] = v.dominant_real_simple;
        d["admissible"] = v.admissible;
        d["detail"] = v.detail;
        return d;
      },
      py::arg("lst"));

  m.def("problem_data", &jordan::make_problem_data, py::arg("lst"),
        "Jordan form, beta, and xi for an admissible LST");

  m.def(
      "run_am",
      [](const jordan::ProblemData& pd, const std::string& init, double tol_term,
         double success_factor, int max_iter, double qp_tol,
         std::optional<Eigen::MatrixXd> custom_init) {
        return report_to_dict(am::run_am(
            pd, make_config(init, tol_term, success_factor, max_iter, qp_tol, custom_init)));
      },
      py::arg("problem"), py::arg("init") = "jordan-plus-ones", py::arg("tol_term") = 1e-13,
      py::arg("success_factor") = 1e-10, py::arg("max_iter") = 5000, py::arg("qp_tol") = 1e-10,
      py::arg("custom_init") = std::nullopt, "Alternating minimization on (OP)");

  m.def(
      "solve",
      [](const std::string& json_text, const std::string& init, int multistart,
         std::uint64_t seed, int max_iter) {
        io::SolveOptions opts;
        opts.init = init;
        opts.multistart = multistart;
        opts.seed = seed;
        opts.max_iter = max_iter;
        auto res = io::solve_pipeline(io::parse_input_string(json_text), opts);
        py::dict d;
        d["exit_code"] = res.exit_code;
        d["report"] = io::report_json(res, opts);
        return d;
      },
      py::arg("json_text"), py::arg("init") = "jordan-plus-ones", py::arg("multistart") = 1,
      py::arg("seed") = 0, py::arg("max_iter") = 5000,
      "Full pipeline on an input-file JSON string; returns exit_code and the report JSON");

  m.def(
      "sample_ph",
      [](int n, double c, const std::string& variant, std::uint64_t seed, double p) {
        phgen::Variant v = phgen::Variant::Balanced;
        if (variant == "sparse") v = phgen::Variant::Sparse;
        else if (variant == "stiff") v = phgen::Variant::Stiff;
        else if (variant != "balanced")
          throw Error(ErrorCode::ParseError, "unknown variant '" + variant + "'");
        auto [alpha, A] = phgen::sample_ph({n, c, v, seed, p});
        return py::make_tuple(alpha, A);
      },
      py::arg("n"), py::arg("c") = 1.0, py::arg("variant") = "balanced", py::arg("seed") = 0,
      py::arg("p") = 0.5, "Random continuous PH representation (alpha, A)");

  m.def("lst_of", &phgen::lst_of, py::arg("alpha"), py::arg("A"),
        "Exact LST of a representation");
  m.def("algebraic_degree", &phgen::algebraic_degree, py::arg("alpha"), py::arg("A"));

  m.def(
      "check_representation",
      [](const Eigen::VectorXd& alpha, const Eigen::MatrixXd& A, const poly::RationalLst& lst,
         double tol) {
        const auto r = verify::check_representation(alpha, A, lst, tol);
        py::dict d;
        d["valid"] = r.validity.valid;
        d["lst_max_rel_err"] = r.lst_max_rel_err;
        d["spectrum_max_err"] = r.spectrum_max_err;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("alpha"), py::arg("A"), py::arg("lst"), py::arg("tol") = 1e-8);

  m.def("cdf", &verify::cdf, py::arg("alpha"), py::arg("A"), py::arg("t"));
  m.def("moments", &verify::moments, py::arg("alpha"), py::arg("A"), py::arg("k"));

  m.def(
      "to_continuous",
      [](const std::vector<double>& p_tilde, const std::vector<double>& q_tilde) {
        discrete::GeneratingFunction g;
        g.p_tilde = poly::Polynomial(p_tilde);
        g.q_tilde = poly::Polynomial(q_tilde);
        return discrete::to_continuous(g);
      },
      py::arg("p_tilde"), py::arg("q_tilde"),
      "Reduce a generating function to a continuous LST via z = 1/(s+1)");

  m.def(
      "solve_discrete",
      [](const std::vector<double>& p_tilde, const std::vector<double>& q_tilde,
         const std::string& init, int max_iter) {
        discrete::GeneratingFunction g;
        g.p_tilde = poly::Polynomial(p_tilde);
        g.q_tilde = poly::Polynomial(q_tilde);
        auto cfg = make_config(init, 1e-13, 1e-10, max_iter, 1e-10, std::nullopt);
        auto res = discrete::solve_discrete(g, cfg);
        py::dict d = report_to_dict(res.am_report);
        if (res.representation) {
          d["alpha_tilde"] = res.representation->alpha_tilde;
          d["A_tilde"] = res.representation->A_tilde;
        }
        return d;
      },
      py::arg("p_tilde"), py::arg("q_tilde"), py::arg("init") = "jordan-plus-ones",
      py::arg("max_iter") = 5000, "Discrete-time pipeline: reduce, solve with xi = 1, lift");
}
