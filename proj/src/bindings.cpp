#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphalign/experiments.hpp"
#include "graphalign/information.hpp"
#include "graphalign/io.hpp"
#include "graphalign/lowdegree.hpp"
#include "graphalign/metrics.hpp"

namespace py = pybind11;
namespace ga = graphalign;

namespace {

ga::MultiGraphPair alpha_from_lists(int n,
                                    const std::vector<std::tuple<int, int, int>>& side1,
                                    const std::vector<std::tuple<int, int, int>>& side2) {
  return ga::MultiGraphPair::from_node_lists(n, side1, side2);
}

ga::SolverOptions options_from_kwargs(const std::string& kind, int restarts, int max_sweeps,
                                      std::uint64_t seed, double two_stage_c,
                                      std::uint64_t size_guard, const std::string& stage_kind) {
  ga::SolverOptions opts;
  opts.kind = ga::solver_kind_from_name(kind);
  opts.stage_kind = ga::solver_kind_from_name(stage_kind);
  opts.restarts = restarts;
  opts.max_sweeps = max_sweeps;
  opts.seed = seed;
  opts.two_stage_C = two_stage_c;
  opts.size_guard = size_guard;
  opts.validate();
  return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "multiple Gaussian graph alignment laboratory (C++ core)";

  py::register_exception<ga::SizeGuardError>(m, "SizeGuardError");

  py::class_<ga::ProblemParams>(m, "ProblemParams")
      .def(py::init([](int n, int p, double rho) {
             ga::ProblemParams params{n, p, rho};
             params.validate();
             return params;
           }),
           py::arg("n"), py::arg("p"), py::arg("rho"))
      .def_readonly("n", &ga::ProblemParams::n)
      .def_readonly("p", &ga::ProblemParams::p)
      .def_readonly("rho", &ga::ProblemParams::rho)
      .def_property_readonly("num_edges", &ga::ProblemParams::num_edges);

  py::class_<ga::PermutationTuple>(m, "PermutationTuple")
      .def(py::init([](std::vector<ga::Permutation> perms) {
             ga::PermutationTuple tuple;
             tuple.perms = std::move(perms);
             tuple.validate();
             return tuple;
           }),
           py::arg("perms"))
      .def_readonly("perms", &ga::PermutationTuple::perms)
      .def_property_readonly("n", &ga::PermutationTuple::n)
      .def_property_readonly("p", &ga::PermutationTuple::p);

  py::class_<ga::GraphStack>(m, "GraphStack")
      .def_readonly("p", &ga::GraphStack::p)
      .def_readonly("num_edges", &ga::GraphStack::num_edges)
      .def_readonly("weights", &ga::GraphStack::weights)
      .def("at", [](const ga::GraphStack& g, int j, int e) { return g.at(j, e); });

  py::class_<ga::Instance>(m, "Instance")
      .def_readonly("params", &ga::Instance::params)
      .def_readonly("seed", &ga::Instance::seed)
      .def_readonly("pi_star", &ga::Instance::pi_star)
      .def_readonly("signal", &ga::Instance::signal)
      .def_readonly("observed", &ga::Instance::observed)
      .def("to_json", &ga::instance_to_json);

  py::class_<ga::AssignmentResult>(m, "AssignmentResult")
      .def_readonly("psi", &ga::AssignmentResult::psi)
      .def_readonly("matched", &ga::AssignmentResult::matched)
      .def_readonly("total", &ga::AssignmentResult::total)
      .def_readonly("err", &ga::AssignmentResult::err);

  py::class_<ga::AlignmentEstimate>(m, "AlignmentEstimate")
      .def_readonly("pi_hat", &ga::AlignmentEstimate::pi_hat)
      .def_readonly("objective", &ga::AlignmentEstimate::objective)
      .def_readonly("solver_trace", &ga::AlignmentEstimate::solver_trace);

  m.def("edge_index",
        [](int u, int v, int n) { return ga::EdgeIndexer(n).edge_index(u, v); },
        py::arg("u"), py::arg("v"), py::arg("n"));
  m.def("edge_of_index",
        [](int e, int n) { return ga::EdgeIndexer(n).edge_of_index(e); },
        py::arg("e"), py::arg("n"));
  m.def("sample_instance", &ga::sample_instance, py::arg("params"), py::arg("seed"));
  m.def("instance_from_json", &ga::instance_from_json, py::arg("text"));

  m.def("err", &ga::err_alignment, py::arg("pi"), py::arg("pi_star"));
  m.def("err_bruteforce", &ga::err_bruteforce, py::arg("pi"), py::arg("pi_star"));
  m.def("hamming", &ga::hamming, py::arg("sigma"), py::arg("tau"));
  m.def("err_pair", &ga::err_pair, py::arg("pi"), py::arg("pi_star"), py::arg("j"), py::arg("jp"));

  m.def("mle_objective", &ga::mle_objective, py::arg("g"), py::arg("pi"));
  m.def(
      "solve",
      [](const ga::Instance& inst, const std::string& kind, int restarts, int max_sweeps,
         std::uint64_t seed, double two_stage_c, std::uint64_t size_guard,
         const std::string& stage_kind) {
        return ga::solve(inst.observed, inst.params,
                         options_from_kwargs(kind, restarts, max_sweeps, seed, two_stage_c,
                                             size_guard, stage_kind));
      },
      py::arg("instance"), py::arg("solver") = "local-search", py::arg("restarts") = 1,
      py::arg("max_sweeps") = 1000, py::arg("seed") = 0, py::arg("two_stage_C") = 1.0,
      py::arg("size_guard") = 1000000, py::arg("stage_solver") = "local-search");
  m.def("effective_correlation", &ga::effective_correlation, py::arg("rho"), py::arg("p"));

  m.def("kl_transposition", &ga::kl_transposition, py::arg("n"), py::arg("p"), py::arg("rho"));
  m.def("kl_upper_full", &ga::kl_upper_full, py::arg("n"), py::arg("p"), py::arg("rho"));
  m.def(
      "kl_monte_carlo",
      [](int n, int p, double rho, long long trials, std::uint64_t seed) {
        ga::ProblemParams params{n, p, rho};
        params.validate();
        ga::Permutation pi_p = ga::identity_permutation(n);
        std::swap(pi_p[0], pi_p[1]);
        const ga::KlEstimate est = ga::kl_monte_carlo(pi_p, params, trials, seed);
        return py::make_tuple(est.mean, est.std_error);
      },
      py::arg("n"), py::arg("p"), py::arg("rho"), py::arg("trials"), py::arg("seed") = 0,
      "Monte-Carlo KL for the transposition alternative; returns (mean, std_error).");
  m.def("fano_partial_bound", &ga::fano_partial_bound, py::arg("n"), py::arg("p"), py::arg("rho"));
  m.def("fano_exact_bound", &ga::fano_exact_bound, py::arg("n"), py::arg("p"), py::arg("rho"));
  m.def(
      "it_thresholds",
      [](int n, int p) {
        const ga::ItThresholds t = ga::it_thresholds(n, p);
        return py::make_tuple(t.partial, t.exact);
      },
      py::arg("n"), py::arg("p"), "order thresholds (partial, exact), constants omitted");

  m.def(
      "kappa_exact",
      [](int n, const std::vector<std::tuple<int, int, int>>& side1,
         const std::vector<std::tuple<int, int, int>>& side2) {
        return ga::kappa_exact(alpha_from_lists(n, side1, side2));
      },
      py::arg("n"), py::arg("alpha1"), py::arg("alpha2"),
      "exact joint cumulant of (x, signal monomials); sides are [(u,v,mult),...] lists");
  m.def(
      "cumulant_bound",
      [](int n, const std::vector<std::tuple<int, int, int>>& side1,
         const std::vector<std::tuple<int, int, int>>& side2) {
        return ga::cumulant_bound(alpha_from_lists(n, side1, side2));
      },
      py::arg("n"), py::arg("alpha1"), py::arg("alpha2"));
  m.def(
      "zeta",
      [](int D, double rho, int n, const std::string& variant) {
        ga::LowDegreeParams lp;
        lp.D = D;
        lp.rho = rho;
        lp.n = n;
        lp.variant = variant == "appendix-p2" ? ga::ZetaVariant::appendix_p2
                                              : ga::ZetaVariant::theorem;
        return ga::zeta(lp);
      },
      py::arg("D"), py::arg("rho"), py::arg("n"), py::arg("variant") = "theorem");
  m.def(
      "mmse_lower_bound",
      [](int D, double rho, int n, const std::string& variant) {
        ga::LowDegreeParams lp;
        lp.D = D;
        lp.rho = rho;
        lp.n = n;
        lp.variant = variant == "appendix-p2" ? ga::ZetaVariant::appendix_p2
                                              : ga::ZetaVariant::theorem;
        return ga::mmse_lower_bound(lp);
      },
      py::arg("D"), py::arg("rho"), py::arg("n"), py::arg("variant") = "theorem");
  m.def("trivial_mmse", &ga::trivial_mmse, py::arg("n"));
  m.def(
      "ws_truncated_sum",
      [](int n, double rho, int D) {
        const ga::WsTruncatedSum ws = ga::ws_truncated_sum(n, rho, D);
        return py::make_tuple(ws.sum, ws.implied_bound, ws.terms);
      },
      py::arg("n"), py::arg("rho"), py::arg("D"));
  m.def("reduction_err_bound", &ga::reduction_err_bound, py::arg("eps"));

  m.def("random_baseline", &ga::random_baseline, py::arg("n"), py::arg("p"), py::arg("trials"),
        py::arg("seed") = 0);
  m.def(
      "run_trial",
      [](int n, int p, double rho, const std::string& solver, int restarts,
         std::uint64_t trial_seed) {
        ga::ProblemParams params{n, p, rho};
        params.validate();
        ga::SolverOptions opts;
        opts.kind = ga::solver_kind_from_name(solver);
        opts.restarts = restarts;
        const ga::TrialResult r = ga::run_trial(params, opts, trial_seed);
        return py::make_tuple(r.err, r.exact, r.objective);
      },
      py::arg("n"), py::arg("p"), py::arg("rho"), py::arg("solver") = "local-search",
      py::arg("restarts") = 1, py::arg("trial_seed") = 0);
}
