#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphalign/experiments.hpp"
#include "graphalign/information.hpp"
#include "graphalign/io.hpp"
#include "graphalign/lowdegree.hpp"
#include "graphalign/metrics.hpp"

namespace ga = graphalign;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitGuard = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  out << text;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ga::PermutationTuple tuple_from_json(const json& arr) {
  ga::PermutationTuple tuple;
  for (const auto& row : arr) tuple.perms.push_back(row.get<ga::Permutation>());
  tuple.validate();
  return tuple;
}

// accepts an align output ("pi_hat"), an instance ("pi_star") or a bare "pi"
ga::PermutationTuple tuple_from_file(const std::string& path) {
  const json doc = json::parse(read_file(path));
  for (const char* key : {"pi_hat", "pi_star", "pi"})
    if (doc.contains(key)) return tuple_from_json(doc.at(key));
  throw std::invalid_argument(path + ": no pi_hat/pi_star/pi field");
}

json tuple_to_json(const ga::PermutationTuple& tuple) {
  json arr = json::array();
  for (const auto& perm : tuple.perms) arr.push_back(perm);
  return arr;
}

ga::MultiGraphPair alpha_from_json(int n, const std::string& text) {
  const json doc = json::parse(text);
  if (!doc.is_array() || doc.size() != 2)
    throw std::invalid_argument("--alpha must be a JSON list with one [[u,v,mult],...] per side");
  std::vector<std::vector<std::tuple<int, int, int>>> sides(2);
  for (int s = 0; s < 2; ++s)
    for (const auto& item : doc[s]) {
      if (!item.is_array() || item.size() != 3)
        throw std::invalid_argument("--alpha entries must be [u,v,mult] triplets");
      sides[s].emplace_back(item[0].get<int>(), item[1].get<int>(), item[2].get<int>());
    }
  return ga::MultiGraphPair::from_node_lists(n, sides[0], sides[1]);
}

struct SolverFlags {
  std::string kind = "local-search";
  std::string stage_kind = "local-search";
  int restarts = 1;
  int max_sweeps = 1000;
  std::uint64_t seed = 0;
  double two_stage_c = 1.0;
  std::uint64_t size_guard = 1000000;

  ga::SolverOptions options() const {
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
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--solver", flags.kind, "exhaustive | local-search | pairwise | two-stage")
      ->default_val("local-search");
  cmd->add_option("--stage-solver", flags.stage_kind,
                  "inner solver for two-stage/pairwise stages (exhaustive | local-search)")
      ->default_val("local-search");
  cmd->add_option("--restarts", flags.restarts, "local-search restarts (>= 1)")->default_val(1);
  cmd->add_option("--max-sweeps", flags.max_sweeps, "local-search sweep cap")->default_val(1000);
  cmd->add_option("--seed", flags.seed, "solver master seed")
      ->envname("GRAPHALIGN_SEED")
      ->default_val(0);
  cmd->add_option("--two-stage-C", flags.two_stage_c, "constant C in p' = ceil(C/rho)")
      ->default_val(1.0);
  cmd->add_option("--size-guard", flags.size_guard,
                  "max enumeration count for exhaustive search")
      ->default_val(1000000);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification lab for multiple Gaussian graph alignment"};
  app.require_subcommand(1);

  // ---- sample ----
  auto* sample = app.add_subcommand("sample", "draw an instance and write it as JSON");
  int s_n = 0, s_p = 0;
  double s_rho = 0;
  std::uint64_t s_seed = 0;
  std::string s_out;
  sample->add_option("--n", s_n, "node count (>= 2)")->required();
  sample->add_option("--p", s_p, "graph count (>= 2)")->required();
  sample->add_option("--rho", s_rho, "correlation in [0,1]")->required();
  sample->add_option("--seed", s_seed, "master seed")->envname("GRAPHALIGN_SEED")->default_val(0);
  sample->add_option("--out", s_out, "output file (default stdout)");

  // ---- align ----
  auto* align = app.add_subcommand("align", "run an estimator on a stored instance");
  std::string a_in, a_out;
  SolverFlags a_solver;
  align->add_option("--in", a_in, "instance JSON file")->required();
  align->add_option("--out", a_out, "estimate JSON output (default stdout)");
  add_solver_flags(align, a_solver);

  // ---- err ----
  auto* err_cmd = app.add_subcommand("err", "score an estimate against a stored truth");
  std::string e_est, e_truth;
  err_cmd->add_option("--est", e_est, "estimate JSON (pi_hat)")->required();
  err_cmd->add_option("--truth", e_truth, "truth JSON (pi_star)")->required();

  // ---- kl-check ----
  auto* kl = app.add_subcommand("kl-check", "Monte-Carlo KL against the analytic formulas");
  int k_n = 0, k_p = 0;
  double k_rho = 0;
  long long k_trials = 100000;
  std::uint64_t k_seed = 0;
  std::string k_pi = "transposition";
  kl->add_option("--n", k_n, "node count (>= 2)")->required();
  kl->add_option("--p", k_p, "graph count (>= 2)")->required();
  kl->add_option("--rho", k_rho, "correlation in [0,1) (rho = 1 is singular)")->required();
  kl->add_option("--trials", k_trials, "Monte-Carlo trials (>= 1000)")->default_val(100000);
  kl->add_option("--seed", k_seed, "master seed")->envname("GRAPHALIGN_SEED")->default_val(0);
  kl->add_option("--pi", k_pi, "'transposition' or a JSON file with a permutation array")
      ->default_val("transposition");

  // ---- bounds ----
  auto* bounds = app.add_subcommand(
      "bounds", "order thresholds, Fano bounds, zeta and the degree-D MMSE bound");
  int b_n = 0, b_p = 0, b_D = -1;
  double b_rho = 0;
  std::string b_variant = "theorem";
  bounds->add_option("--n", b_n, "node count (>= 2)")->required();
  bounds->add_option("--p", b_p, "graph count (>= 2)")->required();
  bounds->add_option("--rho", b_rho, "correlation in [0,1]")->required();
  bounds->add_option("--D", b_D, "polynomial degree bound (0 <= D <= n-2); omit to skip");
  bounds->add_option("--variant", b_variant, "zeta variant: theorem | appendix-p2")
      ->default_val("theorem");

  // ---- cumulant ----
  auto* cum = app.add_subcommand("cumulant", "exact kappa for a multigraph pair");
  int c_n = 0;
  std::string c_alpha;
  bool c_mc = false;
  long long c_trials = 1000000;
  std::uint64_t c_seed = 0;
  cum->add_option("--n", c_n, "node count (2 <= n <= 7)")->required();
  cum->add_option("--alpha", c_alpha, "JSON [[u,v,mult],...] per side, e.g. [[[0,1,1]],[[0,2,1]]]")
      ->required();
  cum->add_flag("--mc-check", c_mc, "also run the Monte-Carlo oracle");
  cum->add_option("--trials", c_trials, "Monte-Carlo trials for --mc-check")->default_val(1000000);
  cum->add_option("--seed", c_seed, "master seed")->envname("GRAPHALIGN_SEED")->default_val(0);

  // ---- ws-sum ----
  auto* ws = app.add_subcommand("ws-sum", "truncated cumulant sum and implied MMSE bound");
  int w_n = 0, w_D = 0;
  double w_rho = 0;
  ws->add_option("--n", w_n, "node count (2 <= n <= 6)")->required();
  ws->add_option("--rho", w_rho, "correlation in [0,1)")->required();
  ws->add_option("--D", w_D, "truncation degree (0 <= D <= 2)")->required();

  // ---- phase-diagram ----
  auto* phase = app.add_subcommand("phase-diagram", "Monte-Carlo sweep over an (n,p,rho) grid");
  std::string ph_config, ph_out;
  int ph_threads = -1;
  bool ph_timing = false;
  phase->add_option("--config", ph_config, "sweep config JSON file")->required();
  phase->add_option("--out", ph_out, "output CSV file (default stdout)");
  phase->add_option("--threads", ph_threads, "worker threads (0 = all cores)");
  phase->add_flag("--timing", ph_timing, "record wall_ms (breaks byte-reproducibility)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*sample) {
      const ga::ProblemParams params{s_n, s_p, s_rho};
      params.validate();
      std::cerr << "sample n=" << s_n << " p=" << s_p << " rho=" << s_rho << " seed=" << s_seed
                << '\n';
      const ga::Instance inst = ga::sample_instance(params, s_seed);
      write_output(s_out, ga::instance_to_json(inst) + "\n");
    } else if (*align) {
      const ga::Instance inst = ga::load_instance(a_in);
      const ga::SolverOptions opts = a_solver.options();
      std::cerr << "align n=" << inst.params.n << " p=" << inst.params.p
                << " rho=" << inst.params.rho << " solver=" << a_solver.kind
                << " restarts=" << opts.restarts << " seed=" << opts.seed << '\n';
      const ga::AlignmentEstimate estimate = ga::solve(inst.observed, inst.params, opts);
      const ga::AssignmentResult score = ga::err_alignment(estimate.pi_hat, inst.pi_star);
      json out;
      out["solver"] = a_solver.kind;
      out["seed"] = opts.seed;
      out["objective"] = estimate.objective;
      out["err"] = score.err;
      out["matched"] = score.matched;
      out["total"] = score.total;
      out["pi_hat"] = tuple_to_json(estimate.pi_hat);
      write_output(a_out, out.dump() + "\n");
    } else if (*err_cmd) {
      const ga::PermutationTuple est = tuple_from_file(e_est);
      const ga::PermutationTuple truth = tuple_from_file(e_truth);
      const ga::AssignmentResult score = ga::err_alignment(est, truth);
      json out;
      out["err"] = score.err;
      out["matched"] = score.matched;
      out["total"] = score.total;
      out["psi"] = score.psi;
      std::cout << out.dump() << '\n';
    } else if (*kl) {
      const ga::ProblemParams params{k_n, k_p, k_rho};
      params.validate();
      ga::Permutation pi_p;
      bool is_transposition = false;
      if (k_pi == "transposition") {
        pi_p = ga::identity_permutation(k_n);
        std::swap(pi_p[0], pi_p[1]);
        is_transposition = true;
      } else {
        pi_p = json::parse(read_file(k_pi)).get<ga::Permutation>();
      }
      std::cerr << "kl-check n=" << k_n << " p=" << k_p << " rho=" << k_rho
                << " trials=" << k_trials << " seed=" << k_seed << '\n';
      const ga::KlEstimate mc = ga::kl_monte_carlo(pi_p, params, k_trials, k_seed);
      std::printf("%-28s %s\n", "kl upper bound (any pi)",
                  fmt17(ga::kl_upper_full(k_n, k_p, k_rho)).c_str());
      if (is_transposition) {
        const double analytic = ga::kl_transposition(k_n, k_p, k_rho);
        const double gap = mc.std_error > 0 ? (mc.mean - analytic) / mc.std_error : 0.0;
        std::printf("%-28s %s\n", "kl analytic (transposition)", fmt17(analytic).c_str());
        std::printf("%-28s %s +/- %s  (z = %.2f)\n", "kl monte-carlo", fmt17(mc.mean).c_str(),
                    fmt17(mc.std_error).c_str(), gap);
      } else {
        std::printf("%-28s %s +/- %s\n", "kl monte-carlo", fmt17(mc.mean).c_str(),
                    fmt17(mc.std_error).c_str());
      }
    } else if (*bounds) {
      const ga::ProblemParams params{b_n, b_p, b_rho};
      params.validate();
      const ga::ItThresholds thresholds = ga::it_thresholds(b_n, b_p);
      json out;
      out["n"] = b_n;
      out["p"] = b_p;
      out["rho"] = b_rho;
      // order thresholds: multiplicative constants are not pinned down
      out["it_partial_order"] = thresholds.partial;
      out["it_exact_order"] = thresholds.exact;
      out["fano_partial"] = ga::fano_partial_bound(b_n, b_p, b_rho);
      out["fano_exact"] = ga::fano_exact_bound(b_n, b_p, b_rho);
      out["trivial_mmse"] = ga::trivial_mmse(b_n);
      if (b_D >= 0) {
        ga::LowDegreeParams lp;
        lp.D = b_D;
        lp.rho = b_rho;
        lp.n = b_n;
        if (b_variant == "theorem") {
          lp.variant = ga::ZetaVariant::theorem;
        } else if (b_variant == "appendix-p2") {
          lp.variant = ga::ZetaVariant::appendix_p2;
        } else {
          throw std::invalid_argument("--variant must be theorem or appendix-p2");
        }
        out["D"] = b_D;
        out["variant"] = b_variant;
        const double z = ga::zeta(lp);
        out["zeta"] = z;
        if (z < 1.0) {
          out["mmse_lower_bound"] = ga::mmse_lower_bound(lp);
        } else {
          out["mmse_lower_bound"] = nullptr;
          out["note"] = "zeta >= 1: degree-D bound unavailable";
        }
      }
      std::cout << out.dump(2) << '\n';
    } else if (*cum) {
      const ga::MultiGraphPair alpha = alpha_from_json(c_n, c_alpha);
      json out;
      out["n"] = c_n;
      out["kappa"] = ga::kappa_exact(alpha);
      out["size"] = alpha.total_size();
      try {
        out["bound"] = ga::cumulant_bound(alpha);
      } catch (const std::domain_error&) {
        out["bound"] = nullptr;
      }
      if (c_mc) {
        const ga::McEstimate mc = ga::kappa_monte_carlo(alpha, c_trials, c_seed);
        out["mc_mean"] = mc.mean;
        out["mc_se"] = mc.std_error;
        out["mc_trials"] = mc.trials;
      }
      std::cout << out.dump(2) << '\n';
    } else if (*ws) {
      const ga::WsTruncatedSum result = ga::ws_truncated_sum(w_n, w_rho, w_D);
      json out;
      out["n"] = w_n;
      out["rho"] = w_rho;
      out["D"] = w_D;
      out["sum"] = result.sum;
      out["implied_bound"] = result.implied_bound;
      out["terms"] = result.terms;
      std::cout << out.dump(2) << '\n';
    } else if (*phase) {
      ga::SweepConfig config = ga::SweepConfig::from_json(read_file(ph_config));
      if (ph_threads >= 0) config.threads = ph_threads;
      if (ph_timing) config.measure_wall = true;
      std::cerr << "phase-diagram cells=" << config.ns.size() * config.ps.size() *
                       config.rhos.size()
                << " trials=" << config.trials << " solver="
                << ga::solver_kind_name(config.solver.kind)
                << " master_seed=" << config.master_seed << " threads=" << config.threads << '\n';
      const std::vector<ga::CellRecord> records = ga::run_phase_diagram(config);
      write_output(ph_out, ga::phase_diagram_csv(records));
      for (const auto& rec : records)
        if (rec.skipped)
          std::cerr << "skipped cell n=" << rec.n << " p=" << rec.p << " rho=" << rec.rho << ": "
                    << rec.skip_reason << '\n';
    }
  } catch (const ga::SizeGuardError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::domain_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
