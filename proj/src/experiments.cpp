#include "graphalign/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "graphalign/metrics.hpp"

namespace graphalign {

namespace {

constexpr std::uint64_t kTagCell = 0x63656c6c;
constexpr std::uint64_t kTagSolver = 0x736f6c76;
constexpr std::uint64_t kTagBaseline = 0x62617365;

std::string fmt10(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct TrialSlot {
  TrialResult result;
  bool failed = false;
  long long wall_ms = 0;
  std::string reason;
};

}  // namespace

void SweepConfig::validate() const {
  if (ns.empty() || ps.empty() || rhos.empty())
    throw std::invalid_argument("SweepConfig: grid must be nonempty");
  if (trials < 1) throw std::invalid_argument("SweepConfig: trials >= 1");
  if (threads < 0) throw std::invalid_argument("SweepConfig: threads >= 0");
  solver.validate();
  for (int n : ns)
    if (n < 2) throw std::invalid_argument("SweepConfig: n >= 2");
  for (int p : ps)
    if (p < 2) throw std::invalid_argument("SweepConfig: p >= 2");
  for (double rho : rhos)
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("SweepConfig: rho in [0,1]");
}

SweepConfig SweepConfig::from_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  SweepConfig config;
  config.ns = doc.at("n").get<std::vector<int>>();
  config.ps = doc.at("p").get<std::vector<int>>();
  config.rhos = doc.at("rho").get<std::vector<double>>();
  config.trials = doc.at("trials").get<int>();
  if (doc.contains("master_seed")) config.master_seed = doc["master_seed"].get<std::uint64_t>();
  if (doc.contains("threads")) config.threads = doc["threads"].get<int>();
  if (doc.contains("timing")) config.measure_wall = doc["timing"].get<bool>();
  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    if (s.contains("kind")) config.solver.kind = solver_kind_from_name(s["kind"].get<std::string>());
    if (s.contains("restarts")) config.solver.restarts = s["restarts"].get<int>();
    if (s.contains("max_sweeps")) config.solver.max_sweeps = s["max_sweeps"].get<int>();
    if (s.contains("two_stage_C")) config.solver.two_stage_C = s["two_stage_C"].get<double>();
    if (s.contains("size_guard")) config.solver.size_guard = s["size_guard"].get<std::uint64_t>();
    if (s.contains("stage_kind"))
      config.solver.stage_kind = solver_kind_from_name(s["stage_kind"].get<std::string>());
  }
  config.validate();
  return config;
}

TrialResult run_trial(const ProblemParams& params, const SolverOptions& solver,
                      std::uint64_t trial_seed) {
  params.validate();
  solver.validate();
  const Instance inst = sample_instance(params, trial_seed);
  SolverOptions opts = solver;
  opts.seed = derive_seed(trial_seed, {kTagSolver});
  const AlignmentEstimate estimate = solve(inst.observed, params, opts);
  const AssignmentResult score = err_alignment(estimate.pi_hat, inst.pi_star);

  TrialResult out;
  out.err = score.err;
  out.exact = score.matched == score.total;
  out.objective = estimate.objective;
  return out;
}

std::vector<CellRecord> run_phase_diagram(const SweepConfig& config) {
  config.validate();

  struct Cell {
    ProblemParams params;
    std::uint64_t seed = 0;
  };
  std::vector<Cell> cells;
  for (int n : config.ns)
    for (int p : config.ps)
      for (double rho : config.rhos) {
        Cell cell;
        cell.params = ProblemParams{n, p, rho};
        cell.seed = derive_seed(config.master_seed,
                                {kTagCell, static_cast<std::uint64_t>(cells.size())});
        cells.push_back(cell);
      }

  const long long total_tasks = static_cast<long long>(cells.size()) * config.trials;
  std::vector<TrialSlot> slots(total_tasks);
  std::atomic<long long> next_task{0};

  const auto worker = [&]() {
    for (;;) {
      const long long task = next_task.fetch_add(1);
      if (task >= total_tasks) return;
      const long long cell_id = task / config.trials;
      const long long trial = task % config.trials;
      const Cell& cell = cells[cell_id];
      TrialSlot& slot = slots[task];
      const auto start = std::chrono::steady_clock::now();
      try {
        slot.result = run_trial(cell.params, config.solver,
                                derive_seed(cell.seed, {static_cast<std::uint64_t>(trial)}));
      } catch (const std::exception& ex) {
        slot.failed = true;
        slot.reason = ex.what();
      }
      if (config.measure_wall) {
        slot.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      }
    }
  };

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = static_cast<int>(std::min<long long>(threads, total_tasks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<CellRecord> records;
  records.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    CellRecord rec;
    rec.n = cell.params.n;
    rec.p = cell.params.p;
    rec.rho = cell.params.rho;
    rec.solver = solver_kind_name(config.solver.kind);
    rec.seed = cell.seed;

    const TrialSlot* base = slots.data() + c * config.trials;
    bool failed = false;
    for (int t = 0; t < config.trials && !failed; ++t) failed = base[t].failed;
    if (failed) {
      rec.skipped = true;
      for (int t = 0; t < config.trials; ++t)
        if (base[t].failed) {
          rec.skip_reason = base[t].reason;
          break;
        }
      rec.trials = 0;
      rec.mean_err = rec.se_err = rec.frac_exact = rec.se_exact = rec.mean_objective =
          std::nan("");
      records.push_back(std::move(rec));
      continue;
    }

    rec.trials = config.trials;
    double sum_err = 0, sum_err2 = 0, sum_obj = 0;
    long long exact = 0;
    long long wall = 0;
    for (int t = 0; t < config.trials; ++t) {
      sum_err += base[t].result.err;
      sum_err2 += base[t].result.err * base[t].result.err;
      sum_obj += base[t].result.objective;
      exact += base[t].result.exact;
      wall += base[t].wall_ms;
    }
    const double trials = config.trials;
    rec.mean_err = sum_err / trials;
    const double var_err = std::max(0.0, sum_err2 / trials - rec.mean_err * rec.mean_err);
    rec.se_err = std::sqrt(var_err / trials);
    rec.frac_exact = exact / trials;
    rec.se_exact = std::sqrt(rec.frac_exact * (1.0 - rec.frac_exact) / trials);
    rec.mean_objective = sum_obj / trials;
    rec.wall_ms = wall;
    records.push_back(std::move(rec));
  }
  return records;
}

std::string phase_diagram_csv(const std::vector<CellRecord>& records) {
  std::string out =
      "n,p,rho,solver,trials,mean_err,se_err,frac_exact,se_exact,mean_objective,wall_ms,seed\n";
  for (const CellRecord& rec : records) {
    out += std::to_string(rec.n);
    out += ',';
    out += std::to_string(rec.p);
    out += ',';
    out += fmt10(rec.rho);
    out += ',';
    out += rec.solver;
    out += ',';
    out += std::to_string(rec.trials);
    for (const double x : {rec.mean_err, rec.se_err, rec.frac_exact, rec.se_exact,
                           rec.mean_objective}) {
      out += ',';
      out += fmt10(x);
    }
    out += ',';
    out += std::to_string(rec.wall_ms);
    out += ',';
    out += std::to_string(rec.seed);
    out += '\n';
  }
  return out;
}

DecayFit decay_fit(const std::vector<CellRecord>& records) {
  std::vector<double> xs, ys;
  for (const CellRecord& rec : records) {
    if (rec.skipped) continue;
    if (!(rec.mean_err > 0.0 && rec.mean_err < 1.0)) continue;
    xs.push_back(rec.n * std::min(rec.rho, rec.p * rec.rho * rec.rho));
    ys.push_back(std::log(rec.mean_err));
  }
  if (xs.size() < 3)
    throw std::invalid_argument("decay_fit: needs >= 3 cells with mean_err strictly in (0,1)");

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("decay_fit: degenerate abscissa");

  DecayFit fit;
  fit.points = static_cast<long long>(xs.size());
  fit.slope = (m * sxy - sx * sy) / denom;
  const double ss_tot = syy - sy * sy / m;
  const double intercept = (sy - fit.slope * sx) / m;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::pair<double, double> random_baseline(int n, int p, long long trials, std::uint64_t seed) {
  if (n < 2 || p < 2) throw std::invalid_argument("random_baseline: n,p >= 2");
  if (trials < 100) throw std::invalid_argument("random_baseline: trials >= 100");

  double sum = 0, sum2 = 0;
  for (long long t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, {kTagBaseline, static_cast<std::uint64_t>(t)}));
    PermutationTuple pi, pi_star;
    for (int j = 0; j < p; ++j) pi.perms.push_back(random_permutation(rng, n));
    for (int j = 0; j < p; ++j) pi_star.perms.push_back(random_permutation(rng, n));
    const double e = err_alignment(pi, pi_star).err;
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / trials;
  const double var = std::max(0.0, sum2 / trials - mean * mean);
  return {mean, std::sqrt(var / trials)};
}

}  // namespace graphalign
