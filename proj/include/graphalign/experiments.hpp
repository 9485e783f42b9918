#pragma once

#include "graphalign/estimators.hpp"

namespace graphalign {

struct SweepConfig {
  std::vector<int> ns;
  std::vector<int> ps;
  std::vector<double> rhos;
  int trials = 1;
  SolverOptions solver;
  std::uint64_t master_seed = 0;
  int threads = 0;           // 0 = all available cores
  bool measure_wall = false; // off by default so the CSV is bit-reproducible

  void validate() const;
  static SweepConfig from_json(const std::string& text);
};

struct CellRecord {
  int n = 0;
  int p = 0;
  double rho = 0;
  std::string solver;
  int trials = 0;
  double mean_err = 0, se_err = 0;
  double frac_exact = 0, se_exact = 0;
  double mean_objective = 0;
  long long wall_ms = 0;
  std::uint64_t seed = 0;     // per-cell base seed derived from the master seed
  bool skipped = false;       // infeasible cells are emitted, not dropped
  std::string skip_reason;
};

struct TrialResult {
  double err = 0;
  bool exact = false;
  double objective = 0;
};

// One sampled instance scored against its own truth. The solver seed is
// derived from trial_seed, so identical trial seeds give identical output.
TrialResult run_trial(const ProblemParams& params, const SolverOptions& solver,
                      std::uint64_t trial_seed);

// Full grid sweep. Per-cell trial seeds are hash(master_seed, cell, trial);
// records are identical for every parallelism level.
std::vector<CellRecord> run_phase_diagram(const SweepConfig& config);

// CSV with the fixed header, LF endings, floats at 10 significant digits.
// Skipped cells carry trials=0 and nan statistics.
std::string phase_diagram_csv(const std::vector<CellRecord>& records);

// Least-squares fit of log(mean_err) against n*min(rho, p rho^2) over cells
// with mean_err strictly inside (0,1); a shape check, not a constant estimate.
struct DecayFit {
  double slope = 0;
  double r2 = 0;
  long long points = 0;
};

DecayFit decay_fit(const std::vector<CellRecord>& records);

// Monte-Carlo E[err] for an independent uniform tuple against a uniform truth.
std::pair<double, double> random_baseline(int n, int p, long long trials, std::uint64_t seed);

}  // namespace graphalign
