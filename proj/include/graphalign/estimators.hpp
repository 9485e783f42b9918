#pragma once

#include "graphalign/model.hpp"

namespace graphalign {

enum class SolverKind { exhaustive, local_search, pairwise, two_stage };

const char* solver_kind_name(SolverKind kind);
SolverKind solver_kind_from_name(const std::string& name);

struct SolverOptions {
  SolverKind kind = SolverKind::local_search;
  int restarts = 1;
  int max_sweeps = 1000;
  std::uint64_t seed = 0;
  double two_stage_C = 1.0;           // p' = min(p, ceil(C / rho))
  std::uint64_t size_guard = 1000000; // max enumeration count for exhaustive search
  // inner solver for the stages of two_stage and for pairwise alignments
  SolverKind stage_kind = SolverKind::local_search;

  void validate() const;
};

struct AlignmentEstimate {
  PermutationTuple pi_hat;
  double objective = 0;               // always mle_objective(G, pi_hat)
  std::vector<double> solver_trace;   // best objective per restart
};

// <GG^T, B(pi)> in O(p^2 N) without materializing B.
double mle_objective(const GraphStack& g, const PermutationTuple& pi);

// Global argmax over (S_n)^p / global relabeling, pi_1 fixed to id, enumerated
// in lexicographic order (first maximum kept, so ties resolve lexicographically).
// Refuses when (n!)^(p-1) exceeds the guard. quotient=false searches the full
// (S_n)^p, for quotient-soundness checks only.
AlignmentEstimate mle_exhaustive(const GraphStack& g, std::uint64_t size_guard = 1000000,
                                 bool quotient = true);

// Hill climbing over single transpositions, one coordinate at a time, sweeping
// coordinates cyclically, first-improvement in an order reshuffled each sweep.
// Surrogate only: this is not a polynomial-time algorithm with guarantees.
AlignmentEstimate mle_local_search(const GraphStack& g, const SolverOptions& opts);

// Average of the first p_prime graphs pulled back through pi_hat.
std::vector<double> aggregate_graph(const GraphStack& g, const PermutationTuple& pi_hat,
                                    int p_prime);

// Stage 1: align graphs 1..p' with the stage solver; stage 2: align each
// remaining graph pairwise against the aggregated graph. Requires rho > 0.
AlignmentEstimate two_stage(const GraphStack& g, const ProblemParams& params,
                            const SolverOptions& opts);

// pi_1 = id, every other graph aligned pairwise with G_1.
AlignmentEstimate pairwise_baseline(const GraphStack& g, const SolverOptions& opts);

// Dispatch on opts.kind.
AlignmentEstimate solve(const GraphStack& g, const ProblemParams& params,
                        const SolverOptions& opts);

// Correlation after aggregating p-1 graphs against one: sqrt(p-1) rho / sqrt(1+(p-2) rho).
double effective_correlation(double rho, int p);

}  // namespace graphalign
