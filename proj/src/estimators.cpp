#include "graphalign/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "graphalign/alignment.hpp"

namespace graphalign {

namespace {

constexpr std::uint64_t kTagRestart = 0x72657374;  // local-search restart
constexpr std::uint64_t kTagStage1 = 0x73746731;
constexpr std::uint64_t kTagStage2 = 0x73746732;
constexpr std::uint64_t kTagPairwise = 0x70616972;

void check_stack(const GraphStack& g) {
  if (g.p < 2) throw std::invalid_argument("GraphStack: p must be >= 2");
  // num_edges must be triangular: recover n
  const int N = g.num_edges;
  const int n = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * N)) / 2.0 + 0.5);
  if (n * (n - 1) / 2 != N)
    throw std::invalid_argument("GraphStack: num_edges is not of the form n(n-1)/2");
}

int nodes_of_stack(const GraphStack& g) {
  return static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(g.num_edges))) / 2.0 +
                          0.5);
}

// Local-search state: graphs relabeled into the common space,
// R_j[e] = G_j[PI_j^{-1}(e)], and their sum S. The objective is |S|^2 / p.
struct SearchState {
  const GraphStack* g = nullptr;
  int n = 0, p = 0, N = 0;
  EdgeIndexer idx;
  PermutationTuple pi;
  std::vector<Permutation> inv;
  std::vector<double> relabeled;  // p x N
  std::vector<double> sum;        // N

  explicit SearchState(const GraphStack& stack, PermutationTuple start)
      : g(&stack), n(nodes_of_stack(stack)), p(stack.p), N(stack.num_edges), idx(n),
        pi(std::move(start)) {
    inv.resize(p);
    relabeled.assign(static_cast<std::size_t>(p) * N, 0.0);
    sum.assign(N, 0.0);
    rebuild();
  }

  double& rel(int j, int e) { return relabeled[static_cast<std::size_t>(j) * N + e]; }

  void rebuild() {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (int j = 0; j < p; ++j) {
      inv[j] = inverse_permutation(pi.perms[j]);
      const std::vector<int> inv_table = edge_permutation_table(inv[j], n);
      for (int e = 0; e < N; ++e) {
        rel(j, e) = g->at(j, inv_table[e]);
        sum[e] += rel(j, e);
      }
    }
  }

  double objective_tracked() const {
    double acc = 0;
    for (double s : sum) acc += s * s;
    return acc / p;
  }

  // Objective change from swapping the images of u and v in coordinate j.
  double swap_delta(int j, int u, int v) const {
    const int gu = pi.perms[j][u];
    const int gv = pi.perms[j][v];
    double delta = 0;
    for (int w = 0; w < n; ++w) {
      if (w == gu || w == gv) continue;
      const int pre = inv[j][w];
      const double xu = g->at(j, idx.edge_index(u, pre));
      const double xv = g->at(j, idx.edge_index(v, pre));
      const int eu = idx.edge_index(gu, w);
      const int ev = idx.edge_index(gv, w);
      // after the swap, PI_j^{-1}({gu,w}) = {v,pre} and PI_j^{-1}({gv,w}) = {u,pre}
      const double su = sum[eu] - xu + xv;
      const double sv = sum[ev] - xv + xu;
      delta += su * su - sum[eu] * sum[eu] + sv * sv - sum[ev] * sum[ev];
    }
    return delta / p;
  }

  void apply_swap(int j, int u, int v) {
    const int gu = pi.perms[j][u];
    const int gv = pi.perms[j][v];
    for (int w = 0; w < n; ++w) {
      if (w == gu || w == gv) continue;
      const int pre = inv[j][w];
      const double xu = g->at(j, idx.edge_index(u, pre));
      const double xv = g->at(j, idx.edge_index(v, pre));
      const int eu = idx.edge_index(gu, w);
      const int ev = idx.edge_index(gv, w);
      sum[eu] += xv - xu;
      sum[ev] += xu - xv;
      rel(j, eu) += xv - xu;
      rel(j, ev) += xu - xv;
    }
    std::swap(pi.perms[j][u], pi.perms[j][v]);
    std::swap(inv[j][gu], inv[j][gv]);
  }
};

PermutationTuple random_tuple(Rng& rng, int n, int p) {
  PermutationTuple pi;
  pi.perms.reserve(p);
  for (int j = 0; j < p; ++j) pi.perms.push_back(random_permutation(rng, n));
  return pi;
}

// One hill-climbing run from the given start.
PermutationTuple climb(const GraphStack& g, PermutationTuple start, int max_sweeps, Rng& rng) {
  SearchState state(g, std::move(start));
  const int n = state.n;
  std::vector<std::pair<int, int>> moves;
  moves.reserve(n * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) moves.emplace_back(u, v);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    state.rebuild();  // shed accumulated float drift
    const double eps = 1e-9 * (1.0 + std::abs(state.objective_tracked()));
    bool moved = false;
    for (int j = 0; j < state.p; ++j) {
      for (std::size_t i = moves.size(); i > 1; --i)
        std::swap(moves[i - 1], moves[rng.next_below(i)]);
      for (const auto& [u, v] : moves) {
        if (state.swap_delta(j, u, v) > eps) {
          state.apply_swap(j, u, v);
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  return state.pi;
}

// Relative permutation of a 2-stack estimate: pair (psi1, psi2) == (id, psi1^{-1} o psi2).
Permutation relative_of_pair(const AlignmentEstimate& est) {
  return compose(inverse_permutation(est.pi_hat.perms[0]), est.pi_hat.perms[1]);
}

AlignmentEstimate align_pair(const std::vector<double>& left, const GraphStack& g, int j,
                             const SolverOptions& opts, std::uint64_t seed) {
  GraphStack pair(2, g.num_edges);
  for (int e = 0; e < g.num_edges; ++e) {
    pair.at(0, e) = left[e];
    pair.at(1, e) = g.at(j, e);
  }
  if (opts.stage_kind == SolverKind::exhaustive) return mle_exhaustive(pair, opts.size_guard);
  SolverOptions stage_opts = opts;
  stage_opts.seed = seed;
  return mle_local_search(pair, stage_opts);
}

}  // namespace

const char* solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::exhaustive: return "exhaustive";
    case SolverKind::local_search: return "local-search";
    case SolverKind::pairwise: return "pairwise";
    case SolverKind::two_stage: return "two-stage";
  }
  return "unknown";
}

SolverKind solver_kind_from_name(const std::string& name) {
  if (name == "exhaustive") return SolverKind::exhaustive;
  if (name == "local-search") return SolverKind::local_search;
  if (name == "pairwise") return SolverKind::pairwise;
  if (name == "two-stage") return SolverKind::two_stage;
  throw std::invalid_argument("unknown solver kind: " + name);
}

void SolverOptions::validate() const {
  if (restarts < 1) throw std::invalid_argument("SolverOptions: restarts >= 1 required");
  if (max_sweeps < 1) throw std::invalid_argument("SolverOptions: max_sweeps >= 1 required");
  if (!(two_stage_C > 0)) throw std::invalid_argument("SolverOptions: two_stage_C > 0 required");
  if (stage_kind != SolverKind::exhaustive && stage_kind != SolverKind::local_search)
    throw std::invalid_argument("SolverOptions: stage_kind must be exhaustive or local-search");
}

double mle_objective(const GraphStack& g, const PermutationTuple& pi) {
  check_stack(g);
  return alignment_bilinear(g, g, pi);
}

AlignmentEstimate mle_exhaustive(const GraphStack& g, std::uint64_t size_guard, bool quotient) {
  check_stack(g);
  const int n = nodes_of_stack(g);
  const int p = g.p;

  double count = 1;
  const int free_coords = quotient ? p - 1 : p;
  for (int j = 0; j < free_coords; ++j)
    for (int k = 2; k <= n; ++k) count *= k;
  if (count > static_cast<double>(size_guard))
    throw SizeGuardError("mle_exhaustive: enumeration of " + std::to_string(count) +
                         " tuples exceeds guard " + std::to_string(size_guard));

  PermutationTuple pi = PermutationTuple::identity(n, p);
  const int first_free = quotient ? 1 : 0;

  AlignmentEstimate best;
  best.pi_hat = pi;
  best.objective = mle_objective(g, pi);

  // odometer in lexicographic tuple order; strict improvement keeps the first
  // (lexicographically smallest) argmax
  const auto advance = [&]() {
    for (int j = p - 1; j >= first_free; --j) {
      if (std::next_permutation(pi.perms[j].begin(), pi.perms[j].end())) return true;
    }
    return false;
  };
  while (advance()) {
    const double obj = mle_objective(g, pi);
    if (obj > best.objective) {
      best.objective = obj;
      best.pi_hat = pi;
    }
  }
  best.solver_trace = {best.objective};
  return best;
}

AlignmentEstimate mle_local_search(const GraphStack& g, const SolverOptions& opts) {
  check_stack(g);
  opts.validate();
  const int n = nodes_of_stack(g);
  const int p = g.p;

  AlignmentEstimate best;
  bool have_best = false;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(derive_seed(opts.seed, {kTagRestart, static_cast<std::uint64_t>(r)}));
    PermutationTuple start = random_tuple(rng, n, p);
    const double start_obj = mle_objective(g, start);

    PermutationTuple found = climb(g, start, opts.max_sweeps, rng);
    double obj = mle_objective(g, found);
    if (obj < start_obj) {  // float pathology only; the climb never degrades
      found = start;
      obj = start_obj;
    }
    best.solver_trace.push_back(obj);
    if (!have_best || obj > best.objective) {
      best.objective = obj;
      best.pi_hat = found;
      have_best = true;
    }
  }
  return best;
}

std::vector<double> aggregate_graph(const GraphStack& g, const PermutationTuple& pi_hat,
                                    int p_prime) {
  check_stack(g);
  if (p_prime < 1 || p_prime > g.p)
    throw std::invalid_argument("aggregate_graph: p_prime must lie in [1,p]");
  if (pi_hat.p() < p_prime) throw std::invalid_argument("aggregate_graph: tuple too short");
  const int n = nodes_of_stack(g);
  const int N = g.num_edges;

  std::vector<double> agg(N, 0.0);
  for (int j = 0; j < p_prime; ++j) {
    const std::vector<int> inv_table =
        edge_permutation_table(inverse_permutation(pi_hat.perms[j]), n);
    for (int e = 0; e < N; ++e) agg[e] += g.at(j, inv_table[e]);
  }
  for (double& x : agg) x /= p_prime;
  return agg;
}

AlignmentEstimate two_stage(const GraphStack& g, const ProblemParams& params,
                            const SolverOptions& opts) {
  check_stack(g);
  params.validate();
  opts.validate();
  if (!(params.rho > 0)) throw std::invalid_argument("two_stage: rho > 0 required (p' undefined)");
  if (g.p != params.p || g.num_edges != params.num_edges())
    throw std::invalid_argument("two_stage: stack does not match params");

  const int p = g.p;
  const int p_prime = std::min<int>(p, static_cast<int>(std::ceil(opts.two_stage_C / params.rho)));

  AlignmentEstimate stage1;
  if (p_prime == 1) {
    stage1.pi_hat.perms = {identity_permutation(params.n)};
  } else {
    GraphStack head(p_prime, g.num_edges);
    std::copy(g.weights.begin(),
              g.weights.begin() + static_cast<std::size_t>(p_prime) * g.num_edges,
              head.weights.begin());
    if (opts.stage_kind == SolverKind::exhaustive) {
      stage1 = mle_exhaustive(head, opts.size_guard);
    } else {
      SolverOptions stage_opts = opts;
      stage_opts.seed = derive_seed(opts.seed, {kTagStage1});
      stage1 = mle_local_search(head, stage_opts);
    }
  }

  AlignmentEstimate estimate;
  estimate.pi_hat.perms = stage1.pi_hat.perms;
  if (p_prime < p) {
    const std::vector<double> agg = aggregate_graph(g, stage1.pi_hat, p_prime);
    for (int j = p_prime; j < p; ++j) {
      const AlignmentEstimate pair_est =
          align_pair(agg, g, j, opts, derive_seed(opts.seed, {kTagStage2, static_cast<std::uint64_t>(j)}));
      estimate.pi_hat.perms.push_back(relative_of_pair(pair_est));
    }
  }
  estimate.objective = mle_objective(g, estimate.pi_hat);
  estimate.solver_trace = stage1.solver_trace.empty() ? std::vector<double>{estimate.objective}
                                                      : stage1.solver_trace;
  return estimate;
}

AlignmentEstimate pairwise_baseline(const GraphStack& g, const SolverOptions& opts) {
  check_stack(g);
  opts.validate();
  const int n = nodes_of_stack(g);
  const int N = g.num_edges;

  std::vector<double> first(N);
  for (int e = 0; e < N; ++e) first[e] = g.at(0, e);

  AlignmentEstimate estimate;
  estimate.pi_hat.perms = {identity_permutation(n)};
  for (int j = 1; j < g.p; ++j) {
    const AlignmentEstimate pair_est =
        align_pair(first, g, j, opts, derive_seed(opts.seed, {kTagPairwise, static_cast<std::uint64_t>(j)}));
    estimate.pi_hat.perms.push_back(relative_of_pair(pair_est));
  }
  estimate.objective = mle_objective(g, estimate.pi_hat);
  estimate.solver_trace = {estimate.objective};
  return estimate;
}

AlignmentEstimate solve(const GraphStack& g, const ProblemParams& params,
                        const SolverOptions& opts) {
  switch (opts.kind) {
    case SolverKind::exhaustive: return mle_exhaustive(g, opts.size_guard);
    case SolverKind::local_search: return mle_local_search(g, opts);
    case SolverKind::pairwise: return pairwise_baseline(g, opts);
    case SolverKind::two_stage: return two_stage(g, params, opts);
  }
  throw std::invalid_argument("solve: unknown solver kind");
}

double effective_correlation(double rho, int p) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("effective_correlation: rho in [0,1]");
  if (p < 2) throw std::invalid_argument("effective_correlation: p >= 2");
  return std::sqrt(static_cast<double>(p - 1)) * rho / std::sqrt(1.0 + (p - 2) * rho);
}

}  // namespace graphalign
