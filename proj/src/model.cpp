#include "graphalign/model.hpp"

#include <algorithm>
#include <cmath>

namespace graphalign {

namespace {

// purpose tags for instance substreams
constexpr std::uint64_t kTagPermutations = 1;
constexpr std::uint64_t kTagSignal = 2;
constexpr std::uint64_t kTagNoise = 3;
constexpr std::uint64_t kTagCorrTrial = 4;

}  // namespace

void ProblemParams::validate() const {
  if (n < 2) throw std::invalid_argument("ProblemParams: n must be >= 2");
  if (p < 2) throw std::invalid_argument("ProblemParams: p must be >= 2");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("ProblemParams: rho must lie in [0,1]");
}

EdgeIndexer::EdgeIndexer(int n) : n_(n), num_edges_(n * (n - 1) / 2) {
  if (n < 2) throw std::invalid_argument("EdgeIndexer: n must be >= 2");
}

int EdgeIndexer::edge_index(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v)
    throw std::invalid_argument("edge_index: nodes must be distinct and in [0,n)");
  if (u > v) std::swap(u, v);
  return u * n_ - u * (u + 1) / 2 + (v - u - 1);
}

std::pair<int, int> EdgeIndexer::edge_of_index(int e) const {
  if (e < 0 || e >= num_edges_)
    throw std::invalid_argument("edge_of_index: edge id out of range");
  int u = 0;
  int row = n_ - 1;  // edges with first endpoint u
  while (e >= row) {
    e -= row;
    ++u;
    --row;
  }
  return {u, u + 1 + e};
}

bool is_permutation(const Permutation& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation identity_permutation(int n) {
  Permutation perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  return perm;
}

Permutation inverse_permutation(const Permutation& perm) {
  Permutation inv(perm.size());
  for (int i = 0; i < static_cast<int>(perm.size()); ++i) inv[perm[i]] = i;
  return inv;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (int i = 0; i < static_cast<int>(b.size()); ++i) out[i] = a[b[i]];
  return out;
}

Permutation random_permutation(Rng& rng, int n) {
  Permutation perm = identity_permutation(n);
  for (int i = n - 1; i >= 1; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

int apply_edge_permutation(const Permutation& pi, int e, int n) {
  const EdgeIndexer idx(n);
  if (static_cast<int>(pi.size()) != n || !is_permutation(pi))
    throw std::invalid_argument("apply_edge_permutation: invalid permutation");
  const auto [u, v] = idx.edge_of_index(e);
  return idx.edge_index(pi[u], pi[v]);
}

std::vector<int> edge_permutation_table(const Permutation& pi, int n) {
  const EdgeIndexer idx(n);
  std::vector<int> table(idx.num_edges());
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      table[idx.edge_index(u, v)] = idx.edge_index(pi[u], pi[v]);
  return table;
}

void PermutationTuple::validate() const {
  if (perms.size() < 1) throw std::invalid_argument("PermutationTuple: empty");
  const std::size_t n = perms[0].size();
  for (const auto& perm : perms) {
    if (perm.size() != n || !is_permutation(perm))
      throw std::invalid_argument("PermutationTuple: entries must be same-size bijections");
  }
}

PermutationTuple PermutationTuple::identity(int n, int p) {
  PermutationTuple tuple;
  tuple.perms.assign(p, identity_permutation(n));
  return tuple;
}

PermutationTuple global_relabel(const Permutation& phi, const PermutationTuple& pi) {
  PermutationTuple out;
  out.perms.reserve(pi.perms.size());
  for (const auto& perm : pi.perms) out.perms.push_back(compose(phi, perm));
  return out;
}

namespace {

Instance assemble_instance(const ProblemParams& params, std::uint64_t seed,
                           PermutationTuple pi_star) {
  const int n = params.n;
  const int p = params.p;
  const int N = params.num_edges();

  Instance inst;
  inst.params = params;
  inst.seed = seed;
  inst.pi_star = std::move(pi_star);

  Rng signal_rng(derive_seed(seed, {kTagSignal}));
  inst.signal.resize(N);
  for (int e = 0; e < N; ++e) inst.signal[e] = signal_rng.next_normal();

  Rng noise_rng(derive_seed(seed, {kTagNoise}));
  inst.noise.resize(static_cast<std::size_t>(p) * N);
  for (double& z : inst.noise) z = noise_rng.next_normal();

  // Assembled with one fixed expression; exact at rho = 0 and rho = 1 since
  // sqrt(0) and sqrt(1) are exact.
  const double s = std::sqrt(params.rho);
  const double t = std::sqrt(1.0 - params.rho);
  inst.observed = GraphStack(p, N);
  for (int j = 0; j < p; ++j) {
    const std::vector<int> edge_perm = edge_permutation_table(inst.pi_star.perms[j], n);
    for (int e = 0; e < N; ++e)
      inst.observed.at(j, e) = s * inst.signal[edge_perm[e]] + t * inst.noise_at(j, e);
  }
  return inst;
}

}  // namespace

Instance sample_instance(const ProblemParams& params, std::uint64_t seed) {
  params.validate();
  Rng perm_rng(derive_seed(seed, {kTagPermutations}));
  PermutationTuple pi_star;
  pi_star.perms.reserve(params.p);
  for (int j = 0; j < params.p; ++j) pi_star.perms.push_back(random_permutation(perm_rng, params.n));
  return assemble_instance(params, seed, std::move(pi_star));
}

Instance sample_instance_conditioned(const ProblemParams& params, std::uint64_t seed,
                                     const PermutationTuple& pi_star) {
  params.validate();
  pi_star.validate();
  if (pi_star.p() != params.p || pi_star.n() != params.n)
    throw std::invalid_argument("sample_instance_conditioned: tuple shape mismatch");
  return assemble_instance(params, seed, pi_star);
}

EdgeCorrelationReport empirical_edge_correlation(const ProblemParams& params,
                                                 long long trials, std::uint64_t seed) {
  params.validate();
  if (trials < 100)
    throw std::invalid_argument("empirical_edge_correlation: trials must be >= 100");

  const EdgeIndexer idx(params.n);
  const int N = idx.num_edges();

  double sum_al = 0, sum_al2 = 0;
  double sum_un = 0, sum_un2 = 0;
  double sum_v = 0, sum_v2 = 0;
  for (long long t = 0; t < trials; ++t) {
    const Instance inst =
        sample_instance(params, derive_seed(seed, {kTagCorrTrial, static_cast<std::uint64_t>(t)}));
    const std::vector<int> p1 = edge_permutation_table(inst.pi_star.perms[0], params.n);
    const std::vector<int> p2inv =
        edge_permutation_table(inverse_permutation(inst.pi_star.perms[1]), params.n);

    const int e = 0;
    const int e_aligned = p2inv[p1[e]];  // PI*_2(e_aligned) = PI*_1(e)
    const double x = inst.observed.at(0, e);
    const double y = inst.observed.at(1, e_aligned);
    sum_al += x * y;
    sum_al2 += x * y * x * y;
    sum_v += x * x;
    sum_v2 += x * x * x * x;
    if (N >= 2) {
      const int e_other = (e_aligned + 1) % N;
      const double z = inst.observed.at(1, e_other);
      sum_un += x * z;
      sum_un2 += x * z * x * z;
    }
  }

  const auto mean_se = [trials](double s, double s2) {
    const double mean = s / trials;
    const double var = std::max(0.0, s2 / trials - mean * mean);
    return std::pair<double, double>{mean, std::sqrt(var / trials)};
  };

  EdgeCorrelationReport report;
  report.trials = trials;
  // marginals are exactly N(0,1), so E[XY] is the correlation itself
  std::tie(report.aligned_corr, report.aligned_se) = mean_se(sum_al, sum_al2);
  std::tie(report.variance, report.variance_se) = mean_se(sum_v, sum_v2);
  if (N >= 2) {
    std::tie(report.unaligned_corr, report.unaligned_se) = mean_se(sum_un, sum_un2);
  } else {
    report.unaligned_corr = report.unaligned_se = std::nan("");
  }
  return report;
}

}  // namespace graphalign
