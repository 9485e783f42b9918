#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graphalign/rng.hpp"

namespace graphalign {

// Thrown when a request exceeds a documented size guard (distinct from plain
// parameter validation so the CLI can map it to its own exit code).
class SizeGuardError : public std::runtime_error {
 public:
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

struct ProblemParams {
  int n = 0;      // node count, >= 2
  int p = 0;      // graph count, >= 2
  double rho = 0; // correlation in [0,1]

  void validate() const;
  int num_edges() const { return n * (n - 1) / 2; }
};

// Bijection between unordered node pairs {u,v}, u<v, and 0..N-1, lexicographic
// on (u,v). This order is fixed: serialized instances depend on it.
class EdgeIndexer {
 public:
  explicit EdgeIndexer(int n);

  int n() const { return n_; }
  int num_edges() const { return num_edges_; }

  int edge_index(int u, int v) const;
  std::pair<int, int> edge_of_index(int e) const;

 private:
  int n_;
  int num_edges_;
};

using Permutation = std::vector<int>;

bool is_permutation(const Permutation& perm);
Permutation identity_permutation(int n);
Permutation inverse_permutation(const Permutation& perm);
// (a o b)(u) = a[b[u]]
Permutation compose(const Permutation& a, const Permutation& b);
Permutation random_permutation(Rng& rng, int n);

// Edge-level action of a node permutation: {u,v} -> {pi(u), pi(v)}.
int apply_edge_permutation(const Permutation& pi, int e, int n);
// Full edge permutation as a lookup table of length N.
std::vector<int> edge_permutation_table(const Permutation& pi, int n);

struct PermutationTuple {
  std::vector<Permutation> perms;

  int p() const { return static_cast<int>(perms.size()); }
  int n() const { return perms.empty() ? 0 : static_cast<int>(perms[0].size()); }
  void validate() const;

  static PermutationTuple identity(int n, int p);
  bool operator==(const PermutationTuple& other) const { return perms == other.perms; }
};

// Applies a global relabeling phi to every coordinate: pi_j -> phi o pi_j.
PermutationTuple global_relabel(const Permutation& phi, const PermutationTuple& pi);

struct GraphStack {
  int p = 0;
  int num_edges = 0;
  std::vector<double> weights;  // row-major, weights[j*num_edges + e]

  GraphStack() = default;
  GraphStack(int p_, int num_edges_) : p(p_), num_edges(num_edges_),
      weights(static_cast<std::size_t>(p_) * num_edges_, 0.0) {}

  double at(int j, int e) const { return weights[static_cast<std::size_t>(j) * num_edges + e]; }
  double& at(int j, int e) { return weights[static_cast<std::size_t>(j) * num_edges + e]; }
};

struct Instance {
  ProblemParams params;
  std::uint64_t seed = 0;
  PermutationTuple pi_star;
  std::vector<double> signal;  // latent graph H0, length N
  std::vector<double> noise;   // p x N, same layout as observed
  GraphStack observed;

  double noise_at(int j, int e) const {
    return noise[static_cast<std::size_t>(j) * params.num_edges() + e];
  }
};

// Draws pi_star uniformly, the latent graph and noise i.i.d. standard normal,
// and assembles observed[j][e] = sqrt(rho)*signal[PI*_j(e)] + sqrt(1-rho)*noise[j][e].
// Bit-reproducible from (params, seed); substreams are derived per purpose.
Instance sample_instance(const ProblemParams& params, std::uint64_t seed);

// Sampler conditioned on a fixed permutation tuple (same streams for signal/noise).
Instance sample_instance_conditioned(const ProblemParams& params, std::uint64_t seed,
                                     const PermutationTuple& pi_star);

struct EdgeCorrelationReport {
  double aligned_corr = 0, aligned_se = 0;
  double unaligned_corr = 0, unaligned_se = 0;
  double variance = 0, variance_se = 0;
  long long trials = 0;
};

// Monte-Carlo check of the model covariance: correlation across an aligned edge
// pair, across an unaligned pair, and the marginal variance (with standard errors).
EdgeCorrelationReport empirical_edge_correlation(const ProblemParams& params,
                                                 long long trials, std::uint64_t seed);

}  // namespace graphalign
