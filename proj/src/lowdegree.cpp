#include "graphalign/lowdegree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace graphalign {

namespace {

// All set partitions of [k] as lists of block bitmasks, cached per k.
const std::vector<std::vector<std::uint16_t>>& partitions_of(int k) {
  if (k < 1 || k > 9) throw SizeGuardError("set partitions supported for 1 <= k <= 9");
  static const auto cache = [] {
    std::vector<std::vector<std::vector<std::uint16_t>>> built(10);
    for (int kk = 1; kk <= 9; ++kk) {
      // restricted growth strings: rgs[0] = 0, rgs[i] <= max(rgs[0..i-1]) + 1
      std::vector<int> rgs(kk, 0);
      const auto rec = [&](auto&& self, int i, int mx) -> void {
        if (i == kk) {
          const int blocks = mx + 1;
          std::vector<std::uint16_t> masks(blocks, 0);
          for (int j = 0; j < kk; ++j) masks[rgs[j]] |= static_cast<std::uint16_t>(1u << j);
          built[kk].push_back(std::move(masks));
          return;
        }
        for (int v = 0; v <= mx + 1; ++v) {
          rgs[i] = v;
          self(self, i + 1, std::max(mx, v));
        }
      };
      rec(rec, 1, 0);
    }
    return built;
  }();
  return cache[k];
}

// moments[mask] = E[prod of variables in mask]; partition (Moebius) formula.
template <typename T>
T cumulant_from_moments(int k, const std::vector<T>& moments) {
  T total = T(0);
  for (const auto& partition : partitions_of(k)) {
    const int blocks = static_cast<int>(partition.size());
    long long coef = 1;  // (-1)^{blocks-1} (blocks-1)!
    for (int b = 1; b < blocks; ++b) coef *= -b;
    T prod = T(coef);
    for (const std::uint16_t mask : partition) prod *= moments[mask];
    total += prod;
  }
  return total;
}

// Recursion pinned on variable 0:
// cum(S) = mom(S) - sum over proper subsets A of S\{0} of cum({0} u A) mom(S \ {0} \ A).
template <typename T>
T cumulant_from_moments_recursive(int k, const std::vector<T>& moments) {
  const int full = (1 << k) - 1;
  std::vector<T> cum(1 << k, T(0));
  std::vector<char> ready(1 << k, false);

  const auto rec = [&](auto&& self, int mask) -> T {
    if (ready[mask]) return cum[mask];
    const int rest = mask & ~1;
    T value = moments[mask];
    // proper subsets of rest
    for (int a = (rest - 1) & rest;; a = (a - 1) & rest) {
      value -= self(self, a | 1) * moments[rest & ~a];
      if (a == 0) break;
    }
    ready[mask] = true;
    cum[mask] = value;
    return value;
  };
  if (k == 1) return moments[1];
  return rec(rec, full);
}

long long count_sigma_atoms(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int matching_count(std::vector<int>& labels) {
  const int m = static_cast<int>(labels.size());
  if (m == 0) return 1;
  if (m % 2) return 0;
  int total = 0;
  for (int j = 1; j < m; ++j) {
    if (labels[0] != labels[j]) continue;
    std::vector<int> rest;
    rest.reserve(m - 2);
    for (int i = 1; i < m; ++i)
      if (i != j) rest.push_back(labels[i]);
    total += matching_count(rest);
  }
  return total;
}

}  // namespace

void AtomDistribution::validate() const {
  if (probs.size() != values.size() || probs.empty())
    throw std::invalid_argument("AtomDistribution: probs and values must align");
  const int k = num_vars();
  if (k < 1) throw std::invalid_argument("AtomDistribution: at least one variable");
  double total = 0;
  for (double w : probs) {
    if (!(w >= 0)) throw std::invalid_argument("AtomDistribution: negative probability");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("AtomDistribution: probabilities must sum to 1");
  for (const auto& row : values)
    if (static_cast<int>(row.size()) != k)
      throw std::invalid_argument("AtomDistribution: ragged value rows");
}

namespace {

std::vector<double> subset_moments(const AtomDistribution& dist) {
  const int k = dist.num_vars();
  std::vector<double> moments(std::size_t(1) << k, 0.0);
  for (std::size_t a = 0; a < dist.probs.size(); ++a) {
    for (std::size_t mask = 0; mask < moments.size(); ++mask) {
      double prod = dist.probs[a];
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1) prod *= dist.values[a][i];
      moments[mask] += prod;
    }
  }
  return moments;
}

}  // namespace

double joint_cumulant(const AtomDistribution& dist) {
  dist.validate();
  const int k = dist.num_vars();
  if (k > 8) throw SizeGuardError("joint_cumulant: at most 8 variables");
  return cumulant_from_moments(k, subset_moments(dist));
}

double joint_cumulant_recursive(const AtomDistribution& dist) {
  dist.validate();
  const int k = dist.num_vars();
  if (k > 8) throw SizeGuardError("joint_cumulant_recursive: at most 8 variables");
  return cumulant_from_moments_recursive(k, subset_moments(dist));
}

double gaussian_product_moment(const std::vector<int>& labels) {
  std::vector<int> copy = labels;
  return static_cast<double>(matching_count(copy));
}

int EdgeMultiset::total() const {
  int t = 0;
  for (const auto& [e, m] : items) t += m;
  return t;
}

BigInt EdgeMultiset::multiplicity_factorial() const {
  BigInt f = 1;
  for (const auto& [e, m] : items)
    for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

MultiGraphPair MultiGraphPair::from_node_lists(
    int n, const std::vector<std::tuple<int, int, int>>& side1,
    const std::vector<std::tuple<int, int, int>>& side2) {
  const EdgeIndexer idx(n);
  MultiGraphPair alpha;
  alpha.n = n;
  const auto fill = [&](const std::vector<std::tuple<int, int, int>>& side, EdgeMultiset& out) {
    std::map<int, int> mults;
    for (const auto& [u, v, m] : side) {
      if (m < 1) throw std::invalid_argument("MultiGraphPair: multiplicities must be >= 1");
      mults[idx.edge_index(u, v)] += m;
    }
    out.items.assign(mults.begin(), mults.end());
  };
  fill(side1, alpha.alpha1);
  fill(side2, alpha.alpha2);
  return alpha;
}

MultiGraphPair MultiGraphPair::from_edge_ids(int n, const std::vector<int>& side1,
                                             const std::vector<int>& side2) {
  const EdgeIndexer idx(n);
  MultiGraphPair alpha;
  alpha.n = n;
  const auto fill = [&](const std::vector<int>& side, EdgeMultiset& out) {
    std::map<int, int> mults;
    for (int e : side) {
      idx.edge_of_index(e);  // range check
      ++mults[e];
    }
    out.items.assign(mults.begin(), mults.end());
  };
  fill(side1, alpha.alpha1);
  fill(side2, alpha.alpha2);
  return alpha;
}

double MultiGraphPair::factorial() const {
  return static_cast<double>(alpha1.multiplicity_factorial() * alpha2.multiplicity_factorial());
}

int support_size(const std::vector<int>& edges, int n) {
  const EdgeIndexer idx(n);
  std::vector<char> seen(n, false);
  int count = 0;
  for (int e : edges) {
    const auto [u, v] = idx.edge_of_index(e);
    if (!seen[u]) ++count, seen[u] = true;
    if (!seen[v]) ++count, seen[v] = true;
  }
  return count;
}

int rooted_support_size(const std::vector<int>& edges, int n) {
  const EdgeIndexer idx(n);
  std::vector<char> seen(n, false);
  seen[kTargetNode] = true;
  int count = 1;
  for (int e : edges) {
    const auto [u, v] = idx.edge_of_index(e);
    if (!seen[u]) ++count, seen[u] = true;
    if (!seen[v]) ++count, seen[v] = true;
  }
  return count;
}

int MultiGraphPair::rooted_support_size(int side) const {
  const EdgeMultiset& ms = side == 1 ? alpha1 : alpha2;
  std::vector<int> edges;
  for (const auto& [e, m] : ms.items) edges.push_back(e);
  return graphalign::rooted_support_size(edges, n);
}

IndicatorStats indicator_stats(const EdgeBijection& psi, int n) {
  if (n < 2 || n > 8) throw SizeGuardError("indicator_stats: 2 <= n <= 8");
  const int k = static_cast<int>(psi.pairs.size());
  if (k > 5) throw SizeGuardError("indicator_stats: at most 5 indicator variables");
  const EdgeIndexer idx(n);

  // distinct constraints; repeated pairs are the same variable repeated
  std::vector<std::pair<int, int>> distinct;
  std::vector<int> var_bit(k);
  for (int i = 0; i < k; ++i) {
    idx.edge_of_index(psi.pairs[i].first);
    idx.edge_of_index(psi.pairs[i].second);
    const auto it = std::find(distinct.begin(), distinct.end(), psi.pairs[i]);
    if (it == distinct.end()) {
      var_bit[i] = static_cast<int>(distinct.size());
      distinct.push_back(psi.pairs[i]);
    } else {
      var_bit[i] = static_cast<int>(it - distinct.begin());
    }
  }
  const int d = static_cast<int>(distinct.size());

  std::vector<std::pair<std::pair<int, int>, int>> constraints;  // ((u,v), target edge)
  for (const auto& [e, f] : distinct) constraints.push_back({idx.edge_of_index(e), f});

  std::vector<long long> hist(std::size_t(1) << (d + 1), 0);
  Permutation sigma = identity_permutation(n);
  do {
    unsigned mask = sigma[kTargetNode] == kTargetNode ? 1u : 0u;
    for (int c = 0; c < d; ++c) {
      const auto& [uv, f] = constraints[c];
      if (idx.edge_index(sigma[uv.first], sigma[uv.second]) == f) mask |= 2u << c;
    }
    ++hist[mask];
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  // superset sums: cnt[m] = #sigma whose pattern contains m
  std::vector<long long> cnt = hist;
  for (int b = 0; b <= d; ++b)
    for (std::size_t m = 0; m < cnt.size(); ++m)
      if (!(m >> b & 1)) cnt[m] += cnt[m | (std::size_t(1) << b)];

  const long long atoms = count_sigma_atoms(n);
  IndicatorStats stats;
  stats.k = k;
  stats.moments.resize(std::size_t(1) << (k + 1));
  for (std::size_t vm = 0; vm < stats.moments.size(); ++vm) {
    std::size_t bits = vm & 1;
    for (int i = 0; i < k; ++i)
      if (vm >> (i + 1) & 1) bits |= std::size_t(2) << var_bit[i];
    stats.moments[vm] = Rational(BigInt(cnt[bits]), BigInt(atoms));
  }
  stats.cumulant = cumulant_from_moments(k + 1, stats.moments);
  return stats;
}

Rational indicator_moment(const EdgeBijection& psi, int n) {
  const IndicatorStats stats = indicator_stats(psi, n);
  return stats.moments.back();
}

Rational indicator_product_moment(const EdgeBijection& psi, int n) {
  const IndicatorStats stats = indicator_stats(psi, n);
  return stats.moments[stats.moments.size() - 2];  // all indicator bits, no x
}

Rational indicator_cumulant(const EdgeBijection& psi, int n) {
  return indicator_stats(psi, n).cumulant;
}

Rational kappa_exact_rational(const MultiGraphPair& alpha) {
  const int n = alpha.n;
  if (n < 2 || n > 7) throw SizeGuardError("kappa_exact: 2 <= n <= 7");
  const int total = alpha.total_size();
  if (total > 4) throw SizeGuardError("kappa_exact: |alpha| <= 4");
  const EdgeIndexer idx(n);

  // expanded copies: side-1 labels move with sigma, side-2 labels are fixed
  std::vector<std::pair<int, int>> moving;  // endpoints of side-1 copies
  std::vector<int> fixed;                   // edge ids of side-2 copies
  for (const auto& [e, m] : alpha.alpha1.items)
    for (int i = 0; i < m; ++i) moving.push_back(idx.edge_of_index(e));
  for (const auto& [e, m] : alpha.alpha2.items)
    for (int i = 0; i < m; ++i) fixed.push_back(e);

  const int m1 = static_cast<int>(moving.size());
  const int m2 = static_cast<int>(fixed.size());
  const int g = m1 + m2;

  std::vector<long long> acc_plain(std::size_t(1) << g, 0);
  std::vector<long long> acc_x(std::size_t(1) << g, 0);
  std::vector<int> labels(g);
  std::vector<int> chosen;
  chosen.reserve(g);

  Permutation sigma = identity_permutation(n);
  do {
    for (int i = 0; i < m1; ++i)
      labels[i] = idx.edge_index(sigma[moving[i].first], sigma[moving[i].second]);
    for (int i = 0; i < m2; ++i) labels[m1 + i] = fixed[i];
    const bool x_val = sigma[kTargetNode] == kTargetNode;
    for (std::size_t gm = 0; gm < acc_plain.size(); ++gm) {
      chosen.clear();
      for (int i = 0; i < g; ++i)
        if (gm >> i & 1) chosen.push_back(labels[i]);
      const int w = matching_count(chosen);
      if (w == 0) continue;
      acc_plain[gm] += w;
      if (x_val) acc_x[gm] += w;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  const long long atoms = count_sigma_atoms(n);
  const int k = 1 + g;
  std::vector<Rational> moments(std::size_t(1) << k);
  for (std::size_t vm = 0; vm < moments.size(); ++vm) {
    const std::size_t gm = vm >> 1;
    moments[vm] = Rational(BigInt((vm & 1) ? acc_x[gm] : acc_plain[gm]), BigInt(atoms));
  }
  return static_cast<double>(cumulant_from_moments(k, moments));
}

double cumulant_bound(const MultiGraphPair& alpha) {
  const int n = alpha.n;
  const int total = alpha.total_size();
  if (n - 1 - total <= 0)
    throw std::domain_error("cumulant_bound: undefined for n - 1 - |alpha| <= 0");
  if (alpha.alpha1.total() != alpha.alpha2.total()) return 0.0;
  const double base =
      total == 0 ? 1.0 : std::pow(total * (1.0 + total / 2.0), total / 2.0);
  const int exponent = alpha.rooted_support_size(1) + alpha.rooted_support_size(2);
  return base * std::pow(std::sqrt(2.0) / std::sqrt(static_cast<double>(n - 1 - total)),
                         exponent);
}

McEstimate kappa_monte_carlo(const MultiGraphPair& alpha, long long trials, std::uint64_t seed) {
  const int n = alpha.n;
  if (n < 2) throw std::invalid_argument("kappa_monte_carlo: n >= 2");
  if (trials < 1000) throw std::invalid_argument("kappa_monte_carlo: trials >= 1000");
  const EdgeIndexer idx(n);
  const int N = idx.num_edges();

  std::vector<std::pair<int, int>> side1, side2;
  for (const auto& [e, m] : alpha.alpha1.items)
    for (int i = 0; i < m; ++i) side1.push_back(idx.edge_of_index(e));
  for (const auto& [e, m] : alpha.alpha2.items)
    for (int i = 0; i < m; ++i) side2.push_back(idx.edge_of_index(e));
  const int k = 1 + static_cast<int>(side1.size() + side2.size());
  if (k > 9) throw SizeGuardError("kappa_monte_carlo: too many variables");

  constexpr int kBatches = 32;
  const long long per_batch = trials / kBatches;
  if (per_batch < 10) throw std::invalid_argument("kappa_monte_carlo: trials too small");

  Rng rng(derive_seed(seed, {0x6b6d63}));
  std::vector<double> latent(N);
  std::vector<double> values(k);
  std::vector<double> batch_cumulants;
  batch_cumulants.reserve(kBatches);
  std::vector<double> moments(std::size_t(1) << k);

  for (int b = 0; b < kBatches; ++b) {
    std::fill(moments.begin(), moments.end(), 0.0);
    for (long long t = 0; t < per_batch; ++t) {
      const Permutation pi1 = random_permutation(rng, n);
      const Permutation pi2 = random_permutation(rng, n);
      for (double& h : latent) h = rng.next_normal();
      values[0] = pi1[kTargetNode] == pi2[kTargetNode] ? 1.0 : 0.0;
      int slot = 1;
      for (const auto& [u, v] : side1) values[slot++] = latent[idx.edge_index(pi1[u], pi1[v])];
      for (const auto& [u, v] : side2) values[slot++] = latent[idx.edge_index(pi2[u], pi2[v])];
      for (std::size_t mask = 0; mask < moments.size(); ++mask) {
        double prod = 1.0;
        for (int i = 0; i < k; ++i)
          if (mask >> i & 1) prod *= values[i];
        moments[mask] += prod;
      }
    }
    for (double& m : moments) m /= static_cast<double>(per_batch);
    batch_cumulants.push_back(cumulant_from_moments_recursive(k, moments));
  }

  McEstimate est;
  est.trials = per_batch * kBatches;
  double sum = 0, sum2 = 0;
  for (double c : batch_cumulants) {
    sum += c;
    sum2 += c * c;
  }
  est.mean = sum / kBatches;
  const double var = std::max(0.0, sum2 / kBatches - est.mean * est.mean);
  est.std_error = std::sqrt(var / kBatches);
  return est;
}

void LowDegreeParams::validate() const {
  if (n < 2) throw std::invalid_argument("LowDegreeParams: n >= 2");
  if (D < 0) throw std::invalid_argument("LowDegreeParams: D >= 0");
  if (D > n - 2) throw std::invalid_argument("LowDegreeParams: D <= n - 2 required");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("LowDegreeParams: rho in [0,1) required");
}

double zeta(const LowDegreeParams& params) {
  params.validate();
  const double D = params.D;
  const double shape = 2.0 / std::pow(1.0 - (D + 1.0) / params.n, 2.0);
  if (params.variant == ZetaVariant::theorem) {
    const double s = std::sqrt(params.rho);
    return D * D * D * s / (1.0 - s) * std::sqrt(1.0 + D / 2.0) * shape;
  }
  return D * D * D * params.rho / (1.0 - params.rho) * (1.0 + D / 2.0) * shape;
}

double mmse_lower_bound(const LowDegreeParams& params) {
  const double z = zeta(params);
  if (!(z < 1.0))
    throw std::domain_error("mmse_lower_bound: unavailable, zeta = " + std::to_string(z) +
                            " >= 1");
  const double n = params.n;
  const double gap = n - 1.0 - params.D;
  return 1.0 / n - 1.0 / (n * n) - (2.0 / (gap * gap)) * z * (1.0 + z) / (1.0 - z);
}

double trivial_mmse(int n) {
  if (n < 2) throw std::invalid_argument("trivial_mmse: n >= 2");
  const double nn = n;
  return 1.0 / nn - 1.0 / (nn * nn);
}

WsTruncatedSum ws_truncated_sum(int n, double rho, int D) {
  if (n < 2) throw std::invalid_argument("ws_truncated_sum: n >= 2");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("ws_truncated_sum: rho in [0,1)");
  if (n > 6) throw SizeGuardError("ws_truncated_sum: n <= 6 (exhaustive alpha enumeration)");
  if (D < 0 || D > 2) throw SizeGuardError("ws_truncated_sum: D <= 2 (multisets rejected beyond)");

  const int N = n * (n - 1) / 2;
  // per-side multisets by size: size 0 -> {}, 1 -> {e}, 2 -> {e,f} with e <= f
  std::vector<std::vector<std::vector<int>>> by_size(3);
  by_size[0] = {{}};
  for (int e = 0; e < N; ++e) by_size[1].push_back({e});
  for (int e = 0; e < N; ++e)
    for (int f = e; f < N; ++f) by_size[2].push_back({e, f});

  WsTruncatedSum out;
  const double ratio = rho / (1.0 - rho);
  for (int a = 0; a <= D; ++a) {
    for (int b = 0; a + b <= D; ++b) {
      for (const auto& s1 : by_size[a]) {
        for (const auto& s2 : by_size[b]) {
          const MultiGraphPair alpha = MultiGraphPair::from_edge_ids(n, s1, s2);
          const double kappa = kappa_exact(alpha);
          const double weight = (a + b == 0) ? 1.0 : std::pow(ratio, a + b);
          out.sum += weight * kappa * kappa / alpha.factorial();
          ++out.terms;
        }
      }
    }
  }
  out.implied_bound = 1.0 / n - out.sum;  // E[x^2] = 1/n
  return out;
}

double reduction_err_bound(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("reduction_err_bound: eps in [0,1]");
  return std::sqrt(eps);
}

}  // namespace graphalign
