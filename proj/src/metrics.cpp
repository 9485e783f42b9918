#include "graphalign/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace graphalign {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// Hungarian algorithm with potentials, O(n^3), exact on integer costs.
// Returns the minimum total cost; row_of[c] = row assigned to column c.
long long min_cost_assignment(const std::vector<std::vector<long long>>& cost,
                              std::vector<int>& row_of) {
  const int n = static_cast<int>(cost.size());
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      long long delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  row_of.assign(n, -1);
  long long total = 0;
  for (int j = 1; j <= n; ++j) {
    row_of[j - 1] = p[j] - 1;
    total += cost[p[j] - 1][j - 1];
  }
  return total;
}

long long max_assignment(const std::vector<std::vector<long long>>& weight,
                         std::vector<int>& col_of) {
  const int n = static_cast<int>(weight.size());
  std::vector<std::vector<long long>> cost(n, std::vector<long long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = -weight[i][j];
  std::vector<int> row_of;
  const long long total = min_cost_assignment(cost, row_of);
  col_of.assign(n, -1);
  for (int j = 0; j < n; ++j) col_of[row_of[j]] = j;
  return -total;
}

std::vector<std::vector<long long>> agreement_counts(const PermutationTuple& pi,
                                                     const PermutationTuple& pi_star,
                                                     const std::vector<int>& coords) {
  const int n = pi.n();
  std::vector<std::vector<long long>> counts(n, std::vector<long long>(n, 0));
  for (int j : coords)
    for (int u = 0; u < n; ++u) ++counts[pi.perms[j][u]][pi_star.perms[j][u]];
  return counts;
}

void check_same_shape(const PermutationTuple& pi, const PermutationTuple& pi_star) {
  pi.validate();
  pi_star.validate();
  if (pi.n() != pi_star.n() || pi.p() != pi_star.p())
    throw std::invalid_argument("permutation tuples must share (n,p)");
}

}  // namespace

long long max_assignment_value(const std::vector<std::vector<long long>>& weight) {
  std::vector<int> col_of;
  return max_assignment(weight, col_of);
}

Permutation lexmin_max_assignment(const std::vector<std::vector<long long>>& weight,
                                  long long* value) {
  const int n = static_cast<int>(weight.size());
  const long long best = max_assignment_value(weight);
  if (value) *value = best;

  // Fix psi(0), psi(1), ... greedily to the smallest column that still admits
  // an optimal completion of the remaining rows.
  Permutation psi(n, -1);
  std::vector<char> col_used(n, false);
  long long fixed_sum = 0;
  for (int u = 0; u < n; ++u) {
    const int rows_left = n - u - 1;
    for (int a = 0; a < n; ++a) {
      if (col_used[a]) continue;
      long long completion = 0;
      if (rows_left > 0) {
        std::vector<std::vector<long long>> sub(rows_left);
        for (int r = 0; r < rows_left; ++r) {
          sub[r].reserve(rows_left);
          for (int c = 0; c < n; ++c) {
            if (col_used[c] || c == a) continue;
            sub[r].push_back(weight[u + 1 + r][c]);
          }
        }
        completion = max_assignment_value(sub);
      }
      if (fixed_sum + weight[u][a] + completion == best) {
        psi[u] = a;
        col_used[a] = true;
        fixed_sum += weight[u][a];
        break;
      }
    }
  }
  return psi;
}

AssignmentResult err_alignment(const PermutationTuple& pi, const PermutationTuple& pi_star) {
  check_same_shape(pi, pi_star);
  const int n = pi.n();
  const int p = pi.p();
  std::vector<int> coords(p);
  std::iota(coords.begin(), coords.end(), 0);
  const auto counts = agreement_counts(pi, pi_star, coords);

  AssignmentResult result;
  long long best = 0;
  result.psi = lexmin_max_assignment(counts, &best);
  result.matched = best;
  result.total = static_cast<long long>(n) * p;
  result.err = 1.0 - static_cast<double>(result.matched) / static_cast<double>(result.total);
  return result;
}

AssignmentResult err_bruteforce(const PermutationTuple& pi, const PermutationTuple& pi_star) {
  check_same_shape(pi, pi_star);
  const int n = pi.n();
  const int p = pi.p();
  if (n > 7) throw SizeGuardError("err_bruteforce: n <= 7 required (n! relabelings)");

  std::vector<int> coords(p);
  std::iota(coords.begin(), coords.end(), 0);
  const auto counts = agreement_counts(pi, pi_star, coords);

  Permutation psi = identity_permutation(n);
  Permutation best_psi = psi;
  long long best = -1;
  do {
    long long matched = 0;
    for (int a = 0; a < n; ++a) matched += counts[a][psi[a]];
    if (matched > best) {  // strict: keeps the lexicographically first optimum
      best = matched;
      best_psi = psi;
    }
  } while (std::next_permutation(psi.begin(), psi.end()));

  // best_psi maps a -> psi(a) already in the err convention
  AssignmentResult result;
  result.psi = best_psi;
  result.matched = best;
  result.total = static_cast<long long>(n) * p;
  result.err = 1.0 - static_cast<double>(result.matched) / static_cast<double>(result.total);
  return result;
}

double hamming(const Permutation& sigma, const Permutation& tau) {
  if (sigma.size() != tau.size() || !is_permutation(sigma) || !is_permutation(tau))
    throw std::invalid_argument("hamming: permutations of the same [n] required");
  int mismatches = 0;
  for (std::size_t u = 0; u < sigma.size(); ++u) mismatches += sigma[u] != tau[u];
  return static_cast<double>(mismatches) / static_cast<double>(sigma.size());
}

double err_pair(const PermutationTuple& pi, const PermutationTuple& pi_star, int j, int jp) {
  check_same_shape(pi, pi_star);
  if (j == jp) throw std::invalid_argument("err_pair: coordinates must differ");
  if (j < 0 || jp < 0 || j >= pi.p() || jp >= pi.p())
    throw std::invalid_argument("err_pair: coordinate out of range");
  const auto counts = agreement_counts(pi, pi_star, {j, jp});
  const long long matched = max_assignment_value(counts);
  return 1.0 - static_cast<double>(matched) / static_cast<double>(2 * pi.n());
}

}  // namespace graphalign
