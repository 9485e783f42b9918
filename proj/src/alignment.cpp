#include "graphalign/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace graphalign {

namespace {

Eigen::MatrixXd sparse_to_dense(int dim, int p, const std::vector<std::uint32_t>& cols,
                                double value) {
  if (dim > kDenseAlignmentCap)
    throw SizeGuardError("dense alignment matrix capped at dimension 4096");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int k = 0; k < p; ++k) out(r, cols[static_cast<std::size_t>(r) * p + k]) = value;
  return out;
}

// Sorted column lists for one row make membership tests O(log p); p is small,
// linear scan is fine.
bool row_contains(const std::uint32_t* row, int p, std::uint32_t c) {
  for (int k = 0; k < p; ++k)
    if (row[k] == c) return true;
  return false;
}

struct PairDeltas {
  long long mismatch_count = 0;  // ordered aligned-in-B pairs not aligned in B*
  long long l1_numerator = 0;    // p^2 * ||B* - B*B||_1
  long long trace_numerator = 0; // p^2 * Tr(B*B)
  long long differing_entries = 0;
};

// Shared between the edge-level and node-level matrices; both store p column
// ids per row with value 1/p.
PairDeltas pair_deltas(int dim, int p, const std::vector<std::uint32_t>& cols_pi,
                       const std::vector<std::uint32_t>& cols_star) {
  PairDeltas out;
  std::unordered_map<std::uint32_t, int> prod_row;  // c -> p^2 (B*B)_{r,c}
  for (int r = 0; r < dim; ++r) {
    const std::uint32_t* row_pi = cols_pi.data() + static_cast<std::size_t>(r) * p;
    const std::uint32_t* row_star = cols_star.data() + static_cast<std::size_t>(r) * p;

    for (int k = 0; k < p; ++k) {
      if (!row_contains(row_star, p, row_pi[k])) ++out.mismatch_count;
      if (!row_contains(row_star, p, row_pi[k])) ++out.differing_entries;
      if (!row_contains(row_pi, p, row_star[k])) ++out.differing_entries;
    }

    prod_row.clear();
    for (int k = 0; k < p; ++k) {
      const std::uint32_t mid = row_star[k];
      const std::uint32_t* row_mid = cols_pi.data() + static_cast<std::size_t>(mid) * p;
      for (int l = 0; l < p; ++l) ++prod_row[row_mid[l]];
    }
    long long row_l1 = 0;
    int hits_in_star = 0;
    for (const auto& [c, cnt] : prod_row) {
      if (row_contains(row_star, p, c)) {
        row_l1 += std::llabs(static_cast<long long>(p) - cnt);
        ++hits_in_star;
      } else {
        row_l1 += cnt;
      }
      if (c == static_cast<std::uint32_t>(r)) out.trace_numerator += cnt;
    }
    row_l1 += static_cast<long long>(p - hits_in_star) * p;  // star entries missed by the product
    out.l1_numerator += row_l1;
  }
  return out;
}

double binomial(double m, double k) {
  double out = 1.0;
  for (int i = 0; i < static_cast<int>(k); ++i) out *= (m - i) / (i + 1);
  return out;
}

}  // namespace

Eigen::MatrixXd EdgeAlignmentMatrix::dense() const {
  return sparse_to_dense(dim(), p, cols, entry_value());
}

Eigen::MatrixXd NodeAlignmentMatrix::dense() const {
  return sparse_to_dense(dim(), p, cols, entry_value());
}

Eigen::MatrixXd PartnershipMatrix::dense() const { return sparse_to_dense(dim(), p, cols, 1.0); }

EdgeAlignmentMatrix build_edge_alignment(const PermutationTuple& pi) {
  pi.validate();
  const int n = pi.n();
  const int p = pi.p();
  const int N = n * (n - 1) / 2;

  std::vector<std::vector<int>> tables(p);
  std::vector<std::vector<int>> inv_tables(p);
  for (int j = 0; j < p; ++j) {
    tables[j] = edge_permutation_table(pi.perms[j], n);
    inv_tables[j] = edge_permutation_table(inverse_permutation(pi.perms[j]), n);
  }

  EdgeAlignmentMatrix B;
  B.p = p;
  B.num_edges = N;
  B.cols.resize(static_cast<std::size_t>(p) * N * p);
  for (int j = 0; j < p; ++j)
    for (int e = 0; e < N; ++e) {
      const int target = tables[j][e];
      std::uint32_t* row = B.cols.data() + (static_cast<std::size_t>(j) * N + e) * p;
      for (int jp = 0; jp < p; ++jp)
        row[jp] = static_cast<std::uint32_t>(jp) * N + inv_tables[jp][target];
    }
  return B;
}

NodeAlignmentMatrix build_node_alignment(const PermutationTuple& pi) {
  pi.validate();
  const int n = pi.n();
  const int p = pi.p();

  std::vector<Permutation> inv(p);
  for (int j = 0; j < p; ++j) inv[j] = inverse_permutation(pi.perms[j]);

  NodeAlignmentMatrix A;
  A.p = p;
  A.num_nodes = n;
  A.cols.resize(static_cast<std::size_t>(p) * n * p);
  for (int j = 0; j < p; ++j)
    for (int u = 0; u < n; ++u) {
      const int target = pi.perms[j][u];
      std::uint32_t* row = A.cols.data() + (static_cast<std::size_t>(j) * n + u) * p;
      for (int jp = 0; jp < p; ++jp)
        row[jp] = static_cast<std::uint32_t>(jp) * n + inv[jp][target];
    }
  return A;
}

PartnershipMatrix build_partnership(const PermutationTuple& pi) {
  pi.validate();
  const int n = pi.n();
  const int p = pi.p();

  std::vector<Permutation> inv(p);
  for (int j = 0; j < p; ++j) inv[j] = inverse_permutation(pi.perms[j]);

  PartnershipMatrix M;
  M.n = n;
  M.p = p;
  M.cols.resize(static_cast<std::size_t>(n) * p * p);
  for (int u = 0; u < n; ++u)
    for (int j = 0; j < p; ++j) {
      const int target = pi.perms[j][u];
      std::uint32_t* row = M.cols.data() + (static_cast<std::size_t>(u) * p + j) * p;
      for (int jp = 0; jp < p; ++jp)
        row[jp] = static_cast<std::uint32_t>(inv[jp][target]) * p + jp;
    }
  return M;
}

MisalignmentReport misalignment(const PermutationTuple& pi, const PermutationTuple& pi_star) {
  pi.validate();
  pi_star.validate();
  if (pi.n() != pi_star.n() || pi.p() != pi_star.p())
    throw std::invalid_argument("misalignment: tuples must share (n,p)");
  const int p = pi.p();

  const EdgeAlignmentMatrix B = build_edge_alignment(pi);
  const EdgeAlignmentMatrix B_star = build_edge_alignment(pi_star);
  const NodeAlignmentMatrix A = build_node_alignment(pi);
  const NodeAlignmentMatrix A_star = build_node_alignment(pi_star);

  const PairDeltas db = pair_deltas(B.dim(), p, B.cols, B_star.cols);
  const PairDeltas da = pair_deltas(A.dim(), p, A.cols, A_star.cols);

  MisalignmentReport report;
  report.mismatch_count_B = db.mismatch_count;
  report.mismatch_count_A = da.mismatch_count;
  report.delta_B = 2.0 * db.mismatch_count / p;
  report.delta_A = 2.0 * da.mismatch_count / p;
  report.delta_B_direct = static_cast<double>(db.l1_numerator) / (static_cast<double>(p) * p);
  report.delta_A_direct = static_cast<double>(da.l1_numerator) / (static_cast<double>(p) * p);
  // 2p Tr(B* - B*B) = 2p N - (2/p) Tr-numerator, with Tr(B*) = N held exactly
  const long long pN_B = B.dim();
  const long long pN_A = A.dim();
  report.trace_form_B = 2.0 * (pN_B * p - db.trace_numerator) / p;
  report.trace_form_A = 2.0 * (pN_A * p - da.trace_numerator) / p;
  report.frobenius_gap = std::sqrt(static_cast<double>(db.differing_entries)) / p;

  const auto routes_agree = [p](const PairDeltas& d, long long pN) {
    return d.l1_numerator == 2 * d.mismatch_count * p &&
           d.mismatch_count == pN * p - d.trace_numerator;
  };
  report.routes_agree = routes_agree(db, pN_B) && routes_agree(da, pN_A);
  return report;
}

ProjectionCheck check_projection_identities_dense(const Eigen::MatrixXd& B,
                                                  double expected_trace) {
  ProjectionCheck check;
  check.symmetry_dev = (B - B.transpose()).cwiseAbs().maxCoeff();
  check.idempotence_dev = (B * B - B).cwiseAbs().maxCoeff();
  check.row_sum_dev = (B.rowwise().sum().array() - 1.0).abs().maxCoeff();
  check.trace_dev = std::abs(B.trace() - expected_trace);
  return check;
}

ProjectionCheck check_projection_identities(const EdgeAlignmentMatrix& B) {
  return check_projection_identities_dense(B.dense(), static_cast<double>(B.num_edges));
}

double alignment_bilinear(const GraphStack& x, const GraphStack& y, const PermutationTuple& pi) {
  pi.validate();
  const int n = pi.n();
  const int p = pi.p();
  const int N = n * (n - 1) / 2;
  if (x.p != p || y.p != p || x.num_edges != N || y.num_edges != N)
    throw std::invalid_argument("alignment_bilinear: shape mismatch");

  double total = 0;
  for (int j = 0; j < p; ++j) {
    for (int jp = 0; jp < p; ++jp) {
      const std::vector<int> table =
          edge_permutation_table(compose(inverse_permutation(pi.perms[jp]), pi.perms[j]), n);
      double acc = 0;
      for (int e = 0; e < N; ++e) acc += x.at(j, e) * y.at(jp, table[e]);
      total += acc;
    }
  }
  return total / p;
}

ObjectiveDecomposition decompose_objective(const Instance& inst, const PermutationTuple& pi) {
  const ProblemParams& params = inst.params;
  const int N = params.num_edges();

  GraphStack permuted_signal(params.p, N);  // G*: signal pulled through PI*
  for (int j = 0; j < params.p; ++j) {
    const std::vector<int> table = edge_permutation_table(inst.pi_star.perms[j], params.n);
    for (int e = 0; e < N; ++e) permuted_signal.at(j, e) = inst.signal[table[e]];
  }
  GraphStack noise(params.p, N);
  noise.weights = inst.noise;

  ObjectiveDecomposition out;
  out.signal = alignment_bilinear(permuted_signal, permuted_signal, inst.pi_star) -
               alignment_bilinear(permuted_signal, permuted_signal, pi);
  const auto cross_term = [&](const PermutationTuple& tuple) {
    return alignment_bilinear(permuted_signal, noise, tuple) +
           alignment_bilinear(noise, permuted_signal, tuple);
  };
  out.cross = cross_term(pi) - cross_term(inst.pi_star);
  out.quadratic =
      alignment_bilinear(noise, noise, pi) - alignment_bilinear(noise, noise, inst.pi_star);
  return out;
}

double operator_norm_gap(const EdgeAlignmentMatrix& B, const EdgeAlignmentMatrix& B_star) {
  if (B.dim() != B_star.dim() || B.p != B_star.p)
    throw std::invalid_argument("operator_norm_gap: shape mismatch");
  const int dim = B.dim();
  const int p = B.p;
  const double inv_p = 1.0 / p;

  const auto apply_gap = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (int r = 0; r < dim; ++r) {
      double acc = 0;
      const std::uint32_t* row_b = B.row(r);
      const std::uint32_t* row_s = B_star.row(r);
      for (int k = 0; k < p; ++k) acc += v[row_b[k]] - v[row_s[k]];
      out[r] = acc * inv_p;
    }
  };

  // deterministic start away from the all-ones kernel
  std::vector<double> v(dim), w(dim), t(dim);
  double norm = 0;
  for (int r = 0; r < dim; ++r) {
    v[r] = static_cast<double>(splitmix64(r) >> 11) * 0x1.0p-53 - 0.5;
    norm += v[r] * v[r];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;

  double lambda = 0;
  for (int it = 0; it < 10000; ++it) {
    apply_gap(v, t);
    apply_gap(t, w);  // w = (B-B*)^2 v
    double new_norm = 0;
    for (double x : w) new_norm += x * x;
    new_norm = std::sqrt(new_norm);
    if (new_norm == 0) return 0.0;
    for (int r = 0; r < dim; ++r) v[r] = w[r] / new_norm;
    const double prev = lambda;
    lambda = new_norm;
    if (it > 0 && std::abs(lambda - prev) <= 1e-10 * std::max(1.0, lambda)) break;
  }
  return std::sqrt(lambda);
}

AlignmentClassHistogram enumerate_alignment_classes(int n, int p) {
  if (n < 2 || p < 2) throw std::invalid_argument("enumerate_alignment_classes: n,p >= 2");
  double class_count = 1;
  for (int j = 1; j < p; ++j) {
    for (int k = 2; k <= n; ++k) class_count *= k;
    if (class_count > 1e5)
      throw SizeGuardError("enumerate_alignment_classes: (n!)^(p-1) exceeds 1e5");
  }

  AlignmentClassHistogram hist;
  hist.n = n;
  hist.p = p;

  const PermutationTuple pi_star = PermutationTuple::identity(n, p);
  PermutationTuple pi = PermutationTuple::identity(n, p);

  // odometer over coordinates 2..p in lexicographic order, pi_1 = id fixed
  const auto advance = [&]() {
    for (int j = p - 1; j >= 1; --j) {
      if (std::next_permutation(pi.perms[j].begin(), pi.perms[j].end())) return true;
      // wrapped to identity, carry on to the previous coordinate
    }
    return false;
  };

  do {
    long long mismatch = 0;
    for (int j = 0; j < p; ++j)
      for (int jp = 0; jp < p; ++jp) {
        if (j == jp) continue;
        const Permutation rel = compose(inverse_permutation(pi.perms[jp]), pi.perms[j]);
        for (int u = 0; u < n; ++u) mismatch += rel[u] != u;  // pi_j(u) = pi_jp(u'), u != u'
      }
    const double delta_a = 2.0 * mismatch / p;
    const int bucket = mismatch == 0 ? 0 : static_cast<int>(std::ceil(2.0 * delta_a - 1e-12));
    ++hist.bucket_counts[bucket];
    ++hist.num_classes;
  } while (advance());

  hist.binomial_bound_ok = true;
  const long long np = static_cast<long long>(n) * p;
  for (const auto& [t, count] : hist.bucket_counts) {
    if (t == 0) continue;
    const long long cap = std::min<long long>(t, np);
    const double bound = binomial(static_cast<double>(np), static_cast<double>(cap)) *
                         std::pow(static_cast<double>(n), static_cast<double>(cap));
    if (static_cast<double>(count) > bound) hist.binomial_bound_ok = false;
  }
  return hist;
}

}  // namespace graphalign
