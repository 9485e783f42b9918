#pragma once

#include <cstdint>
#include <map>

#include <Eigen/Dense>

#include "graphalign/model.hpp"

namespace graphalign {

// Dense materialization is capped: these matrices are projections with p
// nonzeros per row and every identity is computable from the column lists.
constexpr int kDenseAlignmentCap = 4096;

// Normalized edge alignment matrix B(pi), entry ((j,e),(j',e')) = (1/p) 1{PI_j(e)=PI_j'(e')}.
// Row j*N+e stores the p column ids sharing the value 1/p, sorted by graph index.
struct EdgeAlignmentMatrix {
  int p = 0;
  int num_edges = 0;
  std::vector<std::uint32_t> cols;  // p entries per row

  int dim() const { return p * num_edges; }
  double entry_value() const { return 1.0 / p; }
  const std::uint32_t* row(int r) const { return cols.data() + static_cast<std::size_t>(r) * p; }
  Eigen::MatrixXd dense() const;  // guard: dim() <= kDenseAlignmentCap
};

// Normalized vertex alignment matrix A(pi), entry ((j,u),(j',u')) = (1/p) 1{pi_j(u)=pi_j'(u')}.
struct NodeAlignmentMatrix {
  int p = 0;
  int num_nodes = 0;
  std::vector<std::uint32_t> cols;

  int dim() const { return p * num_nodes; }
  double entry_value() const { return 1.0 / p; }
  const std::uint32_t* row(int r) const { return cols.data() + static_cast<std::size_t>(r) * p; }
  Eigen::MatrixXd dense() const;
};

// 0/1 partnership matrix M(pi), entry ((u,j),(u',j')) = 1{pi_j(u)=pi_j'(u')};
// row index u*p + j. Equals p*A(pi) up to the index reshuffle.
struct PartnershipMatrix {
  int n = 0;
  int p = 0;
  std::vector<std::uint32_t> cols;  // p ones per row

  int dim() const { return n * p; }
  const std::uint32_t* row(int r) const { return cols.data() + static_cast<std::size_t>(r) * p; }
  double frobenius_sq() const { return static_cast<double>(n) * p * p; }
  Eigen::MatrixXd dense() const;
};

EdgeAlignmentMatrix build_edge_alignment(const PermutationTuple& pi);
NodeAlignmentMatrix build_node_alignment(const PermutationTuple& pi);
PartnershipMatrix build_partnership(const PermutationTuple& pi);

// Misalignment of pi against pi_star. delta values are exact integer mismatch
// counts scaled by 2/p; the three routes to delta_B (pair count, entrywise l1
// of B*-B*B, 2p Tr(B*-B*B)) are compared in integer arithmetic.
struct MisalignmentReport {
  long long mismatch_count_B = 0;  // ordered pairs aligned by B but not by B*
  long long mismatch_count_A = 0;
  double delta_B = 0;              // ||B* - B*B||_1
  double delta_A = 0;              // ||A* - A*A||_1
  double delta_B_direct = 0;       // entrywise l1, computed independently
  double delta_A_direct = 0;
  double trace_form_B = 0;         // 2p Tr(B* - B*B)
  double trace_form_A = 0;
  double frobenius_gap = 0;        // ||B - B*||_F
  bool routes_agree = false;       // exact agreement of all routes
};

MisalignmentReport misalignment(const PermutationTuple& pi, const PermutationTuple& pi_star);

// Projection identities B^T = B, B^2 = B, B 1 = 1, Tr(B) = N.
struct ProjectionCheck {
  double symmetry_dev = 0;
  double idempotence_dev = 0;
  double row_sum_dev = 0;
  double trace_dev = 0;

  bool pass(double tol = 1e-12) const {
    return symmetry_dev <= tol && idempotence_dev <= tol && row_sum_dev <= tol &&
           trace_dev <= tol;
  }
};

ProjectionCheck check_projection_identities(const EdgeAlignmentMatrix& B);
ProjectionCheck check_projection_identities_dense(const Eigen::MatrixXd& B,
                                                  double expected_trace);

// <X Y^T, B(pi)> computed in O(p^2 N) from the column structure.
double alignment_bilinear(const GraphStack& x, const GraphStack& y, const PermutationTuple& pi);

// Terms of the optimality decomposition at pi against the instance truth:
// signal = <G*(G*)^T, B*-B>, cross = <G*Z^T + Z(G*)^T, B-B*>, quadratic = <ZZ^T, B-B*>.
// rho*signal - sqrt(rho(1-rho))*cross - (1-rho)*quadratic = <GG^T, B*-B> identically.
struct ObjectiveDecomposition {
  double signal = 0;
  double cross = 0;
  double quadratic = 0;
};

ObjectiveDecomposition decompose_objective(const Instance& inst, const PermutationTuple& pi);

// ||B - B*||_op via power iteration on (B-B*)^2 (1e-10 relative, 10^4 cap).
double operator_norm_gap(const EdgeAlignmentMatrix& B, const EdgeAlignmentMatrix& B_star);

// Classes of (S_n)^p under global relabeling (pi_1 fixed to id), bucketed by
// delta_A against the identity tuple; bucket t covers delta_A in ((t-1)/2, t/2],
// with t = 0 reserved for the exact class. Guard: (n!)^(p-1) <= 1e5.
struct AlignmentClassHistogram {
  int n = 0;
  int p = 0;
  long long num_classes = 0;
  std::map<int, long long> bucket_counts;
  bool binomial_bound_ok = false;  // |A_t| <= C(np, t^np) n^(t^np) for every bucket
};

AlignmentClassHistogram enumerate_alignment_classes(int n, int p);

}  // namespace graphalign
