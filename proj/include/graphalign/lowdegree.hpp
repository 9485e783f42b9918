#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <tuple>

#include "graphalign/model.hpp"

namespace graphalign {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// The estimation target throughout this module is the indicator
// x = 1{pi*_1(r) = pi*_2(r)} rooted at the first node r = 0. Its joint law with
// any permutation-pattern statistic depends on the relative permutation
// sigma = (pi*_2)^{-1} o pi*_1 alone, so exact enumeration runs over S_n once.
constexpr int kTargetNode = 0;

// ---- generic joint-cumulant engine ----

// Exact finitely-supported joint distribution of k scalar variables.
struct AtomDistribution {
  std::vector<double> probs;                // one weight per atom, sums to 1
  std::vector<std::vector<double>> values;  // atom -> k variable values

  int num_vars() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
  void validate() const;
};

// Joint cumulant by the set-partition (Moebius) formula. k <= 8.
double joint_cumulant(const AtomDistribution& dist);
// Same quantity through the one-variable-pinned recursion; independent route.
double joint_cumulant_recursive(const AtomDistribution& dist);

// Isserlis / Wick: E[prod of standard normals named by labels] = number of
// perfect matchings pairing equal labels.
double gaussian_product_moment(const std::vector<int>& labels);

// ---- multigraph pairs and the kappa oracle ----

struct EdgeMultiset {
  std::vector<std::pair<int, int>> items;  // (edge id, multiplicity >= 1), sorted by edge

  int total() const;
  BigInt multiplicity_factorial() const;
};

struct MultiGraphPair {
  int n = 0;
  EdgeMultiset alpha1, alpha2;

  // side entries are (u, v, multiplicity) triplets
  static MultiGraphPair from_node_lists(int n,
                                        const std::vector<std::tuple<int, int, int>>& side1,
                                        const std::vector<std::tuple<int, int, int>>& side2);
  static MultiGraphPair from_edge_ids(int n, const std::vector<int>& side1,
                                      const std::vector<int>& side2);

  int total_size() const { return alpha1.total() + alpha2.total(); }
  double factorial() const;             // alpha! as a double (small here)
  int rooted_support_size(int side) const;  // |{root} u supp(alpha_side)|
};

// Pairing psi between the side-1 and side-2 multisets, listed as (e, psi(e)).
struct EdgeBijection {
  std::vector<std::pair<int, int>> pairs;
};

// nodes of positive degree among the given edges
int support_size(const std::vector<int>& edges, int n);
// |{root} u support|
int rooted_support_size(const std::vector<int>& edges, int n);

// Exact moments and joint cumulant of (x, matched-edge indicators
// 1{PI*_1(e) = PI*_2(psi(e))}) by full enumeration of sigma in S_n.
// moments[mask] = E[prod of selected variables], bit 0 = x, bit i = pair i.
struct IndicatorStats {
  int k = 0;                      // number of indicator variables
  std::vector<Rational> moments;  // size 2^(k+1)
  Rational cumulant;              // cumul(x, indicators)
};

IndicatorStats indicator_stats(const EdgeBijection& psi, int n);       // n <= 8, k <= 5
Rational indicator_moment(const EdgeBijection& psi, int n);            // E[x prod 1{...}]
Rational indicator_product_moment(const EdgeBijection& psi, int n);    // E[prod 1{...}]
Rational indicator_cumulant(const EdgeBijection& psi, int n);

// kappa_{x,alpha} = cumul(x, signal monomials of alpha1, of alpha2), exact via
// enumeration of sigma and Wick pairing of the induced edge labels (per-sigma
// Wick counts are integers, so the cumulant is an exact rational).
// Guards: |alpha| <= 4, n <= 7.
Rational kappa_exact_rational(const MultiGraphPair& alpha);
double kappa_exact(const MultiGraphPair& alpha);

// Closed-form cumulant bound, zero when |alpha1| != |alpha2|; undefined
// (signaled) when n - 1 - |alpha| <= 0.
double cumulant_bound(const MultiGraphPair& alpha);

// Monte-Carlo oracle for the same cumulant: raw sampling of the permutations
// and the latent Gaussian graph, batch means for the standard error. The
// moment-to-cumulant step uses the recursion, keeping the route independent
// of kappa_exact.
struct McEstimate {
  double mean = 0;
  double std_error = 0;
  long long trials = 0;
};

McEstimate kappa_monte_carlo(const MultiGraphPair& alpha, long long trials, std::uint64_t seed);

// ---- degree-D MMSE machinery ----

enum class ZetaVariant { theorem, appendix_p2 };

struct LowDegreeParams {
  int D = 0;
  double rho = 0;
  int n = 0;
  ZetaVariant variant = ZetaVariant::theorem;

  void validate() const;  // 0 <= rho < 1, 0 <= D <= n-2
};

double zeta(const LowDegreeParams& params);

// 1/n - 1/n^2 - (2/(n-1-D)^2) zeta (1+zeta)/(1-zeta); signaled when zeta >= 1.
double mmse_lower_bound(const LowDegreeParams& params);

double trivial_mmse(int n);

// Truncated sum over all multiset pairs with |alpha| <= D (p = 2 case),
// sum = Sigma (rho/(1-rho))^{|alpha|} kappa^2 / alpha!, plus the implied
// lower bound E[x^2] - sum. Term count: Sigma_{a+b<=D} C(N+a-1,a) C(N+b-1,b).
// Guards: n <= 6, D <= 2.
struct WsTruncatedSum {
  double sum = 0;
  double implied_bound = 0;
  long long terms = 0;
};

WsTruncatedSum ws_truncated_sum(int n, double rho, int D);

// sqrt(eps): bound on E[(1-err)^2] when MMSE_poly = (1/n)(1-eps).
double reduction_err_bound(double eps);

}  // namespace graphalign
