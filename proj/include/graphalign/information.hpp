#pragma once

#include <Eigen/Dense>

#include "graphalign/model.hpp"

namespace graphalign {

// Covariance of the observation vector under a fixed tuple and its inverse,
// both of the structured form coef_pB * pB(pi) + coef_I * I. The precision
// side is singular at rho = 1 and flagged unavailable there.
struct CovariancePair {
  ProblemParams params;
  PermutationTuple pi;
  double sigma_coef_pB = 0;  // rho
  double sigma_coef_I = 0;   // 1 - rho
  bool has_precision = false;
  double precision_coef_pB = 0;  // -rho / ((1-rho)(1+(p-1)rho))
  double precision_coef_I = 0;   // 1 / (1-rho)

  int dim() const { return params.p * params.num_edges(); }
  Eigen::MatrixXd dense_sigma() const;      // guard: dim <= 2048
  Eigen::MatrixXd dense_precision() const;  // guard + rho < 1
};

CovariancePair build_covariance(const PermutationTuple& pi, const ProblemParams& params);

// log dP_pi / dP_id for pi = (id,...,id,pi_p), evaluated on a stack. rho < 1.
double log_likelihood_ratio(const GraphStack& g, const Permutation& pi_p,
                            const ProblemParams& params);

// KL(P_pi, P_id) when pi_p is a transposition: (2n-3) rho^2 (p-1) / ((1-rho)(1+rho(p-1))).
double kl_transposition(int n, int p, double rho);

// Upper bound valid for any pi_p: n(n-1) rho^2 (p-1) / ((1-rho)(1+rho(p-1))).
double kl_upper_full(int n, int p, double rho);

struct KlEstimate {
  double mean = 0;
  double std_error = 0;
  long long trials = 0;
};

// Monte-Carlo KL(P_pi, P_id): average log-likelihood ratio over instances
// sampled conditionally on pi* = (id,...,id,pi_p).
KlEstimate kl_monte_carlo(const Permutation& pi_p, const ProblemParams& params,
                          long long trials, std::uint64_t seed);

// Minimax lower bounds on recovery error via Fano's inequality, clamped to [0,1].
double fano_partial_bound(int n, int p, double rho);
double fano_exact_bound(int n, int p, double rho);

// Order-of-magnitude recovery thresholds (multiplicative constants omitted).
struct ItThresholds {
  double partial = 0;  // max(log n / n, sqrt(log n / (np)))
  double exact = 0;    // same with log(np)
};

ItThresholds it_thresholds(int n, int p);

}  // namespace graphalign
