#include "graphalign/information.hpp"

#include <algorithm>
#include <cmath>

#include "graphalign/alignment.hpp"

namespace graphalign {

namespace {

constexpr int kDenseCovarianceCap = 2048;
constexpr std::uint64_t kTagKlTrial = 0x6b6c7472;

void check_rho_below_one(double rho, const char* where) {
  if (!(rho < 1.0))
    throw std::invalid_argument(std::string(where) + ": rho = 1 is singular here");
}

}  // namespace

Eigen::MatrixXd CovariancePair::dense_sigma() const {
  if (dim() > kDenseCovarianceCap)
    throw SizeGuardError("dense covariance capped at dimension 2048");
  const EdgeAlignmentMatrix B = build_edge_alignment(pi);
  Eigen::MatrixXd out = B.dense() * (sigma_coef_pB * params.p);
  out.diagonal().array() += 0.0;  // diagonal of pB is already 1
  out += sigma_coef_I * Eigen::MatrixXd::Identity(dim(), dim());
  return out;
}

Eigen::MatrixXd CovariancePair::dense_precision() const {
  if (!has_precision)
    throw std::invalid_argument("CovariancePair: precision unavailable at rho = 1");
  if (dim() > kDenseCovarianceCap)
    throw SizeGuardError("dense precision capped at dimension 2048");
  const EdgeAlignmentMatrix B = build_edge_alignment(pi);
  Eigen::MatrixXd out = B.dense() * (precision_coef_pB * params.p);
  out += precision_coef_I * Eigen::MatrixXd::Identity(dim(), dim());
  return out;
}

CovariancePair build_covariance(const PermutationTuple& pi, const ProblemParams& params) {
  params.validate();
  pi.validate();
  if (pi.n() != params.n || pi.p() != params.p)
    throw std::invalid_argument("build_covariance: tuple shape mismatch");

  CovariancePair cov;
  cov.params = params;
  cov.pi = pi;
  cov.sigma_coef_pB = params.rho;
  cov.sigma_coef_I = 1.0 - params.rho;
  if (params.rho < 1.0) {
    cov.has_precision = true;
    cov.precision_coef_pB =
        -params.rho / ((1.0 - params.rho) * (1.0 + (params.p - 1) * params.rho));
    cov.precision_coef_I = 1.0 / (1.0 - params.rho);
  }
  return cov;
}

double log_likelihood_ratio(const GraphStack& g, const Permutation& pi_p,
                            const ProblemParams& params) {
  params.validate();
  check_rho_below_one(params.rho, "log_likelihood_ratio");
  if (static_cast<int>(pi_p.size()) != params.n || !is_permutation(pi_p))
    throw std::invalid_argument("log_likelihood_ratio: pi_p must be a bijection of [0,n)");
  if (g.p != params.p || g.num_edges != params.num_edges())
    throw std::invalid_argument("log_likelihood_ratio: stack shape mismatch");

  const int p = params.p;
  const int N = params.num_edges();
  const double rho = params.rho;

  const std::vector<int> inv_table =
      edge_permutation_table(inverse_permutation(pi_p), params.n);

  // prefix[e] = sum of the first p-1 graphs at edge e
  double total = 0;
  const double prefactor = p * p * rho / (2.0 * (1.0 - rho) * (1.0 + rho * (p - 1)));
  for (int e = 0; e < N; ++e) {
    double prefix = 0;
    for (int j = 0; j < p - 1; ++j) prefix += g.at(j, e);
    const double mean_id = (prefix + g.at(p - 1, e)) / p;
    const double mean_pi = (prefix + g.at(p - 1, inv_table[e])) / p;
    total += mean_pi * mean_pi - mean_id * mean_id;
  }
  return prefactor * total;
}

double kl_transposition(int n, int p, double rho) {
  if (n < 2 || p < 2) throw std::invalid_argument("kl_transposition: n,p >= 2");
  if (!(rho >= 0.0)) throw std::invalid_argument("kl_transposition: rho >= 0");
  check_rho_below_one(rho, "kl_transposition");
  return (2.0 * n - 3.0) * rho * rho * (p - 1) / ((1.0 - rho) * (1.0 + rho * (p - 1)));
}

double kl_upper_full(int n, int p, double rho) {
  if (n < 2 || p < 2) throw std::invalid_argument("kl_upper_full: n,p >= 2");
  if (!(rho >= 0.0)) throw std::invalid_argument("kl_upper_full: rho >= 0");
  check_rho_below_one(rho, "kl_upper_full");
  return static_cast<double>(n) * (n - 1) * rho * rho * (p - 1) /
         ((1.0 - rho) * (1.0 + rho * (p - 1)));
}

KlEstimate kl_monte_carlo(const Permutation& pi_p, const ProblemParams& params,
                          long long trials, std::uint64_t seed) {
  params.validate();
  check_rho_below_one(params.rho, "kl_monte_carlo");
  if (trials < 1000) throw std::invalid_argument("kl_monte_carlo: trials must be >= 1000");
  if (static_cast<int>(pi_p.size()) != params.n || !is_permutation(pi_p))
    throw std::invalid_argument("kl_monte_carlo: pi_p must be a bijection of [0,n)");

  PermutationTuple truth = PermutationTuple::identity(params.n, params.p);
  truth.perms[params.p - 1] = pi_p;

  double sum = 0, sum2 = 0;
  for (long long t = 0; t < trials; ++t) {
    const Instance inst = sample_instance_conditioned(
        params, derive_seed(seed, {kTagKlTrial, static_cast<std::uint64_t>(t)}), truth);
    const double llr = log_likelihood_ratio(inst.observed, pi_p, params);
    sum += llr;
    sum2 += llr * llr;
  }

  KlEstimate est;
  est.trials = trials;
  est.mean = sum / trials;
  const double var = std::max(0.0, sum2 / trials - est.mean * est.mean);
  est.std_error = std::sqrt(var / trials);
  return est;
}

double fano_partial_bound(int n, int p, double rho) {
  if (n < 2 || p < 2) throw std::invalid_argument("fano_partial_bound: n,p >= 2");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("fano_partial_bound: rho in [0,1]");
  const double denom = (n / 6.0) * std::log(n / 24.0);
  if (!(denom > 0)) return 0.0;  // vacuous for n <= 24
  if (rho == 1.0) return 0.0;    // KL diverges, bound clamps to 0
  const double kl = kl_upper_full(n, p, rho);
  const double bound = (3.0 / 8.0) * (1.0 - (1.0 + kl) / denom);
  return std::clamp(bound, 0.0, 1.0);
}

double fano_exact_bound(int n, int p, double rho) {
  if (n < 2 || p < 2) throw std::invalid_argument("fano_exact_bound: n,p >= 2");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("fano_exact_bound: rho in [0,1]");
  const double denom = std::log(static_cast<double>(n) * p * (n - 1));
  if (!(denom > 0)) return 0.0;
  if (rho == 1.0) return 0.0;
  const double kl = kl_transposition(n, p, rho);
  const double bound = 1.0 - (1.0 + kl) / denom;
  return std::clamp(bound, 0.0, 1.0);
}

ItThresholds it_thresholds(int n, int p) {
  if (n < 2 || p < 2) throw std::invalid_argument("it_thresholds: n,p >= 2");
  const double np = static_cast<double>(n) * p;
  ItThresholds out;
  out.partial = std::max(std::log(n) / n, std::sqrt(std::log(n) / np));
  out.exact = std::max(std::log(np) / n, std::sqrt(std::log(np) / np));
  return out;
}

}  // namespace graphalign
