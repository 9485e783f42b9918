#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "graphalign/io.hpp"
#include "graphalign/model.hpp"

using namespace graphalign;

TEST_CASE("edge indexing") {
  const EdgeIndexer idx4(4);
  CHECK(idx4.edge_index(0, 1) == 0);
  CHECK(idx4.edge_index(2, 3) == 5);
  CHECK(idx4.num_edges() == 6);

  const EdgeIndexer idx5(5);
  CHECK(idx5.edge_index(3, 1) == 5);  // order-insensitive
  CHECK(idx5.edge_index(1, 3) == 5);

  CHECK_THROWS_AS(idx4.edge_index(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(idx4.edge_index(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(idx4.edge_index(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(idx4.edge_of_index(6), std::invalid_argument);
}

TEST_CASE("edge index round-trips for all n up to 64") {
  for (int n = 2; n <= 64; ++n) {
    const EdgeIndexer idx(n);
    int expected = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        const int e = idx.edge_index(u, v);
        CHECK(e == expected);  // lexicographic order
        const auto [a, b] = idx.edge_of_index(e);
        CHECK(a == u);
        CHECK(b == v);
        ++expected;
      }
    CHECK(expected == idx.num_edges());
  }
}

TEST_CASE("edge permutation action") {
  const int n = 4;
  const Permutation id = identity_permutation(n);
  const EdgeIndexer idx(n);
  for (int e = 0; e < idx.num_edges(); ++e) CHECK(apply_edge_permutation(id, e, n) == e);

  Permutation swap01 = id;
  std::swap(swap01[0], swap01[1]);
  CHECK(apply_edge_permutation(swap01, idx.edge_index(0, 2), n) == idx.edge_index(1, 2));
  CHECK(apply_edge_permutation(swap01, idx.edge_index(0, 1), n) == idx.edge_index(0, 1));

  const std::vector<int> table = edge_permutation_table(swap01, n);
  for (int e = 0; e < idx.num_edges(); ++e)
    CHECK(table[e] == apply_edge_permutation(swap01, e, n));
}

TEST_CASE("sampled instances satisfy the assembly identity exactly") {
  for (const double rho : {0.0, 0.3, 0.7, 1.0}) {
    const ProblemParams params{6, 3, rho};
    const Instance inst = sample_instance(params, 42);
    const double s = std::sqrt(rho);
    const double t = std::sqrt(1.0 - rho);
    for (int j = 0; j < params.p; ++j) {
      const std::vector<int> table = edge_permutation_table(inst.pi_star.perms[j], params.n);
      for (int e = 0; e < params.num_edges(); ++e) {
        const double assembled = s * inst.signal[table[e]] + t * inst.noise_at(j, e);
        CHECK(inst.observed.at(j, e) == assembled);  // bitwise
      }
    }
  }
}

TEST_CASE("rho endpoints are exact") {
  const ProblemParams noiseless{5, 2, 1.0};
  const Instance a = sample_instance(noiseless, 7);
  for (int j = 0; j < 2; ++j) {
    const std::vector<int> table = edge_permutation_table(a.pi_star.perms[j], 5);
    for (int e = 0; e < a.params.num_edges(); ++e)
      CHECK(a.observed.at(j, e) == a.signal[table[e]]);
  }

  const ProblemParams independent{5, 2, 0.0};
  const Instance b = sample_instance(independent, 7);
  for (int j = 0; j < 2; ++j)
    for (int e = 0; e < b.params.num_edges(); ++e)
      CHECK(b.observed.at(j, e) == b.noise_at(j, e));
}

TEST_CASE("sampling is bitwise deterministic in the seed") {
  const ProblemParams params{7, 4, 0.42};
  const Instance a = sample_instance(params, 123456789);
  const Instance b = sample_instance(params, 123456789);
  CHECK(a.pi_star == b.pi_star);
  CHECK(a.signal == b.signal);
  CHECK(a.noise == b.noise);
  CHECK(a.observed.weights == b.observed.weights);

  const Instance c = sample_instance(params, 123456790);
  CHECK(a.observed.weights != c.observed.weights);
}

TEST_CASE("pi_star coordinate is uniform at n=3") {
  const ProblemParams params{3, 2, 0.5};
  const long long trials = 100000;
  std::map<Permutation, long long> counts;
  for (long long t = 0; t < trials; ++t)
    ++counts[sample_instance(params, derive_seed(999, {static_cast<std::uint64_t>(t)})).pi_star
                 .perms[0]];
  CHECK(counts.size() == 6);
  const double expected = trials / 6.0;
  const double se = std::sqrt(trials * (1.0 / 6) * (5.0 / 6));
  for (const auto& [perm, count] : counts) CHECK(std::abs(count - expected) <= 3 * se);
}

TEST_CASE("empirical edge correlation matches the model") {
  const long long trials = 100000;
  SUBCASE("independent graphs") {
    const EdgeCorrelationReport rep = empirical_edge_correlation({4, 2, 0.0}, trials, 5);
    CHECK(std::abs(rep.aligned_corr) <= 3 * rep.aligned_se);
  }
  SUBCASE("rho = 0.5") {
    const EdgeCorrelationReport rep = empirical_edge_correlation({4, 2, 0.5}, trials, 6);
    CHECK(std::abs(rep.aligned_corr - 0.5) <= 3 * rep.aligned_se);
    CHECK(std::abs(rep.unaligned_corr) <= 3 * rep.unaligned_se);
    CHECK(std::abs(rep.variance - 1.0) <= 3 * rep.variance_se);
  }
  SUBCASE("unit marginal variance at high rho") {
    const EdgeCorrelationReport rep = empirical_edge_correlation({4, 2, 0.9}, trials, 7);
    CHECK(std::abs(rep.variance - 1.0) <= 3 * rep.variance_se);
  }
  CHECK_THROWS_AS(empirical_edge_correlation({4, 2, 0.5}, 10, 5), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(sample_instance({1, 2, 0.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_instance({4, 1, 0.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_instance({4, 2, 1.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_instance({4, 2, -0.1}, 0), std::invalid_argument);
}

TEST_CASE("instance JSON round-trip is byte-stable") {
  const ProblemParams params{5, 3, 0.37};
  const Instance inst = sample_instance(params, 2024);
  const std::string text = instance_to_json(inst);
  const Instance loaded = instance_from_json(text);
  CHECK(loaded.params.n == params.n);
  CHECK(loaded.params.p == params.p);
  CHECK(loaded.params.rho == params.rho);
  CHECK(loaded.seed == inst.seed);
  CHECK(loaded.pi_star == inst.pi_star);
  CHECK(loaded.signal == inst.signal);
  CHECK(loaded.observed.weights == inst.observed.weights);
  CHECK(instance_to_json(loaded) == text);

  CHECK_THROWS_AS(instance_from_json("{\"n\":4}"), std::exception);
}
