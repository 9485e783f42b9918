#pragma once

#include "graphalign/model.hpp"

namespace graphalign {

struct AssignmentResult {
  Permutation psi;          // relabeling realizing the minimum, lexicographically
                            // smallest among the optima
  long long matched = 0;    // agreements under psi
  long long total = 0;      // n*p, so err = 1 - matched/total exactly
  double err = 0.0;
};

// Maximum-weight assignment value for an n x n integer weight matrix.
long long max_assignment_value(const std::vector<std::vector<long long>>& weight);

// Lexicographically smallest maximizing assignment (row -> column).
Permutation lexmin_max_assignment(const std::vector<std::vector<long long>>& weight,
                                  long long* value = nullptr);

// Proportion of misclassified (graph, node) pairs after the best single global
// relabeling psi, solved exactly as an n x n assignment on agreement counts.
AssignmentResult err_alignment(const PermutationTuple& pi, const PermutationTuple& pi_star);

// Oracle: exhaustive minimum over all n! relabelings (n <= 7).
AssignmentResult err_bruteforce(const PermutationTuple& pi, const PermutationTuple& pi_star);

// Normalized Hamming distance between two permutations of [n].
double hamming(const Permutation& sigma, const Permutation& tau);

// Alignment error restricted to coordinates j and jp (j != jp), in [0,1].
double err_pair(const PermutationTuple& pi, const PermutationTuple& pi_star, int j, int jp);

}  // namespace graphalign
