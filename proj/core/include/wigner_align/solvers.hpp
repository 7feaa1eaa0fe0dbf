#pragma once

// Alignment solvers: exhaustive MAP, steepest transposition descent, the
// Hungarian method for linear assignment, LAP alignment of vector sets and
// a spectral + LAP baseline. Ties always resolve to the lexicographically
// least image.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wigner_align/model.hpp"
#include "wigner_align/permutation.hpp"

namespace wigner_align {

struct SolveResult {
  Permutation pi_hat;
  double objective = 0.0;     // loss at pi_hat
  std::uint64_t ties = 1;     // co-optimal permutations (exhaustive solver only)
  std::size_t iterations = 0; // accepted moves (iterative solvers)
  bool exact = false;
};

inline constexpr std::size_t kDefaultBruteForceCap = 9;

// Minimizes the loss over all of S_n. Candidates are ranked by the QAP
// objective (argmin loss = argmax qap for rho > 0); at rho = 0 every
// permutation has the same loss and the identity is returned with
// ties = n!. Throws DomainError above `cap`.
SolveResult brute_force_map(const WignerMatrix& A, const WignerMatrix& B, double rho,
                            std::size_t cap = kDefaultBruteForceCap);

// Best-improvement local search over the n(n-1)/2 transposition moves.
// Accepts the most negative swap delta (first in lexicographic (i, j) order
// among equals) while it is strictly negative; stops at a local minimum or
// after max_sweeps accepted moves.
SolveResult transposition_descent(const WignerMatrix& A, const WignerMatrix& B, double rho,
                                  const Permutation& start, std::size_t max_sweeps = 10'000);

enum class Sense { kMinimize, kMaximize };

struct AssignmentProblem {
  Eigen::MatrixXd cost;
  Sense sense = Sense::kMinimize;
};

struct Assignment {
  Permutation assignment;  // row i -> column assignment(i), 1-based
  double value = 0.0;      // sum of the selected entries, in row order
};

// O(n^3) shortest augmenting path method with row/column potentials.
// Throws DimensionError for non-square input and DomainError for
// non-finite entries.
Assignment hungarian(const AssignmentProblem& problem);

// argmax over permutations of sum_i <u_i, v_{pi(i)}>: rows of u and v are the
// per-item vectors. If v_{sigma(i)} = u_i then the result is sigma.
Permutation lap_align(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v);

// Spectral baseline. Eigenpairs of A and B are matched by rank. Each
// pair (u_k, v_k) enters the similarity u_k (s_k v_k)^T with the sign s_k
// that maximizes the best single-pair assignment score, then the summed
// similarity is rounded with hungarian. pi_hat estimates the planted map
// (B[pi(i)][pi(j)] ~ A[i][j]).
SolveResult spectral_align(const WignerMatrix& A, const WignerMatrix& B, double rho);

// Every sigma with d_sigma <= d_max and delta(sigma) <= 0, with its delta,
// where delta(sigma) = loss(sigma^{-1} o reference) - loss(reference).
// The identity is always first with value 0. Throws EnumerationTooLarge
// when any S_{n,d} exceeds the budget.
std::vector<std::pair<Permutation, double>> low_energy_set(
    const WignerMatrix& A, const WignerMatrix& B, double rho, std::size_t d_max,
    const Permutation* reference = nullptr,
    std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace wigner_align
