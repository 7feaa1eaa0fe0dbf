#pragma once

// Energies of candidate alignments.
//
// All sums run over unordered pairs i < j. With the loss
//
//   L(pi) = sum_{i<j} (B[pi(i)][pi(j)] - rho A[i][j])^2
//
// and qap(pi) = 2 sum_{i<j} A[i][j] B[pi(i)][pi(j)] (the full-matrix inner
// <A, Pi B Pi^T> with zero diagonals), L(pi) = sum B^2 + rho^2 sum A^2 -
// rho qap(pi), so argmin L = argmax qap whenever rho > 0.
//
// Sums use Neumaier compensation throughout.

#include <cmath>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "wigner_align/model.hpp"
#include "wigner_align/permutation.hpp"

namespace wigner_align {

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct EnergyReport {
  double loss = 0.0;
  double qap = 0.0;
  double relative = 0.0;  // loss(pi) - loss(reference)
  double log_posterior_unnorm = 0.0;  // NaN when rho == 1
};

double loss(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B, double rho);
double qap_objective(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B);

// loss(pi) - loss(reference), summed term by term so that pi == reference
// gives exactly 0 and swapping the arguments negates the result exactly.
double relative_energy(const Permutation& pi, const Permutation& reference, const WignerMatrix& A,
                       const WignerMatrix& B, double rho);

// delta(sigma) = L(sigma, A, H) - L(id, A, H) for an identity-planted
// instance built from (A, H):
//
//   rho^2 v_sigma + 2 rho sqrt(1 - rho^2) sum_{i<j} H_ij (A_ij - A_{sigma(i) sigma(j)}).
//
// Equals relative_energy(inverse(sigma), id, A, B, rho).
double delta_decomposed(const Permutation& sigma, const WignerMatrix& A, const WignerMatrix& H,
                        double rho);

// The centered Gaussian X_sigma (given A) in
// delta(sigma) = rho^2 v_sigma - 2 rho sqrt(1 - rho^2) X_sigma, i.e.
// X_sigma = -sum_{i<j} H_ij (A_ij - A_{sigma(i) sigma(j)}). Cov(X_s, X_s') = c_{s,s'}.
double latent_gaussian(const Permutation& sigma, const WignerMatrix& A, const WignerMatrix& H);

double v_sigma(const Permutation& sigma, const WignerMatrix& A);
double c_pair(const Permutation& sigma, const Permutation& sigma2, const WignerMatrix& A);
// E[c_{s,s'}] over A, exact: #(D^E_s n D^E_s') + #(D^E_s n D^E_s' n F^E_{s^-1 o s'}).
std::int64_t expected_c(const Permutation& sigma, const Permutation& sigma2);
// c / sqrt(v v'); throws DegenerateInput when either variance is zero.
double alpha_corr(const Permutation& tau, const Permutation& tau2, const WignerMatrix& A);

// -loss / (2 (1 - rho^2)); rho == 1 throws DegenerateInput.
double log_posterior_unnorm(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B,
                            double rho);

EnergyReport energy_report(const Permutation& pi, const Permutation& reference,
                           const WignerMatrix& A, const WignerMatrix& B, double rho);

// --- Transposition moves -------------------------------------------------
//
// For the current alignment pi and positions i != j (1-based), the change
// in loss from swapping the images of i and j is
//
//   loss(pi o (i j)) - loss(pi)
//     = 2 rho sum_{k != i,j} (A_ik - A_jk)(B_{pi(i) pi(k)} - B_{pi(j) pi(k)}),
//
// an O(n) evaluation.
double swap_delta(const Permutation& pi, std::size_t i, std::size_t j, const WignerMatrix& A,
                  const WignerMatrix& B, double rho);

// All swap deltas at once for the alignment pi. Entry (i, j), 0-based with
// i < j, holds swap_delta(pi, i+1, j+1, ...); the strictly lower triangle and
// diagonal are zero. Uses the identity
//   sum_{k != i,j} (A_ik - A_jk)(C_ik - C_jk) = G_ii + G_jj - G_ij - G_ji - 2 A_ij C_ij,
// with C = B pulled back by pi and G = A C^T, so the cost is one dense product.
Eigen::MatrixXd all_swap_deltas(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B,
                                double rho);

// v_tau for every transposition tau = (i j): entry (i, j), i < j, 0-based.
// v_tau = 2 sum_{k != i,j} (A_ik - A_jk)^2.
Eigen::MatrixXd all_transposition_variances(const WignerMatrix& A);

}  // namespace wigner_align
