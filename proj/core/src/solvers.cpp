#include "wigner_align/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wigner_align/energy.hpp"
#include "wigner_align/errors.hpp"

namespace wigner_align {

namespace {

void require_pair(const WignerMatrix& A, const WignerMatrix& B, const char* op) {
  if (A.n() != B.n()) throw DimensionError(std::string(op) + ": A and B differ in order");
}

void require_rho(double rho, const char* op) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError(std::string(op) + ": rho must lie in [0, 1]");
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

SolveResult brute_force_map(const WignerMatrix& A, const WignerMatrix& B, double rho,
                            std::size_t cap) {
  require_pair(A, B, "brute_force_map");
  require_rho(rho, "brute_force_map");
  const std::size_t n = A.n();
  if (n > cap) {
    std::ostringstream msg;
    msg << "brute_force_map: n = " << n << " exceeds the exhaustive-search cap of " << cap
        << " (" << n << "! candidates); raise the cap explicitly to proceed";
    throw DomainError(msg.str());
  }

  SolveResult result;
  result.exact = true;
  if (rho == 0.0 || n < 2) {
    // Zero signal: the loss does not depend on pi.
    result.pi_hat = Permutation::identity(n);
    result.ties = factorial(n);
    result.objective = loss(result.pi_hat, A, B, rho);
    return result;
  }

  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<std::uint32_t> best = p;
  double best_score = -std::numeric_limits<double>::infinity();
  std::uint64_t ties = 0;
  do {
    double score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ai = A.row(i);
      const auto bi = B.row(p[i]);
      for (std::size_t j = i + 1; j < n; ++j) score += ai[j] * bi[p[j]];
    }
    if (score > best_score) {
      best_score = score;
      best = p;
      ties = 1;
    } else if (score == best_score) {
      ++ties;
    }
  } while (std::next_permutation(p.begin(), p.end()));

  result.pi_hat = Permutation::from_table(std::move(best));
  result.ties = ties;
  result.objective = loss(result.pi_hat, A, B, rho);
  return result;
}

SolveResult transposition_descent(const WignerMatrix& A, const WignerMatrix& B, double rho,
                                  const Permutation& start, std::size_t max_sweeps) {
  require_pair(A, B, "transposition_descent");
  require_rho(rho, "transposition_descent");
  if (start.n() != A.n()) throw DimensionError("transposition_descent: start size differs from n");
  const std::size_t n = A.n();

  SolveResult result;
  result.exact = false;
  std::vector<std::uint32_t> p(start.table().begin(), start.table().end());
  double current = loss(start, A, B, rho);
  if (n < 2) {
    result.pi_hat = start;
    result.objective = current;
    return result;
  }

  // C[i][k] = B[p(i)][p(k)] is read through p; delta(i, j) is kept for i < j.
  auto exact_delta = [&](std::size_t i, std::size_t j) {
    const auto ai = A.row(i);
    const auto aj = A.row(j);
    const auto bi = B.row(p[i]);
    const auto bj = B.row(p[j]);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      s += (ai[k] - aj[k]) * (bi[p[k]] - bj[p[k]]);
    }
    return 2.0 * rho * s;
  };
  auto C = [&](std::size_t i, std::size_t k) { return B(p[i], p[k]); };

  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  auto refresh = [&] {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = exact_delta(i, j);
  };
  refresh();

  while (result.iterations < max_sweeps) {
    double best = 0.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (!(best < 0.0)) break;
    // The table is updated incrementally; confirm the chosen move exactly.
    const double confirmed = exact_delta(bi, bj);
    if (!(confirmed < 0.0)) {
      refresh();
      bool any = false;
      for (std::size_t i = 0; i < n && !any; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < 0.0) {
            any = true;
            break;
          }
      if (!any) break;
      continue;
    }

    const std::size_t r = bi, s = bj;
    // Pairs disjoint from {r, s} change only through the k = r, s terms:
    // new - old = [(A_ir - A_jr) - (A_is - A_js)] [(C_is - C_js) - (C_ir - C_jr)]
    // evaluated with the pre-move C.
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || i == s) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == r || j == s) continue;
        const double a = (A(i, r) - A(j, r)) - (A(i, s) - A(j, s));
        const double c = (C(i, s) - C(j, s)) - (C(i, r) - C(j, r));
        delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 2.0 * rho * a * c;
      }
    }
    std::swap(p[r], p[s]);
    current += confirmed;
    ++result.iterations;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t m : {r, s}) {
        if (k == m) continue;
        const std::size_t i = std::min(k, m), j = std::max(k, m);
        delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = exact_delta(i, j);
      }
    }
  }

  result.pi_hat = Permutation::from_table(std::move(p));
  result.objective = current;
  return result;
}

SolveResult spectral_align(const WignerMatrix& A, const WignerMatrix& B, double rho) {
  require_pair(A, B, "spectral_align");
  require_rho(rho, "spectral_align");
  const auto n = static_cast<Eigen::Index>(A.n());
  SolveResult result;
  result.exact = false;
  if (n < 2) {
    result.pi_hat = Permutation::identity(A.n());
    result.objective = loss(result.pi_hat, A, B, rho);
    return result;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(A.dense());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(B.dense());
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "spectral_align: eigendecomposition failed for n = " << n
        << (ea.info() != Eigen::Success ? " (matrix A)" : " (matrix B)");
    throw NumericalError(msg.str());
  }
  const Eigen::MatrixXd& U = ea.eigenvectors();
  Eigen::MatrixXd V = eb.eigenvectors();

  // The best assignment score of a rank-one similarity u v^T is the sorted
  // inner product (rearrangement inequality); keep the sign of v_k that wins.
  std::vector<double> su(static_cast<std::size_t>(n)), sv(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      su[static_cast<std::size_t>(i)] = U(i, k);
      sv[static_cast<std::size_t>(i)] = V(i, k);
    }
    std::sort(su.begin(), su.end());
    std::sort(sv.begin(), sv.end());
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < su.size(); ++i) {
      plus += su[i] * sv[i];
      minus -= su[i] * sv[su.size() - 1 - i];
    }
    if (minus > plus) V.col(k) *= -1.0;
  }

  AssignmentProblem lap{U * V.transpose(), Sense::kMaximize};
  result.pi_hat = hungarian(lap).assignment;
  result.objective = loss(result.pi_hat, A, B, rho);
  return result;
}

std::vector<std::pair<Permutation, double>> low_energy_set(const WignerMatrix& A,
                                                           const WignerMatrix& B, double rho,
                                                           std::size_t d_max,
                                                           const Permutation* reference,
                                                           std::uint64_t budget) {
  require_pair(A, B, "low_energy_set");
  require_rho(rho, "low_energy_set");
  const std::size_t n = A.n();
  const Permutation ref = reference ? *reference : Permutation::identity(n);
  if (ref.n() != n) throw DimensionError("low_energy_set: reference size differs from n");
  d_max = std::min(d_max, n);
  for (std::size_t d = 2; d <= d_max; ++d) {
    if (count_with_displacement(n, d) > budget)
      throw EnumerationTooLarge("low_energy_set: S_{" + std::to_string(n) + "," + std::to_string(d) +
                                "} exceeds the enumeration budget");
  }

  std::vector<std::pair<Permutation, double>> out;
  out.emplace_back(Permutation::identity(n), 0.0);
  for (std::size_t d = 2; d <= d_max; ++d) {
    for_each_with_displacement(
        n, d,
        [&](const Permutation& sigma) {
          const Permutation pi = compose(inverse(sigma), ref);
          const double delta = relative_energy(pi, ref, A, B, rho);
          if (delta <= 0.0) out.emplace_back(sigma, delta);
        },
        budget);
  }
  return out;
}

}  // namespace wigner_align
