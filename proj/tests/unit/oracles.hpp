#pragma once

// Independent reference computations for the unit tests. Written against
// raw tables and dense matrices only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Table = std::vector<std::uint32_t>;  // 0-based images

inline std::vector<Table> all_permutations(std::size_t n) {
  Table p(n);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<Table> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::size_t moved_points(const Table& p) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) d += p[i] != i;
  return d;
}

// Edges {i, j} with {p(i), p(j)} != {i, j}.
inline std::size_t moved_edges(const Table& p) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const auto a = std::min(p[i], p[j]);
      const auto b = std::max(p[i], p[j]);
      c += !(a == i && b == j);
    }
  return c;
}

inline double loss(const Table& p, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double rho) {
  long double s = 0.0L;
  const auto n = static_cast<Eigen::Index>(p.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const long double r = B(p[i], p[j]) - rho * A(i, j);
      s += r * r;
    }
  return static_cast<double>(s);
}

inline double qap(const Table& p, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  // Full-matrix inner product <A, P B P^T> with P the matrix of p.
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) P(i, p[i]) = 1.0;
  return (A.array() * (P * B * P.transpose()).array()).sum();
}

// Exhaustive optimum of sum_i cost(i, p(i)), summed in row order.
inline double lap_optimum(const Eigen::MatrixXd& cost, bool maximize) {
  const auto n = static_cast<std::size_t>(cost.rows());
  double best = maximize ? -INFINITY : INFINITY;
  for (const Table& p : all_permutations(n)) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += cost(static_cast<Eigen::Index>(i), p[i]);
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= (n - 1.0);
  return {m, std::sqrt(v / n)};
}

}  // namespace oracle
