#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wigner_align/errors.hpp"
#include "wigner_align/solvers.hpp"

namespace wigner_align {

Assignment hungarian(const AssignmentProblem& problem) {
  const Eigen::MatrixXd& cost = problem.cost;
  if (cost.rows() != cost.cols()) throw DimensionError("hungarian: cost matrix must be square");
  if (!cost.allFinite()) throw DomainError("hungarian: cost entries must be finite");
  const auto n = static_cast<std::size_t>(cost.rows());
  if (n == 0) return {Permutation::identity(0), 0.0};

  const double sign = problem.sense == Sense::kMaximize ? -1.0 : 1.0;
  auto c = [&](std::size_t i, std::size_t j) {
    return sign * cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  // 1-based rows/columns with index 0 as the virtual source column.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_to(n + 1);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    row_of[0] = row;
    std::size_t col0 = 0;
    std::fill(min_to.begin(), min_to.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t i0 = row_of[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < min_to[j]) {
          min_to[j] = reduced;
          way[j] = col0;
        }
        if (min_to[j] < delta) {
          delta = min_to[j];
          col1 = j;
        }
      }
      if (col1 == 0) throw NumericalError("hungarian: no augmenting column found");
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_to[j] -= delta;
        }
      }
      col0 = col1;
    } while (row_of[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      row_of[col0] = row_of[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::uint32_t> table(n);
  for (std::size_t j = 1; j <= n; ++j) table[row_of[j] - 1] = static_cast<std::uint32_t>(j - 1);
  Assignment out{Permutation::from_table(std::move(table)), 0.0};
  const auto t = out.assignment.table();
  for (std::size_t i = 0; i < n; ++i)
    out.value += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t[i]));
  return out;
}

Permutation lap_align(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw DimensionError("lap_align: vector sets must have the same shape");
  AssignmentProblem p{u * v.transpose(), Sense::kMaximize};
  return hungarian(p).assignment;
}

}  // namespace wigner_align
