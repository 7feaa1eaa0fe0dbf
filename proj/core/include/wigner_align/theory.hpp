#pragma once

// Executable versions of the analytic objects and probability bounds behind
// the recovery threshold, each reported as a BoundCheck.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wigner_align {

// margin = bound - observed; the check holds when margin >= -tolerance.
struct BoundCheck {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  std::uint64_t samples = 0;  // 0 for deterministic checks
  double tolerance = 0.0;     // 3 standard errors for Monte Carlo checks
  bool pass = false;
  std::string note;
};

BoundCheck make_check(std::string name, double observed, double bound, std::uint64_t samples,
                      double tolerance, std::string note = {});

// {"name", "observed", "bound", "margin", "samples", "tolerance", "pass", "note"}
std::string to_json_line(const BoundCheck& check);

// rho^2 = (4 log n - log log n - a_n) / n and t_n = sqrt(4 log n - log log n - a_n).
struct ThresholdSpec {
  std::size_t n = 0;
  double a_n = 0.0;
  double rho = 0.0;
  double t_n = 0.0;

  // Throws DomainError unless 0 < 4 log n - log log n - a_n < n.
  static ThresholdSpec make(std::size_t n, double a_n);
};

// f(a) = a^2 for a < 1/2, a^2 - (2a - 1)^2 / 2 otherwise; a in [0, 1].
double f_alpha(double alpha);
// g(a, b) = b^2/2 + (1 - 2a) b + a^2 for 0 <= b <= a <= 1.
double g_alpha_beta(double alpha, double beta);
// a(2 - a) - sqrt(2a (a(2 - a) - f(a))).
double final_function(double alpha);

// |f(1/2^-) - f(1/2)| against 1e-15.
BoundCheck f_continuity_check();
// max over a closed grid of f(a) - a(2 - a), against 0; also f >= 0.
BoundCheck f_upper_bound_check(std::size_t grid_size);
// max over a grid of |min_{b in [0,a]} g(a, b) - f(a)| against the grid
// resolution bound.
BoundCheck g_minimum_check(std::size_t alpha_grid, std::size_t beta_grid);
// -min of the final function over a closed uniform grid, against 1e-12.
BoundCheck final_function_check(std::size_t grid_size);

struct FinalFunctionScan {
  double minimum = 0.0;
  double argmin = 0.0;
  // Interior grid points (0 < a < 1) where the value is within `zero_tol`
  // of zero.
  std::vector<double> interior_zeros;
};
FinalFunctionScan scan_final_function(std::size_t grid_size, double zero_tol = 1e-9);

struct UnionBoundRow {
  std::size_t d = 0;
  double log_count_bound = 0.0;  // d log n >= log #S_{n,d}
  double d_edge_lower = 0.0;
  double d_edge_upper = 0.0;
  double log_term = 0.0;         // d log n - (rho^2 / 4) d_edge_lower
};

struct UnionBoundReport {
  std::size_t n = 0;
  double rho = 0.0;
  std::vector<UnionBoundRow> rows;  // d = 2..n
  double derangement_term = 0.0;    // n log n - rho^2 n^2 / 8
  bool derangement_explodes = false;
};

UnionBoundReport union_bound_diagnostic(std::size_t n, double rho);

// Monte Carlo estimate of the constant in the event-A deviation bound:
// max |c_{s,s'} - E c_{s,s'}| / (d sqrt(n log n)) over sampled A and pairs
// in S_{n,d}. The first pair for each d uses s' = s.
double estimate_event_a_constant(std::size_t n, const std::vector<std::size_t>& d_list,
                                 std::size_t pairs_per_d, std::size_t trials,
                                 std::uint64_t seed);

// Stability of the estimate between n and 4n: observed = C(4n),
// bound = 1.5 C(n). Throws DomainError for an empty d_list or zero trials.
BoundCheck event_A_check(std::size_t n, const std::vector<std::size_t>& d_list,
                         std::size_t pairs_per_d, std::size_t trials, std::uint64_t seed);

enum class MatrixKind { kZero, kIdentity, kPermutationDifference, kRandomSymmetric };

struct HansonWrightFit {
  std::size_t dimension = 0;  // length of the Gaussian vector
  double frobenius = 0.0;
  double op_norm = 0.0;
  double c_hat = 0.0;         // smallest swept c with exceedance <= 2 delta
  double exceedance = 0.0;    // empirical exceedance at c_hat
  bool found = false;
  std::uint64_t samples = 0;
};

// `dimension` is the vector length, except for kPermutationDifference where
// it is the vertex count n and M = (I - S)^T (I - S') acts on the
// n(n-1)/2 edges, with S, S' the edge actions of two random transpositions.
HansonWrightFit hanson_wright_fit(std::size_t dimension, MatrixKind kind, double delta,
                                  std::size_t trials, std::uint64_t seed);
BoundCheck hanson_wright_demo(std::size_t dimension, MatrixKind kind, double delta,
                              std::size_t trials, std::uint64_t seed);

// P(max_i Z_i > sqrt(2 (v - c) log N) + 2 sqrt(v log log N)) <= 2 / log N
// for N Gaussians with variance v and pairwise covariance c. Throws
// DomainError for N < 16, c outside [0, v] or zero trials.
BoundCheck max_tc_gaussian_check(std::uint64_t N, double v, double c, std::size_t trials,
                                 std::uint64_t seed);

struct BivariateTail {
  double alpha = 0.0;
  double t = 0.0;
  double exact_mc = 0.0;       // Monte Carlo P(Z1 > t, Z2 > t)
  double standard_error = 0.0;
  std::uint64_t draws = 0;
  double quadrature = 0.0;     // the same probability by numerical integration
  std::optional<double> bound_i;  // exp(-2 t^2) + tail(t)^2, reported when alpha t < 0.1
  double bound_ii = 0.0;          // (1 + alpha) / (sqrt(2 pi) t) exp(-t^2 / (1 + alpha))
};

inline constexpr std::uint64_t kDefaultBivariateDraws = 1'000'000;

BivariateTail bivariate_tail_bounds(double alpha, double t, std::uint64_t seed,
                                    std::uint64_t draws = kDefaultBivariateDraws);
// exact_mc <= bound_ii within 3 SE.
BoundCheck bivariate_bound_ii_check(double alpha, double t, std::uint64_t seed,
                                    std::uint64_t draws = kDefaultBivariateDraws);

// (1 - c)^2 mean^2 / second_moment, a lower bound on P(Y >= c mean).
double paley_zygmund_bound(double mean, double second_moment, double c);

// exp(a_n / 2) / (4 sqrt(2 pi)).
double predicted_transposition_mean(const ThresholdSpec& spec);

// Deterministic checks: f continuity, f <= a(2 - a), min_b g = f, final
// function, bound (ii) against quadrature on a fixed grid.
std::vector<BoundCheck> analytic_checks(std::size_t grid_size);

}  // namespace wigner_align
