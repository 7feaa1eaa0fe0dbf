#include "wigner_align/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Dense>
#include <json.hpp>

#include "wigner_align/energy.hpp"
#include "wigner_align/errors.hpp"
#include "wigner_align/model.hpp"
#include "wigner_align/normal.hpp"
#include "wigner_align/permutation.hpp"

namespace wigner_align {

namespace {

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

void require_unit(double x, const char* op) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(op) + ": argument must lie in [0, 1]");
}

// Closed uniform grid on [lo, hi] with `count` >= 2 points.
double grid_point(double lo, double hi, std::size_t k, std::size_t count) {
  if (k + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
}

}  // namespace

BoundCheck make_check(std::string name, double observed, double bound, std::uint64_t samples,
                      double tolerance, std::string note) {
  BoundCheck c;
  c.name = std::move(name);
  c.observed = observed;
  c.bound = bound;
  c.margin = bound - observed;
  c.samples = samples;
  c.tolerance = tolerance;
  c.pass = c.margin >= -tolerance;
  c.note = std::move(note);
  return c;
}

std::string to_json_line(const BoundCheck& check) {
  nlohmann::ordered_json j;
  j["name"] = check.name;
  j["observed"] = check.observed;
  j["bound"] = check.bound;
  j["margin"] = check.margin;
  j["samples"] = check.samples;
  j["tolerance"] = check.tolerance;
  j["pass"] = check.pass;
  if (!check.note.empty()) j["note"] = check.note;
  return j.dump();
}

ThresholdSpec ThresholdSpec::make(std::size_t n, double a_n) {
  if (n < 3) throw DomainError("ThresholdSpec: n must be at least 3");
  const double ln = std::log(static_cast<double>(n));
  const double t2 = 4.0 * ln - std::log(ln) - a_n;
  if (!(t2 > 0.0 && t2 < static_cast<double>(n)))
    throw DomainError("ThresholdSpec: 4 log n - log log n - a_n must lie in (0, n), got " +
                      fmt("%.6g", t2));
  ThresholdSpec s;
  s.n = n;
  s.a_n = a_n;
  s.rho = std::sqrt(t2 / static_cast<double>(n));
  s.t_n = std::sqrt(t2);
  return s;
}

double f_alpha(double alpha) {
  require_unit(alpha, "f_alpha");
  if (alpha < 0.5) return alpha * alpha;
  const double k = 2.0 * alpha - 1.0;
  return alpha * alpha - 0.5 * k * k;
}

double g_alpha_beta(double alpha, double beta) {
  if (!(beta >= 0.0 && beta <= alpha && alpha <= 1.0))
    throw DomainError("g_alpha_beta: requires 0 <= beta <= alpha <= 1");
  return 0.5 * beta * beta + (1.0 - 2.0 * alpha) * beta + alpha * alpha;
}

double final_function(double alpha) {
  const double s = alpha * (2.0 - alpha);
  return s - std::sqrt(2.0 * alpha * (s - f_alpha(alpha)));
}

BoundCheck f_continuity_check() {
  const double left = 0.5 * 0.5;  // first branch evaluated at the knee
  const double right = f_alpha(0.5);
  return make_check("f_continuity", std::abs(left - right), 1e-15, 0, 0.0);
}

BoundCheck f_upper_bound_check(std::size_t grid_size) {
  if (grid_size < 2) throw DomainError("f_upper_bound_check: grid_size must be at least 2");
  double worst = -std::numeric_limits<double>::infinity();
  double min_f = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double a = grid_point(0.0, 1.0, k, grid_size);
    const double f = f_alpha(a);
    worst = std::max(worst, f - a * (2.0 - a));
    min_f = std::min(min_f, f);
  }
  BoundCheck c = make_check("f_upper_bound", worst, 0.0, 0, 0.0, "min f = " + fmt("%.3g", min_f));
  c.pass = c.pass && min_f >= 0.0;
  return c;
}

BoundCheck g_minimum_check(std::size_t alpha_grid, std::size_t beta_grid) {
  if (alpha_grid < 2 || beta_grid < 2) throw DomainError("g_minimum_check: grids need 2+ points");
  double worst = 0.0;
  for (std::size_t k = 0; k < alpha_grid; ++k) {
    const double a = grid_point(0.0, 1.0, k, alpha_grid);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < beta_grid; ++m) best = std::min(best, g_alpha_beta(a, grid_point(0.0, a, m, beta_grid)));
    worst = std::max(worst, std::abs(best - f_alpha(a)));
  }
  // Unit curvature in beta: missing the vertex by h/2 costs at most h^2/8.
  const double h = 1.0 / static_cast<double>(beta_grid - 1);
  return make_check("g_minimum_equals_f", worst, h * h / 8.0 + 1e-15, 0, 0.0);
}

FinalFunctionScan scan_final_function(std::size_t grid_size, double zero_tol) {
  if (grid_size < 2) throw DomainError("final_function_check: grid_size must be at least 2");
  FinalFunctionScan s;
  s.minimum = std::numeric_limits<double>::infinity();
  std::vector<double> vals(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double a = grid_point(0.0, 1.0, k, grid_size);
    vals[k] = final_function(a);
    if (vals[k] < s.minimum) {
      s.minimum = vals[k];
      s.argmin = a;
    }
  }
  for (std::size_t k = 1; k + 1 < grid_size; ++k) {
    if (std::abs(vals[k]) <= zero_tol && vals[k] <= vals[k - 1] && vals[k] <= vals[k + 1] &&
        (vals[k] < vals[k - 1] || vals[k] < vals[k + 1]))
      s.interior_zeros.push_back(grid_point(0.0, 1.0, k, grid_size));
  }
  return s;
}

BoundCheck final_function_check(std::size_t grid_size) {
  const FinalFunctionScan s = scan_final_function(grid_size);
  return make_check("final_function_nonnegative", 0.0 - s.minimum, 1e-12, 0, 0.0,
                    "argmin = " + fmt("%.6g", s.argmin));
}

UnionBoundReport union_bound_diagnostic(std::size_t n, double rho) {
  if (n < 3) throw DomainError("union_bound_diagnostic: n must be at least 3");
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("union_bound_diagnostic: rho must lie in (0, 1)");
  UnionBoundReport r;
  r.n = n;
  r.rho = rho;
  const double ln = std::log(static_cast<double>(n));
  const double r2 = rho * rho;
  r.rows.reserve(n - 1);
  for (std::size_t d = 2; d <= n; ++d) {
    const EdgeDisplacementBounds b = edge_displacement_bounds(n, d);
    UnionBoundRow row;
    row.d = d;
    row.log_count_bound = static_cast<double>(d) * ln;
    row.d_edge_lower = b.lower;
    row.d_edge_upper = b.upper;
    row.log_term = row.log_count_bound - 0.25 * r2 * b.lower;
    r.rows.push_back(row);
  }
  const double nn = static_cast<double>(n);
  r.derangement_term = nn * ln - r2 * nn * nn / 8.0;
  r.derangement_explodes = r.derangement_term > 0.0;
  return r;
}

double estimate_event_a_constant(std::size_t n, const std::vector<std::size_t>& d_list,
                                 std::size_t pairs_per_d, std::size_t trials,
                                 std::uint64_t seed) {
  if (d_list.empty()) throw DomainError("event_A_check: d_list is empty");
  if (trials == 0 || pairs_per_d == 0) throw DomainError("event_A_check: trials and pairs_per_d must be positive");
  for (std::size_t d : d_list)
    if (d < 2 || d > n) throw DomainError("event_A_check: each d must lie in 2..n");
  const double scale = std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n)));
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    GaussianSource src(derive_trial_seed({seed, t}));
    const WignerMatrix A = sample_wigner(n, src);
    auto ub = [&](std::uint64_t k) { return src.uniform_below(k); };
    for (std::size_t d : d_list) {
      for (std::size_t p = 0; p < pairs_per_d; ++p) {
        const Permutation s = random_with_displacement(n, d, ub);
        const Permutation s2 = p == 0 ? s : random_with_displacement(n, d, ub);
        const double dev = std::abs(c_pair(s, s2, A) - static_cast<double>(expected_c(s, s2)));
        worst = std::max(worst, dev / (static_cast<double>(d) * scale));
      }
    }
  }
  return worst;
}

BoundCheck event_A_check(std::size_t n, const std::vector<std::size_t>& d_list,
                         std::size_t pairs_per_d, std::size_t trials, std::uint64_t seed) {
  const double small = estimate_event_a_constant(n, d_list, pairs_per_d, trials, seed);
  const double large =
      estimate_event_a_constant(4 * n, d_list, pairs_per_d, trials, derive_trial_seed({seed, 0x4A}));
  const std::uint64_t samples = 2ull * trials * pairs_per_d * d_list.size();
  return make_check("event_A_constant_stability", large, 1.5 * small, samples, 0.0,
                    "C(" + std::to_string(n) + ") = " + fmt("%.4g", small) + ", C(" +
                        std::to_string(4 * n) + ") = " + fmt("%.4g", large));
}

namespace {

// Edge positions under sigma^E, 0-based indices into the row-major i < j order.
std::vector<std::size_t> edge_image_table(const Permutation& sigma) {
  const std::size_t n = sigma.n();
  auto index = [n](std::size_t i, std::size_t j) {  // 0-based, i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  };
  const auto p = sigma.table();
  std::vector<std::size_t> out(edge_count(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t a = std::min(p[i], p[j]);
      const std::size_t b = std::max(p[i], p[j]);
      out[index(i, j)] = index(a, b);
    }
  return out;
}

}  // namespace

HansonWrightFit hanson_wright_fit(std::size_t dimension, MatrixKind kind, double delta,
                                  std::size_t trials, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("hanson_wright_demo: delta must lie in (0, 1/2)");
  if (trials == 0) throw DomainError("hanson_wright_demo: trials must be positive");
  if (dimension == 0) throw DomainError("hanson_wright_demo: dimension must be positive");
  GaussianSource src(derive_trial_seed({seed, 0}));

  HansonWrightFit fit;
  fit.samples = trials;
  Eigen::MatrixXd M;
  std::vector<std::size_t> e1, e2;
  if (kind == MatrixKind::kPermutationDifference) {
    if (dimension < 2) throw DomainError("hanson_wright_demo: permutation_difference needs n >= 2");
    auto ub = [&](std::uint64_t k) { return src.uniform_below(k); };
    e1 = edge_image_table(random_with_displacement(dimension, 2, ub));
    e2 = edge_image_table(random_with_displacement(dimension, 2, ub));
    const auto N = static_cast<Eigen::Index>(e1.size());
    Eigen::MatrixXd S1 = Eigen::MatrixXd::Zero(N, N), S2 = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index e = 0; e < N; ++e) {
      S1(e, static_cast<Eigen::Index>(e1[static_cast<std::size_t>(e)])) = 1.0;
      S2(e, static_cast<Eigen::Index>(e2[static_cast<std::size_t>(e)])) = 1.0;
    }
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
    M = (I - S1).transpose() * (I - S2);
  } else {
    const auto N = static_cast<Eigen::Index>(dimension);
    if (kind == MatrixKind::kZero) {
      M = Eigen::MatrixXd::Zero(N, N);
    } else if (kind == MatrixKind::kIdentity) {
      M = Eigen::MatrixXd::Identity(N, N);
    } else {
      M = sample_wigner(dimension, src).dense();
      for (Eigen::Index i = 0; i < N; ++i) M(i, i) = src.normal() * std::numbers::sqrt2;
    }
  }
  fit.dimension = static_cast<std::size_t>(M.rows());
  fit.frobenius = M.norm();
  fit.op_norm = M.size() == 0 ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
  const double trace = M.trace();
  const double L = std::log(1.0 / delta);
  const double scale = fit.frobenius * std::sqrt(L) + fit.op_norm * L;

  const auto N = M.rows();
  std::vector<double> dev(trials);
  Eigen::VectorXd x(N), y(N);
  for (std::size_t t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < N; ++i) x(i) = src.normal();
    double q = 0.0;
    if (kind == MatrixKind::kPermutationDifference) {
      // x^T (I - S1)^T (I - S2) x with (S x)_e = x_{sigma^E(e)}.
      for (Eigen::Index e = 0; e < N; ++e) {
        const auto u = static_cast<std::size_t>(e);
        q += (x(e) - x(static_cast<Eigen::Index>(e1[u]))) * (x(e) - x(static_cast<Eigen::Index>(e2[u])));
      }
    } else {
      y.noalias() = M * x;
      q = x.dot(y);
    }
    dev[t] = std::abs(q - trace);
  }

  const double target = 2.0 * delta;
  for (int k = 0; k <= 2000; ++k) {
    const double c = 0.01 * k;
    std::size_t over = 0;
    for (double v : dev) over += v > c * scale;
    const double exc = static_cast<double>(over) / static_cast<double>(trials);
    if (exc <= target) {
      fit.c_hat = c;
      fit.exceedance = exc;
      fit.found = true;
      break;
    }
  }
  return fit;
}

BoundCheck hanson_wright_demo(std::size_t dimension, MatrixKind kind, double delta,
                              std::size_t trials, std::uint64_t seed) {
  const HansonWrightFit fit = hanson_wright_fit(dimension, kind, delta, trials, seed);
  static constexpr const char* names[] = {"zero", "identity", "permutation_difference",
                                          "random_symmetric"};
  BoundCheck c = make_check(std::string("hanson_wright_") + names[static_cast<int>(kind)],
                            fit.exceedance, 2.0 * delta, fit.samples, 0.0,
                            "c_hat = " + fmt("%.3g", fit.c_hat) + ", fro = " + fmt("%.4g", fit.frobenius) +
                                ", op = " + fmt("%.4g", fit.op_norm));
  c.pass = c.pass && fit.found;
  return c;
}

BoundCheck max_tc_gaussian_check(std::uint64_t N, double v, double c, std::size_t trials,
                                 std::uint64_t seed) {
  if (N < 16) throw DomainError("max_tc_gaussian_check: N must be at least 16");
  if (!(v > 0.0)) throw DomainError("max_tc_gaussian_check: v must be positive");
  if (!(c >= 0.0 && c <= v)) throw DomainError("max_tc_gaussian_check: c must lie in [0, v]");
  if (trials == 0) throw DomainError("max_tc_gaussian_check: trials must be positive");
  const double lnN = std::log(static_cast<double>(N));
  const double threshold = std::sqrt(2.0 * (v - c) * lnN) + 2.0 * std::sqrt(v * std::log(lnN));
  const double bound = 2.0 / lnN;

  GaussianSource src(derive_trial_seed({seed, N}));
  std::size_t over = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double xi0 = src.normal();
    // Max of N iid standard normals by inversion: P(max > x) = 1 - (1 - tail(x))^N.
    double p = 0.0;
    while (!(p > 0.0 && p < 1.0)) p = -std::expm1(std::log1p(-src.uniform()) / static_cast<double>(N));
    const double m = normal_upper_tail_inverse(p);
    const double z = std::sqrt(c) * xi0 + std::sqrt(v - c) * m;
    over += z > threshold;
  }
  const double freq = static_cast<double>(over) / static_cast<double>(trials);
  const double se = std::sqrt(std::max(freq * (1.0 - freq), 1.0 / static_cast<double>(trials)) /
                              static_cast<double>(trials));
  char name[96];
  std::snprintf(name, sizeof name, "max_tc_gaussian_N%llu_v%g_c%g", static_cast<unsigned long long>(N), v, c);
  return make_check(name, freq, bound, trials, 3.0 * se, "threshold = " + fmt("%.6g", threshold));
}

namespace {

double bivariate_quadrature(double alpha, double t) {
  if (alpha >= 1.0) return normal_upper_tail(t);
  const double s = std::sqrt(1.0 - alpha * alpha);
  const double hi = t + 40.0;
  const int m = 40000;  // even
  const double h = (hi - t) / m;
  double acc = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double z = t + h * k;
    const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * normal_pdf(z) * normal_upper_tail((t - alpha * z) / s);
  }
  return acc * h / 3.0;
}

}  // namespace

BivariateTail bivariate_tail_bounds(double alpha, double t, std::uint64_t seed, std::uint64_t draws) {
  require_unit(alpha, "bivariate_tail_bounds");
  if (!(t > 0.0)) throw DomainError("bivariate_tail_bounds: t must be positive");
  BivariateTail r;
  r.alpha = alpha;
  r.t = t;
  r.draws = draws;
  r.bound_ii = (1.0 + alpha) / (std::sqrt(2.0 * std::numbers::pi) * t) * std::exp(-t * t / (1.0 + alpha));
  if (alpha * t < 0.1) {
    const double q = normal_upper_tail(t);
    r.bound_i = std::exp(-2.0 * t * t) + q * q;
  }
  r.quadrature = bivariate_quadrature(alpha, t);
  if (draws > 0) {
    GaussianSource src(derive_trial_seed({seed, static_cast<std::uint64_t>(std::llround(alpha * 1e6))}));
    const double s = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    std::uint64_t hits = 0;
    for (std::uint64_t k = 0; k < draws; ++k) {
      const double z1 = src.normal();
      const double z2 = alpha * z1 + s * src.normal();
      hits += (z1 > t && z2 > t);
    }
    r.exact_mc = static_cast<double>(hits) / static_cast<double>(draws);
    r.standard_error = std::sqrt(r.exact_mc * (1.0 - r.exact_mc) / static_cast<double>(draws));
  }
  return r;
}

BoundCheck bivariate_bound_ii_check(double alpha, double t, std::uint64_t seed, std::uint64_t draws) {
  const BivariateTail r = bivariate_tail_bounds(alpha, t, seed, draws);
  char name[96];
  std::snprintf(name, sizeof name, "bivariate_bound_ii_alpha%g_t%g", alpha, t);
  return make_check(name, r.exact_mc, r.bound_ii, r.draws, 3.0 * r.standard_error,
                    "quadrature = " + fmt("%.6g", r.quadrature));
}

double paley_zygmund_bound(double mean, double second_moment, double c) {
  if (!(mean > 0.0)) throw DomainError("paley_zygmund_bound: mean must be positive");
  if (!(second_moment >= mean * mean)) throw DomainError("paley_zygmund_bound: second moment below mean^2");
  require_unit(c, "paley_zygmund_bound");
  return (1.0 - c) * (1.0 - c) * mean * mean / second_moment;
}

double predicted_transposition_mean(const ThresholdSpec& spec) {
  return std::exp(spec.a_n / 2.0) / (4.0 * std::sqrt(2.0 * std::numbers::pi));
}

std::vector<BoundCheck> analytic_checks(std::size_t grid_size) {
  std::vector<BoundCheck> out;
  out.push_back(f_continuity_check());
  out.push_back(f_upper_bound_check(grid_size));
  out.push_back(g_minimum_check(1000, 1000));
  out.push_back(final_function_check(grid_size));
  double worst = 0.0;
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double t : {2.0, 3.0, 4.0, 5.0}) {
      const BivariateTail r = bivariate_tail_bounds(a, t, 0, 0);
      worst = std::max(worst, r.quadrature / r.bound_ii);
    }
  out.push_back(make_check("bivariate_bound_ii_quadrature_ratio", worst, 1.0, 0, 0.0));
  const UnionBoundReport u = union_bound_diagnostic(1000, 0.1);
  out.push_back(make_check("transposition_edge_count", std::abs(u.rows.front().d_edge_lower - 2.0 * 998.0),
                           0.0, 0, 0.0));
  return out;
}

}  // namespace wigner_align
