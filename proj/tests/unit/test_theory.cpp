#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "wigner_align/errors.hpp"
#include "wigner_align/normal.hpp"
#include "wigner_align/theory.hpp"

using namespace wigner_align;

TEST(Normal, UpperTailGoldens) {
  EXPECT_NEAR(normal_upper_tail(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_upper_tail(1.0) / 0.15865525393145707, 1.0, 1e-14);
  EXPECT_NEAR(normal_upper_tail(5.0) / 2.866515718791939e-07, 1.0, 1e-13);
  EXPECT_NEAR(normal_upper_tail(8.0) / 6.22096057427178e-16, 1.0, 1e-13);
  EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-16);
}

TEST(Normal, InverseRoundTrip) {
  for (double p : {1e-300, 1e-20, 1e-8, 0.01, 0.3, 0.5, 0.7, 0.99, 1 - 1e-10}) {
    const double x = normal_upper_tail_inverse(p);
    EXPECT_NEAR(normal_upper_tail(x) / p, 1.0, 1e-12) << p;
  }
  EXPECT_THROW(normal_upper_tail_inverse(0.0), DomainError);
  EXPECT_THROW(normal_upper_tail_inverse(1.0), DomainError);
}

TEST(AnalyticFunctions, Values) {
  EXPECT_DOUBLE_EQ(f_alpha(0.25), 0.0625);
  EXPECT_DOUBLE_EQ(f_alpha(0.75), 0.4375);
  EXPECT_DOUBLE_EQ(f_alpha(1.0), 0.5);
  EXPECT_DOUBLE_EQ(g_alpha_beta(0.5, 0.0), 0.25);
  EXPECT_DOUBLE_EQ(g_alpha_beta(0.75, 0.5), 0.125 - 0.25 + 0.5625);
  EXPECT_NEAR(final_function(0.25), 0.4375 - 0.5 * std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(final_function(1.0), 0.0, 1e-15);
  EXPECT_NEAR(final_function(0.0), 0.0, 1e-15);
  EXPECT_THROW(f_alpha(1.5), DomainError);
}

TEST(AnalyticFunctions, MinimumOfGIsF) {
  for (double a = 0.0; a <= 1.0; a += 0.01) {
    const double b = std::max(0.0, 2.0 * a - 1.0);
    EXPECT_NEAR(g_alpha_beta(a, b), f_alpha(a), 1e-14) << a;
  }
}

TEST(AnalyticFunctions, FinalFunctionScan) {
  const FinalFunctionScan s = scan_final_function(100000);
  EXPECT_GE(s.minimum, -1e-12);
  // Below 1/2 the function equals a (1 - sqrt(1 - a))^2, which vanishes only at 0.
  EXPECT_TRUE(s.interior_zeros.empty());
  EXPECT_NEAR(final_function(0.382), 0.382 * std::pow(1.0 - std::sqrt(1.0 - 0.382), 2), 1e-14);
}

TEST(AnalyticFunctions, DeterministicChecksPass) {
  const auto checks = analytic_checks(100000);
  ASSERT_EQ(checks.size(), 6u);
  for (const auto& c : checks) EXPECT_TRUE(c.pass) << to_json_line(c);
  EXPECT_TRUE(f_continuity_check().pass);
  EXPECT_TRUE(g_minimum_check(1000, 1000).pass);
}

TEST(BoundCheck, JsonLine) {
  const BoundCheck c = make_check("x", 1.0, 2.0, 10, 0.5, "n");
  EXPECT_TRUE(c.pass);
  EXPECT_DOUBLE_EQ(c.margin, 1.0);
  const auto j = nlohmann::json::parse(to_json_line(c));
  EXPECT_EQ(j["name"], "x");
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["samples"], 10);
  EXPECT_FALSE(make_check("y", 3.0, 2.0, 0, 0.5).pass);
  EXPECT_TRUE(make_check("z", 2.4, 2.0, 0, 0.5).pass);
}

TEST(UnionBound, LargeN) {
  const std::size_t n = 10000;
  const double rho = 0.2;
  const UnionBoundReport r = union_bound_diagnostic(n, rho);
  ASSERT_EQ(r.rows.size(), n - 1);
  EXPECT_EQ(r.rows.front().d, 2u);
  EXPECT_NEAR(r.derangement_term, n * std::log(n) - rho * rho * n * n / 8.0, 1e-6);
  EXPECT_FALSE(r.derangement_explodes);
  for (const auto& row : r.rows) {
    ASSERT_LE(row.d_edge_lower, row.d_edge_upper);
    ASSERT_NEAR(row.log_term, row.d * std::log(n) - rho * rho / 4.0 * row.d_edge_lower, 1e-6 * std::abs(row.log_term) + 1e-9);
  }
  EXPECT_TRUE(union_bound_diagnostic(n, 0.01).derangement_explodes);
}

TEST(Threshold, Coordinates) {
  const ThresholdSpec s = ThresholdSpec::make(1000, 10.0);
  const double t2 = 4 * std::log(1000.0) - std::log(std::log(1000.0)) - 10.0;
  EXPECT_NEAR(s.t_n, std::sqrt(t2), 1e-14);
  EXPECT_NEAR(s.rho, std::sqrt(t2 / 1000.0), 1e-14);
  EXPECT_THROW(ThresholdSpec::make(1000, 40.0), DomainError);
  EXPECT_NEAR(predicted_transposition_mean(s), std::exp(5.0) / (4.0 * std::sqrt(2.0 * M_PI)), 1e-10);
  EXPECT_NEAR(predicted_transposition_mean(s), 14.8, 0.05);
}

TEST(PaleyZygmund, Values) {
  EXPECT_DOUBLE_EQ(paley_zygmund_bound(2.0, 8.0, 0.5), 0.125);
  EXPECT_DOUBLE_EQ(paley_zygmund_bound(1.0, 1.0, 0.0), 1.0);
}

TEST(EventA, ConstantIsStable) {
  const double c = estimate_event_a_constant(40, {2, 3}, 10, 2, 5);
  EXPECT_GT(c, 0.0);
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_EQ(c, estimate_event_a_constant(40, {2, 3}, 10, 2, 5));
  EXPECT_TRUE(event_A_check(50, {2, 3, 4}, 20, 3, 7).pass);
  EXPECT_THROW(event_A_check(50, {}, 20, 3, 7), DomainError);
}

TEST(HansonWright, Fits) {
  const HansonWrightFit zero = hanson_wright_fit(20, MatrixKind::kZero, 0.05, 2000, 1);
  EXPECT_TRUE(zero.found);
  EXPECT_EQ(zero.frobenius, 0.0);
  for (MatrixKind k : {MatrixKind::kIdentity, MatrixKind::kRandomSymmetric}) {
    const HansonWrightFit f = hanson_wright_fit(50, k, 0.05, 5000, 2);
    EXPECT_TRUE(f.found);
    EXPECT_GT(f.op_norm, 0.0);
    EXPECT_LE(f.op_norm, f.frobenius + 1e-12);
    EXPECT_LE(f.exceedance, 0.1 + 3.0 * std::sqrt(0.1 / 5000.0));
  }
  const HansonWrightFit pd = hanson_wright_fit(12, MatrixKind::kPermutationDifference, 0.05, 2000, 3);
  EXPECT_EQ(pd.dimension, 66u);
  EXPECT_TRUE(hanson_wright_demo(30, MatrixKind::kIdentity, 0.05, 3000, 4).pass);
}

TEST(MaxTc, Checks) {
  for (double c : {0.0, 0.5, 1.0}) EXPECT_TRUE(max_tc_gaussian_check(1000, 1.0, c, 5000, 9).pass) << c;
  EXPECT_THROW(max_tc_gaussian_check(8, 1.0, 0.0, 100, 1), DomainError);
  EXPECT_THROW(max_tc_gaussian_check(100, 1.0, 2.0, 100, 1), DomainError);
  EXPECT_THROW(max_tc_gaussian_check(100, 1.0, 0.0, 0, 1), DomainError);
}

TEST(Bivariate, MonteCarloAgreesWithQuadrature) {
  for (double a : {0.0, 0.5, 1.0}) {
    const BivariateTail b = bivariate_tail_bounds(a, 2.0, 11, 200000);
    EXPECT_NEAR(b.exact_mc, b.quadrature, 4.0 * b.standard_error + 1e-12) << a;
    EXPECT_LE(b.quadrature, b.bound_ii);
  }
  const BivariateTail ind = bivariate_tail_bounds(0.0, 2.0, 12, 1000);
  EXPECT_NEAR(ind.quadrature, std::pow(normal_upper_tail(2.0), 2), 1e-8);
  ASSERT_TRUE(ind.bound_i.has_value());
  EXPECT_FALSE(bivariate_tail_bounds(0.5, 2.0, 12, 1000).bound_i.has_value());
  const BivariateTail full = bivariate_tail_bounds(1.0, 2.0, 12, 1000);
  EXPECT_NEAR(full.quadrature, normal_upper_tail(2.0), 1e-8);
  EXPECT_TRUE(bivariate_bound_ii_check(0.25, 3.0, 13, 200000).pass);
}
