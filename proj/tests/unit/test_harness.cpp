#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wigner_align/energy.hpp"
#include "wigner_align/errors.hpp"
#include "wigner_align/harness.hpp"

using namespace wigner_align;

namespace {

PhaseConfig small_config(std::vector<double> rhos, std::size_t trials, std::size_t threads = 2) {
  PhaseConfig c;
  c.n_values = {8};
  c.rhos = std::move(rhos);
  c.trials = trials;
  c.seed = 42;
  c.threads = threads;
  return c;
}

}  // namespace

TEST(RunOrdered, KeepsIndexOrderAndPropagates) {
  const std::function<int(std::size_t)> sq = [](std::size_t i) { return static_cast<int>(i * i); };
  const auto v = run_ordered<int>(100, 4, sq);
  for (std::size_t i = 0; i < 100; ++i) ASSERT_EQ(v[i], static_cast<int>(i * i));
  const std::function<int(std::size_t)> bad = [](std::size_t i) -> int {
    if (i == 7) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(run_ordered<int>(20, 3, bad), std::runtime_error);
  EXPECT_TRUE(run_ordered<int>(0, 3, sq).empty());
}

TEST(Phase, GammaToRho) {
  EXPECT_NEAR(rho_from_gamma(100, 2.0), std::sqrt(2.0 * std::log(100.0) / 100.0), 1e-15);
}

TEST(Phase, ExactRecoveryExtremes) {
  const auto pts = run_phase_grid(small_config({0.0, 0.999}, 200));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_TRUE(pts[0].exact_run);
  EXPECT_LE(pts[0].exact_recovery_freq(), 0.01);
  EXPECT_GE(pts[1].exact_recovery_freq(), 0.95);
  EXPECT_GE(pts[1].mean_overlap(), 0.95);
}

TEST(Phase, DeterministicAcrossThreadCounts) {
  const auto a = run_phase_grid(small_config({0.5, 0.9}, 30, 1));
  const auto b = run_phase_grid(small_config({0.5, 0.9}, 30, 4));
  std::ostringstream sa, sb;
  write_phase_csv(sa, a);
  write_phase_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().rfind(kPhaseCsvHeader, 0), 0u);
}

TEST(Phase, SkipsImpossibleSignal) {
  PhaseConfig c;
  c.n_values = {6};
  c.gammas = {4.0};
  c.trials = 20;
  c.seed = 7;
  const auto pts = run_phase_grid(c);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_TRUE(pts[0].skipped);
  EXPECT_FALSE(pts[0].skip_reason.empty());
  EXPECT_EQ(phase_csv_row(pts[0]), "6,4,NA,0,NA,NA,NA,NA,7");
}

TEST(Phase, LargeNUsesWitnessOnly) {
  PhaseConfig c;
  c.n_values = {500};
  c.gammas = {6.0};
  c.trials = 3;
  c.seed = 3;
  c.threads = 2;
  const auto pts = run_phase_grid(c);
  EXPECT_FALSE(pts[0].exact_run);
  EXPECT_FALSE(pts[0].local_run);
  EXPECT_TRUE(std::isnan(pts[0].exact_recovery_freq()));
  EXPECT_TRUE(std::isnan(pts[0].local_recovery_freq()));
  EXPECT_FALSE(std::isnan(pts[0].converse_witness_freq()));
  EXPECT_NE(phase_csv_row(pts[0]).find("NA"), std::string::npos);
}

TEST(Phase, RecoveryRisesWithSignal) {
  const auto pts = run_phase_grid(small_config({0.0, 0.5, 0.9, 0.99, 0.999}, 200, 4));
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double p = pts[k - 1].exact_recovery_freq(), q = pts[k].exact_recovery_freq();
    const double se = std::sqrt((p * (1 - p) + q * (1 - q)) / 200.0);
    EXPECT_GE(q, p - 3.0 * se);
  }
}

TEST(Witness, ScanIsSound) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Instance inst = sample_instance(30, 0.3, {s, 1}, PlantedMode::kUniform);
    const WitnessScan w = scan_planted_transpositions(inst);
    EXPECT_TRUE(w.confirmed);
    std::size_t neg = 0;
    double mn = INFINITY;
    for (std::size_t i = 1; i <= 30; ++i)
      for (std::size_t j = i + 1; j <= 30; ++j) {
        const Permutation moved = compose(inst.planted, Permutation::transposition(30, i, j));
        const double d = relative_energy(moved, inst.planted, inst.A, inst.B, 0.3);
        neg += d < 0.0;
        mn = std::min(mn, d);
      }
    EXPECT_EQ(w.negative, neg);
    EXPECT_NEAR(w.min_delta, mn, 1e-9);
  }
}

TEST(Transpositions, ZeroSignalHasNoNegativeDeltas) {
  const auto e = run_transposition_experiment_rho(50, 0.0, 5, 1, 2);
  for (auto x : e.x_values) EXPECT_EQ(x, 0u);
  EXPECT_EQ(e.tie_count, 5u * 50u * 49u / 2u);
}

TEST(Transpositions, CountsAndMoments) {
  const ThresholdSpec spec = ThresholdSpec::make(100, 2.0);
  const auto e = run_transposition_experiment(spec, 20, 2, 2);
  ASSERT_EQ(e.x_values.size(), 20u);
  double m = 0.0;
  for (auto x : e.x_values) {
    EXPECT_LE(x, 100u * 99u / 2u);
    m += static_cast<double>(x);
  }
  EXPECT_NEAR(e.mean_x, m / 20.0, 1e-12);
  EXPECT_GE(e.second_moment, e.mean_x * e.mean_x - 1e-9);
  EXPECT_EQ(e.c_deviation.size(), 20u);
  EXPECT_EQ(e.c_flag.size(), 20u);
  EXPECT_NEAR(e.predicted_mean, predicted_transposition_mean(spec), 1e-12);
  const auto j = to_json_line(e);
  EXPECT_NE(j.find("\"mean_x\""), std::string::npos);
  const auto e2 = run_transposition_experiment(spec, 20, 2, 1);
  EXPECT_EQ(e.x_values, e2.x_values);
}

TEST(Transpositions, StrongSignalSuppressesWitnesses) {
  const auto e = run_transposition_experiment(ThresholdSpec::make(200, -10.0), 20, 3, 2);
  EXPECT_LE(e.mean_x, 0.1);
}

TEST(Transpositions, Preconditions) {
  EXPECT_THROW(run_transposition_experiment_rho(2, 0.5, 1, 1), DomainError);
  EXPECT_THROW(run_transposition_experiment_rho(10, 1.0, 1, 1), DomainError);
}

TEST(Concentration, EmptyConfigRunsNothing) {
  EXPECT_TRUE(run_concentration_suite(ConcentrationConfig{}).empty());
}

TEST(Concentration, AnalyticSubsetPasses) {
  ConcentrationConfig c;
  c.analytic_grid = 10000;
  const auto checks = run_concentration_suite(c);
  ASSERT_EQ(checks.size(), 6u);
  for (const auto& k : checks) EXPECT_TRUE(k.pass) << to_json_line(k);
}

TEST(Concentration, MixedSections) {
  ConcentrationConfig c;
  c.seed = 5;
  c.max_tc.push_back({1000, 1.0, 0.5, 2000});
  c.bivariate.push_back({0.25, 2.0, 100000});
  c.hanson_wright.push_back({20, MatrixKind::kIdentity, 0.05, 1000});
  const auto checks = run_concentration_suite(c);
  ASSERT_EQ(checks.size(), 3u);
  for (const auto& k : checks) EXPECT_TRUE(k.pass) << to_json_line(k);
}
