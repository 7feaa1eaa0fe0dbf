#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wigner_align/energy.hpp"
#include "wigner_align/errors.hpp"
#include "wigner_align/model.hpp"
#include "wigner_align/solvers.hpp"

using namespace wigner_align;

namespace {

Instance inst_of(std::size_t n, double rho, std::uint64_t seed, PlantedMode mode = PlantedMode::kUniform) {
  return sample_instance(n, rho, {seed, 0}, mode);
}

}  // namespace

TEST(BruteForce, NoiselessRecoversPlanted) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Instance inst = inst_of(7, 1.0, 200 + s);
    const SolveResult r = brute_force_map(inst.A, inst.B, 1.0);
    EXPECT_EQ(r.pi_hat, inst.planted);
    EXPECT_TRUE(r.exact);
    EXPECT_NEAR(r.objective, 0.0, 1e-12);
  }
}

TEST(BruteForce, ZeroSignalIsIdentityWithAllTies) {
  const Instance inst = inst_of(5, 0.0, 210);
  const SolveResult r = brute_force_map(inst.A, inst.B, 0.0);
  EXPECT_TRUE(r.pi_hat.is_identity());
  EXPECT_EQ(r.ties, 120u);
}

TEST(BruteForce, MatchesExhaustiveOracle) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = inst_of(6, 0.5, 220 + s);
    const SolveResult r = brute_force_map(inst.A, inst.B, 0.5);
    double best = -INFINITY;
    for (const auto& t : oracle::all_permutations(6)) best = std::max(best, oracle::qap(t, inst.A.dense(), inst.B.dense()));
    EXPECT_NEAR(qap_objective(r.pi_hat, inst.A, inst.B), best, 1e-10);
    EXPECT_NEAR(r.objective, loss(r.pi_hat, inst.A, inst.B, 0.5), 1e-12);
  }
}

TEST(BruteForce, CapAndSmallN) {
  const Instance big = inst_of(10, 0.5, 230);
  EXPECT_THROW(brute_force_map(big.A, big.B, 0.5), DomainError);
  const Instance two = inst_of(2, 0.5, 231);
  EXPECT_NO_THROW(brute_force_map(two.A, two.B, 0.5));
}

TEST(Descent, StartingAtOptimumStays) {
  const Instance inst = inst_of(8, 1.0, 240);
  const SolveResult r = transposition_descent(inst.A, inst.B, 1.0, inst.planted);
  EXPECT_EQ(r.pi_hat, inst.planted);
  EXPECT_EQ(r.iterations, 0u);
}

TEST(Descent, EndsAtLocalMinimumWithExactObjective) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = inst_of(25, 0.6, 250 + s);
    const SolveResult r = transposition_descent(inst.A, inst.B, 0.6, Permutation::identity(25));
    EXPECT_NEAR(r.objective, loss(r.pi_hat, inst.A, inst.B, 0.6), 1e-8);
    EXPECT_LE(r.objective, loss(Permutation::identity(25), inst.A, inst.B, 0.6) + 1e-9);
    const Eigen::MatrixXd D = all_swap_deltas(r.pi_hat, inst.A, inst.B, 0.6);
    EXPECT_GE(D.minCoeff(), -1e-9);
  }
}

TEST(Descent, HighSignalRepairsOneSwap) {
  std::size_t hits = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Instance inst = inst_of(8, 0.999, 300 + s);
    const Permutation start = compose(inst.planted, Permutation::transposition(8, 1 + s % 7, 8));
    hits += transposition_descent(inst.A, inst.B, 0.999, start).pi_hat == inst.planted;
  }
  EXPECT_GE(hits, 48u);
}

TEST(Descent, Preconditions) {
  const Instance inst = inst_of(6, 0.5, 260);
  EXPECT_THROW(transposition_descent(inst.A, inst.B, 0.5, Permutation::identity(5)), DimensionError);
}

TEST(Hungarian, SmallExamples) {
  AssignmentProblem p;
  p.cost.resize(2, 2);
  p.cost << 4, 1, 2, 3;
  Assignment a = hungarian(p);
  EXPECT_EQ(a.assignment, Permutation::from_images({2, 1}));
  EXPECT_DOUBLE_EQ(a.value, 3.0);
  p.sense = Sense::kMaximize;
  a = hungarian(p);
  EXPECT_EQ(a.assignment, Permutation::identity(2));
  EXPECT_DOUBLE_EQ(a.value, 7.0);

  AssignmentProblem d;
  d.cost = Eigen::MatrixXd::Zero(5, 5);
  d.cost.diagonal().setConstant(-10.0);
  const Assignment da = hungarian(d);
  EXPECT_TRUE(da.assignment.is_identity());
  EXPECT_DOUBLE_EQ(da.value, -50.0);
}

TEST(Hungarian, MatchesExhaustiveOracle) {
  GaussianSource src(270);
  for (int rep = 0; rep < 100; ++rep) {
    AssignmentProblem p;
    p.cost.resize(7, 7);
    for (Eigen::Index i = 0; i < 7; ++i)
      for (Eigen::Index j = 0; j < 7; ++j) p.cost(i, j) = src.normal();
    p.sense = rep % 2 ? Sense::kMaximize : Sense::kMinimize;
    const Assignment a = hungarian(p);
    const double opt = oracle::lap_optimum(p.cost, p.sense == Sense::kMaximize);
    ASSERT_LE(std::abs(a.value - opt), 1e-9 * std::max(1.0, std::abs(opt)));
    double v = 0.0;
    for (std::size_t i = 1; i <= 7; ++i) v += p.cost(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(a.assignment(i) - 1));
    ASSERT_NEAR(v, a.value, 1e-12);
  }
}

TEST(Hungarian, InputValidation) {
  AssignmentProblem p;
  p.cost = Eigen::MatrixXd::Zero(2, 3);
  EXPECT_THROW(hungarian(p), DimensionError);
  p.cost = Eigen::MatrixXd::Zero(2, 2);
  p.cost(0, 1) = NAN;
  EXPECT_THROW(hungarian(p), DomainError);
}

TEST(LapAlign, RecoversExactPermutation) {
  GaussianSource src(280);
  Eigen::MatrixXd u(6, 3);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index k = 0; k < 3; ++k) u(i, k) = src.normal();
  const Permutation s = Permutation::from_images({4, 1, 6, 2, 3, 5});
  Eigen::MatrixXd v(6, 3);
  for (std::size_t i = 1; i <= 6; ++i) v.row(static_cast<Eigen::Index>(s(i) - 1)) = u.row(static_cast<Eigen::Index>(i - 1));
  EXPECT_EQ(lap_align(u, v), s);
  EXPECT_TRUE(lap_align(u, u).is_identity());
  EXPECT_THROW(lap_align(u, Eigen::MatrixXd::Zero(5, 3)), DimensionError);
}

TEST(LapAlign, RobustToSmallNoise) {
  GaussianSource src(281);
  auto ub = [&](std::uint64_t k) { return src.uniform_below(k); };
  std::size_t ok = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd u(50, 20), v(50, 20);
    for (Eigen::Index i = 0; i < 50; ++i)
      for (Eigen::Index k = 0; k < 20; ++k) u(i, k) = src.normal();
    const Permutation s = random_with_displacement(50, 50, ub);
    for (std::size_t i = 1; i <= 50; ++i)
      for (Eigen::Index k = 0; k < 20; ++k)
        v(static_cast<Eigen::Index>(s(i) - 1), k) = u(static_cast<Eigen::Index>(i - 1), k) + 0.1 * src.normal();
    ok += lap_align(u, v) == s;
  }
  EXPECT_GE(ok, 95u);
}

TEST(Spectral, NoiselessRecoversPlanted) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Instance inst = inst_of(60, 1.0, 290 + s);
    EXPECT_EQ(spectral_align(inst.A, inst.B, 1.0).pi_hat, inst.planted);
  }
}

TEST(Spectral, HighSignalHighOverlap) {
  std::size_t good = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = inst_of(200, 0.999, 400 + s);
    const SolveResult r = spectral_align(inst.A, inst.B, 0.999);
    EXPECT_NEAR(r.objective, loss(r.pi_hat, inst.A, inst.B, 0.999), 1e-8);
    good += overlap(r.pi_hat, inst.planted) >= 0.9;
  }
  EXPECT_GE(good, 9u);
}

TEST(LowEnergySet, NoiselessIsOnlyIdentity) {
  const Instance inst = inst_of(7, 1.0, 310, PlantedMode::kIdentity);
  const auto set = low_energy_set(inst.A, inst.B, 1.0, 4);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_TRUE(set[0].first.is_identity());
  EXPECT_EQ(set[0].second, 0.0);
}

TEST(LowEnergySet, FlatLandscapeContainsEverything) {
  const WignerMatrix Z = WignerMatrix::zeros(5);
  EXPECT_EQ(low_energy_set(Z, Z, 0.5, 5).size(), 120u);
}

TEST(LowEnergySet, MatchesDirectEnumeration) {
  const Instance inst = inst_of(7, 0.2, 312);
  const auto set = low_energy_set(inst.A, inst.B, 0.2, 3, &inst.planted);
  std::size_t expect = 1;
  for (std::size_t d = 2; d <= 3; ++d)
    for_each_with_displacement(7, d, [&](const Permutation& s) {
      expect += relative_energy(compose(inverse(s), inst.planted), inst.planted, inst.A, inst.B, 0.2) <= 0.0;
    });
  EXPECT_EQ(set.size(), expect);
  for (std::size_t k = 1; k < set.size(); ++k) {
    EXPECT_LE(set[k].second, 0.0);
    EXPECT_LE(set[k].first.displaced(), 3u);
  }
}

TEST(LowEnergySet, Budget) {
  const Instance inst = inst_of(12, 0.2, 313);
  EXPECT_THROW(low_energy_set(inst.A, inst.B, 0.2, 12, nullptr, 1000), EnumerationTooLarge);
}
