#pragma once

// Seeded Monte Carlo experiments: recovery phase grid, transposition counts
// and the concentration suite.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wigner_align/model.hpp"
#include "wigner_align/solvers.hpp"
#include "wigner_align/theory.hpp"

namespace wigner_align {

// Worker count: WIGNER_ALIGN_THREADS when set to a positive integer, else
// the hardware concurrency (at least 1).
std::size_t default_thread_count();

// Runs task(0..count-1) on up to `threads` workers; results land in index
// order, so output never depends on scheduling.
template <class T>
std::vector<T> run_ordered(std::size_t count, std::size_t threads,
                           const std::function<T(std::size_t)>& task);

// gamma = n rho^2 / log n.
double rho_from_gamma(std::size_t n, double gamma);

struct PhaseConfig {
  std::vector<std::size_t> n_values;
  std::vector<double> gammas;  // signal as gamma; used when rhos is empty
  std::vector<double> rhos;    // raw rho levels
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t brute_force_cap = kDefaultBruteForceCap;
  std::size_t local_max_n = 400;  // spectral + descent only up to this n
  std::size_t threads = 0;        // 0: default_thread_count()
};

struct PhasePoint {
  std::size_t n = 0;
  double gamma = 0.0;
  double rho = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool skipped = false;
  std::string skip_reason;

  bool exact_run = false;  // n <= brute_force_cap
  bool local_run = false;  // n <= local_max_n
  std::size_t exact_count = 0;
  std::size_t local_count = 0;
  std::size_t witness_count = 0;      // trials with some transposition delta < 0
  std::size_t tie_witness_count = 0;  // trials with some delta == 0 and none < 0
  double overlap_sum = 0.0;           // of the MAP estimate, else the local one

  double exact_recovery_freq() const;
  double local_recovery_freq() const;
  double converse_witness_freq() const;
  double mean_overlap() const;
};

// One cell per (n, signal level). Trials under the same n share seeds across
// signal levels. Signal levels with rho > 1 yield a skipped cell.
std::vector<PhasePoint> run_phase_grid(const PhaseConfig& config);

inline constexpr const char* kPhaseCsvHeader =
    "n,gamma,rho,trials,exact_recovery_freq,local_recovery_freq,converse_witness_freq,mean_overlap,seed";
// Unavailable fields print as NA.
std::string phase_csv_row(const PhasePoint& p);
void write_phase_csv(std::ostream& out, const std::vector<PhasePoint>& points);

// Per-trial result of the converse scan at the planted alignment.
struct WitnessScan {
  double min_delta = 0.0;
  std::size_t negative = 0;  // transpositions with delta < 0
  std::size_t zero = 0;
  bool confirmed = true;     // each negative delta re-derived from scratch
};
WitnessScan scan_planted_transpositions(const Instance& inst);

struct TranspositionExperiment {
  ThresholdSpec spec;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> x_values;
  double mean_x = 0.0;
  double var_x = 0.0;  // unbiased sample variance
  double second_moment = 0.0;
  double predicted_mean = 0.0;
  double pz_lower_bound = 0.0;  // on P(X >= mean / 2) from the empirical moments
  double freq_x_ge_half_mean = 0.0;
  double freq_x_positive = 0.0;
  std::vector<double> c_deviation;  // per trial max |v_tau - 2 d^E| / (2 sqrt(n log n))
  std::vector<bool> c_flag;         // deviation above median + 3 MAD
  std::size_t tie_count = 0;        // transpositions with delta == 0, all trials
};

TranspositionExperiment run_transposition_experiment(const ThresholdSpec& spec, std::size_t trials,
                                                     std::uint64_t seed, std::size_t threads = 0);
// Same experiment at an explicit rho in [0, 1).
TranspositionExperiment run_transposition_experiment_rho(std::size_t n, double rho,
                                                         std::size_t trials, std::uint64_t seed,
                                                         std::size_t threads = 0);

std::string to_json_line(const TranspositionExperiment& e);

struct EventAConfig {
  std::size_t n = 100;
  std::vector<std::size_t> d_list{2, 3, 4};
  std::size_t pairs_per_d = 50;
  std::size_t trials = 5;
};
struct HansonWrightConfig {
  std::size_t dimension = 0;
  MatrixKind kind = MatrixKind::kIdentity;
  double delta = 0.05;
  std::size_t trials = 10000;
};
struct MaxTcConfig {
  std::uint64_t N = 10000;
  double v = 1.0;
  double c = 0.0;
  std::size_t trials = 100000;
};
struct BivariateConfig {
  double alpha = 0.0;
  double t = 2.0;
  std::uint64_t draws = kDefaultBivariateDraws;
};

struct ConcentrationConfig {
  std::uint64_t seed = 0;
  std::optional<std::size_t> analytic_grid;
  std::optional<EventAConfig> event_a;
  std::vector<HansonWrightConfig> hanson_wright;
  std::vector<MaxTcConfig> max_tc;
  std::vector<BivariateConfig> bivariate;
};

ConcentrationConfig default_concentration_config(std::uint64_t seed = 1);
std::vector<BoundCheck> run_concentration_suite(const ConcentrationConfig& config);

}  // namespace wigner_align

#include "wigner_align/detail/run_ordered.hpp"
