#include "wigner_align/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "wigner_align/energy.hpp"
#include "wigner_align/errors.hpp"

namespace wigner_align {

std::size_t default_thread_count() {
  if (const char* env = std::getenv("WIGNER_ALIGN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double rho_from_gamma(std::size_t n, double gamma) {
  if (n < 2) throw DomainError("rho_from_gamma: n must be at least 2");
  if (!(gamma >= 0.0)) throw DomainError("rho_from_gamma: gamma must be nonnegative");
  return std::sqrt(gamma * std::log(static_cast<double>(n)) / static_cast<double>(n));
}

namespace {

double ratio(std::size_t count, std::size_t trials) {
  return static_cast<double>(count) / static_cast<double>(trials);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Entries this close to zero after the dense product are re-derived with the
// direct O(n) sum before their sign is trusted.
constexpr double kRecheckBand = 1e-8;

struct TrialOutcome {
  bool exact = false;
  bool local = false;
  bool witness = false;
  bool tie = false;
  double overlap = kNaN;
};

}  // namespace

double PhasePoint::exact_recovery_freq() const {
  return skipped || !exact_run ? kNaN : ratio(exact_count, trials);
}
double PhasePoint::local_recovery_freq() const {
  return skipped || !local_run ? kNaN : ratio(local_count, trials);
}
double PhasePoint::converse_witness_freq() const {
  return skipped ? kNaN : ratio(witness_count, trials);
}
double PhasePoint::mean_overlap() const {
  return skipped || !(exact_run || local_run) ? kNaN : overlap_sum / static_cast<double>(trials);
}

WitnessScan scan_planted_transpositions(const Instance& inst) {
  const std::size_t n = inst.n();
  WitnessScan scan;
  if (n < 2) return scan;
  const Eigen::MatrixXd D = all_swap_deltas(inst.planted, inst.A, inst.B, inst.rho);
  scan.min_delta = std::numeric_limits<double>::infinity();
  std::size_t wi = 0, wj = 0;
  for (Eigen::Index j = 1; j < static_cast<Eigen::Index>(n); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      double d = D(i, j);
      if (d < kRecheckBand)
        d = swap_delta(inst.planted, static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1,
                       inst.A, inst.B, inst.rho);
      if (d < 0.0) ++scan.negative;
      if (d == 0.0) ++scan.zero;
      if (d < scan.min_delta) {
        scan.min_delta = d;
        wi = static_cast<std::size_t>(i) + 1;
        wj = static_cast<std::size_t>(j) + 1;
      }
    }
  }
  if (scan.negative > 0) {
    const Permutation moved = compose(inst.planted, Permutation::transposition(n, wi, wj));
    scan.confirmed = relative_energy(moved, inst.planted, inst.A, inst.B, inst.rho) < 1e-9;
  }
  return scan;
}

std::vector<PhasePoint> run_phase_grid(const PhaseConfig& config) {
  if (config.trials == 0) throw DomainError("run_phase_grid: trials must be positive");
  const bool by_rho = !config.rhos.empty();
  std::vector<PhasePoint> out;
  for (std::size_t n : config.n_values) {
    if (n < 2) throw DomainError("run_phase_grid: n must be at least 2");
    const std::uint64_t cell_master = derive_trial_seed({config.seed, n});
    const std::vector<double>& levels = by_rho ? config.rhos : config.gammas;
    for (double level : levels) {
      PhasePoint p;
      p.n = n;
      p.seed = config.seed;
      const double ln = std::log(static_cast<double>(n));
      if (by_rho) {
        p.rho = level;
        p.gamma = static_cast<double>(n) * level * level / ln;
      } else {
        p.gamma = level;
        p.rho = rho_from_gamma(n, level);
      }
      if (!(p.rho >= 0.0 && p.rho <= 1.0)) {
        p.skipped = true;
        char buf[128];
        std::snprintf(buf, sizeof buf, "rho^2 = %.6g lies outside [0, 1]", p.rho * p.rho);
        p.skip_reason = buf;
        out.push_back(p);
        continue;
      }
      p.trials = config.trials;
      p.exact_run = n <= config.brute_force_cap;
      p.local_run = n <= config.local_max_n;
      const double rho = p.rho;
      const bool exact_run = p.exact_run, local_run = p.local_run;
      const std::size_t cap = config.brute_force_cap;
      auto outcomes = run_ordered<TrialOutcome>(config.trials, config.threads, [&](std::size_t t) {
        const Instance inst = sample_instance(n, rho, {cell_master, t}, PlantedMode::kUniform, false);
        TrialOutcome o;
        if (exact_run) {
          const SolveResult r = brute_force_map(inst.A, inst.B, rho, cap);
          o.exact = r.pi_hat == inst.planted;
          o.overlap = overlap(r.pi_hat, inst.planted);
        }
        if (local_run) {
          const SolveResult s = spectral_align(inst.A, inst.B, rho);
          const SolveResult r = transposition_descent(inst.A, inst.B, rho, s.pi_hat);
          o.local = r.pi_hat == inst.planted;
          if (!exact_run) o.overlap = overlap(r.pi_hat, inst.planted);
        }
        const WitnessScan w = scan_planted_transpositions(inst);
        if (!w.confirmed) throw NumericalError("run_phase_grid: witness failed recomputation");
        o.witness = w.negative > 0;
        o.tie = !o.witness && w.zero > 0;
        return o;
      });
      for (const TrialOutcome& o : outcomes) {
        p.exact_count += o.exact;
        p.local_count += o.local;
        p.witness_count += o.witness;
        p.tie_witness_count += o.tie;
        if (!std::isnan(o.overlap)) p.overlap_sum += o.overlap;
      }
      out.push_back(p);
    }
  }
  return out;
}

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string phase_csv_row(const PhasePoint& p) {
  std::string row = std::to_string(p.n) + "," + num(p.gamma) + "," + (p.skipped ? "NA" : num(p.rho)) + "," +
                    std::to_string(p.trials) + "," + num(p.exact_recovery_freq()) + "," +
                    num(p.local_recovery_freq()) + "," + num(p.converse_witness_freq()) + "," +
                    num(p.mean_overlap()) + "," + std::to_string(p.seed);
  return row;
}

void write_phase_csv(std::ostream& out, const std::vector<PhasePoint>& points) {
  out << kPhaseCsvHeader << '\n';
  for (const PhasePoint& p : points) out << phase_csv_row(p) << '\n';
}

TranspositionExperiment run_transposition_experiment(const ThresholdSpec& spec, std::size_t trials,
                                                     std::uint64_t seed, std::size_t threads) {
  TranspositionExperiment e = run_transposition_experiment_rho(spec.n, spec.rho, trials, seed, threads);
  e.spec = spec;
  e.predicted_mean = predicted_transposition_mean(spec);
  return e;
}

TranspositionExperiment run_transposition_experiment_rho(std::size_t n, double rho,
                                                         std::size_t trials, std::uint64_t seed,
                                                         std::size_t threads) {
  if (n < 3) throw DomainError("run_transposition_experiment: n must be at least 3");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("run_transposition_experiment: rho must lie in [0, 1)");
  if (trials == 0) throw DomainError("run_transposition_experiment: trials must be positive");

  struct Trial {
    std::uint64_t x = 0;
    std::size_t ties = 0;
    double c_dev = 0.0;
  };
  const double dn = static_cast<double>(n);
  const double norm = 2.0 * std::sqrt(dn * std::log(dn));
  const double two_de = 4.0 * (dn - 2.0);
  auto results = run_ordered<Trial>(trials, threads, [&](std::size_t t) {
    const Instance inst = sample_instance(n, rho, {seed, t}, PlantedMode::kIdentity, false);
    const WitnessScan w = scan_planted_transpositions(inst);
    Trial r;
    r.x = w.negative;
    r.ties = w.zero;
    const Eigen::MatrixXd V = all_transposition_variances(inst.A);
    for (Eigen::Index j = 1; j < V.cols(); ++j)
      for (Eigen::Index i = 0; i < j; ++i) r.c_dev = std::max(r.c_dev, std::abs(V(i, j) - two_de) / norm);
    return r;
  });

  TranspositionExperiment e;
  e.spec.n = n;
  e.spec.rho = rho;
  e.spec.a_n = kNaN;
  e.spec.t_n = kNaN;
  e.predicted_mean = kNaN;
  e.trials = trials;
  e.seed = seed;
  double sum = 0.0, sum2 = 0.0;
  for (const Trial& r : results) {
    e.x_values.push_back(r.x);
    e.c_deviation.push_back(r.c_dev);
    e.tie_count += r.ties;
    const double x = static_cast<double>(r.x);
    sum += x;
    sum2 += x * x;
  }
  const double m = static_cast<double>(trials);
  e.mean_x = sum / m;
  e.second_moment = sum2 / m;
  e.var_x = trials > 1 ? (sum2 - m * e.mean_x * e.mean_x) / (m - 1.0) : 0.0;
  e.pz_lower_bound = e.mean_x > 0.0 ? paley_zygmund_bound(e.mean_x, std::max(e.second_moment, e.mean_x * e.mean_x), 0.5) : 0.0;
  std::size_t half = 0, positive = 0;
  for (std::uint64_t x : e.x_values) {
    half += static_cast<double>(x) >= 0.5 * e.mean_x;
    positive += x > 0;
  }
  e.freq_x_ge_half_mean = ratio(half, trials);
  e.freq_x_positive = ratio(positive, trials);

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
  };
  const double med = median(e.c_deviation);
  std::vector<double> absdev;
  for (double d : e.c_deviation) absdev.push_back(std::abs(d - med));
  const double mad = median(absdev);
  for (double d : e.c_deviation) e.c_flag.push_back(d > med + 3.0 * mad);
  return e;
}

std::string to_json_line(const TranspositionExperiment& e) {
  nlohmann::ordered_json j;
  j["kind"] = "transposition_experiment";
  j["n"] = e.spec.n;
  j["rho"] = e.spec.rho;
  if (!std::isnan(e.spec.a_n)) {
    j["a_n"] = e.spec.a_n;
    j["t_n"] = e.spec.t_n;
    j["predicted_mean"] = e.predicted_mean;
  }
  j["trials"] = e.trials;
  j["seed"] = e.seed;
  j["mean_x"] = e.mean_x;
  j["var_x"] = e.var_x;
  j["var_over_mean_sq"] = e.mean_x > 0.0 ? nlohmann::ordered_json(e.var_x / (e.mean_x * e.mean_x))
                                         : nlohmann::ordered_json(nullptr);
  j["pz_lower_bound"] = e.pz_lower_bound;
  j["freq_x_ge_half_mean"] = e.freq_x_ge_half_mean;
  j["freq_x_positive"] = e.freq_x_positive;
  j["c_flagged"] = std::count(e.c_flag.begin(), e.c_flag.end(), true);
  j["tie_count"] = e.tie_count;
  j["x_values"] = e.x_values;
  return j.dump();
}

ConcentrationConfig default_concentration_config(std::uint64_t seed) {
  ConcentrationConfig c;
  c.seed = seed;
  c.analytic_grid = 100000;
  c.event_a = EventAConfig{};
  c.hanson_wright = {{10, MatrixKind::kZero, 0.05, 1000},
                     {50, MatrixKind::kIdentity, 0.05, 10000},
                     {20, MatrixKind::kPermutationDifference, 0.05, 10000},
                     {50, MatrixKind::kRandomSymmetric, 0.05, 10000}};
  for (std::uint64_t N : {16ull, 1000ull, 10000ull})
    for (double cv : {0.0, 0.5, 1.0}) c.max_tc.push_back({N, 1.0, cv, 20000});
  for (double a : {0.0, 0.25, 0.5, 1.0})
    for (double t : {2.0, 3.0}) c.bivariate.push_back({a, t, kDefaultBivariateDraws});
  c.bivariate.push_back({0.25, ThresholdSpec::make(1000, 10.0).t_n, kDefaultBivariateDraws});
  return c;
}

std::vector<BoundCheck> run_concentration_suite(const ConcentrationConfig& config) {
  std::vector<BoundCheck> out;
  std::uint64_t stream = 0;
  auto next_seed = [&] { return derive_trial_seed({config.seed, stream++}); };
  if (config.analytic_grid) {
    auto a = analytic_checks(*config.analytic_grid);
    out.insert(out.end(), a.begin(), a.end());
  }
  if (config.event_a) {
    const EventAConfig& e = *config.event_a;
    out.push_back(event_A_check(e.n, e.d_list, e.pairs_per_d, e.trials, next_seed()));
  }
  for (const auto& h : config.hanson_wright)
    out.push_back(hanson_wright_demo(h.dimension, h.kind, h.delta, h.trials, next_seed()));
  for (const auto& m : config.max_tc)
    out.push_back(max_tc_gaussian_check(m.N, m.v, m.c, m.trials, next_seed()));
  for (const auto& b : config.bivariate)
    out.push_back(bivariate_bound_ii_check(b.alpha, b.t, next_seed(), b.draws));
  return out;
}

}  // namespace wigner_align
