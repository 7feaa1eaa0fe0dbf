#include "wigner_align/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wigner_align/energy.hpp"
#include "wigner_align/errors.hpp"
#include "wigner_align/harness.hpp"
#include "wigner_align/model.hpp"
#include "wigner_align/solvers.hpp"
#include "wigner_align/theory.hpp"

namespace wigner_align {

namespace {

using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhaseOpts {
  std::vector<std::size_t> n;
  std::vector<double> gamma, rho;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultBruteForceCap;
  std::size_t local_max_n = 400;
  std::size_t threads = 0;
  std::string out;
};

struct TranspositionOpts {
  std::size_t n = 0;
  double a_n = 0.0;
  std::vector<double> rho;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

struct ConcentrationOpts {
  std::uint64_t seed = 1;
  std::size_t grid = 0;
  std::string out;
};

struct TheoryOpts {
  std::size_t grid = 100000;
  std::string out;
};

struct SolveOpts {
  std::string instance;
  std::string solver = "spectral+descent";
  std::size_t cap = kDefaultBruteForceCap;
  std::string out;
};

struct SampleOpts {
  std::size_t n = 0;
  std::vector<double> rho, gamma;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::string mode = "identity";
  bool no_noise = false;
  std::string out;
};

std::string flag_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

std::string scalar_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  }
  throw UsageError("config: unsupported value " + v.dump());
}

// Config entries become flags placed ahead of the command line, skipping any
// flag the command line already sets.
std::vector<std::string> config_tokens(const json& cfg, const std::vector<std::string>& args,
                                       const std::vector<std::string>& skip_keys) {
  std::vector<std::string> tokens;
  for (const auto& [key, value] : cfg.items()) {
    if (std::find(skip_keys.begin(), skip_keys.end(), key) != skip_keys.end()) continue;
    const std::string flag = "--" + flag_key(key);
    if (flag == "--config") throw UsageError("config: nested config files are not supported");
    if (flag_given(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back(flag);
      continue;
    }
    tokens.push_back(flag);
    if (value.is_array()) {
      std::string joined;
      for (const auto& e : value) joined += (joined.empty() ? "" : ",") + scalar_token(e);
      tokens.push_back(joined);
    } else {
      tokens.push_back(scalar_token(value));
    }
  }
  return tokens;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
}

std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a file argument");
      return args[k + 1];
    }
    if (args[k].rfind("--config=", 0) == 0) return args[k].substr(9);
  }
  return {};
}

// Writes to the named file, or to `fallback` when the name is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

double single_signal(const std::vector<double>& values, const char* name) {
  if (values.size() != 1) throw UsageError(std::string("--") + name + " takes exactly one value here");
  return values.front();
}

int run_phase(const PhaseOpts& o, std::ostream& out, std::ostream& err) {
  if (o.n.empty()) throw UsageError("phase: --n is required");
  if (o.gamma.empty() == o.rho.empty()) throw UsageError("phase: give exactly one of --gamma or --rho");
  if (o.trials == 0) throw UsageError("phase: --trials must be positive");
  PhaseConfig cfg;
  cfg.n_values = o.n;
  cfg.gammas = o.gamma;
  cfg.rhos = o.rho;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.brute_force_cap = o.cap;
  cfg.local_max_n = o.local_max_n;
  cfg.threads = o.threads;
  const auto points = run_phase_grid(cfg);
  for (const auto& p : points)
    if (p.skipped) err << "skipped cell n=" << p.n << " gamma=" << p.gamma << ": " << p.skip_reason << '\n';
  Sink sink(o.out, out);
  write_phase_csv(*sink, points);
  return kOk;
}

int run_transpositions(const TranspositionOpts& o, bool a_given, std::ostream& out) {
  if (o.trials == 0) throw UsageError("transpositions: --trials must be positive");
  TranspositionExperiment e;
  if (!o.rho.empty()) {
    if (a_given) throw UsageError("transpositions: give --a-n or --rho, not both");
    e = run_transposition_experiment_rho(o.n, single_signal(o.rho, "rho"), o.trials, o.seed, o.threads);
  } else {
    e = run_transposition_experiment(ThresholdSpec::make(o.n, o.a_n), o.trials, o.seed, o.threads);
  }
  Sink sink(o.out, out);
  *sink << to_json_line(e) << '\n';
  return kOk;
}

MatrixKind parse_kind(const std::string& s) {
  if (s == "zero") return MatrixKind::kZero;
  if (s == "identity") return MatrixKind::kIdentity;
  if (s == "permutation_difference") return MatrixKind::kPermutationDifference;
  if (s == "random_symmetric") return MatrixKind::kRandomSymmetric;
  throw UsageError("unknown matrix kind '" + s + "'");
}

ConcentrationConfig concentration_from_json(const json& cfg) {
  ConcentrationConfig c;
  try {
    if (cfg.contains("event_a")) {
      const json& e = cfg["event_a"];
      EventAConfig a;
      a.n = e.value("n", a.n);
      a.d_list = e.value("d_list", a.d_list);
      a.pairs_per_d = e.value("pairs_per_d", a.pairs_per_d);
      a.trials = e.value("trials", a.trials);
      c.event_a = a;
    }
    for (const json& h : cfg.value("hanson_wright", json::array())) {
      HansonWrightConfig x;
      x.dimension = h.at("dimension").get<std::size_t>();
      x.kind = parse_kind(h.value("kind", std::string("identity")));
      x.delta = h.value("delta", x.delta);
      x.trials = h.value("trials", x.trials);
      c.hanson_wright.push_back(x);
    }
    for (const json& m : cfg.value("max_tc", json::array())) {
      MaxTcConfig x;
      x.N = m.value("N", x.N);
      x.v = m.value("v", x.v);
      x.c = m.value("c", x.c);
      x.trials = m.value("trials", x.trials);
      c.max_tc.push_back(x);
    }
    for (const json& b : cfg.value("bivariate", json::array())) {
      BivariateConfig x;
      x.alpha = b.value("alpha", x.alpha);
      x.t = b.value("t", x.t);
      x.draws = b.value("draws", x.draws);
      c.bivariate.push_back(x);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("concentration config: ") + e.what());
  }
  return c;
}

int emit_checks(const std::vector<BoundCheck>& checks, const std::string& path, std::ostream& out) {
  Sink sink(path, out);
  bool ok = true;
  for (const auto& c : checks) {
    *sink << to_json_line(c) << '\n';
    ok = ok && c.pass;
  }
  return ok ? kOk : kCheckFailed;
}

int run_solve(const SolveOpts& o, std::ostream& out) {
  if (o.instance.empty()) throw UsageError("solve: --instance is required");
  const Instance inst = load_instance(o.instance);
  SolveResult r;
  if (o.solver == "brute") {
    r = brute_force_map(inst.A, inst.B, inst.rho, o.cap);
  } else if (o.solver == "spectral") {
    r = spectral_align(inst.A, inst.B, inst.rho);
  } else if (o.solver == "descent") {
    r = transposition_descent(inst.A, inst.B, inst.rho, Permutation::identity(inst.n()));
  } else if (o.solver == "spectral+descent") {
    r = transposition_descent(inst.A, inst.B, inst.rho, spectral_align(inst.A, inst.B, inst.rho).pi_hat);
  } else {
    throw UsageError("solve: unknown solver '" + o.solver + "'");
  }
  nlohmann::ordered_json j;
  j["solver"] = o.solver;
  j["n"] = inst.n();
  j["rho"] = inst.rho;
  j["pi_hat"] = r.pi_hat.images();
  j["loss"] = r.objective;
  j["planted_loss"] = loss(inst.planted, inst.A, inst.B, inst.rho);
  j["overlap"] = overlap(r.pi_hat, inst.planted);
  j["exact"] = r.pi_hat == inst.planted;
  j["ties"] = r.ties;
  j["iterations"] = r.iterations;
  Sink sink(o.out, out);
  *sink << j.dump() << '\n';
  return kOk;
}

int run_sample(const SampleOpts& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("sample: --out is required");
  if (o.rho.empty() == o.gamma.empty()) throw UsageError("sample: give exactly one of --rho or --gamma");
  const double rho = o.rho.empty() ? rho_from_gamma(o.n, single_signal(o.gamma, "gamma")) : single_signal(o.rho, "rho");
  PlantedMode mode;
  if (o.mode == "identity") mode = PlantedMode::kIdentity;
  else if (o.mode == "uniform") mode = PlantedMode::kUniform;
  else throw UsageError("sample: --mode must be identity or uniform");
  const Instance inst = sample_instance(o.n, rho, {o.seed, o.trial}, mode, !o.no_noise);
  save_instance(o.out, inst);
  out << "wrote n=" << inst.n() << " rho=" << inst.rho << " to " << o.out << '\n';
  return kOk;
}

}  // namespace

int cli_main(int argc, char** argv) { return cli_main(argc, argv, std::cout, std::cerr); }

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlated Gaussian Wigner alignment experiments", "wigner_align"};
  app.require_subcommand(1);
  app.fallthrough(false);

  PhaseOpts phase;
  auto* sp = app.add_subcommand("phase", "Recovery phase grid; writes CSV");
  sp->add_option("--n", phase.n, "Matrix orders")->delimiter(',');
  sp->add_option("--gamma", phase.gamma, "Signal levels gamma = n rho^2 / log n")->delimiter(',');
  sp->add_option("--rho", phase.rho, "Raw signal levels")->delimiter(',');
  sp->add_option("--trials", phase.trials, "Trials per cell");
  sp->add_option("--seed", phase.seed, "Master seed");
  sp->add_option("--cap", phase.cap, "Largest n for exhaustive MAP");
  sp->add_option("--local-max-n", phase.local_max_n, "Largest n for spectral + descent");
  sp->add_option("--threads", phase.threads, "Worker threads (0: default)");
  sp->add_option("--out", phase.out, "CSV path (default stdout)");

  TranspositionOpts tr;
  auto* st = app.add_subcommand("transpositions", "Transposition-count experiment; writes a JSON line");
  st->add_option("--n", tr.n, "Matrix order")->required();
  auto* a_opt = st->add_option("--a-n", tr.a_n, "Threshold slack a_n");
  st->add_option("--rho", tr.rho, "Explicit rho instead of a_n");
  st->add_option("--trials", tr.trials, "Trials");
  st->add_option("--seed", tr.seed, "Master seed");
  st->add_option("--threads", tr.threads, "Worker threads (0: default)");
  st->add_option("--out", tr.out, "JSON-lines path (default stdout)");

  ConcentrationOpts conc;
  auto* sc = app.add_subcommand("concentration", "Concentration and probability-bound suite");
  sc->add_option("--seed", conc.seed, "Master seed");
  auto* grid_opt = sc->add_option("--grid", conc.grid, "Grid size for the analytic checks");
  sc->add_option("--out", conc.out, "JSON-lines path (default stdout)");

  TheoryOpts theory;
  auto* sth = app.add_subcommand("theory-check", "Deterministic analytic checks");
  sth->add_option("--grid", theory.grid, "Grid size on [0, 1]")->check(CLI::Range(2, 100000000));
  sth->add_option("--out", theory.out, "JSON-lines path (default stdout)");

  SolveOpts solve;
  auto* sso = app.add_subcommand("solve", "Align a stored instance");
  sso->add_option("--instance", solve.instance, "Instance file written by `sample`");
  sso->add_option("--solver", solve.solver, "brute | descent | spectral | spectral+descent");
  sso->add_option("--cap", solve.cap, "Largest n for brute");
  sso->add_option("--out", solve.out, "JSON path (default stdout)");

  SampleOpts sample;
  auto* ssa = app.add_subcommand("sample", "Sample an instance to a binary file");
  ssa->add_option("--n", sample.n, "Matrix order")->required();
  ssa->add_option("--rho", sample.rho, "Correlation");
  ssa->add_option("--gamma", sample.gamma, "Signal as gamma");
  ssa->add_option("--seed", sample.seed, "Master seed");
  ssa->add_option("--trial", sample.trial, "Trial index");
  ssa->add_option("--mode", sample.mode, "identity | uniform");
  ssa->add_flag("--no-noise", sample.no_noise, "Do not store H");
  ssa->add_option("--out", sample.out, "Output path");

  for (auto* s : {sp, st, sc, sth, sso, ssa}) s->add_option("--config", "JSON config file");

  if (argc < 2) {
    err << app.help();
    return kUsage;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  ConcentrationConfig suite;
  bool suite_from_file = false;
  try {
    const std::string config_path = find_config(args);
    if (!config_path.empty()) {
      const json cfg = load_json(config_path);
      std::vector<std::string> skip;
      if (args.front() == "concentration") {
        skip = {"event_a", "hanson_wright", "max_tc", "bivariate"};
        suite = concentration_from_json(cfg);
        suite_from_file = true;
      }
      const auto tokens = config_tokens(cfg, args, skip);
      args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sp->parsed()) return run_phase(phase, out, err);
    if (st->parsed()) return run_transpositions(tr, a_opt->count() > 0, out);
    if (sc->parsed()) {
      if (!suite_from_file) suite = default_concentration_config(conc.seed);
      suite.seed = conc.seed;
      if (grid_opt->count() > 0) suite.analytic_grid = conc.grid;
      return emit_checks(run_concentration_suite(suite), conc.out, out);
    }
    if (sth->parsed()) return emit_checks(analytic_checks(theory.grid), theory.out, out);
    if (sso->parsed()) return run_solve(solve, out);
    if (ssa->parsed()) return run_sample(sample, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  err << app.help();
  return kUsage;
}

}  // namespace wigner_align
