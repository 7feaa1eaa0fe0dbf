#include "wigner_align/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <vector>

#include "wigner_align/errors.hpp"

namespace wigner_align {

WignerMatrix WignerMatrix::zeros(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return WignerMatrix(Eigen::MatrixXd::Zero(k, k));
}

WignerMatrix WignerMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("Wigner matrix must be square");
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m(j, j) != 0.0) throw DomainError("Wigner matrix diagonal must be zero");
    for (Eigen::Index i = 0; i < j; ++i) {
      if (!std::isfinite(m(i, j))) throw DomainError("Wigner matrix entries must be finite");
      if (m(i, j) != m(j, i)) throw DomainError("Wigner matrix must be symmetric");
    }
  }
  return WignerMatrix(m);
}

void WignerMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i == j) throw DomainError("Wigner matrix diagonal is fixed at zero");
  if (i >= n() || j >= n()) throw DimensionError("index out of range");
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  m_(a, b) = value;
  m_(b, a) = value;
}

WignerMatrix WignerMatrix::conjugated(const Permutation& sigma) const {
  if (sigma.n() != n()) throw DimensionError("conjugated: permutation size differs from matrix order");
  const auto t = sigma.table();
  Eigen::MatrixXd out(m_.rows(), m_.cols());
  for (std::size_t j = 0; j < n(); ++j)
    for (std::size_t i = 0; i < n(); ++i)
      out(t[i], t[j]) = m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return WignerMatrix(std::move(out));
}

WignerMatrix WignerMatrix::pulled_back(const Permutation& sigma) const {
  if (sigma.n() != n()) throw DimensionError("pulled_back: permutation size differs from matrix order");
  const auto t = sigma.table();
  Eigen::MatrixXd out(m_.rows(), m_.cols());
  for (std::size_t j = 0; j < n(); ++j)
    for (std::size_t i = 0; i < n(); ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m_(t[i], t[j]);
  return WignerMatrix(std::move(out));
}

std::uint64_t derive_trial_seed(const SeedSpec& spec) {
  std::uint64_t z = spec.master_seed ^ (spec.trial_index * 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double GaussianSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t GaussianSource::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_below: bound must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

double GaussianSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

WignerMatrix sample_wigner(std::size_t n, GaussianSource& src) {
  WignerMatrix m = WignerMatrix::zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, src.normal());
  return m;
}

WignerMatrix couple(const WignerMatrix& A, const WignerMatrix& H, const Permutation& planted,
                    double rho) {
  if (A.n() != H.n() || A.n() != planted.n()) throw DimensionError("couple: sizes differ");
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
  const double noise = std::sqrt(1.0 - rho * rho);
  Eigen::MatrixXd b = rho * A.conjugated(planted).dense() + noise * H.dense();
  b.diagonal().setZero();
  return WignerMatrix::from_dense(b);
}

Instance sample_instance(std::size_t n, double rho, const SeedSpec& seed, PlantedMode planted_mode,
                         bool retain_noise) {
  if (n < 2) throw DomainError("sample_instance: n must be at least 2");
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("sample_instance: rho must lie in [0, 1]");

  Instance inst;
  inst.rho = rho;
  inst.seed = seed;
  inst.derived_seed = derive_trial_seed(seed);
  GaussianSource src(inst.derived_seed);

  if (planted_mode == PlantedMode::kUniform) {
    std::vector<std::uint32_t> t(n);
    std::iota(t.begin(), t.end(), 0u);
    for (std::size_t k = n; k > 1; --k) std::swap(t[k - 1], t[src.uniform_below(k)]);
    inst.planted = Permutation::from_table(std::move(t));
  } else {
    inst.planted = Permutation::identity(n);
  }

  inst.A = sample_wigner(n, src);
  WignerMatrix H = sample_wigner(n, src);
  inst.B = couple(inst.A, H, inst.planted, rho);
  if (retain_noise) inst.H = std::move(H);
  return inst;
}

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host assumed");
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) throw FormatError("instance file truncated");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

void put_triangle(std::ostream& out, const WignerMatrix& m) {
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = i + 1; j < m.n(); ++j) put<double>(out, m(i, j));
}

WignerMatrix get_triangle(std::istream& in, std::size_t n) {
  WignerMatrix m = WignerMatrix::zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = get<double>(in);
      if (!std::isfinite(v)) throw FormatError("non-finite matrix entry");
      m.set(i, j, v);
    }
  return m;
}

}  // namespace

void write_instance(std::ostream& out, const Instance& inst) {
  out.write(kInstanceMagic, 4);
  put<std::uint8_t>(out, kInstanceFormatVersion);
  put<std::uint8_t>(out, inst.H ? 1 : 0);
  put<std::uint64_t>(out, inst.n());
  put<double>(out, inst.rho);
  put<std::uint64_t>(out, inst.seed.master_seed);
  put<std::uint64_t>(out, inst.seed.trial_index);
  put<std::uint64_t>(out, inst.derived_seed);
  for (auto v : inst.planted.table()) put<std::uint32_t>(out, v + 1);
  put_triangle(out, inst.A);
  put_triangle(out, inst.B);
  if (inst.H) put_triangle(out, *inst.H);
  if (!out) throw FormatError("failed writing instance");
}

Instance read_instance(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kInstanceMagic, 4) != 0)
    throw FormatError("not a wigner-align instance (bad magic)");
  const auto version = get<std::uint8_t>(in);
  if (version != kInstanceFormatVersion)
    throw FormatError("unsupported instance format version " + std::to_string(version));
  const auto flags = get<std::uint8_t>(in);
  Instance inst;
  const auto n = get<std::uint64_t>(in);
  if (n < 2 || n > (1u << 20)) throw FormatError("implausible instance size");
  inst.rho = get<double>(in);
  if (!(inst.rho >= 0.0 && inst.rho <= 1.0)) throw FormatError("rho outside [0, 1]");
  inst.seed.master_seed = get<std::uint64_t>(in);
  inst.seed.trial_index = get<std::uint64_t>(in);
  inst.derived_seed = get<std::uint64_t>(in);
  std::vector<std::size_t> images(n);
  for (auto& v : images) v = get<std::uint32_t>(in);
  try {
    inst.planted = Permutation::from_images(images);
  } catch (const DomainError& e) {
    throw FormatError(std::string("planted permutation: ") + e.what());
  }
  inst.A = get_triangle(in, n);
  inst.B = get_triangle(in, n);
  if (flags & 1u) inst.H = get_triangle(in, n);
  return inst;
}

void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_instance(out, inst);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_instance(in);
}

}  // namespace wigner_align
