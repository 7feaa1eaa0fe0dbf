#pragma once

// Correlated Gaussian Wigner model
//
//   B = rho * Pi*^T A Pi* + sqrt(1 - rho^2) * H,
//
// with A and H independent symmetric matrices whose strict upper triangles
// are i.i.d. N(0, 1) and whose diagonals are zero. Equivalently the pairs
// (A[i][j], B[pi*(i)][pi*(j)]), i < j, are i.i.d. standard bivariate normal
// with correlation rho.
//
// Reproducibility: every random draw comes from std::mt19937_64 (its output
// sequence is fixed by the C++ standard) seeded with derive_trial_seed().
// Draw order within one instance: the planted permutation (uniform mode
// only), then the upper triangle of A row by row, then that of H. Normals
// use the Marsaglia polar method on 53-bit uniforms in (-1, 1); both values
// of an accepted pair are consumed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "wigner_align/permutation.hpp"

namespace wigner_align {

// Symmetric real matrix with zero diagonal. Indices of operator() are
// 0-based; edge() takes a 1-based EdgeIndex. Storage is column-major, and
// since the matrix is symmetric column i doubles as row i.
class WignerMatrix {
 public:
  WignerMatrix() = default;
  static WignerMatrix zeros(std::size_t n);
  // Validates symmetry, zero diagonal and finiteness.
  static WignerMatrix from_dense(const Eigen::MatrixXd& m);

  std::size_t n() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  double edge(const EdgeIndex& e) const { return (*this)(e.i - 1, e.j - 1); }
  // Sets entries (i, j) and (j, i); i != j.
  void set(std::size_t i, std::size_t j, double value);

  std::span<const double> row(std::size_t i) const {
    return {m_.data() + i * n(), n()};
  }
  const Eigen::MatrixXd& dense() const { return m_; }

  // M' with M'[sigma(i)][sigma(j)] = M[i][j], i.e. Sigma^T M Sigma for the
  // matrix representation Sigma[i][j] = 1{j = sigma(i)}.
  WignerMatrix conjugated(const Permutation& sigma) const;
  // M'[i][j] = M[sigma(i)][sigma(j)].
  WignerMatrix pulled_back(const Permutation& sigma) const;

  friend bool operator==(const WignerMatrix& a, const WignerMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  explicit WignerMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

// splitmix64 finalizer applied to master_seed XOR (trial_index * golden
// ratio constant). Both steps are bijections of 64-bit words, so distinct
// trial indices under one master seed never collide.
std::uint64_t derive_trial_seed(const SeedSpec& spec);

enum class PlantedMode { kIdentity, kUniform };

struct Instance {
  WignerMatrix A;
  WignerMatrix B;
  Permutation planted;
  double rho = 0.0;
  SeedSpec seed;
  std::uint64_t derived_seed = 0;
  // The H used to build B, kept when sampling with retain_noise.
  std::optional<WignerMatrix> H;

  std::size_t n() const { return A.n(); }
};

// Pinned normal/uniform source used by the sampler.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t uniform_below(std::uint64_t bound);
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Zero diagonal, upper triangle drawn row-major from src, N(0, 1) entries.
WignerMatrix sample_wigner(std::size_t n, GaussianSource& src);

Instance sample_instance(std::size_t n, double rho, const SeedSpec& seed,
                         PlantedMode planted_mode = PlantedMode::kIdentity,
                         bool retain_noise = true);

// Builds B from A, H, planted and rho per the model equation; exposed so
// tests and replays can assemble instances from stored parts.
WignerMatrix couple(const WignerMatrix& A, const WignerMatrix& H, const Permutation& planted,
                    double rho);

// Binary container, little-endian:
//   "WGAL" | version u8 = 1 | flags u8 (bit 0: H present)
//   n u64 | rho f64 | master_seed u64 | trial_index u64 | derived_seed u64
//   planted: n x u32, 1-based images
//   A, B, [H]: upper triangles, row-major over i < j, f64 each
inline constexpr char kInstanceMagic[4] = {'W', 'G', 'A', 'L'};
inline constexpr std::uint8_t kInstanceFormatVersion = 1;

void write_instance(std::ostream& out, const Instance& inst);
Instance read_instance(std::istream& in);
void save_instance(const std::string& path, const Instance& inst);
Instance load_instance(const std::string& path);

}  // namespace wigner_align
