#pragma once

// Permutations of [n] = {1..n} and their action on unordered vertex pairs.
//
// Every public interface is 1-based: Permutation::operator()(i) takes and
// returns vertices in 1..n, EdgeIndex stores 1-based endpoints. Storage is
// 0-based; table() exposes it for the inner loops of the energy kernels.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wigner_align {

class Permutation {
 public:
  // Identity on [n]; n may be zero only for default construction.
  Permutation() = default;
  static Permutation identity(std::size_t n);

  // From 1-based images: image[i-1] = sigma(i). Throws DomainError unless
  // the values are exactly a rearrangement of 1..n.
  static Permutation from_images(const std::vector<std::size_t>& one_based);
  // From 0-based images (image[i] = sigma(i+1) - 1).
  static Permutation from_table(std::vector<std::uint32_t> zero_based);

  // The transposition (i j) of [n], 1-based, i != j.
  static Permutation transposition(std::size_t n, std::size_t i, std::size_t j);
  // Product of disjoint cycles written 1-based, e.g. {{1,2},{3,4}}.
  static Permutation from_cycles(
      std::size_t n, std::initializer_list<std::initializer_list<std::size_t>> cycles);

  std::size_t n() const { return table_.size(); }
  // sigma(i), 1-based.
  std::size_t operator()(std::size_t i) const;
  // Number of unfixed points d_sigma and fixed points f_sigma.
  std::size_t displaced() const { return displaced_; }
  std::size_t fixed() const { return n() - displaced_; }
  bool is_identity() const { return displaced_ == 0; }

  std::span<const std::uint32_t> table() const { return table_; }
  std::vector<std::size_t> images() const;
  // "[2 1 3]" style, 1-based.
  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.table_ == b.table_;
  }
  // Lexicographic on images.
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
    return a.table_ <=> b.table_;
  }

 private:
  explicit Permutation(std::vector<std::uint32_t> table);

  std::vector<std::uint32_t> table_;
  std::size_t displaced_ = 0;
};

// (a o b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& a);
// Fraction of points where a and b agree, (1/n) f_{a^{-1} o b}.
double overlap(const Permutation& a, const Permutation& b);

// Unordered vertex pair {i, j}, stored with i < j, 1-based.
struct EdgeIndex {
  std::size_t i = 1;
  std::size_t j = 2;

  // Canonicalizes the order; throws DomainError if a == b or either is 0.
  static EdgeIndex make(std::size_t a, std::size_t b);
  friend bool operator==(const EdgeIndex&, const EdgeIndex&) = default;
  friend auto operator<=>(const EdgeIndex&, const EdgeIndex&) = default;
};

// N = n(n-1)/2.
std::size_t edge_count(std::size_t n);

// sigma^E({i,j}) = {sigma(i), sigma(j)}.
EdgeIndex edge_permutation_apply(const Permutation& sigma, const EdgeIndex& e);

struct EdgeActionSummary {
  std::size_t d_edge = 0;  // edges moved by sigma^E
  std::size_t f_edge = 0;  // edges fixed by sigma^E
};

EdgeActionSummary edge_action_summary(const Permutation& sigma);

// Counts over the edge set:
//   first  = #(D^E_a n D^E_b)
//   second = #(D^E_a n D^E_b n F^E_{a^{-1} o b})
std::pair<std::size_t, std::size_t> common_deranged_edges(const Permutation& a,
                                                          const Permutation& b);

// Bounds on d^E_sigma given d = d_sigma, from counting fixed edges:
// C(n-d,2) <= f^E <= C(n-d,2) + floor(d/2) transposed pairs.
struct EdgeDisplacementBounds {
  double lower = 0.0;  // d (n - d/2 - 1)
  double upper = 0.0;  // d (n - (d+1)/2)
};
EdgeDisplacementBounds edge_displacement_bounds(std::size_t n, std::size_t d);

// The looser textbook form,
// d (n - d/2) <= d^E <= d (n - (d-1)/2). Its lower edge exceeds the true
// maximum of d^E by d/2, so it is kept only for diagnostics.
EdgeDisplacementBounds printed_edge_displacement_bounds(std::size_t n, std::size_t d);

// Exact combinatorics; 64-bit overflow throws DomainError.
std::uint64_t derangement_number(std::size_t m);
std::uint64_t binomial(std::size_t n, std::size_t k);
// #S_{n,d} = C(n, d) D_d.
std::uint64_t count_with_displacement(std::size_t n, std::size_t d);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Visits every sigma in S_n with exactly d unfixed points, in lexicographic
// order of images. Throws EnumerationTooLarge when #S_{n,d} > budget and
// DomainError for d > n or d == 1.
void for_each_with_displacement(std::size_t n, std::size_t d,
                                const std::function<void(const Permutation&)>& visit,
                                std::uint64_t budget = kDefaultEnumerationBudget);
std::vector<Permutation> enumerate_with_displacement(
    std::size_t n, std::size_t d, std::uint64_t budget = kDefaultEnumerationBudget);

// All transpositions (i j), i < j, lexicographic on (i, j).
std::vector<Permutation> enumerate_transpositions(std::size_t n);

// Uniformly random sigma with exactly d unfixed points, drawn with the
// caller's uniform source (uniform_below(k) returns an integer in [0, k)).
Permutation random_with_displacement(std::size_t n, std::size_t d,
                                     const std::function<std::uint64_t(std::uint64_t)>& uniform_below);

}  // namespace wigner_align
