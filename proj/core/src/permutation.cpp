#include "wigner_align/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "wigner_align/errors.hpp"

namespace wigner_align {

namespace {

std::size_t count_displaced(const std::vector<std::uint32_t>& t) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < t.size(); ++i) d += (t[i] != i);
  return d;
}

void require_same_size(const Permutation& a, const Permutation& b, const char* op) {
  if (a.n() != b.n()) {
    std::ostringstream msg;
    msg << op << ": permutation sizes differ (" << a.n() << " vs " << b.n() << ")";
    throw DimensionError(msg.str());
  }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("integer overflow in exact count");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw DomainError("integer overflow in exact count");
  return out;
}

}  // namespace

Permutation::Permutation(std::vector<std::uint32_t> table)
    : table_(std::move(table)), displaced_(count_displaced(table_)) {}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> t(n);
  std::iota(t.begin(), t.end(), 0u);
  return Permutation(std::move(t));
}

Permutation Permutation::from_table(std::vector<std::uint32_t> zero_based) {
  const std::size_t n = zero_based.size();
  std::vector<char> seen(n, 0);
  for (auto v : zero_based) {
    if (v >= n || seen[v]) throw DomainError("permutation table is not a bijection of [n]");
    seen[v] = 1;
  }
  return Permutation(std::move(zero_based));
}

Permutation Permutation::from_images(const std::vector<std::size_t>& one_based) {
  std::vector<std::uint32_t> t(one_based.size());
  for (std::size_t i = 0; i < one_based.size(); ++i) {
    if (one_based[i] == 0 || one_based[i] > one_based.size())
      throw DomainError("permutation image out of range 1..n");
    t[i] = static_cast<std::uint32_t>(one_based[i] - 1);
  }
  return from_table(std::move(t));
}

Permutation Permutation::transposition(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j || i == 0 || j == 0 || i > n || j > n)
    throw DomainError("transposition endpoints must be distinct vertices in 1..n");
  std::vector<std::uint32_t> t(n);
  std::iota(t.begin(), t.end(), 0u);
  std::swap(t[i - 1], t[j - 1]);
  return Permutation(std::move(t));
}

Permutation Permutation::from_cycles(
    std::size_t n, std::initializer_list<std::initializer_list<std::size_t>> cycles) {
  std::vector<std::uint32_t> t(n);
  std::iota(t.begin(), t.end(), 0u);
  std::vector<char> used(n, 0);
  for (const auto& cycle : cycles) {
    std::vector<std::size_t> c(cycle);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const std::size_t from = c[k];
      const std::size_t to = c[(k + 1) % c.size()];
      if (from == 0 || from > n || to == 0 || to > n || used[from - 1])
        throw DomainError("cycles must be disjoint and within 1..n");
      used[from - 1] = 1;
      t[from - 1] = static_cast<std::uint32_t>(to - 1);
    }
  }
  return from_table(std::move(t));
}

std::size_t Permutation::operator()(std::size_t i) const {
  if (i == 0 || i > n()) throw DomainError("vertex out of range 1..n");
  return static_cast<std::size_t>(table_[i - 1]) + 1;
}

std::vector<std::size_t> Permutation::images() const {
  std::vector<std::size_t> out(n());
  for (std::size_t i = 0; i < n(); ++i) out[i] = table_[i] + 1;
  return out;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < n(); ++i) os << (i ? " " : "") << table_[i] + 1;
  os << ']';
  return os.str();
}

Permutation compose(const Permutation& a, const Permutation& b) {
  require_same_size(a, b, "compose");
  const auto ta = a.table();
  const auto tb = b.table();
  std::vector<std::uint32_t> out(a.n());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ta[tb[i]];
  return Permutation::from_table(std::move(out));
}

Permutation inverse(const Permutation& a) {
  const auto t = a.table();
  std::vector<std::uint32_t> out(a.n());
  for (std::size_t i = 0; i < out.size(); ++i) out[t[i]] = static_cast<std::uint32_t>(i);
  return Permutation::from_table(std::move(out));
}

double overlap(const Permutation& a, const Permutation& b) {
  require_same_size(a, b, "overlap");
  if (a.n() == 0) throw DomainError("overlap of empty permutations");
  const auto ta = a.table();
  const auto tb = b.table();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < ta.size(); ++i) agree += (ta[i] == tb[i]);
  return static_cast<double>(agree) / static_cast<double>(a.n());
}

EdgeIndex EdgeIndex::make(std::size_t a, std::size_t b) {
  if (a == b || a == 0 || b == 0) throw DomainError("edge endpoints must be distinct 1-based vertices");
  return a < b ? EdgeIndex{a, b} : EdgeIndex{b, a};
}

std::size_t edge_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

EdgeIndex edge_permutation_apply(const Permutation& sigma, const EdgeIndex& e) {
  if (e.i == 0 || e.j == 0 || e.i > sigma.n() || e.j > sigma.n() || e.i == e.j)
    throw DomainError("edge endpoint out of range");
  return EdgeIndex::make(sigma(e.i), sigma(e.j));
}

EdgeActionSummary edge_action_summary(const Permutation& sigma) {
  const auto t = sigma.table();
  const std::size_t n = sigma.n();
  EdgeActionSummary s;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool fixed = (t[i] == i && t[j] == j) || (t[i] == j && t[j] == i);
      if (fixed) ++s.f_edge; else ++s.d_edge;
    }
  }
  return s;
}

std::pair<std::size_t, std::size_t> common_deranged_edges(const Permutation& a,
                                                          const Permutation& b) {
  require_same_size(a, b, "common_deranged_edges");
  const auto ta = a.table();
  const auto tb = b.table();
  const std::size_t n = a.n();
  auto moves = [](std::span<const std::uint32_t> t, std::size_t i, std::size_t j) {
    return !((t[i] == i && t[j] == j) || (t[i] == j && t[j] == i));
  };
  std::size_t both = 0;
  std::size_t both_agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!moves(ta, i, j) || !moves(tb, i, j)) continue;
      ++both;
      // a^{-1} o b fixes e  <=>  b^E(e) = a^E(e)
      const bool same = (ta[i] == tb[i] && ta[j] == tb[j]) || (ta[i] == tb[j] && ta[j] == tb[i]);
      both_agree += same;
    }
  }
  return {both, both_agree};
}

EdgeDisplacementBounds edge_displacement_bounds(std::size_t n, std::size_t d) {
  if (d > n) throw DomainError("d exceeds n");
  const double dn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  return {dd * (dn - dd / 2.0 - 1.0), dd * (dn - (dd + 1.0) / 2.0)};
}

EdgeDisplacementBounds printed_edge_displacement_bounds(std::size_t n, std::size_t d) {
  if (d > n) throw DomainError("d exceeds n");
  const double dn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  return {dd * (dn - dd / 2.0), dd * (dn - (dd - 1.0) / 2.0)};
}

std::uint64_t derangement_number(std::size_t m) {
  if (m == 0) return 1;
  if (m == 1) return 0;
  std::uint64_t prev2 = 1;  // D_0
  std::uint64_t prev1 = 0;  // D_1
  for (std::size_t k = 2; k <= m; ++k) {
    const std::uint64_t cur = checked_mul(k - 1, checked_add(prev1, prev2));
    prev2 = prev1;
    prev1 = cur;
  }
  return prev1;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i after each step.
    const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    r = checked_mul(r / g, (n - k + i) / (i / g));
  }
  return r;
}

std::uint64_t count_with_displacement(std::size_t n, std::size_t d) {
  if (d > n) return 0;
  return checked_mul(binomial(n, d), derangement_number(d));
}

namespace {

// Depth-first generation in lexicographic order of images. A branch is
// entered only if it can still be completed with exactly `fixed_needed`
// fixed points among the remaining positions.
class DisplacementEnumerator {
 public:
  DisplacementEnumerator(std::size_t n, std::size_t fixed_needed,
                         const std::function<void(const Permutation&)>& visit)
      : n_(n), fixed_needed_(fixed_needed), visit_(visit), table_(n), used_(n, 0) {}

  void run() { descend(0, 0); }

 private:
  // Can positions [pos, n) be filled with the unused values using exactly
  // `k` fixed points? Of the remaining positions, `self` still have their
  // own value available. Any bijection that avoids fixed points exists
  // unless exactly one position is left to derange and its value is its own.
  bool completable(std::size_t pos, std::size_t k) const {
    const std::size_t remaining = n_ - pos;
    std::size_t self = 0;
    for (std::size_t p = pos; p < n_; ++p) self += !used_[p];
    if (k > self) return false;
    const std::size_t moved = remaining - k;
    if (moved == 1) return self == k;
    return true;
  }

  void descend(std::size_t pos, std::size_t fixed_so_far) {
    if (pos == n_) {
      visit_(Permutation::from_table(table_));
      return;
    }
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (used_[v]) continue;
      const std::size_t f = fixed_so_far + (v == pos);
      if (f > fixed_needed_) continue;
      used_[v] = 1;
      table_[pos] = v;
      if (completable(pos + 1, fixed_needed_ - f)) descend(pos + 1, f);
      used_[v] = 0;
    }
  }

  std::size_t n_;
  std::size_t fixed_needed_;
  const std::function<void(const Permutation&)>& visit_;
  std::vector<std::uint32_t> table_;
  std::vector<char> used_;
};

}  // namespace

void for_each_with_displacement(std::size_t n, std::size_t d,
                                const std::function<void(const Permutation&)>& visit,
                                std::uint64_t budget) {
  if (d > n) throw DomainError("displacement d exceeds n");
  if (d == 1) throw DomainError("S_{n,1} is empty: no permutation moves exactly one point");
  std::uint64_t count = 0;
  try {
    count = count_with_displacement(n, d);
  } catch (const DomainError&) {
    throw EnumerationTooLarge("#S_{n,d} overflows 64 bits");
  }
  if (count > budget) {
    throw EnumerationTooLarge("enumerating " + std::to_string(count) +
                              " permutations exceeds the budget of " + std::to_string(budget));
  }
  DisplacementEnumerator(n, n - d, visit).run();
}

std::vector<Permutation> enumerate_with_displacement(std::size_t n, std::size_t d,
                                                     std::uint64_t budget) {
  std::vector<Permutation> out;
  for_each_with_displacement(n, d, [&](const Permutation& p) { out.push_back(p); }, budget);
  return out;
}

std::vector<Permutation> enumerate_transpositions(std::size_t n) {
  if (n < 2) throw DomainError("transpositions need n >= 2");
  std::vector<Permutation> out;
  out.reserve(edge_count(n));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) out.push_back(Permutation::transposition(n, i, j));
  return out;
}

Permutation random_with_displacement(
    std::size_t n, std::size_t d, const std::function<std::uint64_t(std::uint64_t)>& uniform_below) {
  if (d > n) throw DomainError("displacement d exceeds n");
  if (d == 1) throw DomainError("S_{n,1} is empty");
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  // First d entries of a partial shuffle form a uniform d-subset.
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t r = k + uniform_below(n - k);
    std::swap(pool[k], pool[r]);
  }
  std::vector<std::uint32_t> support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(d));
  std::sort(support.begin(), support.end());

  std::vector<std::uint32_t> slots(d);
  for (;;) {
    std::iota(slots.begin(), slots.end(), 0u);
    for (std::size_t k = d; k > 1; --k) {
      const std::size_t r = uniform_below(k);
      std::swap(slots[k - 1], slots[r]);
    }
    bool deranged = true;
    for (std::size_t k = 0; k < d; ++k) deranged &= (slots[k] != k);
    if (deranged) break;
  }
  std::vector<std::uint32_t> t(n);
  std::iota(t.begin(), t.end(), 0u);
  for (std::size_t k = 0; k < d; ++k) t[support[k]] = support[slots[k]];
  return Permutation::from_table(std::move(t));
}

}  // namespace wigner_align
