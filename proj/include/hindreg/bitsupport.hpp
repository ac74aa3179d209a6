#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hindreg/errors.hpp"

namespace hindreg {

using Natural = std::uint64_t;

inline Natural checked_add(Natural a, Natural b) {
  Natural out{};
  if (__builtin_add_overflow(a, b, &out)) {
    std::ostringstream os;
    os << "overflow adding " << a << " + " << b;
    throw OverflowError(os.str());
  }
  return out;
}

inline Natural pow2(unsigned e) {
  if (e >= 64) throw OverflowError("2^" + std::to_string(e) + " does not fit in 64 bits");
  return Natural{1} << e;
}

// Exponents of the binary expansion of n, ascending.
inline std::vector<unsigned> support(Natural n) {
  std::vector<unsigned> out;
  while (n != 0) {
    out.push_back(static_cast<unsigned>(std::countr_zero(n)));
    n &= n - 1;
  }
  return out;
}

// Least exponent of the binary expansion; 0 for n = 0.
constexpr unsigned lambda(Natural n) noexcept {
  return n == 0 ? 0u : static_cast<unsigned>(std::countr_zero(n));
}

// Greatest exponent of the binary expansion; 0 for n = 0.
constexpr unsigned mu(Natural n) noexcept {
  return n == 0 ? 0u : static_cast<unsigned>(std::bit_width(n) - 1);
}

constexpr unsigned lambda_minus(Natural n) noexcept {
  const unsigned l = lambda(n);
  return l > 0 ? l - 1 : 0u;
}

constexpr bool is_power_of_two(Natural n) noexcept { return std::has_single_bit(n); }

/// Strictly increasing finite set of naturals. Elements are addressed by
/// position (h_0 < h_1 < ...), which is how index sets refer to them.
class FiniteNatSet {
 public:
  FiniteNatSet() = default;

  explicit FiniteNatSet(std::vector<Natural> elements) : elements_(std::move(elements)) {
    for (std::size_t i = 1; i < elements_.size(); ++i) {
      if (elements_[i - 1] >= elements_[i]) {
        std::ostringstream os;
        os << "set is not strictly increasing at position " << i << " (" << elements_[i - 1]
           << " >= " << elements_[i] << ")";
        throw ValidationError(os.str());
      }
    }
  }

  FiniteNatSet(std::initializer_list<Natural> init) : FiniteNatSet(std::vector<Natural>(init)) {}

  static FiniteNatSet from_unsorted(std::vector<Natural> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return FiniteNatSet(std::move(values));
  }

  static FiniteNatSet range(Natural lo, Natural hi) {
    std::vector<Natural> v;
    for (Natural x = lo; x < hi; ++x) v.push_back(x);
    return FiniteNatSet(std::move(v));
  }

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  Natural operator[](std::size_t i) const { return elements_[i]; }
  Natural front() const { return elements_.front(); }
  Natural back() const { return elements_.back(); }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }
  std::span<const Natural> view() const noexcept { return elements_; }
  const std::vector<Natural>& elements() const noexcept { return elements_; }

  bool contains(Natural x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

  // Positions of `x` in the set, if present.
  std::optional<std::size_t> index_of(Natural x) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
    if (it == elements_.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
  }

  bool operator==(const FiniteNatSet&) const = default;
  auto operator<=>(const FiniteNatSet&) const = default;

 private:
  std::vector<Natural> elements_;
};

inline std::string to_string(const FiniteNatSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

struct ApartCheck {
  bool apart = true;
  std::optional<std::pair<Natural, Natural>> violation;
};

// Consecutive pairs suffice: mu(x) < lambda(x') <= mu(x') chains upward.
inline ApartCheck is_apart(const FiniteNatSet& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(mu(s[i - 1]) < lambda(s[i]))) return {false, std::make_pair(s[i - 1], s[i])};
  }
  return {};
}

/// Which finite subsets of a set are summed: every nonempty subset, those of
/// at most n elements, or those of exactly n elements. `capped(s)` is the
/// at-most-s truncation used in place of all finite subsets.
struct SumMode {
  enum class Kind { All, AtMost, Exactly };
  Kind kind = Kind::All;
  std::size_t n = 0;

  static SumMode all() { return {Kind::All, 0}; }
  static SumMode at_most(std::size_t n) { return {Kind::AtMost, n}; }
  static SumMode exactly(std::size_t n) { return {Kind::Exactly, n}; }
  static SumMode capped(std::size_t s) { return {Kind::AtMost, s}; }

  std::size_t min_size() const { return kind == Kind::Exactly ? n : 1; }
  std::size_t max_size(std::size_t set_size) const {
    return kind == Kind::All ? set_size : std::min(n, set_size);
  }
  bool admits(std::size_t k) const { return k >= 1 && k >= min_size() && (kind == Kind::All || k <= n); }

  bool operator==(const SumMode&) const = default;
};

inline std::string to_string(const SumMode& m) {
  switch (m.kind) {
    case SumMode::Kind::All: return "all";
    case SumMode::Kind::AtMost: return "at_most:" + std::to_string(m.n);
    case SumMode::Kind::Exactly: return "exactly:" + std::to_string(m.n);
  }
  return "?";
}

using IndexSet = std::vector<std::size_t>;

// Calls fn(span) for every k-subset of {0..count-1}, ascending lexicographic
// order. Stops early when fn returns false; returns false in that case.
template <class Fn>
bool for_each_combination(std::size_t count, std::size_t k, Fn&& fn) {
  if (k > count) return true;
  IndexSet idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(std::span<const std::size_t>(idx))) return false;
    if (k == 0) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == count - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Every index set admitted by `mode` over a set of `count` elements, smaller
// sets first, each size in lexicographic order.
template <class Fn>
bool for_each_index_set(std::size_t count, const SumMode& mode, Fn&& fn) {
  const std::size_t hi = mode.max_size(count);
  for (std::size_t k = mode.min_size(); k <= hi; ++k) {
    if (!for_each_combination(count, k, fn)) return false;
  }
  return true;
}

inline Natural index_sum(const FiniteNatSet& s, std::span<const std::size_t> idx) {
  Natural total = 0;
  for (std::size_t i : idx) total = checked_add(total, s[i]);
  return total;
}

struct FsEnumeration {
  FiniteNatSet sums;
  // Every index set producing each sum. Non-apart sets can produce a sum twice.
  std::map<Natural, std::vector<IndexSet>> producers;
};

inline FsEnumeration fs_enumerate(const FiniteNatSet& s, const SumMode& mode) {
  if (mode.kind != SumMode::Kind::All && mode.n == 0)
    throw ValidationError("sum mode needs n >= 1");
  FsEnumeration out;
  for_each_index_set(s.size(), mode, [&](std::span<const std::size_t> idx) {
    out.producers[index_sum(s, idx)].emplace_back(idx.begin(), idx.end());
    return true;
  });
  std::vector<Natural> sums;
  sums.reserve(out.producers.size());
  for (const auto& [sum, _] : out.producers) sums.push_back(sum);
  out.sums = FiniteNatSet(std::move(sums));
  return out;
}

/// Strictly increasing sequence of positive naturals, queried by index.
class SumStream {
 public:
  using Generator = std::function<Natural(std::size_t)>;

  SumStream(std::string name, Generator gen) : name_(std::move(name)), gen_(std::move(gen)) {}

  Natural at(std::size_t i) const { return gen_(i); }
  const std::string& name() const noexcept { return name_; }

  static SumStream powers_of_two() {
    return {"powers_of_two", [](std::size_t i) { return pow2(static_cast<unsigned>(i)); }};
  }
  static SumStream odd_numbers() {
    return {"odd_numbers", [](std::size_t i) { return 2 * static_cast<Natural>(i) + 1; }};
  }
  static SumStream positive_naturals() {
    return {"positive_naturals", [](std::size_t i) { return static_cast<Natural>(i) + 1; }};
  }
  // i-th element drawn from the block [i*gap + 1, (i+1)*gap] by a seeded mix,
  // so the stream is strictly increasing and every query is reproducible.
  static SumStream scattered(std::uint64_t seed, Natural gap) {
    if (gap == 0) throw ValidationError("scattered stream needs gap >= 1");
    return {"scattered", [seed, gap](std::size_t i) {
              std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(i) + 1);
              z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
              z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
              z ^= z >> 31;
              return static_cast<Natural>(i) * gap + 1 + z % gap;
            }};
  }

 private:
  std::string name_;
  Generator gen_;
};

// Half-open range [begin, end) of stream indices whose elements were summed.
struct StreamBlock {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const StreamBlock&) const = default;
};

struct ApartExtraction {
  bool complete = false;
  std::vector<Natural> elements;
  std::vector<StreamBlock> blocks;
  std::size_t consumed = 0;  // stream elements read
};

/// Greedy apart subset of FS(A). After an element with top bit t-1 is taken,
/// prefix sums of the following stream elements are scanned mod 2^t; two of
/// any 2^t + 1 prefixes coincide, and the block between them sums to a
/// multiple of 2^t, hence has lambda >= t. `budget` caps how many stream
/// elements may be read; running out returns complete == false with the
/// progress so far.
inline ApartExtraction extract_apart_from_fs(const SumStream& stream, std::size_t count,
                                             std::size_t budget) {
  if (count == 0) throw ValidationError("extract_apart_from_fs needs count >= 1");
  ApartExtraction out;
  std::size_t cursor = 0;
  while (out.elements.size() < count) {
    if (out.elements.empty()) {
      if (budget < 1) return out;
      const Natural first = stream.at(0);
      if (first == 0) throw ValidationError("stream elements must be positive");
      out.elements.push_back(first);
      out.blocks.push_back({0, 1});
      cursor = 1;
      out.consumed = 1;
      continue;
    }
    const unsigned t = mu(out.elements.back()) + 1;
    if (t >= 64) throw OverflowError("apart extraction exceeded 64-bit elements");
    const Natural mask = pow2(t) - 1;
    std::map<Natural, std::size_t> seen{{0, 0}};  // prefix residue -> prefix length
    Natural prefix = 0;
    bool found = false;
    for (std::size_t len = 1;; ++len) {
      const std::size_t idx = cursor + len - 1;
      if (idx >= budget) {
        out.consumed = budget;
        return out;
      }
      prefix = checked_add(prefix, stream.at(idx));
      auto [it, inserted] = seen.emplace(prefix & mask, len);
      if (!inserted) {
        const std::size_t a = it->second;
        Natural block_sum = 0;
        for (std::size_t j = cursor + a; j < cursor + len; ++j) block_sum = checked_add(block_sum, stream.at(j));
        out.elements.push_back(block_sum);
        out.blocks.push_back({cursor + a, cursor + len});
        cursor += len;
        out.consumed = cursor;
        found = true;
        break;
      }
    }
    if (!found) return out;
  }
  out.complete = true;
  return out;
}

}  // namespace hindreg
