#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hindreg/bitsupport.hpp"
#include "hindreg/errors.hpp"

namespace hindreg {

/// How a coloring was built: a builtin name plus the parameters it captured.
/// Nested colorings appear inside `params` under "inner". This is what gets
/// serialized, so a coloring can be rebuilt from it bit-exactly.
struct Provenance {
  std::string builtin;
  nlohmann::json params = nlohmann::json::object();
};

// Above this bound a full scan of a unary domain is refused unless the
// coloring is (lambda, mu)-determined.
inline constexpr Natural kFullScanLimit = Natural{1} << 26;

/// Total coloring of [0, domain_bound).
class UnaryColoring {
 public:
  using Evaluator = std::function<Natural(Natural)>;

  UnaryColoring(Natural domain_bound, Evaluator eval, Provenance provenance,
                std::optional<Natural> range_bound = std::nullopt, bool lambda_mu_determined = false)
      : domain_bound_(domain_bound),
        eval_(std::move(eval)),
        provenance_(std::move(provenance)),
        range_bound_(range_bound),
        lambda_mu_determined_(lambda_mu_determined) {}

  Natural operator()(Natural x) const {
    if (x >= domain_bound_) {
      std::ostringstream os;
      os << "value " << x << " outside coloring domain [0, " << domain_bound_ << ") of '"
         << provenance_.builtin << "'";
      throw DomainError(os.str());
    }
    return eval_(x);
  }

  Natural domain_bound() const noexcept { return domain_bound_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  const std::string& builtin() const noexcept { return provenance_.builtin; }
  std::optional<Natural> range_bound() const noexcept { return range_bound_; }
  // Color depends on x only through (lambda(x), mu(x)).
  bool lambda_mu_determined() const noexcept { return lambda_mu_determined_; }

 private:
  Natural domain_bound_;
  Evaluator eval_;
  Provenance provenance_;
  std::optional<Natural> range_bound_;
  bool lambda_mu_determined_;
};

/// Coloring of strictly increasing `arity`-tuples from [0, domain_bound).
class TupleColoring {
 public:
  using Evaluator = std::function<Natural(std::span<const Natural>)>;

  TupleColoring(std::size_t arity, Natural domain_bound, Evaluator eval, Provenance provenance,
                std::optional<Natural> range_bound = std::nullopt)
      : arity_(arity),
        domain_bound_(domain_bound),
        eval_(std::move(eval)),
        provenance_(std::move(provenance)),
        range_bound_(range_bound) {
    if (arity_ == 0) throw ValidationError("tuple coloring needs arity >= 1");
  }

  Natural operator()(std::span<const Natural> tuple) const {
    if (tuple.size() != arity_)
      throw DomainError("tuple of size " + std::to_string(tuple.size()) + " given to arity-" +
                        std::to_string(arity_) + " coloring");
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (tuple[i] >= domain_bound_)
        throw DomainError("tuple element " + std::to_string(tuple[i]) + " outside domain [0, " +
                          std::to_string(domain_bound_) + ")");
      if (i > 0 && tuple[i - 1] >= tuple[i]) throw DomainError("tuple is not strictly increasing");
    }
    return eval_(tuple);
  }
  Natural operator()(std::initializer_list<Natural> tuple) const {
    return (*this)(std::span<const Natural>(tuple.begin(), tuple.size()));
  }

  std::size_t arity() const noexcept { return arity_; }
  Natural domain_bound() const noexcept { return domain_bound_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  const std::string& builtin() const noexcept { return provenance_.builtin; }
  std::optional<Natural> range_bound() const noexcept { return range_bound_; }

 private:
  std::size_t arity_;
  Natural domain_bound_;
  Evaluator eval_;
  Provenance provenance_;
  std::optional<Natural> range_bound_;
};

template <class Witness>
struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;
  explicit operator bool() const noexcept { return holds; }
};

// ---------------------------------------------------------------------------
// Regressivity

namespace detail {

template <class Fn>
bool for_each_profile_representative(Natural domain_bound, Fn&& fn) {
  // 0, then 2^a + 2^b (a <= b) in increasing order of b, then a.
  if (domain_bound > 0 && !fn(Natural{0})) return false;
  for (unsigned b = 0; b < 64; ++b) {
    for (unsigned a = 0; a <= b; ++a) {
      const Natural x = (a == b) ? pow2(b) : pow2(a) + pow2(b);
      if (x >= domain_bound) continue;
      if (!fn(x)) return false;
    }
    if (pow2(b) >= domain_bound) break;
  }
  return true;
}

template <class Fn>
bool for_each_domain_point(const UnaryColoring& c, Fn&& fn) {
  if (c.domain_bound() <= kFullScanLimit) {
    for (Natural x = 0; x < c.domain_bound(); ++x)
      if (!fn(x)) return false;
    return true;
  }
  if (!c.lambda_mu_determined())
    throw DomainError("domain of '" + c.builtin() + "' too large for a full scan");
  return for_each_profile_representative(c.domain_bound(), fn);
}

}  // namespace detail

/// c(n) < lambda(n) when lambda(n) > 0 and c(n) = 0 otherwise, over the whole
/// domain (over one representative per (lambda, mu) profile when the domain
/// is too large to scan and the coloring is profile-determined).
inline Verdict<Natural> is_lambda_regressive(const UnaryColoring& c) {
  Verdict<Natural> out;
  detail::for_each_domain_point(c, [&](Natural x) {
    const Natural v = c(x);
    const unsigned l = lambda(x);
    const bool ok = l > 0 ? v < l : v == 0;
    if (!ok) {
      out = {false, x};
      return false;
    }
    return true;
  });
  return out;
}

namespace detail {

template <class Fn>
bool for_each_tuple(std::span<const Natural> ground, std::size_t arity, Fn&& fn) {
  std::vector<Natural> tuple(arity);
  return for_each_combination(ground.size(), arity, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < arity; ++i) tuple[i] = ground[idx[i]];
    return fn(std::span<const Natural>(tuple));
  });
}

inline std::vector<Natural> ground_or_domain(const TupleColoring& f, const std::optional<FiniteNatSet>& ground) {
  if (ground) return ground->elements();
  std::vector<Natural> v;
  for (Natural x = 0; x < f.domain_bound(); ++x) v.push_back(x);
  return v;
}

}  // namespace detail

/// f(I) < min(I) when min(I) > 0, f(I) = 0 otherwise; checked on tuples from
/// `ground` when given, else on the full domain.
inline Verdict<std::vector<Natural>> is_regressive(const TupleColoring& f,
                                                   const std::optional<FiniteNatSet>& ground = std::nullopt) {
  Verdict<std::vector<Natural>> out;
  const auto pool = detail::ground_or_domain(f, ground);
  detail::for_each_tuple(pool, f.arity(), [&](std::span<const Natural> t) {
    const Natural v = f(t);
    const bool ok = t[0] > 0 ? v < t[0] : v == 0;
    if (!ok) {
      out = {false, std::vector<Natural>(t.begin(), t.end())};
      return false;
    }
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Homogeneity

using IndexSetPair = std::pair<IndexSet, IndexSet>;

/// Sums over index sets with the same least index share a color. The witness
/// is a pair of index sets into H, not sums.
inline Verdict<IndexSetPair> is_min_term_homogeneous(const UnaryColoring& c, const FiniteNatSet& h,
                                                     const SumMode& mode) {
  Verdict<IndexSetPair> out;
  std::vector<std::optional<std::pair<Natural, IndexSet>>> first(h.size());
  for_each_index_set(h.size(), mode, [&](std::span<const std::size_t> idx) {
    const Natural color = c(index_sum(h, idx));
    auto& slot = first[idx[0]];
    if (!slot) {
      slot.emplace(color, IndexSet(idx.begin(), idx.end()));
    } else if (slot->first != color) {
      out = {false, IndexSetPair{slot->second, IndexSet(idx.begin(), idx.end())}};
      return false;
    }
    return true;
  });
  return out;
}

using TuplePair = std::pair<std::vector<Natural>, std::vector<Natural>>;

/// Arity-subsets of H with equal minimum share a color.
inline Verdict<TuplePair> is_min_homogeneous(const TupleColoring& f, const FiniteNatSet& h) {
  Verdict<TuplePair> out;
  std::vector<std::optional<std::pair<Natural, std::vector<Natural>>>> first(h.size());
  std::vector<Natural> tuple(f.arity());
  for_each_combination(h.size(), f.arity(), [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = h[idx[i]];
    const Natural color = f(tuple);
    auto& slot = first[idx[0]];
    if (!slot) {
      slot.emplace(color, tuple);
    } else if (slot->first != color) {
      out = {false, TuplePair{slot->second, tuple}};
      return false;
    }
    return true;
  });
  return out;
}

/// Which objects a homogeneity check colors: the elements themselves, or the
/// sums of index sets admitted by a SumMode.
struct UnaryFamily {
  enum class Kind { Elements, Sums };
  Kind kind = Kind::Elements;
  SumMode sums{};

  static UnaryFamily elements() { return {Kind::Elements, {}}; }
  static UnaryFamily fs(SumMode m) { return {Kind::Sums, m}; }
};

struct HomogeneityCheck {
  bool holds = true;
  std::optional<Natural> color;
  // Colored objects (an element, a sum, or a tuple) with different colors.
  std::optional<TuplePair> witness;
  explicit operator bool() const noexcept { return holds; }
};

inline HomogeneityCheck is_homogeneous(const UnaryColoring& c, const FiniteNatSet& target,
                                       const UnaryFamily& family) {
  HomogeneityCheck out;
  std::optional<Natural> first_obj;
  auto visit = [&](Natural obj) {
    const Natural color = c(obj);
    if (!out.color) {
      out.color = color;
      first_obj = obj;
    } else if (*out.color != color) {
      out.holds = false;
      out.witness = TuplePair{{*first_obj}, {obj}};
      return false;
    }
    return true;
  };
  if (family.kind == UnaryFamily::Kind::Elements) {
    for (Natural x : target)
      if (!visit(x)) break;
  } else {
    for_each_index_set(target.size(), family.sums,
                       [&](std::span<const std::size_t> idx) { return visit(index_sum(target, idx)); });
  }
  if (!out.holds) out.color.reset();
  return out;
}

inline HomogeneityCheck is_homogeneous(const TupleColoring& f, const FiniteNatSet& target) {
  HomogeneityCheck out;
  std::optional<std::vector<Natural>> first_tuple;
  detail::for_each_tuple(target.view(), f.arity(), [&](std::span<const Natural> t) {
    const Natural color = f(t);
    if (!out.color) {
      out.color = color;
      first_tuple.emplace(t.begin(), t.end());
    } else if (*out.color != color) {
      out.holds = false;
      out.witness = TuplePair{*first_tuple, std::vector<Natural>(t.begin(), t.end())};
      return false;
    }
    return true;
  });
  if (!out.holds) out.color.reset();
  return out;
}

// ---------------------------------------------------------------------------
// Canonical cases

/// Subset of canonical case numbers 1..5.
class CanonicalCaseSet {
 public:
  CanonicalCaseSet() = default;
  CanonicalCaseSet(std::initializer_list<int> cases) {
    for (int c : cases) insert(c);
  }

  void insert(int c) { bits_ |= static_cast<unsigned>(1u << c); }
  void erase(int c) { bits_ &= ~static_cast<unsigned>(1u << c); }
  bool contains(int c) const { return (bits_ >> c) & 1u; }
  bool empty() const { return bits_ == 0; }
  std::vector<int> cases() const {
    std::vector<int> out;
    for (int c = 1; c <= 5; ++c)
      if (contains(c)) out.push_back(c);
    return out;
  }
  CanonicalCaseSet intersect(const CanonicalCaseSet& o) const {
    CanonicalCaseSet r;
    r.bits_ = bits_ & o.bits_;
    return r;
  }
  bool subset_of(const CanonicalCaseSet& o) const { return (bits_ & ~o.bits_) == 0; }
  bool operator==(const CanonicalCaseSet&) const = default;

 private:
  unsigned bits_ = 0;
};

inline std::string to_string(const CanonicalCaseSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int c : s.cases()) {
    os << (first ? "" : ",") << c;
    first = false;
  }
  os << '}';
  return os.str();
}

namespace detail {

struct ColoredIndexSet {
  IndexSet idx;
  Natural color;
};

// Keeps every case whose biconditional "equal colors iff <relation>" holds on
// all pairs.
inline CanonicalCaseSet classify_pairs(const std::vector<ColoredIndexSet>& items, int max_case) {
  std::array<bool, 6> alive{};
  for (int c = 1; c <= max_case; ++c) alive[c] = true;
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) {
      const auto& I = items[a].idx;
      const auto& J = items[b].idx;
      const bool same_color = items[a].color == items[b].color;
      const bool same_min = I.front() == J.front();
      const bool same_max = I.back() == J.back();
      const bool same_set = I == J;
      const std::array<bool, 6> rel{false, true, same_set, same_min, same_max, same_min && same_max};
      for (int c = 1; c <= max_case; ++c)
        if (alive[c] && same_color != rel[c]) alive[c] = false;
    }
  }
  CanonicalCaseSet out;
  for (int c = 1; c <= max_case; ++c)
    if (alive[c]) out.insert(c);
  return out;
}

}  // namespace detail

/// Taylor's five cases for c on FS(H), with index sets of size <= cap.
inline CanonicalCaseSet classify_canonical_fs(const UnaryColoring& c, const FiniteNatSet& h, std::size_t cap) {
  if (h.size() < 2) throw ValidationError("classify_canonical_fs needs |H| >= 2");
  if (cap < 2) throw ValidationError("classify_canonical_fs needs cap >= 2");
  std::vector<detail::ColoredIndexSet> items;
  for_each_index_set(h.size(), SumMode::capped(cap), [&](std::span<const std::size_t> idx) {
    items.push_back({IndexSet(idx.begin(), idx.end()), c(index_sum(h, idx))});
    return true;
  });
  return detail::classify_pairs(items, 5);
}

/// Erdos-Rado's four cases for f on [H]^n.
inline CanonicalCaseSet classify_canonical_tuples(const TupleColoring& f, const FiniteNatSet& h) {
  if (h.size() < f.arity() + 1) throw ValidationError("classify_canonical_tuples needs |H| >= n + 1");
  std::vector<detail::ColoredIndexSet> items;
  std::vector<Natural> tuple(f.arity());
  for_each_combination(h.size(), f.arity(), [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = h[idx[i]];
    items.push_back({IndexSet(idx.begin(), idx.end()), f(tuple)});
    return true;
  });
  return detail::classify_pairs(items, 4);
}

}  // namespace hindreg

namespace hindreg {

// Self-describing spec of a coloring: its builtin name merged with the
// captured parameters.
inline nlohmann::json coloring_spec(const Provenance& p) {
  nlohmann::json j = p.params;
  j["builtin"] = p.builtin;
  return j;
}
inline nlohmann::json coloring_spec(const UnaryColoring& c) { return coloring_spec(c.provenance()); }
inline nlohmann::json coloring_spec(const TupleColoring& f) { return coloring_spec(f.provenance()); }

}  // namespace hindreg
