#pragma once

// Colorings produced on the instance side of each reduction. Every builder
// records its inputs in the provenance so the result can be shipped as a
// file and rebuilt.

#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hindreg/bitsupport.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/errors.hpp"
#include "hindreg/wop.hpp"

namespace hindreg {

/// f(0..M-1): pairwise distinct and never 0.
class InjectiveFunctionTable {
 public:
  explicit InjectiveFunctionTable(std::vector<Natural> values) : values_(std::move(values)) {
    std::set<Natural> seen;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (values_[j] == 0) throw ValidationError("f(" + std::to_string(j) + ") = 0; the table must avoid 0");
      if (!seen.insert(values_[j]).second)
        throw ValidationError("f is not injective: value " + std::to_string(values_[j]) + " repeats at " +
                              std::to_string(j));
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  Natural operator()(std::size_t j) const { return values_.at(j); }
  const std::vector<Natural>& values() const noexcept { return values_; }
  bool contains_value(Natural x) const {
    for (Natural v : values_)
      if (v == x) return true;
    return false;
  }
  bool operator==(const InjectiveFunctionTable&) const = default;

 private:
  std::vector<Natural> values_;
};

namespace detail {

inline Provenance wrap(std::string name, const nlohmann::json& inner, nlohmann::json extra = nlohmann::json::object()) {
  extra["inner"] = inner;
  return {std::move(name), std::move(extra)};
}

inline UnaryColoring from_profile_table(Natural domain_bound, std::shared_ptr<const ProfileTable> table,
                                        Provenance p) {
  return {domain_bound, [table](Natural x) { return (*table)[lambda(x)][mu(x)]; }, std::move(p), std::nullopt, true};
}

}  // namespace detail

// g(n) = f(n) when f(n) < lambda(n), else 0.
inline UnaryColoring clip_to_lambda_regressive(const UnaryColoring& f) {
  return {f.domain_bound(),
          [f](Natural x) {
            const Natural v = f(x);
            return v < lambda(x) ? v : Natural{0};
          },
          detail::wrap("clip", coloring_spec(f)), f.range_bound(), f.lambda_mu_determined()};
}

// g(n) = lambda^-(n) when lambda^-(n) < k, else f(n).
inline UnaryColoring guard_rt1(const UnaryColoring& f, Natural k) {
  if (k == 0) throw ValidationError("guard_rt1 needs k >= 1");
  if (f.range_bound() && *f.range_bound() > k)
    throw ValidationError("guard_rt1: coloring has range bound " + std::to_string(*f.range_bound()) + " > k = " +
                          std::to_string(k));
  return {f.domain_bound(),
          [f, k](Natural x) {
            const Natural lm = lambda_minus(x);
            return lm < k ? lm : f(x);
          },
          detail::wrap("guard_rt1", coloring_spec(f), {{"k", k}})};
}

// f(m) = 0 when lambda(m) <= k, else c(mu(m)).
inline UnaryColoring mu_recoloring(const UnaryColoring& c, Natural k, Natural domain_bound) {
  if (k == 0) throw ValidationError("mu_recoloring needs k >= 1");
  return {domain_bound, [c, k](Natural m) { return lambda(m) <= k ? Natural{0} : c(mu(m)); },
          detail::wrap("mu_recolor", coloring_spec(c), {{"k", k}, {"domain_bound", domain_bound}}), c.range_bound(),
          true};
}

// c+(x) = 0 when x_1 <= k, else c(x).
inline TupleColoring regressive_guard_fixed(const TupleColoring& c, Natural k) {
  if (!c.range_bound() || *c.range_bound() > k)
    throw ValidationError("cplus_fixed needs a coloring with range bound <= k = " + std::to_string(k));
  return {c.arity(), c.domain_bound(),
          [c, k](std::span<const Natural> t) { return t[0] <= k ? Natural{0} : c(t); },
          detail::wrap("cplus_fixed", coloring_spec(c), {{"k", k}}), k};
}

// c+(x) = 0 when x_1 <= c(x) + 1, else c(x) + 1.
inline TupleColoring regressive_guard_shift(const TupleColoring& c) {
  std::optional<Natural> rb;
  if (c.range_bound()) rb = *c.range_bound() + 1;
  return {c.arity(), c.domain_bound(),
          [c](std::span<const Natural> t) {
            const Natural v = checked_add(c(t), 1);
            return t[0] <= v ? Natural{0} : v;
          },
          detail::wrap("cplus_shift", coloring_spec(c)), rb};
}

// f(a_1..a_n) = c(a_1 + ... + a_n). Elements stay below domain_bound / n so
// every sum lies in c's domain.
inline TupleColoring sum_tuple_coloring(const UnaryColoring& c, std::size_t n) {
  if (n < 2) throw ValidationError("sum_tuple needs n >= 2");
  const Natural bound = c.domain_bound() / n;
  return {n, bound,
          [c](std::span<const Natural> t) {
            Natural s = 0;
            for (Natural x : t) s = checked_add(s, x);
            return c(s);
          },
          detail::wrap("sum_tuple", coloring_spec(c), {{"arity", n}, {"domain_bound", bound}}), c.range_bound()};
}

// Profile [l][u], l < u: the last value below l that f takes on [l, u).
inline ProfileTable range_profile_table(const InjectiveFunctionTable& f) {
  ProfileTable t{};
  for (std::size_t lo = 0; lo < 64; ++lo) {
    for (std::size_t hi = lo + 1; hi < 64; ++hi) {
      for (std::size_t j = std::min(hi, f.size()); j-- > lo;) {
        if (f(j) < lo) {
          t[lo][hi] = f(j);
          break;
        }
      }
    }
  }
  return t;
}

inline UnaryColoring range_coloring(const InjectiveFunctionTable& f, Natural domain_bound) {
  auto table = std::make_shared<const ProfileTable>(range_profile_table(f));
  return detail::from_profile_table(domain_bound, std::move(table),
                                    {"range", {{"values", f.values()}, {"domain_bound", domain_bound}}});
}

inline nlohmann::json order_to_json(const LinearOrder& x) {
  if (x.is_omega()) return "omega";
  return x.size();
}

inline nlohmann::json terms_to_json(const DescendingSequence& alpha) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : alpha.terms) terms.push_back(t.exponents());
  return terms;
}

inline UnaryColoring wop_coloring(const DescendingSequence& alpha, Natural domain_bound) {
  if (auto v = validate_descending(alpha); !v)
    throw ValidationError("alpha is not strictly descending at term " + std::to_string(*v.witness));
  auto table = std::make_shared<const ProfileTable>(wop_profile_table(exponent_stream(alpha)));
  return detail::from_profile_table(
      domain_bound, std::move(table),
      {"wop", {{"order", order_to_json(alpha.order)}, {"terms", terms_to_json(alpha)}, {"domain_bound", domain_bound}}});
}

}  // namespace hindreg
