#pragma once

// The principle catalogue at desk scale: tagged instances and solutions plus
// a validator pair per principle. Validators only call predicates from
// colorings.hpp and wop.hpp.
//
//   rt1     unary coloring into k colors; homogeneous set
//   rt      n-tuple coloring (into k colors when k is given); homogeneous set
//   reg     regressive n-tuple coloring, optionally on a ground set;
//           min-homogeneous set
//   ht      unary coloring into k colors; set whose sums in `mode` share a
//           color (apart when `apart`)
//   lreght  lambda-regressive unary coloring; set whose sums in `mode` are
//           min-term-homogeneous (apart when `apart`)
//   ran     injective table; membership answers below a query bound
//   wop     descending sequence in omega^X; descending sequence in X

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hindreg/basic_colorings.hpp"
#include "hindreg/bitsupport.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/constructions.hpp"
#include "hindreg/errors.hpp"
#include "hindreg/wop.hpp"

namespace hindreg {

inline SumMode parse_sum_mode(const std::string& text) {
  if (text == "all") return SumMode::all();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("bad sum mode '" + text + "'");
  const std::string kind = text.substr(0, colon);
  std::size_t n = 0;
  try {
    n = std::stoul(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw ValidationError("bad sum mode '" + text + "'");
  }
  if (n == 0) throw ValidationError("sum mode needs n >= 1");
  if (kind == "at_most") return SumMode::at_most(n);
  if (kind == "exactly") return SumMode::exactly(n);
  throw ValidationError("bad sum mode '" + text + "'");
}

using InstancePayload = std::variant<UnaryColoring, TupleColoring, InjectiveFunctionTable, DescendingSequence>;

struct PrincipleInstance {
  std::string principle;
  nlohmann::json params = nlohmann::json::object();
  InstancePayload payload;

  const UnaryColoring& unary() const { return get<UnaryColoring>("unary coloring"); }
  const TupleColoring& tuple() const { return get<TupleColoring>("tuple coloring"); }
  const InjectiveFunctionTable& table() const { return get<InjectiveFunctionTable>("injective table"); }
  const DescendingSequence& sequence() const { return get<DescendingSequence>("descending sequence"); }

  Natural param(const std::string& key) const {
    if (!params.contains(key)) throw ValidationError(principle + " instance lacks parameter '" + key + "'");
    return params.at(key).get<Natural>();
  }
  std::optional<Natural> optional_param(const std::string& key) const {
    if (!params.contains(key) || params.at(key).is_null()) return std::nullopt;
    return params.at(key).get<Natural>();
  }
  SumMode mode() const {
    if (!params.contains("mode")) throw ValidationError(principle + " instance lacks parameter 'mode'");
    return parse_sum_mode(params.at("mode").get<std::string>());
  }
  bool apart() const { return params.value("apart", false); }
  std::optional<FiniteNatSet> ground() const {
    if (!params.contains("ground") || params.at("ground").is_null()) return std::nullopt;
    return FiniteNatSet(params.at("ground").get<std::vector<Natural>>());
  }

 private:
  template <class T>
  const T& get(const char* what) const {
    if (const T* p = std::get_if<T>(&payload)) return *p;
    throw ValidationError(principle + " instance does not carry a " + what);
  }
};

/// Membership of every x below `bound` in the range of an injective function.
struct RangeAnswer {
  Natural bound = 0;
  std::vector<bool> member;
  bool operator==(const RangeAnswer&) const = default;
};

/// Elements of a linear order, in emission order.
struct XSequence {
  std::vector<Natural> elements;
  bool operator==(const XSequence&) const = default;
};

using PrincipleSolution = std::variant<FiniteNatSet, RangeAnswer, XSequence>;

struct Check {
  bool ok = true;
  std::string detail;
  explicit operator bool() const noexcept { return ok; }
};

inline Check fail(std::string why) { return {false, std::move(why)}; }

namespace detail {

inline const std::set<std::string>& known_principles() {
  static const std::set<std::string> names{"rt1", "rt", "reg", "ht", "lreght", "ran", "wop"};
  return names;
}

// Colors below k on the whole declared domain.
inline Check colors_below(const UnaryColoring& c, Natural k) {
  Check out;
  for_each_domain_point(c, [&](Natural x) {
    if (c(x) >= k) {
      out = fail("color " + std::to_string(c(x)) + " at " + std::to_string(x) + " is not below k = " +
                 std::to_string(k));
      return false;
    }
    return true;
  });
  return out;
}

inline constexpr Natural kTupleScanLimit = 20'000'000;

inline Check colors_below(const TupleColoring& f, Natural k) {
  if (basic::binomial(f.domain_bound(), f.arity()) > kTupleScanLimit)
    return fail("tuple domain too large to validate the color bound");
  Check out;
  const auto pool = ground_or_domain(f, std::nullopt);
  for_each_tuple(pool, f.arity(), [&](std::span<const Natural> t) {
    if (f(t) >= k) {
      out = fail("color " + std::to_string(f(t)) + " is not below k = " + std::to_string(k));
      return false;
    }
    return true;
  });
  return out;
}

inline std::string tuple_text(const std::vector<Natural>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

inline Check positive_and_apart(const FiniteNatSet& h, bool apart) {
  if (h.empty()) return fail("solution is empty");
  if (h.front() == 0) return fail("solution contains 0");
  if (apart) {
    if (auto a = is_apart(h); !a.apart)
      return fail("solution is not apart at (" + std::to_string(a.violation->first) + ", " +
                  std::to_string(a.violation->second) + ")");
  }
  return {};
}

inline Check within(const FiniteNatSet& h, Natural bound) {
  if (!h.empty() && h.back() >= bound)
    return fail("element " + std::to_string(h.back()) + " outside domain [0, " + std::to_string(bound) + ")");
  return {};
}

}  // namespace detail

inline Check validate_instance(const PrincipleInstance& x) {
  try {
    const std::string& p = x.principle;
    if (!detail::known_principles().count(p)) return fail("unknown principle '" + p + "'");
    if (p == "rt1") {
      const Natural k = x.param("k");
      if (k == 0) return fail("k must be >= 1");
      return detail::colors_below(x.unary(), k);
    }
    if (p == "rt") {
      if (x.tuple().arity() != x.param("n")) return fail("coloring arity differs from n");
      if (auto k = x.optional_param("k")) return detail::colors_below(x.tuple(), *k);
      return {};
    }
    if (p == "reg") {
      if (x.tuple().arity() != x.param("n")) return fail("coloring arity differs from n");
      if (auto r = is_regressive(x.tuple(), x.ground()); !r)
        return fail("coloring is not regressive; witness " + detail::tuple_text(*r.witness));
      return {};
    }
    if (p == "ht") {
      x.mode();
      return detail::colors_below(x.unary(), x.param("k"));
    }
    if (p == "lreght") {
      x.mode();
      if (auto r = is_lambda_regressive(x.unary()); !r)
        return fail("coloring is not lambda-regressive; witness n = " + std::to_string(*r.witness));
      return {};
    }
    if (p == "ran") {
      x.table();
      return {};
    }
    if (auto v = validate_descending(x.sequence()); !v)
      return fail("sequence is not strictly descending at term " + std::to_string(*v.witness));
    return {};
  } catch (const Error& e) {
    return fail(e.what());
  }
}

inline Check validate_solution(const PrincipleInstance& x, const PrincipleSolution& y) {
  try {
    const std::string& p = x.principle;
    if (p == "ran") {
      const auto* a = std::get_if<RangeAnswer>(&y);
      if (!a) return fail("ran expects membership answers");
      if (a->member.size() != a->bound) return fail("answer length differs from its bound");
      for (Natural q = 0; q < a->bound; ++q)
        if (a->member[q] != x.table().contains_value(q))
          return fail("membership of " + std::to_string(q) + " answered " + (a->member[q] ? "true" : "false"));
      return {};
    }
    if (p == "wop") {
      const auto* s = std::get_if<XSequence>(&y);
      if (!s) return fail("wop expects a sequence in X");
      const auto& alpha = x.sequence();
      std::set<Natural> exps;
      for (const auto& t : alpha.terms)
        for (Natural e : t.exponents()) exps.insert(e);
      for (std::size_t i = 0; i < s->elements.size(); ++i) {
        const Natural e = s->elements[i];
        if (!alpha.order.contains(e)) return fail("element " + std::to_string(e) + " outside X");
        if (!exps.count(e)) return fail("element " + std::to_string(e) + " is not an exponent of alpha");
        if (i > 0 && !(e < s->elements[i - 1])) return fail("sequence fails to descend at " + std::to_string(i));
      }
      return {};
    }
    const auto* h = std::get_if<FiniteNatSet>(&y);
    if (!h) return fail(p + " expects a finite set");
    if (p == "rt1") {
      if (h->empty()) return fail("solution is empty");
      if (auto w = detail::within(*h, x.unary().domain_bound()); !w) return w;
      if (auto v = is_homogeneous(x.unary(), *h, UnaryFamily::elements()); !v)
        return fail("not homogeneous: " + detail::tuple_text(v.witness->first) + " vs " +
                    detail::tuple_text(v.witness->second));
      return {};
    }
    if (p == "rt" || p == "reg") {
      const auto& f = x.tuple();
      if (h->size() < f.arity()) return fail("solution smaller than the arity");
      if (auto w = detail::within(*h, f.domain_bound()); !w) return w;
      if (p == "rt") {
        if (auto v = is_homogeneous(f, *h); !v)
          return fail("not homogeneous: " + detail::tuple_text(v.witness->first) + " vs " +
                      detail::tuple_text(v.witness->second));
        return {};
      }
      if (auto g = x.ground())
        for (Natural e : *h)
          if (!g->contains(e)) return fail("element " + std::to_string(e) + " outside the ground set");
      if (auto v = is_min_homogeneous(f, *h); !v)
        return fail("not min-homogeneous: " + detail::tuple_text(v.witness->first) + " vs " +
                    detail::tuple_text(v.witness->second));
      return {};
    }
    if (auto c = detail::positive_and_apart(*h, x.apart()); !c) return c;
    if (p == "ht") {
      if (auto v = is_homogeneous(x.unary(), *h, UnaryFamily::fs(x.mode())); !v)
        return fail("sums " + detail::tuple_text(v.witness->first) + " and " + detail::tuple_text(v.witness->second) +
                    " differ in color");
      return {};
    }
    if (auto v = is_min_term_homogeneous(x.unary(), *h, x.mode()); !v) {
      std::vector<Natural> a(v.witness->first.begin(), v.witness->first.end());
      std::vector<Natural> b(v.witness->second.begin(), v.witness->second.end());
      return fail("index sets " + detail::tuple_text(a) + " and " + detail::tuple_text(b) + " differ in color");
    }
    return {};
  } catch (const Error& e) {
    return fail(e.what());
  }
}

inline nlohmann::json payload_to_json(const InstancePayload& p) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UnaryColoring> || std::is_same_v<T, TupleColoring>)
          return {{"coloring", coloring_spec(v)}};
        else if constexpr (std::is_same_v<T, InjectiveFunctionTable>)
          return {{"table", v.values()}};
        else
          return {{"order", order_to_json(v.order)}, {"terms", terms_to_json(v)}};
      },
      p);
}

inline nlohmann::json instance_to_json(const PrincipleInstance& x) {
  const nlohmann::json params = x.params.is_null() ? nlohmann::json::object() : x.params;
  return {{"principle", x.principle}, {"params", params}, {"payload", payload_to_json(x.payload)}};
}

inline nlohmann::json solution_to_json(const PrincipleSolution& y) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteNatSet>) {
          return {{"set", v.elements()}};
        } else if constexpr (std::is_same_v<T, RangeAnswer>) {
          std::vector<Natural> in;
          for (Natural q = 0; q < v.bound; ++q)
            if (v.member[q]) in.push_back(q);
          return {{"bound", v.bound}, {"range", in}};
        } else {
          return {{"sequence", v.elements}};
        }
      },
      y);
}

inline std::size_t solution_size(const PrincipleSolution& y) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteNatSet>) return v.size();
        else if constexpr (std::is_same_v<T, RangeAnswer>) return v.bound;
        else return v.elements.size();
      },
      y);
}

}  // namespace hindreg
