#pragma once

// Source-side colorings used as instances: explicit tables and a handful of
// closed-form families. Each captures its parameters in its provenance.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hindreg/bitsupport.hpp"
#include "hindreg/colorings.hpp"

namespace hindreg::basic {

namespace detail {

inline Provenance prov(std::string name, Natural domain_bound, nlohmann::json extra = nlohmann::json::object()) {
  extra["domain_bound"] = domain_bound;
  return {std::move(name), std::move(extra)};
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t x) {
  std::uint64_t z = seed ^ (x + 0x9E3779B97F4A7C15ull + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

inline std::optional<Natural> max_plus_one(const std::vector<Natural>& v) {
  if (v.empty()) return std::nullopt;
  Natural m = 0;
  for (Natural x : v) m = std::max(m, x);
  return m + 1;
}

inline UnaryColoring table(std::vector<Natural> values, std::optional<Natural> range_bound = std::nullopt) {
  nlohmann::json extra;
  extra["values"] = values;
  if (range_bound) extra["range_bound"] = *range_bound;
  const Natural n = values.size();
  auto data = std::make_shared<const std::vector<Natural>>(std::move(values));
  return {n, [data](Natural x) { return (*data)[x]; }, detail::prov("table", n, std::move(extra)), range_bound};
}

inline UnaryColoring constant(Natural value, Natural domain_bound) {
  return {domain_bound, [value](Natural) { return value; }, detail::prov("const", domain_bound, {{"value", value}}),
          value + 1, true};
}

inline UnaryColoring identity(Natural domain_bound) {
  return {domain_bound, [](Natural x) { return x; }, detail::prov("identity", domain_bound)};
}

inline UnaryColoring lambda_coloring(Natural domain_bound) {
  return {domain_bound, [](Natural x) { return Natural{lambda(x)}; }, detail::prov("lambda", domain_bound),
          std::nullopt, true};
}

inline UnaryColoring mu_coloring(Natural domain_bound) {
  return {domain_bound, [](Natural x) { return Natural{mu(x)}; }, detail::prov("mu", domain_bound), std::nullopt,
          true};
}

inline UnaryColoring lambda_minus_coloring(Natural domain_bound) {
  return {domain_bound, [](Natural x) { return Natural{lambda_minus(x)}; }, detail::prov("lambda_minus", domain_bound),
          std::nullopt, true};
}

// Cantor pairing of (lambda(x), mu(x)).
inline UnaryColoring pair_lambda_mu(Natural domain_bound) {
  return {domain_bound,
          [](Natural x) {
            const Natural a = lambda(x), b = mu(x);
            return (a + b) * (a + b + 1) / 2 + b;
          },
          detail::prov("pair_lambda_mu", domain_bound), std::nullopt, true};
}

inline UnaryColoring mod(Natural k, Natural domain_bound) {
  if (k == 0) throw ValidationError("mod coloring needs k >= 1");
  return {domain_bound, [k](Natural x) { return x % k; }, detail::prov("mod", domain_bound, {{"k", k}}), k};
}

// Pseudo-random k-coloring, reproducible from (seed, k).
inline UnaryColoring hash_mod(std::uint64_t seed, Natural k, Natural domain_bound) {
  if (k == 0) throw ValidationError("hash_mod coloring needs k >= 1");
  return {domain_bound, [seed, k](Natural x) { return detail::mix(seed, x) % k; },
          detail::prov("hash_mod", domain_bound, {{"seed", seed}, {"k", k}}), k};
}

// ---------------------------------------------------------------------------
// Tuples

inline Natural binomial(Natural n, Natural k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Natural r = 1;
  for (Natural i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Position of a strictly increasing tuple among all arity-subsets of
// [0, domain_bound) in lexicographic order.
inline Natural tuple_rank(std::span<const Natural> t, Natural domain_bound) {
  Natural rank = 0;
  Natural start = 0;
  const Natural k = t.size();
  for (Natural i = 0; i < k; ++i) {
    for (Natural v = start; v < t[i]; ++v) rank += binomial(domain_bound - 1 - v, k - 1 - i);
    start = t[i] + 1;
  }
  return rank;
}

namespace detail {

inline Provenance tprov(std::string name, std::size_t arity, Natural domain_bound,
                        nlohmann::json extra = nlohmann::json::object()) {
  extra["arity"] = arity;
  return prov(std::move(name), domain_bound, std::move(extra));
}

}  // namespace detail

// Dense table over all arity-subsets in lexicographic order.
inline TupleColoring tuple_table(std::size_t arity, Natural domain_bound, std::vector<Natural> values,
                                 std::optional<Natural> range_bound = std::nullopt) {
  if (values.size() != binomial(domain_bound, arity))
    throw ValidationError("tuple table needs C(" + std::to_string(domain_bound) + "," + std::to_string(arity) +
                          ") = " + std::to_string(binomial(domain_bound, arity)) + " values, got " +
                          std::to_string(values.size()));
  nlohmann::json extra;
  extra["values"] = values;
  if (range_bound) extra["range_bound"] = *range_bound;
  auto data = std::make_shared<const std::vector<Natural>>(std::move(values));
  return {arity, domain_bound,
          [data, domain_bound](std::span<const Natural> t) { return (*data)[tuple_rank(t, domain_bound)]; },
          detail::tprov("tuple_table", arity, domain_bound, std::move(extra)), range_bound};
}

inline TupleColoring tuple_constant(std::size_t arity, Natural domain_bound, Natural value) {
  return {arity, domain_bound, [value](std::span<const Natural>) { return value; },
          detail::tprov("tuple_const", arity, domain_bound, {{"value", value}}), value + 1};
}

// f(x, y) = y mod x, and 0 when x = 0.
inline TupleColoring y_mod_x(Natural domain_bound) {
  return {2, domain_bound, [](std::span<const Natural> t) { return t[0] == 0 ? Natural{0} : t[1] % t[0]; },
          detail::tprov("y_mod_x", 2, domain_bound)};
}

inline TupleColoring last_parity(std::size_t arity, Natural domain_bound) {
  return {arity, domain_bound, [](std::span<const Natural> t) { return t.back() % 2; },
          detail::tprov("last_parity", arity, domain_bound), 2};
}

inline TupleColoring first_mod(std::size_t arity, Natural domain_bound, Natural m) {
  if (m == 0) throw ValidationError("first_mod needs m >= 1");
  return {arity, domain_bound, [m](std::span<const Natural> t) { return t[0] % m; },
          detail::tprov("first_mod", arity, domain_bound, {{"m", m}}), m};
}

inline TupleColoring sum_mod(std::size_t arity, Natural domain_bound, Natural m) {
  if (m == 0) throw ValidationError("sum_mod needs m >= 1");
  return {arity, domain_bound,
          [m](std::span<const Natural> t) {
            Natural s = 0;
            for (Natural x : t) s = checked_add(s, x);
            return s % m;
          },
          detail::tprov("sum_mod", arity, domain_bound, {{"m", m}}), m};
}

inline TupleColoring tuple_min(std::size_t arity, Natural domain_bound) {
  return {arity, domain_bound, [](std::span<const Natural> t) { return t[0]; },
          detail::tprov("min", arity, domain_bound)};
}

// Injective: the lexicographic rank of the tuple.
inline TupleColoring tuple_code(std::size_t arity, Natural domain_bound) {
  return {arity, domain_bound, [domain_bound](std::span<const Natural> t) { return tuple_rank(t, domain_bound); },
          detail::tprov("code", arity, domain_bound)};
}

inline TupleColoring tuple_hash_mod(std::size_t arity, Natural domain_bound, std::uint64_t seed, Natural k) {
  if (k == 0) throw ValidationError("tuple_hash_mod needs k >= 1");
  return {arity, domain_bound,
          [seed, k](std::span<const Natural> t) {
            std::uint64_t h = seed;
            for (Natural x : t) h = detail::mix(h, x);
            return h % k;
          },
          detail::tprov("tuple_hash_mod", arity, domain_bound, {{"seed", seed}, {"k", k}}), k};
}

}  // namespace hindreg::basic
