#pragma once

// File formats. Every file is a JSON object with sorted keys, written with
// two-space indentation and a trailing newline, so equal values give equal
// bytes. Colorings are stored by builtin name and parameters and rebuilt
// through the registry below.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hindreg/basic_colorings.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/constructions.hpp"
#include "hindreg/errors.hpp"
#include "hindreg/principles.hpp"
#include "hindreg/wop.hpp"

namespace hindreg {

inline constexpr int kFormatVersion = 1;

/// A file does not match its schema. `field` is the dotted path of the
/// offending entry.
class SchemaError : public ValidationError {
 public:
  SchemaError(std::string field, const std::string& why)
      : ValidationError("schema error at '" + field + "': " + why), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

using AnyColoring = std::variant<UnaryColoring, TupleColoring>;

inline std::string canonical_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string digest_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

namespace detail {

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline const nlohmann::json& need(const nlohmann::json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (!j.contains(key)) throw SchemaError(join_path(path, key), "missing");
  return j.at(key);
}

inline Natural nat(const nlohmann::json& j, const std::string& path, const std::string& key) {
  const auto& v = need(j, path, key);
  if (!v.is_number_unsigned()) throw SchemaError(join_path(path, key), "expected a natural number");
  return v.get<Natural>();
}

inline std::vector<Natural> nat_list(const nlohmann::json& j, const std::string& path, const std::string& key) {
  const auto& v = need(j, path, key);
  const std::string p = join_path(path, key);
  if (!v.is_array()) throw SchemaError(p, "expected an array");
  std::vector<Natural> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_unsigned()) throw SchemaError(p + "[" + std::to_string(i) + "]", "expected a natural number");
    out.push_back(v[i].get<Natural>());
  }
  return out;
}

inline std::string text(const nlohmann::json& j, const std::string& path, const std::string& key) {
  const auto& v = need(j, path, key);
  if (!v.is_string()) throw SchemaError(join_path(path, key), "expected a string");
  return v.get<std::string>();
}

inline LinearOrder order_from_json(const nlohmann::json& j, const std::string& path) {
  const auto& v = need(j, path, "order");
  if (v.is_string() && v.get<std::string>() == "omega") return LinearOrder::omega();
  if (v.is_number_unsigned()) return LinearOrder::finite(v.get<Natural>());
  throw SchemaError(join_path(path, "order"), "expected \"omega\" or a natural number");
}

inline DescendingSequence sequence_from_json(const nlohmann::json& j, const std::string& path) {
  const LinearOrder order = order_from_json(j, path);
  const auto& terms = need(j, path, "terms");
  const std::string p = join_path(path, "terms");
  if (!terms.is_array()) throw SchemaError(p, "expected an array of exponent lists");
  std::vector<std::vector<Natural>> raw;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].is_array()) throw SchemaError(p + "[" + std::to_string(i) + "]", "expected an array");
    raw.push_back(nat_list(nlohmann::json{{"t", terms[i]}}, p + "[" + std::to_string(i) + "]", "t"));
  }
  try {
    return make_sequence(order, raw);
  } catch (const ValidationError& e) {
    throw SchemaError(p, e.what());
  }
}

using Builder = std::function<AnyColoring(const nlohmann::json&, const std::string&)>;

inline AnyColoring build_coloring(const nlohmann::json& spec, const std::string& path);

inline UnaryColoring build_unary(const nlohmann::json& spec, const std::string& path) {
  auto c = build_coloring(spec, path);
  if (auto* u = std::get_if<UnaryColoring>(&c)) return *u;
  throw SchemaError(path, "expected a unary coloring");
}

inline TupleColoring build_tuple(const nlohmann::json& spec, const std::string& path) {
  auto c = build_coloring(spec, path);
  if (auto* t = std::get_if<TupleColoring>(&c)) return *t;
  throw SchemaError(path, "expected a tuple coloring");
}

inline const std::map<std::string, Builder>& builders() {
  using J = nlohmann::json;
  using S = std::string;
  static const std::map<std::string, Builder> m{
      {"table",
       [](const J& j, const S& p) -> AnyColoring {
         std::optional<Natural> rb;
         if (j.contains("range_bound")) rb = nat(j, p, "range_bound");
         return basic::table(nat_list(j, p, "values"), rb);
       }},
      {"const", [](const J& j, const S& p) -> AnyColoring {
         return basic::constant(nat(j, p, "value"), nat(j, p, "domain_bound"));
       }},
      {"identity", [](const J& j, const S& p) -> AnyColoring { return basic::identity(nat(j, p, "domain_bound")); }},
      {"lambda", [](const J& j, const S& p) -> AnyColoring { return basic::lambda_coloring(nat(j, p, "domain_bound")); }},
      {"mu", [](const J& j, const S& p) -> AnyColoring { return basic::mu_coloring(nat(j, p, "domain_bound")); }},
      {"lambda_minus",
       [](const J& j, const S& p) -> AnyColoring { return basic::lambda_minus_coloring(nat(j, p, "domain_bound")); }},
      {"pair_lambda_mu",
       [](const J& j, const S& p) -> AnyColoring { return basic::pair_lambda_mu(nat(j, p, "domain_bound")); }},
      {"mod", [](const J& j, const S& p) -> AnyColoring {
         return basic::mod(nat(j, p, "k"), nat(j, p, "domain_bound"));
       }},
      {"hash_mod", [](const J& j, const S& p) -> AnyColoring {
         return basic::hash_mod(nat(j, p, "seed"), nat(j, p, "k"), nat(j, p, "domain_bound"));
       }},
      {"tuple_table",
       [](const J& j, const S& p) -> AnyColoring {
         std::optional<Natural> rb;
         if (j.contains("range_bound")) rb = nat(j, p, "range_bound");
         return basic::tuple_table(nat(j, p, "arity"), nat(j, p, "domain_bound"), nat_list(j, p, "values"), rb);
       }},
      {"tuple_const", [](const J& j, const S& p) -> AnyColoring {
         return basic::tuple_constant(nat(j, p, "arity"), nat(j, p, "domain_bound"), nat(j, p, "value"));
       }},
      {"y_mod_x", [](const J& j, const S& p) -> AnyColoring { return basic::y_mod_x(nat(j, p, "domain_bound")); }},
      {"last_parity", [](const J& j, const S& p) -> AnyColoring {
         return basic::last_parity(nat(j, p, "arity"), nat(j, p, "domain_bound"));
       }},
      {"first_mod", [](const J& j, const S& p) -> AnyColoring {
         return basic::first_mod(nat(j, p, "arity"), nat(j, p, "domain_bound"), nat(j, p, "m"));
       }},
      {"sum_mod", [](const J& j, const S& p) -> AnyColoring {
         return basic::sum_mod(nat(j, p, "arity"), nat(j, p, "domain_bound"), nat(j, p, "m"));
       }},
      {"min", [](const J& j, const S& p) -> AnyColoring {
         return basic::tuple_min(nat(j, p, "arity"), nat(j, p, "domain_bound"));
       }},
      {"code", [](const J& j, const S& p) -> AnyColoring {
         return basic::tuple_code(nat(j, p, "arity"), nat(j, p, "domain_bound"));
       }},
      {"tuple_hash_mod", [](const J& j, const S& p) -> AnyColoring {
         return basic::tuple_hash_mod(nat(j, p, "arity"), nat(j, p, "domain_bound"), nat(j, p, "seed"),
                                      nat(j, p, "k"));
       }},
      {"clip", [](const J& j, const S& p) -> AnyColoring {
         return clip_to_lambda_regressive(build_unary(need(j, p, "inner"), join_path(p, "inner")));
       }},
      {"guard_rt1", [](const J& j, const S& p) -> AnyColoring {
         return guard_rt1(build_unary(need(j, p, "inner"), join_path(p, "inner")), nat(j, p, "k"));
       }},
      {"mu_recolor", [](const J& j, const S& p) -> AnyColoring {
         return mu_recoloring(build_unary(need(j, p, "inner"), join_path(p, "inner")), nat(j, p, "k"),
                              nat(j, p, "domain_bound"));
       }},
      {"cplus_fixed", [](const J& j, const S& p) -> AnyColoring {
         return regressive_guard_fixed(build_tuple(need(j, p, "inner"), join_path(p, "inner")), nat(j, p, "k"));
       }},
      {"cplus_shift", [](const J& j, const S& p) -> AnyColoring {
         return regressive_guard_shift(build_tuple(need(j, p, "inner"), join_path(p, "inner")));
       }},
      {"sum_tuple", [](const J& j, const S& p) -> AnyColoring {
         return sum_tuple_coloring(build_unary(need(j, p, "inner"), join_path(p, "inner")), nat(j, p, "arity"));
       }},
      {"range", [](const J& j, const S& p) -> AnyColoring {
         try {
           return range_coloring(InjectiveFunctionTable(nat_list(j, p, "values")), nat(j, p, "domain_bound"));
         } catch (const SchemaError&) {
           throw;
         } catch (const ValidationError& e) {
           throw SchemaError(join_path(p, "values"), e.what());
         }
       }},
      {"wop", [](const J& j, const S& p) -> AnyColoring {
         return wop_coloring(sequence_from_json(j, p), nat(j, p, "domain_bound"));
       }},
  };
  return m;
}

inline AnyColoring build_coloring(const nlohmann::json& spec, const std::string& path) {
  const std::string name = text(spec, path, "builtin");
  const auto& b = builders();
  auto it = b.find(name);
  if (it == b.end()) throw SchemaError(join_path(path, "builtin"), "unknown builtin '" + name + "'");
  AnyColoring c = [&]() -> AnyColoring {
    try {
      return it->second(spec, path);
    } catch (const SchemaError&) {
      throw;
    } catch (const ValidationError& e) {
      throw SchemaError(path, e.what());
    }
  }();
  // Rebuilding must reproduce the input object exactly; anything else means stray or
  // inconsistent fields.
  const auto again = std::visit([](const auto& x) { return coloring_spec(x); }, c);
  if (again != spec) {
    for (const auto& [k, v] : spec.items())
      if (!again.contains(k)) throw SchemaError(join_path(path, k), "unexpected field");
    for (const auto& [k, v] : again.items())
      if (spec.at(k) != v) throw SchemaError(join_path(path, k), "inconsistent with the other fields");
  }
  return c;
}

inline void check_version(const nlohmann::json& j) {
  if (nat(j, "", "format_version") != kFormatVersion)
    throw SchemaError("format_version", "unsupported version (expected " + std::to_string(kFormatVersion) + ")");
}

}  // namespace detail

inline AnyColoring coloring_from_json(const nlohmann::json& spec) { return detail::build_coloring(spec, "coloring"); }

inline nlohmann::json coloring_spec(const AnyColoring& c) {
  return std::visit([](const auto& x) { return coloring_spec(x); }, c);
}

// ---------------------------------------------------------------------------
// Coloring files: {"format_version", "coloring"}

inline nlohmann::json coloring_file(const AnyColoring& c) {
  return {{"format_version", kFormatVersion}, {"coloring", coloring_spec(c)}};
}

inline AnyColoring read_coloring_file(const nlohmann::json& j) {
  detail::check_version(j);
  return detail::build_coloring(detail::need(j, "", "coloring"), "coloring");
}

// ---------------------------------------------------------------------------
// Instance files: {"format_version", "principle", "params", "payload"}

inline nlohmann::json instance_file(const PrincipleInstance& x) {
  auto j = instance_to_json(x);
  j["format_version"] = kFormatVersion;
  return j;
}

/// Parses an instance file and, when `validate` is set, runs the principle's
/// instance validator.
inline PrincipleInstance read_instance_file(const nlohmann::json& j, bool validate = true) {
  detail::check_version(j);
  const std::string principle = detail::text(j, "", "principle");
  if (!detail::known_principles().count(principle)) throw SchemaError("principle", "unknown principle '" + principle + "'");
  nlohmann::json params = nlohmann::json::object();
  if (j.contains("params")) {
    params = j.at("params");
    if (!params.is_object()) throw SchemaError("params", "expected an object");
  }
  const auto& payload = detail::need(j, "", "payload");
  for (const auto& [k, v] : j.items())
    if (k != "format_version" && k != "principle" && k != "params" && k != "payload")
      throw SchemaError(k, "unexpected field");

  auto make = [&]() -> InstancePayload {
    if (principle == "ran") {
      try {
        return InjectiveFunctionTable(detail::nat_list(payload, "payload", "table"));
      } catch (const SchemaError&) {
        throw;
      } catch (const ValidationError& e) {
        throw SchemaError("payload.table", e.what());
      }
    }
    if (principle == "wop") return detail::sequence_from_json(payload, "payload");
    const auto c = detail::build_coloring(detail::need(payload, "payload", "coloring"), "payload.coloring");
    const bool tuple = principle == "rt" || principle == "reg";
    if (tuple != std::holds_alternative<TupleColoring>(c))
      throw SchemaError("payload.coloring", principle + " expects a " + (tuple ? "tuple" : "unary") + " coloring");
    return std::visit([](const auto& x) -> InstancePayload { return x; }, c);
  };
  PrincipleInstance x{principle, params, make()};
  if (validate) {
    if (auto v = validate_instance(x); !v) throw ValidationError(principle + " instance invalid: " + v.detail);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Solution files: {"format_version", "solution": {"set" | "bound"+"range" | "sequence"}}

inline nlohmann::json solution_file(const PrincipleSolution& y) {
  return {{"format_version", kFormatVersion}, {"solution", solution_to_json(y)}};
}

inline PrincipleSolution solution_from_json(const nlohmann::json& s, const std::string& path = "solution") {
  if (!s.is_object()) throw SchemaError(path, "expected an object");
  try {
    if (s.contains("set")) return FiniteNatSet(detail::nat_list(s, path, "set"));
    if (s.contains("sequence")) return XSequence{detail::nat_list(s, path, "sequence")};
    if (s.contains("bound")) {
      RangeAnswer a;
      a.bound = detail::nat(s, path, "bound");
      a.member.assign(a.bound, false);
      for (Natural x : detail::nat_list(s, path, "range")) {
        if (x >= a.bound) throw SchemaError(detail::join_path(path, "range"), "entry beyond bound");
        a.member[x] = true;
      }
      return a;
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path, "expected one of 'set', 'sequence', 'bound'");
}

inline PrincipleSolution read_solution_file(const nlohmann::json& j) {
  detail::check_version(j);
  return solution_from_json(detail::need(j, "", "solution"));
}

// ---------------------------------------------------------------------------
// Disk helpers

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json(const std::string& body, const std::string& origin) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(origin, std::string("not valid JSON: ") + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << body;
}

}  // namespace hindreg
