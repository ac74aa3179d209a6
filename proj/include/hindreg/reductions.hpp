#pragma once

// Reductions as (phi, solve, psi) triples over the principle catalogue, the
// psi-side extractors, and the round-trip harness.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hindreg/bitsupport.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/constructions.hpp"
#include "hindreg/errors.hpp"
#include "hindreg/principles.hpp"
#include "hindreg/solvers.hpp"
#include "hindreg/wop_extract.hpp"

namespace hindreg {

// ---------------------------------------------------------------------------
// Extractors

namespace detail {

// Least index q with x < lambda(h_q), or nullopt.
inline std::optional<std::size_t> first_lambda_above(const FiniteNatSet& h, Natural x) {
  for (std::size_t q = 0; q < h.size(); ++q)
    if (x < lambda(h[q])) return q;
  return std::nullopt;
}

inline Natural window_sum(const FiniteNatSet& h, std::size_t i, std::size_t n) {
  Natural s = 0;
  for (std::size_t t = i; t < i + n; ++t) s = checked_add(s, h[t]);
  return s;
}

// Classes of `colors` (keyed by element) resolved through solve_rt1: largest
// class, ties to the smallest color.
inline FiniteNatSet largest_class(const std::vector<Natural>& elems, const std::vector<Natural>& colors) {
  if (elems.empty()) throw InsufficientData("no eligible elements left to color");
  std::map<Natural, Natural> color_of;
  Natural k = 1;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    color_of[elems[i]] = colors[i];
    k = std::max(k, colors[i] + 1);
  }
  const Natural bound = elems.back() + 1;
  const UnaryColoring g{bound, [color_of](Natural x) {
                          auto it = color_of.find(x);
                          return it == color_of.end() ? Natural{0} : it->second;
                        },
                        {"window_colors", {}}};
  std::map<Natural, std::size_t> count;
  for (Natural c : colors) ++count[c];
  std::size_t best = 0;
  for (const auto& [c, m] : count) best = std::max(best, m);
  const auto out = solve_rt1(g, k, FiniteNatSet(elems), best);
  return *out.solution;
}

}  // namespace detail

/// Membership of x in the range of f, read from the window below
/// mu(h_{i+n-1}) for the least usable i with x < lambda(h_i).
inline bool decode_range(const InjectiveFunctionTable& f, const FiniteNatSet& h, std::size_t n, Natural x) {
  if (n < 2 || h.size() < n + 1) throw InsufficientData("H too short to certify any query");
  const auto i = detail::first_lambda_above(h, x);
  if (!i || *i > h.size() - n - 1)
    throw InsufficientData("query " + std::to_string(x) + " out of certified window");
  const Natural window = mu(h[*i + n - 1]);
  for (std::size_t j = 0; j < f.size() && j < window; ++j)
    if (f(j) == x) return true;
  return false;
}

/// {mu(h_j) : j >= j* + n - 1} where j* is the least index with
/// lambda(h_{j*}) > k.
inline FiniteNatSet extract_mu_homog(const FiniteNatSet& h, Natural k, std::size_t n = 2) {
  if (n < 2) throw ValidationError("extract_mu_homog needs n >= 2");
  const auto j = detail::first_lambda_above(h, k);
  if (!j) throw InsufficientData("no element of H has lambda above k = " + std::to_string(k));
  if (*j + n - 1 >= h.size())
    throw InsufficientData("H has no elements past the guard window after index " + std::to_string(*j));
  std::vector<Natural> out;
  for (std::size_t q = *j + n - 1; q < h.size(); ++q) out.push_back(mu(h[q]));
  return FiniteNatSet(out);
}

/// Sums h'_1 + h'_t (t > 1) over a subset H' of FS(H) whose elements all have
/// lambda^- >= k.
inline FiniteNatSet rt1_pipeline_extract(const UnaryColoring& f, Natural k, const FiniteNatSet& h) {
  if (h.size() < 3) throw InsufficientData("H needs at least 3 elements");
  std::vector<Natural> j, rest;
  for (Natural x : h) (lambda_minus(x) < k ? j : rest).push_back(x);
  const bool initial = j.empty() || (j.back() < (rest.empty() ? ~Natural{0} : rest.front()));

  std::vector<Natural> hp;
  if (initial && rest.size() >= 3) {
    hp = rest;
  } else {
    unsigned top = 0;
    for (Natural x : j) top = std::max(top, lambda_minus(x));
    std::size_t m = 0;
    while (lambda_minus(j[m]) != top) ++m;
    for (std::size_t t = m; t + 1 < j.size(); t += 2) {
      const Natural s = checked_add(j[t], j[t + 1]);
      if (lambda_minus(s) < k)
        throw InternalContradiction("paired sum " + std::to_string(s) + " has lambda^- below k");
      hp.push_back(s);
    }
  }
  if (hp.size() < 3) throw InsufficientData("too few elements with lambda^- >= k");
  std::vector<Natural> out;
  for (std::size_t t = 1; t < hp.size(); ++t) out.push_back(checked_add(hp[0], hp[t]));
  const auto res = FiniteNatSet::from_unsorted(out);
  if (!res.empty() && res.back() >= f.domain_bound()) throw DomainError("extracted sums leave f's domain");
  return res;
}

/// Colors each eligible h_i by f on its width-n window and keeps the largest
/// class. Eligible: lambda(h_i) > k and the window fits in H.
inline FiniteNatSet ht_from_reght_extract(const UnaryColoring& f, Natural k, std::size_t n, const FiniteNatSet& h) {
  if (n == 0 || h.size() < n) throw InsufficientData("H shorter than the window width");
  const auto start = detail::first_lambda_above(h, k);
  if (!start || *start > h.size() - n) throw InsufficientData("no window starts above lambda threshold k");
  const auto g = clip_to_lambda_regressive(f);
  std::vector<Natural> elems, colors;
  for (std::size_t i = *start; i + n <= h.size(); ++i) {
    elems.push_back(h[i]);
    colors.push_back(g(detail::window_sum(h, i, n)));
  }
  return detail::largest_class(elems, colors);
}

/// Drops elements <= k, colors each remaining h_i by c on its window and keeps
/// the largest class.
inline FiniteNatSet rt_from_reg_extract(const TupleColoring& c, Natural k, const FiniteNatSet& h) {
  const std::size_t n = c.arity();
  std::vector<Natural> hp;
  for (Natural x : h)
    if (x > k) hp.push_back(x);
  if (hp.size() < n) throw InsufficientData("fewer than n elements above k");
  const auto plus = regressive_guard_fixed(c, k);
  std::vector<Natural> elems, colors;
  for (std::size_t i = 0; i + n <= hp.size(); ++i) {
    elems.push_back(hp[i]);
    colors.push_back(plus(std::span<const Natural>(hp.data() + i, n)));
  }
  auto out = detail::largest_class(elems, colors);
  if (out.size() < n) throw InsufficientData("largest window class has fewer than n elements");
  return out;
}

struct RtForAllKExtraction {
  FiniteNatSet set;
  std::size_t distinct_colors = 0;
  // The pair coloring was solved at a size that forces color 0.
  bool certified = false;
};

inline RtForAllKExtraction rt_forallk_from_reg_details(const TupleColoring& c, const FiniteNatSet& h) {
  const std::size_t n = c.arity();
  if (h.size() < std::max<std::size_t>(n, 4)) throw InsufficientData("H needs at least max(n, 4) elements");
  const auto plus = regressive_guard_shift(c);
  const auto& v = h.elements();
  std::map<Natural, Natural> w;
  std::vector<Natural> elems;
  for (std::size_t i = 0; i + n <= v.size(); ++i) {
    const Natural col = plus(std::span<const Natural>(v.data() + i, n));
    if (col == 0) continue;
    w[v[i]] = col;
    elems.push_back(v[i]);
  }
  if (elems.empty()) throw InsufficientData("every window has guard color 0");

  std::map<Natural, std::size_t> count;
  for (const auto& [x, col] : w) ++count[col];
  std::size_t best = 0;
  for (const auto& [col, m] : count) best = std::max(best, m);

  RtForAllKExtraction out{FiniteNatSet{}, count.size(), false};
  if (best > count.size()) {
    // Distinct window colors on `best` elements would need more than q
    // colors, so a homogeneous set of that size has pair color 0.
    const TupleColoring pair{2, elems.back() + 1,
                             [w](std::span<const Natural> t) { return w.at(t[0]) == w.at(t[1]) ? 0 : 1; },
                             {"same_window", {}}, 2};
    const auto r = solve_rt(pair, 2, FiniteNatSet(elems), best);
    if (!r.found()) throw InternalContradiction("no pair-homogeneous set of the largest class size");
    const auto& s = *r.solution;
    if (pair({s[0], s[1]}) == 1) throw InternalContradiction("pair coloring homogeneous in color 1");
    if (s.size() < n) throw InsufficientData("largest window class has fewer than n elements");
    out.set = s;
    out.certified = true;
    return out;
  }
  std::vector<Natural> colors;
  for (Natural x : elems) colors.push_back(w.at(x));
  out.set = detail::largest_class(elems, colors);
  if (out.set.size() < n) throw InsufficientData("largest window class has fewer than n elements");
  return out;
}

inline FiniteNatSet rt_forallk_from_reg_extract(const TupleColoring& c, const FiniteNatSet& h) {
  return rt_forallk_from_reg_details(c, h).set;
}

// ---------------------------------------------------------------------------
// Registry

enum class ReductionKind { StrongWeihrauch, Weihrauch, Computable };

inline std::string to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::StrongWeihrauch: return "sW";
    case ReductionKind::Weihrauch: return "W";
    case ReductionKind::Computable: return "c";
  }
  return "?";
}

struct SolveRequest {
  SearchBudget budget;
  std::size_t size = 0;
  std::optional<unsigned> min_lambda_h0;
};

struct ReductionSpec {
  std::string name;
  ReductionKind kind = ReductionKind::Weihrauch;
  std::string source, target;
  std::size_t n = 2;
  // phi(source, element_bound): element_bound sizes the constructed domain.
  std::function<PrincipleInstance(const PrincipleInstance&, Natural)> phi;
  std::function<std::size_t(const PrincipleInstance&)> default_size;
  std::function<SolverOutcome(const PrincipleInstance&, const SolveRequest&)> solve;
  // psi(source or nullptr, target, target solution). Throws InsufficientData
  // or ValidationError when H does not meet the extractor's preconditions.
  std::function<PrincipleSolution(const PrincipleInstance*, const PrincipleInstance&, const FiniteNatSet&)> psi;
};

namespace detail {

inline unsigned ceil_log2(std::size_t n) {
  unsigned e = 0;
  while ((std::size_t{1} << e) < n) ++e;
  return e;
}

// Smallest power-of-two domain holding every sum of n elements below bound.
inline Natural sum_domain(Natural element_bound, std::size_t n) {
  const unsigned extra = ceil_log2(n);
  if (!is_power_of_two(element_bound) || lambda(element_bound) + extra >= 64)
    throw ValidationError("element bound must be a power of two below 2^" + std::to_string(64 - extra));
  return element_bound << extra;
}

inline SearchBudget capped(SearchBudget b, Natural domain, std::size_t terms) {
  b.element_bound = std::min(b.element_bound, domain / terms);
  return b;
}

inline const PrincipleInstance& need_source(const PrincipleInstance* s, const std::string& name) {
  if (!s) throw ValidationError(name + ": psi needs the source instance");
  return *s;
}

inline nlohmann::json lreght_params(SumMode mode, bool apart) {
  return {{"mode", to_string(mode)}, {"apart", apart}};
}

inline HtConstraints with_min_lambda(HtConstraints c, const SolveRequest& r) {
  if (r.min_lambda_h0) c.min_lambda_h0 = *r.min_lambda_h0;
  return c;
}

inline SolverOutcome solve_lreght(const PrincipleInstance& t, const SolveRequest& r, HtConstraints cons) {
  const auto& g = t.unary();
  const SumMode mode = t.mode();
  const std::size_t terms = mode.kind == SumMode::Kind::All ? r.size : mode.n;
  return solve_lambda_reg_ht(g, mode, r.size, capped(r.budget, g.domain_bound(), terms), with_min_lambda(cons, r),
                             t.apart());
}

inline SolverOutcome solve_reg_target(const PrincipleInstance& t, const SolveRequest& r) {
  const auto& f = t.tuple();
  const auto ground = t.ground().value_or(FiniteNatSet::range(0, f.domain_bound()));
  return solve_reg(f, ground, r.size, r.budget.node_limit);
}

inline void add(std::map<std::string, ReductionSpec>& m, ReductionSpec s) {
  auto name = s.name;
  m.emplace(std::move(name), std::move(s));
}

inline void register_rt1k(std::map<std::string, ReductionSpec>& m, std::size_t n) {
  ReductionSpec s;
  s.name = "rt1k_to_reght" + std::to_string(n);
  s.kind = ReductionKind::StrongWeihrauch;
  s.source = "rt1";
  s.target = "lreght";
  s.n = n;
  s.phi = [n](const PrincipleInstance& x, Natural bound) {
    return PrincipleInstance{"lreght", lreght_params(SumMode::exactly(n), true),
                             mu_recoloring(x.unary(), x.param("k"), sum_domain(bound, n))};
  };
  s.default_size = [n](const PrincipleInstance& x) { return static_cast<std::size_t>(x.param("k")) + n + 3; };
  s.solve = [](const PrincipleInstance& t, const SolveRequest& r) {
    HtConstraints c;
    c.support_shape = true;
    return solve_lreght(t, r, c);
  };
  s.psi = [](const PrincipleInstance*, const PrincipleInstance& t, const FiniteNatSet& h) -> PrincipleSolution {
    const Natural k = coloring_spec(t.unary()).at("k").get<Natural>();
    return extract_mu_homog(h, k, t.mode().n);
  };
  add(m, std::move(s));
}

inline void register_reght_to_ht(std::map<std::string, ReductionSpec>& m, std::size_t n, bool exact) {
  ReductionSpec s;
  s.name = std::string("reght_to_ht_") + (exact ? "eq" : "le") + std::to_string(n);
  s.kind = ReductionKind::Weihrauch;
  s.source = "ht";
  s.target = "lreght";
  s.n = n;
  s.phi = [](const PrincipleInstance& x, Natural) {
    return PrincipleInstance{"lreght", lreght_params(x.mode(), true), clip_to_lambda_regressive(x.unary())};
  };
  s.default_size = [n](const PrincipleInstance& x) { return static_cast<std::size_t>(x.param("k")) + n + 3; };
  s.solve = [](const PrincipleInstance& t, const SolveRequest& r) { return solve_lreght(t, r, {}); };
  s.psi = [name = s.name](const PrincipleInstance* src, const PrincipleInstance&,
                          const FiniteNatSet& h) -> PrincipleSolution {
    const auto& x = need_source(src, name);
    return ht_from_reght_extract(x.unary(), x.param("k"), x.mode().n, h);
  };
  add(m, std::move(s));
}

inline void register_rtk_to_reg(std::map<std::string, ReductionSpec>& m, std::size_t n) {
  ReductionSpec s;
  s.name = "rtk_to_reg" + std::to_string(n);
  s.kind = ReductionKind::Weihrauch;
  s.source = "rt";
  s.target = "reg";
  s.n = n;
  s.phi = [n](const PrincipleInstance& x, Natural) {
    return PrincipleInstance{"reg", {{"n", n}}, regressive_guard_fixed(x.tuple(), x.param("k"))};
  };
  s.default_size = [n](const PrincipleInstance& x) { return static_cast<std::size_t>(x.param("k")) + n + 4; };
  s.solve = solve_reg_target;
  s.psi = [name = s.name](const PrincipleInstance* src, const PrincipleInstance&,
                          const FiniteNatSet& h) -> PrincipleSolution {
    const auto& x = need_source(src, name);
    return rt_from_reg_extract(x.tuple(), x.param("k"), h);
  };
  add(m, std::move(s));
}

inline void register_rt_to_reg(std::map<std::string, ReductionSpec>& m, std::size_t n) {
  ReductionSpec s;
  s.name = "rt_to_reg" + std::to_string(n);
  s.kind = ReductionKind::Weihrauch;
  s.source = "rt";
  s.target = "reg";
  s.n = n;
  s.phi = [n](const PrincipleInstance& x, Natural) {
    return PrincipleInstance{"reg", {{"n", n}}, regressive_guard_shift(x.tuple())};
  };
  s.default_size = [n](const PrincipleInstance&) { return n + 6; };
  s.solve = solve_reg_target;
  s.psi = [name = s.name](const PrincipleInstance* src, const PrincipleInstance&,
                          const FiniteNatSet& h) -> PrincipleSolution {
    return rt_forallk_from_reg_extract(need_source(src, name).tuple(), h);
  };
  add(m, std::move(s));
}

inline void register_reght_to_reg(std::map<std::string, ReductionSpec>& m, std::size_t n) {
  ReductionSpec s;
  s.name = "reght_to_reg" + std::to_string(n);
  s.kind = ReductionKind::StrongWeihrauch;
  s.source = "lreght";
  s.target = "reg";
  s.n = n;
  s.phi = [n](const PrincipleInstance& x, Natural bound) {
    if (x.mode() != SumMode::exactly(n) || !x.apart())
      throw ValidationError("source must be lreght with exactly " + std::to_string(n) + " summands and apartness");
    auto f = sum_tuple_coloring(x.unary(), n);
    std::vector<Natural> ground;
    for (unsigned e = 0; e < 64 && pow2(e) < std::min(bound, f.domain_bound()); ++e) ground.push_back(pow2(e));
    return PrincipleInstance{"reg", {{"n", n}, {"ground", ground}}, std::move(f)};
  };
  s.default_size = [n](const PrincipleInstance&) { return n + 3; };
  s.solve = solve_reg_target;
  s.psi = [](const PrincipleInstance*, const PrincipleInstance&, const FiniteNatSet& h) -> PrincipleSolution {
    return h;
  };
  add(m, std::move(s));
}

// Certified query bound: every x below it has a usable index.
inline Natural certified_bound(const FiniteNatSet& h, std::size_t n) {
  if (h.size() < n + 1) return 0;
  return lambda(h[h.size() - n - 1]);
}

inline void register_ran(std::map<std::string, ReductionSpec>& m, std::size_t n) {
  ReductionSpec s;
  s.name = "ran_to_reght" + std::to_string(n);
  s.kind = ReductionKind::StrongWeihrauch;
  s.source = "ran";
  s.target = "lreght";
  s.n = n;
  s.phi = [n](const PrincipleInstance& x, Natural bound) {
    return PrincipleInstance{"lreght", lreght_params(SumMode::exactly(n), true),
                             range_coloring(x.table(), sum_domain(bound, n))};
  };
  s.default_size = [n](const PrincipleInstance&) { return n + 2; };
  s.solve = [](const PrincipleInstance& t, const SolveRequest& r) {
    HtConstraints c;
    c.support_shape = true;
    c.min_lambda_h0 = 2;
    c.last_mu_at_least =
        static_cast<unsigned>(coloring_spec(t.unary()).at("values").get<std::vector<Natural>>().size());
    return solve_lreght(t, r, c);
  };
  s.psi = [n](const PrincipleInstance*, const PrincipleInstance& t, const FiniteNatSet& h) -> PrincipleSolution {
    // Only the target coloring's parameters are consulted.
    const InjectiveFunctionTable f(coloring_spec(t.unary()).at("values").get<std::vector<Natural>>());
    if (h.size() < n + 1) throw InsufficientData("H needs at least n + 1 elements");
    if (lambda(h.front()) <= 1) throw InsufficientData("lambda(h_0) must exceed 1");
    if (mu(h.back()) < f.size())
      throw InsufficientData("mu(h_last) = " + std::to_string(mu(h.back())) + " below table length " +
                             std::to_string(f.size()));
    RangeAnswer a;
    a.bound = certified_bound(h, n);
    for (Natural x = 0; x < a.bound; ++x) a.member.push_back(decode_range(f, h, n, x));
    return a;
  };
  add(m, std::move(s));
}

inline void register_wop(std::map<std::string, ReductionSpec>& m, std::size_t n) {
  ReductionSpec s;
  s.name = "wop_to_reght" + std::to_string(n);
  s.kind = ReductionKind::Weihrauch;
  s.source = "wop";
  s.target = "lreght";
  s.n = n;
  s.phi = [n](const PrincipleInstance& x, Natural) {
    return PrincipleInstance{"lreght", lreght_params(SumMode::exactly(n), true), wop_coloring(x.sequence(), pow2(63))};
  };
  s.default_size = [n](const PrincipleInstance&) { return n + 4; };
  s.solve = [](const PrincipleInstance& t, const SolveRequest& r) {
    const auto spec = coloring_spec(t.unary());
    std::size_t len = 0;
    for (const auto& term : spec.at("terms")) len += term.size();
    HtConstraints c;
    c.support_shape = true;
    c.last_mu_at_least = static_cast<unsigned>(len + 1);
    return solve_lreght(t, r, c);
  };
  s.psi = [name = s.name, n](const PrincipleInstance* src, const PrincipleInstance&,
                             const FiniteNatSet& h) -> PrincipleSolution {
    return XSequence{extract_descending(need_source(src, name).sequence(), h, n).sigma};
  };
  add(m, std::move(s));
}

inline ReductionSpec reght_to_rt1_spec(std::string name) {
  ReductionSpec s;
  s.name = std::move(name);
  s.kind = ReductionKind::Weihrauch;
  s.source = "rt1";
  s.target = "lreght";
  s.n = 4;
  s.phi = [](const PrincipleInstance& x, Natural) {
    return PrincipleInstance{"lreght", lreght_params(SumMode::at_most(4), false), guard_rt1(x.unary(), x.param("k"))};
  };
  s.default_size = [](const PrincipleInstance& x) { return static_cast<std::size_t>(x.param("k")) + 4; };
  s.solve = [](const PrincipleInstance& t, const SolveRequest& r) { return solve_lreght(t, r, {}); };
  s.psi = [nm = s.name](const PrincipleInstance* src, const PrincipleInstance&,
                        const FiniteNatSet& h) -> PrincipleSolution {
    const auto& x = need_source(src, nm);
    return rt1_pipeline_extract(x.unary(), x.param("k"), h);
  };
  return s;
}

}  // namespace detail

inline const std::map<std::string, ReductionSpec>& reduction_registry() {
  static const auto registry = [] {
    std::map<std::string, ReductionSpec> m;
    for (std::size_t n : {2, 3}) {
      detail::register_rt1k(m, n);
      detail::register_reght_to_ht(m, n, false);
      detail::register_reght_to_ht(m, n, true);
      detail::register_rtk_to_reg(m, n);
      detail::register_rt_to_reg(m, n);
      detail::register_reght_to_reg(m, n);
      detail::register_ran(m, n);
      detail::register_wop(m, n);
    }
    detail::add(m, detail::reght_to_rt1_spec("reght_to_rt1"));
    detail::add(m, detail::reght_to_rt1_spec("regHT_to_rt1"));
    return m;
  }();
  return registry;
}

inline const ReductionSpec& find_reduction(const std::string& name) {
  const auto& r = reduction_registry();
  auto it = r.find(name);
  if (it == r.end()) throw ValidationError("unknown reduction '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Harness

struct VerifyOptions {
  std::optional<std::size_t> size;
  std::optional<unsigned> min_lambda_h0;
};

struct VerificationReport {
  std::string reduction;
  ReductionKind kind = ReductionKind::Weihrauch;
  std::string source, target;
  nlohmann::json instance;
  nlohmann::json target_instance;
  Check instance_valid;
  std::optional<Check> target_instance_valid;
  std::optional<SolverOutcome> solver;
  std::size_t requested_size = 0;
  std::optional<Check> target_solution_valid;
  std::optional<Check> preconditions;
  std::optional<PrincipleSolution> psi_output;
  std::optional<Check> solution_valid;
  std::optional<bool> psi_source_free;
  double wall_clock_ms = 0;

  // Every verdict that was reached holds and the pipeline reached the end.
  bool all_verdicts_true() const {
    return instance_valid.ok && target_instance_valid && target_instance_valid->ok && target_solution_valid &&
           target_solution_valid->ok && preconditions && preconditions->ok && solution_valid && solution_valid->ok &&
           psi_source_free.value_or(true);
  }
};

namespace detail {

inline nlohmann::json check_json(const std::optional<Check>& c) {
  if (!c) return nullptr;
  nlohmann::json j{{"ok", c->ok}};
  if (!c->detail.empty()) j["detail"] = c->detail;
  return j;
}

}  // namespace detail

inline nlohmann::json to_json(const SolverOutcome& o) {
  nlohmann::json j{{"status", to_string(o.status)}, {"nodes_explored", o.nodes_explored}};
  j["solution"] = o.solution ? nlohmann::json(o.solution->elements()) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const VerificationReport& r, bool with_timing = true) {
  nlohmann::json j;
  j["reduction"] = r.reduction;
  j["kind"] = to_string(r.kind);
  j["source"] = r.source;
  j["target"] = r.target;
  j["instance"] = r.instance;
  j["phi"] = r.target_instance;
  j["solver"] = r.solver ? to_json(*r.solver) : nlohmann::json(nullptr);
  j["requested_size"] = r.requested_size;
  j["psi_output"] = r.psi_output ? solution_to_json(*r.psi_output) : nlohmann::json(nullptr);
  j["verdicts"] = {{"instance_valid", detail::check_json(r.instance_valid)},
                   {"target_instance_valid", detail::check_json(r.target_instance_valid)},
                   {"target_solution_valid", detail::check_json(r.target_solution_valid)},
                   {"preconditions", detail::check_json(r.preconditions)},
                   {"solution_valid", detail::check_json(r.solution_valid)},
                   {"psi_source_free", r.psi_source_free ? nlohmann::json(*r.psi_source_free) : nullptr}};
  j["all_verdicts_true"] = r.all_verdicts_true();
  if (with_timing) j["wall_clock_ms"] = r.wall_clock_ms;
  return j;
}

/// Phi, target validation, solve, psi, source validation. A set_size above 1
/// in the budget overrides the reduction's default size.
inline VerificationReport verify_reduction(const std::string& name, const PrincipleInstance& instance,
                                           const SearchBudget& budget, const VerifyOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const ReductionSpec& spec = find_reduction(name);
  VerificationReport r;
  r.reduction = spec.name;
  r.kind = spec.kind;
  r.source = spec.source;
  r.target = spec.target;
  r.instance = instance_to_json(instance);
  auto finish = [&]() -> VerificationReport {
    r.wall_clock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };

  r.instance_valid = instance.principle == spec.source
                         ? validate_instance(instance)
                         : fail("instance is for '" + instance.principle + "', reduction expects '" + spec.source + "'");
  if (!r.instance_valid) return finish();

  std::optional<PrincipleInstance> target;
  try {
    target = spec.phi(instance, budget.element_bound);
    r.target_instance = instance_to_json(*target);
    r.target_instance_valid = validate_instance(*target);
  } catch (const InternalContradiction&) {
    throw;
  } catch (const Error& e) {
    r.target_instance_valid = fail(e.what());
  }
  if (!r.target_instance_valid->ok) return finish();

  SolveRequest req{budget, 0, opts.min_lambda_h0};
  req.size = opts.size ? *opts.size : (budget.set_size > 1 ? budget.set_size : spec.default_size(instance));
  r.requested_size = req.size;
  r.solver = spec.solve(*target, req);
  if (!r.solver->found()) return finish();
  const FiniteNatSet& h = *r.solver->solution;
  r.target_solution_valid = validate_solution(*target, h);
  if (!r.target_solution_valid->ok) return finish();

  try {
    r.psi_output = spec.psi(&instance, *target, h);
    r.preconditions = Check{};
  } catch (const InsufficientData& e) {
    r.preconditions = fail(e.what());
  } catch (const ValidationError& e) {
    r.preconditions = fail(e.what());
  }
  if (!r.psi_output) return finish();
  r.solution_valid = validate_solution(instance, *r.psi_output);
  if (spec.kind == ReductionKind::StrongWeihrauch) {
    const auto blind = spec.psi(nullptr, *target, h);
    r.psi_source_free = blind == *r.psi_output;
  }
  return finish();
}

}  // namespace hindreg
