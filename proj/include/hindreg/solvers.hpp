#pragma once

// Brute-force finite solvers. Each search visits candidate elements in
// ascending order and builds sets smallest-first, so the first completed set
// is the lexicographically least solution. Every found set is re-checked
// against the predicates in colorings.hpp before it is returned.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hindreg/bitsupport.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/errors.hpp"

namespace hindreg {

inline constexpr std::uint64_t kDefaultNodeLimit = 50'000'000;

struct SearchBudget {
  Natural element_bound = Natural{1} << 20;  // exclusive
  std::size_t set_size = 1;
  std::uint64_t node_limit = kDefaultNodeLimit;
  std::optional<FiniteNatSet> ground_set;  // candidates are drawn from here when set
};

enum class SolverStatus { Found, Exhausted, BudgetExceeded };

inline std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Found: return "found";
    case SolverStatus::Exhausted: return "exhausted";
    case SolverStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

struct SolverOutcome {
  SolverStatus status = SolverStatus::Exhausted;
  std::optional<FiniteNatSet> solution;
  std::uint64_t nodes_explored = 0;

  bool found() const noexcept { return status == SolverStatus::Found; }
};

struct HtConstraints {
  unsigned min_lambda_h0 = 0;
  std::optional<unsigned> last_mu_at_least;
  // Candidates restricted to 2^a + 2^b; only for (lambda, mu)-determined
  // colorings.
  bool support_shape = false;
};

// ---------------------------------------------------------------------------
// RT^1

inline SolverOutcome solve_rt1(const UnaryColoring& c, Natural k, const FiniteNatSet& domain, std::size_t size) {
  if (k == 0) throw ValidationError("solve_rt1 needs k >= 1");
  SolverOutcome out;
  std::map<Natural, std::vector<Natural>> classes;
  for (Natural x : domain) {
    ++out.nodes_explored;
    const Natural v = c(x);
    if (v >= k) throw ValidationError("color " + std::to_string(v) + " at " + std::to_string(x) + " is not below k");
    classes[v].push_back(x);
  }
  const std::vector<Natural>* best = nullptr;
  for (const auto& [color, members] : classes)
    if (best == nullptr || members.size() > best->size()) best = &members;
  if (best == nullptr || best->size() < size) return out;
  out.status = SolverStatus::Found;
  out.solution = FiniteNatSet(std::vector<Natural>(best->begin(), best->begin() + static_cast<std::ptrdiff_t>(size)));
  return out;
}

// ---------------------------------------------------------------------------
// Tuple searches (RT^n_k and REG^n)

namespace detail {

enum class Agreement { Global, ByMin };

class TupleSearch {
 public:
  TupleSearch(const TupleColoring& f, std::optional<Natural> k, const FiniteNatSet& domain, std::size_t size,
              std::uint64_t node_limit, Agreement agreement)
      : f_(f), k_(k), domain_(domain), size_(size), node_limit_(node_limit), agreement_(agreement),
        color_(size), stamp_(size, 0), tuple_(f.arity()) {}

  SolverOutcome run() {
    SolverOutcome out;
    if (size_ < f_.arity()) throw ValidationError("set size below coloring arity");
    if (size_ > domain_.size()) return out;
    const bool found = dfs(0);
    out.nodes_explored = nodes_;
    if (over_) {
      out.status = SolverStatus::BudgetExceeded;
    } else if (found) {
      out.status = SolverStatus::Found;
      out.solution = FiniteNatSet(chosen_);
    }
    return out;
  }

 private:
  bool dfs(std::size_t start) {
    const std::size_t depth = chosen_.size();
    if (depth == size_) return true;
    const std::size_t need = size_ - depth;
    for (std::size_t ci = start; ci + need <= domain_.size(); ++ci) {
      if (++nodes_ > node_limit_) {
        over_ = true;
        return false;
      }
      chosen_.push_back(domain_[ci]);
      if (admit() && dfs(ci + 1)) return true;
      chosen_.pop_back();
      unwind(chosen_.size());
      if (over_) return false;
    }
    return false;
  }

  // Colors every tuple whose largest element is the new one.
  bool admit() {
    const std::size_t p = chosen_.size() - 1;
    const std::size_t stamp = chosen_.size();
    const std::size_t r = f_.arity() - 1;
    if (p < r) return true;
    return for_each_combination(p, r, [&](std::span<const std::size_t> idx) {
      for (std::size_t i = 0; i < r; ++i) tuple_[i] = chosen_[idx[i]];
      tuple_[r] = chosen_[p];
      const Natural v = f_(tuple_);
      if (k_ && v >= *k_)
        throw ValidationError("color " + std::to_string(v) + " is not below k = " + std::to_string(*k_));
      const std::size_t slot = agreement_ == Agreement::Global ? 0 : (r == 0 ? p : idx[0]);
      if (stamp_[slot] == 0) {
        color_[slot] = v;
        stamp_[slot] = stamp;
        return true;
      }
      return color_[slot] == v;
    });
  }

  void unwind(std::size_t depth) {
    for (std::size_t i = 0; i < size_; ++i)
      if (stamp_[i] > depth) stamp_[i] = 0;
  }

  const TupleColoring& f_;
  std::optional<Natural> k_;
  const FiniteNatSet& domain_;
  std::size_t size_;
  std::uint64_t node_limit_;
  Agreement agreement_;
  std::vector<Natural> chosen_;
  std::vector<Natural> color_;
  std::vector<std::size_t> stamp_;  // depth that recorded the color, 0 = none
  std::vector<Natural> tuple_;
  std::uint64_t nodes_ = 0;
  bool over_ = false;
};

}  // namespace detail

/// Lexicographically least homogeneous subset of `domain` of the given size.
inline SolverOutcome solve_rt(const TupleColoring& f, Natural k, const FiniteNatSet& domain, std::size_t size,
                              std::uint64_t node_limit = kDefaultNodeLimit) {
  if (k == 0) throw ValidationError("solve_rt needs k >= 1");
  auto out = detail::TupleSearch(f, k, domain, size, node_limit, detail::Agreement::Global).run();
  if (out.found() && !is_homogeneous(f, *out.solution))
    throw InternalContradiction("solve_rt produced a non-homogeneous set " + to_string(*out.solution));
  return out;
}

/// Lexicographically least min-homogeneous subset. Rejects non-regressive f
/// up front.
inline SolverOutcome solve_reg(const TupleColoring& f, const FiniteNatSet& domain, std::size_t size,
                               std::uint64_t node_limit = kDefaultNodeLimit) {
  if (auto r = is_regressive(f, domain); !r) {
    std::string w;
    for (Natural x : *r.witness) w += (w.empty() ? "" : ",") + std::to_string(x);
    throw ValidationError("coloring is not regressive on the domain; witness (" + w + ")");
  }
  auto out = detail::TupleSearch(f, std::nullopt, domain, size, node_limit, detail::Agreement::ByMin).run();
  if (out.found() && !is_min_homogeneous(f, *out.solution))
    throw InternalContradiction("solve_reg produced a non-min-homogeneous set " + to_string(*out.solution));
  return out;
}

// ---------------------------------------------------------------------------
// Finite-sums searches (HT and lambda-regressive HT)

namespace detail {

class SumSearch {
 public:
  SumSearch(const UnaryColoring& c, SumMode mode, std::size_t size, const SearchBudget& budget, bool apart,
            Agreement agreement, HtConstraints cons)
      : c_(c), mode_(mode), size_(size), budget_(budget), apart_(apart), agreement_(agreement), cons_(cons),
        color_(size), stamp_(size, 0) {
    if (cons_.support_shape) {
      if (!c_.lambda_mu_determined())
        throw ValidationError("support-shape search needs a (lambda, mu)-determined coloring");
      if (budget_.ground_set) throw ValidationError("support-shape search ignores ground sets; drop one");
      apart_ = true;
    }
    max_terms_ = mode_.max_size(size_);
  }

  SolverOutcome run() {
    SolverOutcome out;
    if (size_ == 0) throw ValidationError("set size must be >= 1");
    const bool found = dfs();
    out.nodes_explored = nodes_;
    if (over_) {
      out.status = SolverStatus::BudgetExceeded;
    } else if (found) {
      out.status = SolverStatus::Found;
      out.solution = FiniteNatSet(chosen_);
    }
    return out;
  }

 private:
  struct Entry {
    Natural sum;
    std::size_t terms;
    std::size_t min_index;
  };

  unsigned lambda_floor() const {
    if (chosen_.empty()) return cons_.min_lambda_h0;
    return apart_ ? mu(chosen_.back()) + 1 : 0;
  }

  // Least admissible candidate strictly above `after`.
  std::optional<Natural> next_candidate(Natural after) const {
    const Natural floor = chosen_.empty() ? 0 : chosen_.back();
    const Natural lo = std::max(after, floor);
    const unsigned lam = lambda_floor();
    if (budget_.ground_set) {
      const auto& g = *budget_.ground_set;
      for (auto it = std::upper_bound(g.begin(), g.end(), lo); it != g.end(); ++it) {
        if (*it == 0 || *it >= budget_.element_bound) continue;
        if (lambda(*it) >= lam) return *it;
      }
      return std::nullopt;
    }
    if (lam >= 63) return std::nullopt;
    if (cons_.support_shape) {
      for (unsigned b = lam; b < 63; ++b) {
        if (pow2(b) >= budget_.element_bound) return std::nullopt;
        if (pow2(b) > lo) return pow2(b);
        for (unsigned a = lam; a < b; ++a) {
          const Natural x = pow2(b) + pow2(a);
          if (x >= budget_.element_bound) return std::nullopt;
          if (x > lo) return x;
        }
      }
      return std::nullopt;
    }
    const Natural step = pow2(lam);
    const Natural x = (lo / step + 1) * step;
    if (x < lo || x >= budget_.element_bound) return std::nullopt;
    return x;
  }

  bool dfs() {
    const std::size_t depth = chosen_.size();
    if (depth == size_) return true;
    const bool last = depth + 1 == size_;
    Natural after = 0;
    while (auto cand = next_candidate(after)) {
      after = *cand;
      if (++nodes_ > budget_.node_limit) {
        over_ = true;
        return false;
      }
      if (last && cons_.last_mu_at_least && mu(*cand) < *cons_.last_mu_at_least) continue;
      const std::size_t mark = entries_.size();
      chosen_.push_back(*cand);
      if (admit() && (last || lookahead()) && dfs()) return true;
      chosen_.pop_back();
      entries_.resize(mark);
      unwind(chosen_.size());
      if (over_) return false;
    }
    return false;
  }

  bool record(std::size_t slot, Natural v) {
    if (stamp_[slot] == 0) {
      color_[slot] = v;
      stamp_[slot] = chosen_.size();
      return true;
    }
    return color_[slot] == v;
  }

  // Colors every admitted sum that uses the new element.
  bool admit() {
    const std::size_t p = chosen_.size() - 1;
    const Natural x = chosen_[p];
    const std::size_t old = entries_.size();
    std::vector<Entry> fresh{{x, 1, p}};
    for (std::size_t e = 0; e < old; ++e)
      if (entries_[e].terms + 1 <= max_terms_)
        fresh.push_back({checked_add(entries_[e].sum, x), entries_[e].terms + 1, entries_[e].min_index});
    for (const Entry& e : fresh) {
      if (!mode_.admits(e.terms)) continue;
      const std::size_t slot = agreement_ == Agreement::Global ? 0 : e.min_index;
      if (!record(slot, c_(e.sum))) return false;
    }
    for (const Entry& e : fresh)
      if (e.terms < max_terms_) entries_.push_back(e);
    return true;
  }

  // With a determined coloring, the final element's mu fixes the color of
  // every sum that contains it. Some mu in reach must match every recorded
  // min-index color that such sums will meet.
  bool lookahead() const {
    if (!cons_.support_shape || !cons_.last_mu_at_least || agreement_ != Agreement::ByMin) return true;
    const std::size_t depth = chosen_.size();
    const std::size_t span = mode_.kind == SumMode::Kind::Exactly ? mode_.n : 2;
    if (span < 2 || size_ < span || !mode_.admits(span)) return true;
    const std::size_t last_k = size_ - span;
    const unsigned lo = std::max<unsigned>(*cons_.last_mu_at_least, mu(chosen_.back()) + (size_ - depth));
    for (unsigned m = lo; m < 63 && pow2(m) < budget_.element_bound; ++m) {
      bool ok = true;
      for (std::size_t k = 0; k <= last_k && k < depth && ok; ++k) {
        if (stamp_[k] == 0) continue;
        const unsigned l = lambda(chosen_[k]);
        const Natural rep = pow2(l) + pow2(m);
        if (rep >= c_.domain_bound()) {
          ok = false;
          break;
        }
        ok = c_(rep) == color_[k];
      }
      if (ok) return true;
    }
    return false;
  }

  void unwind(std::size_t depth) {
    for (std::size_t i = 0; i < size_; ++i)
      if (stamp_[i] > depth) stamp_[i] = 0;
  }

  const UnaryColoring& c_;
  SumMode mode_;
  std::size_t size_;
  const SearchBudget& budget_;
  bool apart_;
  Agreement agreement_;
  HtConstraints cons_;
  std::size_t max_terms_ = 0;
  std::vector<Natural> chosen_;
  std::vector<Entry> entries_;  // sums of subsets of chosen_ that can still grow
  std::vector<Natural> color_;
  std::vector<std::size_t> stamp_;
  std::uint64_t nodes_ = 0;
  bool over_ = false;
};

}  // namespace detail

/// Lexicographically least set of positive naturals (apart when required)
/// whose sums in the given family all share one color.
inline SolverOutcome solve_ht(const UnaryColoring& c, const SumMode& mode, std::size_t size,
                              const SearchBudget& budget, bool require_apart) {
  auto out = detail::SumSearch(c, mode, size, budget, require_apart, detail::Agreement::Global, {}).run();
  if (out.found()) {
    if (require_apart && !is_apart(*out.solution).apart)
      throw InternalContradiction("solve_ht produced a non-apart set");
    if (!is_homogeneous(c, *out.solution, UnaryFamily::fs(mode)))
      throw InternalContradiction("solve_ht produced a non-homogeneous set " + to_string(*out.solution));
  }
  return out;
}

/// Lexicographically least apart set that is min-term-homogeneous for c in
/// the given family and meets the constraints.
inline SolverOutcome solve_lambda_reg_ht(const UnaryColoring& c, const SumMode& mode, std::size_t size,
                                         const SearchBudget& budget, const HtConstraints& cons,
                                         bool require_apart = true) {
  if (size < 2) throw ValidationError("solve_lambda_reg_ht needs size >= 2");
  if (auto r = is_lambda_regressive(c); !r)
    throw ValidationError("coloring is not lambda-regressive; witness n = " + std::to_string(*r.witness));
  auto out = detail::SumSearch(c, mode, size, budget, require_apart, detail::Agreement::ByMin, cons).run();
  if (out.found()) {
    const FiniteNatSet& h = *out.solution;
    if ((require_apart || cons.support_shape) && !is_apart(h).apart)
      throw InternalContradiction("solve_lambda_reg_ht produced a non-apart set");
    if (lambda(h.front()) < cons.min_lambda_h0 ||
        (cons.last_mu_at_least && mu(h.back()) < *cons.last_mu_at_least))
      throw InternalContradiction("solve_lambda_reg_ht ignored its constraints");
    if (!is_min_term_homogeneous(c, h, mode))
      throw InternalContradiction("solve_lambda_reg_ht produced a non-min-term-homogeneous set " + to_string(h));
  }
  return out;
}

}  // namespace hindreg
