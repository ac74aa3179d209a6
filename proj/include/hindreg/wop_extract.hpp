#pragma once

// Reading a descending sequence in X off an apart solution for the coloring
// built by wop_coloring.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hindreg/bitsupport.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/constructions.hpp"
#include "hindreg/errors.hpp"
#include "hindreg/wop.hpp"

namespace hindreg {

struct DescentExtraction {
  std::vector<Natural> sigma;
  // Per emitted element: the stream index i it came from and the j that
  // decreases it (both 1-based).
  std::vector<std::pair<std::size_t, std::size_t>> rounds;
  // True when extraction stopped because a candidate index was not below
  // lambda(h_k) for any usable k, rather than because nothing decreases.
  bool hit_horizon = false;
};

/// Checks the preconditions on H (apart, positive, |H| >= n + 1,
/// mu(h_last) beyond the stream, min-term-homogeneous for exactly n) and
/// throws ValidationError naming the failed one.
inline void check_wop_solution(const DescendingSequence& alpha, const ExponentStream& s, const FiniteNatSet& h,
                               std::size_t n) {
  if (n < 2) throw ValidationError("extract_descending needs n >= 2");
  if (h.size() < n + 1)
    throw ValidationError("H has " + std::to_string(h.size()) + " elements; need at least n + 1 = " +
                          std::to_string(n + 1));
  if (h.front() == 0) throw ValidationError("H must consist of positive naturals");
  if (auto a = is_apart(h); !a.apart)
    throw ValidationError("H is not apart at (" + std::to_string(a.violation->first) + ", " +
                          std::to_string(a.violation->second) + ")");
  if (mu(h.back()) <= s.length())
    throw ValidationError("mu(h_last) = " + std::to_string(mu(h.back())) + " does not exceed stream length " +
                          std::to_string(s.length()));
  if (mu(h.back()) >= 63) throw ValidationError("H exceeds 63-bit sums");
  const UnaryColoring c = wop_coloring(alpha, pow2(63));
  if (auto v = is_min_term_homogeneous(c, h, SumMode::exactly(n)); !v)
    throw ValidationError("H is not min-term-homogeneous for exactly " + std::to_string(n) + " summands");
}

/// Repeatedly finds the leftmost decreasible position (at or after the last
/// one) of the current term, emits its exponent and jumps to the term holding
/// the decreaser. Decreasers are only searched below mu(h_{k+n-1}), where h_k
/// is the least element with the candidate index below lambda(h_k); k must
/// leave a later element of H to certify that bound.
inline DescentExtraction extract_descending(const DescendingSequence& alpha, const FiniteNatSet& h, std::size_t n) {
  if (auto v = validate_descending(alpha); !v)
    throw ValidationError("alpha is not strictly descending at term " + std::to_string(*v.witness));
  const ExponentStream s = exponent_stream(alpha);
  check_wop_solution(alpha, s, h, n);

  const std::size_t usable = h.size() - n - 1;  // largest usable k
  DescentExtraction out;
  std::size_t term = 1, min_pos = 1;
  while (true) {
    bool advanced = false;
    for (std::size_t i = 1; i <= s.length(); ++i) {
      if (s.m(i) != term || s.pos(i) < min_pos) continue;
      std::optional<std::size_t> k;
      for (std::size_t q = 0; q < h.size(); ++q) {
        if (i < lambda(h[q])) {
          k = q;
          break;
        }
      }
      if (!k || *k > usable) {
        out.hit_horizon = true;
        break;
      }
      const std::size_t bound = mu(h[*k + n - 1]);
      const auto j = find_decreaser(s, i, bound == 0 ? 0 : bound - 1);
      if (!j) continue;
      if (!out.sigma.empty() && !(s.beta(i) < out.sigma.back()))
        throw InternalContradiction("extracted sequence fails to descend at round " +
                                    std::to_string(out.sigma.size() + 1));
      out.sigma.push_back(s.beta(i));
      out.rounds.emplace_back(i, *j);
      term = s.m(*j);
      min_pos = s.pos(i);
      advanced = true;
      break;
    }
    if (!advanced) break;
  }
  return out;
}

}  // namespace hindreg
