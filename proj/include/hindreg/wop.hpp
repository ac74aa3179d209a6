#pragma once

// Linear orders, Cantor-normal-form terms of omega^X, descending sequences,
// and the exponent stream (beta, m, pos) that flattens a sequence of terms.
//
// Stream and term indices are 1-based throughout this header: beta(1) is the
// first exponent of the first term. Serialized forms are 0-based.

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hindreg/bitsupport.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/errors.hpp"

namespace hindreg {

/// Either {0 < 1 < ... < size-1} or the unbounded order omega.
class LinearOrder {
 public:
  static LinearOrder finite(Natural size) { return LinearOrder(false, size); }
  static LinearOrder omega() { return LinearOrder(true, 0); }

  bool is_omega() const noexcept { return omega_; }
  Natural size() const noexcept { return size_; }
  bool contains(Natural x) const noexcept { return omega_ || x < size_; }

  std::strong_ordering compare(Natural a, Natural b) const {
    if (!contains(a) || !contains(b)) throw ValidationError("element outside linear order");
    return a <=> b;
  }

  bool operator==(const LinearOrder&) const = default;

 private:
  LinearOrder(bool omega, Natural size) : omega_(omega), size_(size) {}
  bool omega_;
  Natural size_;
};

inline std::string to_string(const LinearOrder& x) {
  return x.is_omega() ? std::string("omega") : "finite(" + std::to_string(x.size()) + ")";
}

/// omega^{x_0} + ... + omega^{x_s} with x_0 >= ... >= x_s.
class OmegaTerm {
 public:
  OmegaTerm(LinearOrder order, std::vector<Natural> exponents)
      : order_(order), exponents_(std::move(exponents)) {
    if (exponents_.empty()) throw ValidationError("omega term needs at least one exponent");
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      if (!order_.contains(exponents_[i]))
        throw ValidationError("exponent " + std::to_string(exponents_[i]) + " not in " + to_string(order_));
      if (i > 0 && exponents_[i - 1] < exponents_[i])
        throw ValidationError("exponents not weakly decreasing at component " + std::to_string(i));
    }
  }

  const LinearOrder& order() const noexcept { return order_; }
  std::size_t length() const noexcept { return exponents_.size(); }
  // 1-based component exponent e((sigma)_j).
  Natural exponent(std::size_t j) const { return exponents_.at(j - 1); }
  const std::vector<Natural>& exponents() const noexcept { return exponents_; }

  bool operator==(const OmegaTerm&) const = default;

 private:
  LinearOrder order_;
  std::vector<Natural> exponents_;
};

/// Lexicographic; a proper extension is greater.
inline std::strong_ordering compare_omega_terms(const OmegaTerm& s, const OmegaTerm& t) {
  if (!(s.order() == t.order())) throw ValidationError("comparing omega terms over different orders");
  const std::size_t common = std::min(s.length(), t.length());
  for (std::size_t j = 1; j <= common; ++j) {
    const auto c = s.order().compare(s.exponent(j), t.exponent(j));
    if (c != 0) return c;
  }
  return s.length() <=> t.length();
}

struct DescendingSequence {
  LinearOrder order = LinearOrder::omega();
  std::vector<OmegaTerm> terms;

  // 1-based term access.
  const OmegaTerm& term(std::size_t i) const { return terms.at(i - 1); }
  std::size_t size() const noexcept { return terms.size(); }
};

inline DescendingSequence make_sequence(LinearOrder order, const std::vector<std::vector<Natural>>& terms) {
  DescendingSequence out{order, {}};
  out.terms.reserve(terms.size());
  for (const auto& t : terms) out.terms.emplace_back(order, t);
  return out;
}

/// Witness is the 0-based position of the first term that is not strictly
/// below its predecessor.
inline Verdict<std::size_t> validate_descending(const DescendingSequence& alpha);

/// Flattening of a sequence of terms: beta(i) is the i-th exponent read left
/// to right, m(i) the term it came from, pos(i) its position in that term.
class ExponentStream {
 public:
  ExponentStream() = default;

  std::size_t length() const noexcept { return beta_.size(); }
  Natural beta(std::size_t i) const { return beta_.at(i - 1); }
  std::size_t m(std::size_t i) const { return m_.at(i - 1); }
  std::size_t pos(std::size_t i) const { return pos_.at(i - 1); }

  const std::vector<Natural>& betas() const noexcept { return beta_; }
  const std::vector<std::size_t>& terms() const noexcept { return m_; }
  const std::vector<std::size_t>& positions() const noexcept { return pos_; }

  void push(Natural beta, std::size_t m, std::size_t pos) {
    beta_.push_back(beta);
    m_.push_back(m);
    pos_.push_back(pos);
  }

 private:
  std::vector<Natural> beta_;
  std::vector<std::size_t> m_;
  std::vector<std::size_t> pos_;
};

inline ExponentStream exponent_stream(const DescendingSequence& alpha) {
  ExponentStream s;
  if (alpha.size() == 0) return s;
  std::size_t m = 1, pos = 1;
  s.push(alpha.term(1).exponent(1), m, pos);
  while (true) {
    if (alpha.term(m).length() > pos) {
      ++pos;
    } else {
      if (m == alpha.size()) break;
      ++m;
      pos = 1;
    }
    s.push(alpha.term(m).exponent(pos), m, pos);
  }
  return s;
}

/// Least j in (i, bound] with pos(j) = pos(i) and beta(j) < beta(i). With
/// bound >= length this is the j that decreases i.
inline std::optional<std::size_t> find_decreaser(const ExponentStream& s, std::size_t i, std::size_t bound) {
  if (i < 1 || i > s.length()) throw ValidationError("stream index " + std::to_string(i) + " out of range");
  const std::size_t last = std::min(bound, s.length());
  for (std::size_t j = i + 1; j <= last; ++j)
    if (s.pos(j) == s.pos(i) && s.beta(j) < s.beta(i)) return j;
  return std::nullopt;
}

/// dec[i] = the j that decreases i, for i in 1..length (slot 0 unused).
inline std::vector<std::optional<std::size_t>> decreaser_table(const ExponentStream& s) {
  std::vector<std::optional<std::size_t>> dec(s.length() + 1);
  for (std::size_t i = 1; i <= s.length(); ++i) dec[i] = find_decreaser(s, i, s.length());
  return dec;
}

// Colors of a (lambda, mu)-determined coloring, indexed [lambda][mu].
using ProfileTable = std::array<std::array<Natural, 64>, 64>;

/// For each window [L, U): the least i < L decreased by the greatest j in the
/// window that decreases anything below L; 0 when there is none. Indices past
/// the stream decrease nothing.
inline ProfileTable wop_profile_table(const ExponentStream& s) {
  const auto dec = decreaser_table(s);
  // least_decreased[j] = least i that j decreases.
  std::vector<std::optional<std::size_t>> least_decreased(s.length() + 1);
  for (std::size_t i = 1; i <= s.length(); ++i)
    if (dec[i] && !least_decreased[*dec[i]]) least_decreased[*dec[i]] = i;
  ProfileTable t{};
  for (std::size_t lo = 0; lo < 64; ++lo) {
    for (std::size_t hi = lo + 1; hi < 64; ++hi) {
      Natural color = 0;
      for (std::size_t j = hi; j-- > lo;) {
        if (j == 0 || j > s.length()) continue;
        const auto& i = least_decreased[j];
        if (i && *i < lo) {
          color = *i;
          break;
        }
      }
      t[lo][hi] = color;
    }
  }
  return t;
}

inline Verdict<std::size_t> validate_descending(const DescendingSequence& alpha) {
  for (std::size_t i = 1; i < alpha.terms.size(); ++i) {
    if (!(alpha.terms[i].order() == alpha.order) || !(alpha.terms[i - 1].order() == alpha.order))
      return {false, i};
    if (compare_omega_terms(alpha.terms[i], alpha.terms[i - 1]) >= 0) return {false, i};
  }
  return {};
}

/// Some later term has a strictly smaller exponent than term i at a position
/// both share. Returns (i', j) with j a 1-based component position.
inline std::optional<std::pair<std::size_t, std::size_t>> initial_segment_witness(const DescendingSequence& alpha,
                                                                                  std::size_t i) {
  const OmegaTerm& base = alpha.term(i);
  for (std::size_t ip = i + 1; ip <= alpha.size(); ++ip) {
    const OmegaTerm& later = alpha.term(ip);
    const std::size_t common = std::min(base.length(), later.length());
    for (std::size_t j = 1; j <= common; ++j)
      if (later.exponent(j) < base.exponent(j)) return std::make_pair(ip, j);
  }
  return std::nullopt;
}

}  // namespace hindreg
