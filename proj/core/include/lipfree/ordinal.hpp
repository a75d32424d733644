#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lipfree {

struct OrdinalTerm;

/// Countable ordinal below epsilon_0 in Cantor normal form:
///   w^(e1)*c1 + w^(e2)*c2 + ... with e1 > e2 > ... and every ci >= 1.
/// The empty term list is 0. Values are immutable and always canonical, so
/// structural equality coincides with ordinal equality.
class Ordinal
{
public:
  Ordinal() = default;

  static Ordinal zero() { return {}; }
  static Ordinal natural(std::uint64_t n);
  static Ordinal omega();
  /// w^(exponent) * coefficient; coefficient must be positive.
  static Ordinal power(const Ordinal &exponent, std::uint64_t coefficient = 1);

  /// Parses `w`, `w^k`, `w^w`, `w^(expr)`, naturals, `*k`, and left-to-right
  /// `+` sums.
  /// Non-canonical sums are normalized (absorbed terms are dropped).
  static Ordinal parse(std::string_view text);

  const std::vector<OrdinalTerm> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  /// Value of a finite ordinal; nullopt otherwise.
  std::optional<std::uint64_t> finite_value() const;

  std::string to_string() const;

  /// Ordinal sum `*this + rhs` (used by the parser and by successor()).
  Ordinal plus(const Ordinal &rhs) const;
  Ordinal successor() const;

  friend std::strong_ordering operator<=>(const Ordinal &a, const Ordinal &b);
  friend bool operator==(const Ordinal &a, const Ordinal &b);

private:
  explicit Ordinal(std::vector<OrdinalTerm> terms) : terms_(std::move(terms)) {}

  void add_term(const OrdinalTerm &term);

  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm
{
  Ordinal exponent;
  std::uint64_t coefficient = 1;

  friend bool operator==(const OrdinalTerm &, const OrdinalTerm &) = default;
};

enum class OrdinalKind
{
  zero,
  successor,
  limit
};

struct OrdinalClass
{
  OrdinalKind kind = OrdinalKind::zero;
  /// Set only for successors.
  std::optional<Ordinal> predecessor;
};

OrdinalClass classify(const Ordinal &a);

/// a[m] for a limit ordinal a and m >= 1. Splitting off the last term
/// w^e of a = g + w^e:
///   e successor (e = f + 1): a[m] = g + w^f * m
///   e limit:                 a[m] = g + w^(e[m])
/// Throws std::invalid_argument when a is not a limit or m == 0.
Ordinal fundamental_sequence(const Ordinal &a, std::uint64_t m);

}  // namespace lipfree
