#pragma once

#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"

#include <map>

namespace lipfree {

/// Finitely supported combination sum_x a_x delta(x) in the free space.
/// Coefficients are nonzero and ordered by point index; the zero vector has
/// empty support. The representation does not know the base point, so a
/// coefficient on it is kept as given; see without_base().
class FreeVector
{
public:
  using Support = std::map<PointIndex, Rational>;

  FreeVector() = default;
  explicit FreeVector(Support support);

  static FreeVector delta(PointIndex x) { return FreeVector(Support{{x, Rational(1)}}); }

  const Support &support() const { return support_; }
  bool is_zero() const { return support_.empty(); }
  Rational coefficient(PointIndex x) const;
  Rational total_mass() const;

  /// Adds c * delta(x), dropping the entry if it cancels.
  void add(PointIndex x, const Rational &c);

  /// Same element of F(M): the base point's delta is the zero functional.
  FreeVector without_base(PointIndex base) const;

  FreeVector operator-() const;
  FreeVector &operator+=(const FreeVector &rhs);
  FreeVector &operator-=(const FreeVector &rhs);
  FreeVector &operator*=(const Rational &s);

  friend FreeVector operator+(FreeVector a, const FreeVector &b) { return a += b; }
  friend FreeVector operator-(FreeVector a, const FreeVector &b) { return a -= b; }
  friend FreeVector operator*(const Rational &s, FreeVector v) { return v *= s; }

  friend bool operator==(const FreeVector &a, const FreeVector &b) { return a.support_ == b.support_; }
  /// Arbitrary but stable total order, for use as a map key.
  friend bool operator<(const FreeVector &a, const FreeVector &b);

private:
  Support support_;
};

/// (delta(a) + delta(b)) / 2 style helper: (a + b) / 2.
inline FreeVector midpoint(const FreeVector &a, const FreeVector &b)
{
  return Rational(1, 2) * (a + b);
}

}  // namespace lipfree
