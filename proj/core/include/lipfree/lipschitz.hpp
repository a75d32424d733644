#pragma once

#include "lipfree/diamond.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"

#include <optional>
#include <vector>

namespace lipfree {

/// Point-to-value assignment on a metric space, total or partial.
class LipschitzFunction
{
public:
  LipschitzFunction() = default;
  /// Everywhere-undefined function on n points.
  explicit LipschitzFunction(std::size_t n) : values_(n) {}
  static LipschitzFunction total(const std::vector<Rational> &values);
  static LipschitzFunction zero(std::size_t n);

  std::size_t size() const { return values_.size(); }
  bool is_total() const;
  bool defined(PointIndex x) const { return x < values_.size() && values_[x].has_value(); }
  /// Throws std::out_of_range when x is outside the domain.
  const Rational &value(PointIndex x) const;
  const Rational &operator()(PointIndex x) const { return value(x); }
  void set(PointIndex x, Rational v);
  std::vector<PointIndex> domain() const;

  /// Best constant, if one has been computed for this exact function.
  const std::optional<Rational> &cached_constant() const { return constant_; }
  void cache_constant(Rational c) { constant_ = std::move(c); }

  friend bool operator==(const LipschitzFunction &a, const LipschitzFunction &b) { return a.values_ == b.values_; }

private:
  std::vector<std::optional<Rational>> values_;
  std::optional<Rational> constant_;
};

/// max over pairs x != y of |f(x) - f(y)| / d(x, y); 0 on one-point spaces.
/// Throws std::invalid_argument for partial input or a size mismatch.
Rational lip_constant(const MetricSpace &space, const LipschitzFunction &f);

/// Whether |f(x) - f(y)| <= L d(x, y) for all pairs in f's domain. For total
/// functions only finest edges are inspected: every pair is joined by a
/// geodesic chain of finest edges, so the edge bound propagates.
bool is_lipschitz(const MetricSpace &space, const LipschitzFunction &f, const Rational &L);

/// Inf-convolution extension g(x) = min_y f(y) + L d(x, y) over the domain.
/// Throws std::invalid_argument on an empty domain or when f is not
/// L-Lipschitz on its domain.
LipschitzFunction mcshane_extend(const MetricSpace &space, const LipschitzFunction &f, const Rational &L);

/// Joins f_plus (given on the points of D^(j,+)) and f_minus (on D^(i,-))
/// with the value 0 at the base point, checks the union is 1-Lipschitz, and
/// extends to the whole successor stage. Both inputs must be 1-Lipschitz on
/// their copy and vanish at the copy's image of the predecessor base point.
/// Throws std::invalid_argument on any violated precondition.
LipschitzFunction glue_poles(const Diamond &diamond, std::size_t j, const LipschitzFunction &f_plus, std::size_t i,
                             const LipschitzFunction &f_minus);

}  // namespace lipfree
