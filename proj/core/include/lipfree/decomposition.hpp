#pragma once

#include "lipfree/diamond.hpp"
#include "lipfree/free_vector.hpp"
#include "lipfree/metric_space.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lipfree {

/// Base point plus disjoint summands covering every other point.
struct SummandPartition
{
  PointIndex base = 0;
  std::vector<std::vector<PointIndex>> summands;

  /// Throws std::invalid_argument unless the summands are disjoint, avoid
  /// the base, and together with it cover [0, points).
  void validate(std::size_t points) const;
  /// summand_of()[x]: summand index of x, or npos for the base.
  std::vector<std::size_t> summand_of(std::size_t points) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// d1(x, y) = d(x, base) + d(base, y) across summands, d within a summand.
/// The partition's base becomes the space's base. Throws
/// std::invalid_argument on a bad partition or when d1 is not a metric.
MetricSpace summing_metric(const MetricSpace &space, const SummandPartition &partition);

struct EquivalenceConstants
{
  /// min and max of d / d1 over distinct pairs.
  Rational low;
  Rational high;
  std::pair<PointIndex, PointIndex> low_pair;
  std::pair<PointIndex, PointIndex> high_pair;
};

/// Throws std::invalid_argument when the spaces differ in size or labels, or
/// have fewer than two points.
EquivalenceConstants equivalence_constants(const MetricSpace &d, const MetricSpace &d1);

/// A = {z : d(z, b) < 3/2}, B = {z : d(z, t) < 3/2} and
/// D(z) = dist(z, complement of A) + dist(z, complement of B) on a limit
/// stage. nullopt stands for +infinity (empty complement).
struct Cover
{
  std::vector<PointIndex> A;
  std::vector<PointIndex> B;
  std::vector<std::optional<Rational>> to_outside_A;
  std::vector<std::optional<Rational>> to_outside_B;
  std::vector<std::optional<Rational>> D;

  bool covers(std::size_t points) const;
  /// Smallest D value; nullopt when every value is infinite.
  std::optional<Rational> min_D() const;
};

/// Throws std::invalid_argument unless the diamond is a limit stage.
Cover build_cover(const Diamond &diamond);

/// The subspace A with base b and its partition by limit summand, in the
/// subspace's own indices. `points[k]` is the ambient index of point k.
struct SummandSubspace
{
  MetricSpace space;
  SummandPartition partition;
  std::vector<PointIndex> points;
};

SummandSubspace a_subspace(const Diamond &diamond, const Cover &cover);

/// Splits v by summand, balancing each part at the base point.
std::vector<FreeVector> split_by_summand(const SummandPartition &partition, const FreeVector &v, std::size_t points);

struct AdditivityReport
{
  bool holds = false;
  Rational whole;
  std::vector<Rational> parts;
  Rational sum;
};

/// ||v|| under the summing metric against the sum of the part norms, each
/// computed in its summand plus the base point.
AdditivityReport ell1_additivity_check(const MetricSpace &summing, const SummandPartition &partition,
                                       const FreeVector &v);

struct ProjectionTerm
{
  std::size_t n = 0;
  Rational projected;
  Rational remainder;
  bool holds = false;
};

struct ProjectionReport
{
  bool holds = false;
  Rational whole;
  std::vector<ProjectionTerm> terms;
};

/// ||v|| = ||P_n v|| + ||v - P_n v|| for n = 0..#summands, P_n keeping the
/// first n summands (balanced at the base point).
ProjectionReport projection_identity_check(const MetricSpace &summing, const SummandPartition &partition,
                                           const FreeVector &v);

}  // namespace lipfree
