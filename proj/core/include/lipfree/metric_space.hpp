#pragma once

#include "lipfree/rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lipfree {

using PointIndex = std::size_t;

/// Unordered pair {a, b} (a < b) with its length.
struct WeightedEdge
{
  PointIndex a = 0;
  PointIndex b = 0;
  Rational length;

  friend bool operator==(const WeightedEdge &, const WeightedEdge &) = default;
};

/// Finite pointed metric space with an exact-rational distance matrix.
///
/// Points carry string labels (canonical diamond addresses for generated
/// spaces, arbitrary names for spaces loaded from file). Instances are
/// immutable; the finest-edge list is computed lazily on first use and is
/// safe to request from several threads.
class MetricSpace
{
public:
  /// `distances` is the row-major n x n matrix. Only the shape and the base
  /// index are validated here; use check_metric_axioms() for the rest.
  MetricSpace(std::vector<std::string> labels, std::vector<Rational> distances, PointIndex base);

  std::size_t size() const { return labels_.size(); }
  PointIndex base() const { return base_; }

  const std::string &label(PointIndex i) const { return labels_.at(i); }
  const std::vector<std::string> &labels() const { return labels_; }
  std::optional<PointIndex> index_of(const std::string &label) const;

  /// Bounds-checked lookup; throws std::out_of_range.
  const Rational &distance(PointIndex x, PointIndex y) const;
  /// Unchecked lookup for inner loops.
  const Rational &d(PointIndex x, PointIndex y) const { return dist_[x * labels_.size() + y]; }

  /// Pairs with no point strictly between them (d(x,z)+d(z,y) = d(x,y) with
  /// both summands positive), ordered by (a, b).
  const std::vector<WeightedEdge> &finest_edges() const;

  /// Sub-space on `subset` (kept in the given order) with `base` given as an
  /// index of *this; base must belong to subset.
  MetricSpace restrict_to(std::span<const PointIndex> subset, PointIndex base) const;

  /// Same points and base, new distance matrix.
  MetricSpace with_distances(std::vector<Rational> distances) const;

  const std::vector<Rational> &matrix() const { return dist_; }

private:
  struct Cache;

  std::vector<std::string> labels_;
  std::vector<Rational> dist_;
  PointIndex base_ = 0;
  std::unordered_map<std::string, PointIndex> by_label_;
  std::shared_ptr<Cache> cache_;
};

/// First violated metric axiom, or nullopt when d is a metric. Checks
/// identity of indiscernibles, symmetry, non-negativity and (for spaces with
/// at most `exhaustive_limit` points) the full triangle inequality.
std::optional<std::string> check_metric_axioms(const MetricSpace &space, std::size_t exhaustive_limit = 400);

/// All-pairs shortest-path closure (Floyd-Warshall) of an undirected weighted
/// graph on n vertices. Unreachable pairs come back as nullopt.
std::vector<std::optional<Rational>> shortest_path_closure(std::size_t n, std::span<const WeightedEdge> edges);

}  // namespace lipfree
