#include "lipfree/metric_space.hpp"

#include <mutex>
#include <stdexcept>

namespace lipfree {

struct MetricSpace::Cache
{
  std::once_flag edges_once;
  std::vector<WeightedEdge> edges;
};

MetricSpace::MetricSpace(std::vector<std::string> labels, std::vector<Rational> distances, PointIndex base)
    : labels_(std::move(labels)), dist_(std::move(distances)), base_(base), cache_(std::make_shared<Cache>())
{
  const auto n = labels_.size();
  if (n == 0)
    throw std::invalid_argument("metric space must have at least one point");
  if (dist_.size() != n * n)
    throw std::invalid_argument("distance matrix has " + std::to_string(dist_.size()) + " entries, expected " +
                                std::to_string(n * n));
  if (base_ >= n)
    throw std::invalid_argument("base point index out of range");
  by_label_.reserve(n);
  for (PointIndex i = 0; i < n; ++i)
    if (!by_label_.emplace(labels_[i], i).second)
      throw std::invalid_argument("duplicate point label '" + labels_[i] + "'");
}

std::optional<PointIndex> MetricSpace::index_of(const std::string &label) const
{
  if (auto it = by_label_.find(label); it != by_label_.end())
    return it->second;
  return std::nullopt;
}

const Rational &MetricSpace::distance(PointIndex x, PointIndex y) const
{
  if (x >= size() || y >= size())
    throw std::out_of_range("point index out of range");
  return d(x, y);
}

const std::vector<WeightedEdge> &MetricSpace::finest_edges() const
{
  std::call_once(cache_->edges_once, [this] {
    const auto n = size();
    Rational through;
    for (PointIndex x = 0; x < n; ++x) {
      for (PointIndex y = x + 1; y < n; ++y) {
        const Rational &dxy = d(x, y);
        bool minimal = true;
        for (PointIndex z = 0; z < n && minimal; ++z) {
          if (z == x || z == y)
            continue;
          const Rational &dxz = d(x, z);
          if (dxz >= dxy)
            continue;
          through = dxz + d(z, y);
          if (through == dxy && sgn(d(z, y)) > 0 && sgn(dxz) > 0)
            minimal = false;
        }
        if (minimal)
          cache_->edges.push_back({x, y, dxy});
      }
    }
  });
  return cache_->edges;
}

MetricSpace MetricSpace::restrict_to(std::span<const PointIndex> subset, PointIndex base) const
{
  std::vector<std::string> labels;
  labels.reserve(subset.size());
  std::optional<PointIndex> new_base;
  for (PointIndex k = 0; k < subset.size(); ++k) {
    labels.push_back(label(subset[k]));
    if (subset[k] == base)
      new_base = k;
  }
  if (!new_base)
    throw std::invalid_argument("restriction subset must contain the base point");

  const auto m = subset.size();
  std::vector<Rational> dist(m * m);
  for (PointIndex i = 0; i < m; ++i)
    for (PointIndex j = 0; j < m; ++j)
      dist[i * m + j] = distance(subset[i], subset[j]);
  return MetricSpace(std::move(labels), std::move(dist), *new_base);
}

MetricSpace MetricSpace::with_distances(std::vector<Rational> distances) const
{
  return MetricSpace(labels_, std::move(distances), base_);
}

std::optional<std::string> check_metric_axioms(const MetricSpace &space, std::size_t exhaustive_limit)
{
  const auto n = space.size();
  auto pair_name = [&](PointIndex x, PointIndex y) { return "(" + space.label(x) + ", " + space.label(y) + ")"; };
  for (PointIndex x = 0; x < n; ++x) {
    if (sgn(space.d(x, x)) != 0)
      return "nonzero self-distance at " + space.label(x);
    for (PointIndex y = x + 1; y < n; ++y) {
      if (space.d(x, y) != space.d(y, x))
        return "asymmetric pair " + pair_name(x, y);
      if (sgn(space.d(x, y)) <= 0)
        return "non-positive distance for distinct pair " + pair_name(x, y);
    }
  }
  if (n > exhaustive_limit)
    return std::nullopt;
  Rational through;
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = x + 1; y < n; ++y)
      for (PointIndex z = 0; z < n; ++z) {
        through = space.d(x, z) + space.d(z, y);
        if (space.d(x, y) > through)
          return "triangle inequality fails for " + pair_name(x, y) + " via " + space.label(z);
      }
  return std::nullopt;
}

std::vector<std::optional<Rational>> shortest_path_closure(std::size_t n, std::span<const WeightedEdge> edges)
{
  std::vector<std::optional<Rational>> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    dist[i * n + i] = Rational(0);
  for (const auto &e : edges) {
    if (e.a >= n || e.b >= n)
      throw std::out_of_range("edge endpoint out of range");
    auto relax = [&](std::size_t i, std::size_t j) {
      auto &slot = dist[i * n + j];
      if (!slot || e.length < *slot)
        slot = e.length;
    };
    relax(e.a, e.b);
    relax(e.b, e.a);
  }
  Rational through;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const auto &dik = dist[i * n + k];
      if (!dik)
        continue;
      for (std::size_t j = 0; j < n; ++j) {
        const auto &dkj = dist[k * n + j];
        if (!dkj)
          continue;
        through = *dik + *dkj;
        auto &slot = dist[i * n + j];
        if (!slot || through < *slot)
          slot = through;
      }
    }
  return dist;
}

}  // namespace lipfree
