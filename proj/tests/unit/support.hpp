#pragma once

// Hand-rolled generators and brute-force oracles shared by the unit tests.

#include "lipfree/diamond.hpp"
#include "lipfree/free_vector.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace lipfree::testkit {

/// Shortest-path metric of a random connected graph on n points with edge
/// lengths in {1/2, 1, ..., 3}. Point 0 is the base.
inline MetricSpace random_metric(Rng &rng, std::size_t n)
{
  std::vector<WeightedEdge> edges;
  for (std::size_t k = 1; k < n; ++k) {
    auto a = static_cast<PointIndex>(rng.below(k));
    edges.push_back({a, k, ratio(rng.between(1, 6), 2)});
  }
  const std::size_t extra = n > 2 ? rng.below(n) : 0;
  for (std::size_t e = 0; e < extra; ++e) {
    auto a = rng.below(n), b = rng.below(n);
    if (a == b)
      continue;
    edges.push_back({std::min(a, b), std::max(a, b), ratio(rng.between(1, 6), 2)});
  }
  const auto closure = shortest_path_closure(n, edges);
  std::vector<Rational> d(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    d[i] = *closure[i];
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    labels.push_back("p" + std::to_string(i));
  return MetricSpace(std::move(labels), std::move(d), 0);
}

/// Vector with `terms` integer coefficients in [-limit, limit] on random points.
inline FreeVector random_integer_vector(Rng &rng, std::size_t points, std::size_t terms, int limit)
{
  FreeVector v;
  for (std::size_t k = 0; k < terms; ++k)
    v.add(rng.below(points), Rational(static_cast<long>(rng.between(-limit, limit))));
  return v;
}

/// Free norm of an integer-coefficient vector by exhaustive search: the
/// deficit goes to the base, every unit of mass becomes an atom, and all
/// matchings of positive to negative atoms are enumerated. Integral
/// transport problems have integral optimal plans, so this is exact.
inline Rational brute_force_norm(const MetricSpace &space, const FreeVector &v)
{
  FreeVector balanced = v;
  balanced.add(space.base(), -v.total_mass());
  std::vector<PointIndex> plus, minus;
  for (const auto &[x, c] : balanced.support()) {
    if (c.get_den() != 1)
      throw std::invalid_argument("brute_force_norm needs integer coefficients");
    const long count = c.get_num().get_si();
    for (long k = 0; k < std::abs(count); ++k)
      (count > 0 ? plus : minus).push_back(x);
  }
  if (plus.size() > 8)
    throw std::invalid_argument("brute_force_norm: too many atoms");
  std::vector<std::size_t> order(minus.size());
  std::iota(order.begin(), order.end(), 0);
  Rational best = -1;
  do {
    Rational cost = 0;
    for (std::size_t k = 0; k < plus.size(); ++k)
      cost += space.d(plus[k], minus[order[k]]);
    if (best < 0 || cost < best)
      best = cost;
  } while (std::next_permutation(order.begin(), order.end()));
  return best < 0 ? Rational(0) : best;
}

inline std::shared_ptr<const Diamond> build(const std::string &alpha, std::size_t n, std::size_t width = 1)
{
  DiamondSpec spec;
  spec.alpha = Ordinal::parse(alpha);
  spec.branches = n;
  spec.limit_width = width;
  return Diamond::build(spec);
}

inline PointIndex at(const Diamond &d, const std::string &address)
{
  return d.index_of(PointAddress::parse(address));
}

}  // namespace lipfree::testkit
