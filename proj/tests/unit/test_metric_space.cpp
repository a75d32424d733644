#include "lipfree/metric_space.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace lipfree;

namespace {

MetricSpace path_space()
{
  // p0 - p1 - p2 on a line with lengths 1 and 2, plus p3 hanging off p1 at 1/2.
  std::vector<WeightedEdge> edges{{0, 1, Rational(1)}, {1, 2, Rational(2)}, {1, 3, Rational(1, 2)}};
  const auto closure = shortest_path_closure(4, edges);
  std::vector<Rational> d;
  for (const auto &c : closure)
    d.push_back(*c);
  return MetricSpace({"p0", "p1", "p2", "p3"}, d, 0);
}

}  // namespace

TEST(MetricSpace, LookupsAndLabels)
{
  const auto s = path_space();
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.distance(0, 2), Rational(3));
  EXPECT_EQ(s.distance(2, 3), Rational(5, 2));
  EXPECT_EQ(*s.index_of("p2"), 2u);
  EXPECT_FALSE(s.index_of("q"));
  EXPECT_THROW(s.distance(0, 4), std::out_of_range);
  EXPECT_FALSE(check_metric_axioms(s));
}

TEST(MetricSpace, RejectsBadShape)
{
  EXPECT_ANY_THROW(MetricSpace({"a", "b"}, {Rational(0), Rational(1), Rational(1)}, 0));
  EXPECT_ANY_THROW(MetricSpace({"a", "b"}, {Rational(0), Rational(1), Rational(1), Rational(0)}, 2));
  EXPECT_ANY_THROW(MetricSpace({"a", "a"}, {Rational(0), Rational(1), Rational(1), Rational(0)}, 0));
}

TEST(MetricSpace, AxiomCheckFindsEachViolation)
{
  auto with = [](std::vector<int> d) {
    std::vector<Rational> m(d.begin(), d.end());
    return MetricSpace({"a", "b", "c"}, m, 0);
  };
  EXPECT_FALSE(check_metric_axioms(with({0, 1, 2, 1, 0, 1, 2, 1, 0})));
  EXPECT_TRUE(check_metric_axioms(with({1, 1, 2, 1, 0, 1, 2, 1, 0})));
  EXPECT_TRUE(check_metric_axioms(with({0, 1, 2, 2, 0, 1, 2, 1, 0})));
  EXPECT_TRUE(check_metric_axioms(with({0, 0, 2, 0, 0, 1, 2, 1, 0})));
  const auto triangle = check_metric_axioms(with({0, 1, 3, 1, 0, 1, 3, 1, 0}));
  ASSERT_TRUE(triangle);
  EXPECT_NE(triangle->find("triangle"), std::string::npos);
}

TEST(MetricSpace, FinestEdgesOfAPath)
{
  const auto s = path_space();
  const std::vector<WeightedEdge> expected{{0, 1, Rational(1)}, {1, 2, Rational(2)}, {1, 3, Rational(1, 2)}};
  EXPECT_EQ(s.finest_edges(), expected);
}

TEST(MetricSpace, RestrictionKeepsDistances)
{
  const auto s = path_space();
  const std::vector<PointIndex> subset{2, 3, 0};
  const auto r = s.restrict_to(subset, 3);
  EXPECT_EQ(r.size(), 3u);
  EXPECT_EQ(r.base(), 1u);
  EXPECT_EQ(r.label(0), "p2");
  EXPECT_EQ(r.distance(0, 2), Rational(3));
  EXPECT_ANY_THROW(s.restrict_to(subset, 1));
}

TEST(MetricSpace, UnreachablePairsAreEmpty)
{
  const std::vector<WeightedEdge> edges{{0, 1, Rational(1)}};
  const auto c = shortest_path_closure(3, edges);
  EXPECT_TRUE(c[0 * 3 + 1]);
  EXPECT_FALSE(c[0 * 3 + 2]);
}

// Closure against brute-force enumeration of simple paths.
TEST(MetricSpaceProperty, ClosureMatchesPathEnumeration)
{
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    std::vector<WeightedEdge> edges;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (rng.below(2))
          edges.push_back({a, b, ratio(rng.between(1, 9), rng.between(1, 3))});
    std::vector<std::optional<Rational>> w(n * n);
    for (const auto &e : edges)
      for (auto [x, y] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}})
        if (!w[x * n + y] || e.length < *w[x * n + y])
          w[x * n + y] = e.length;

    const auto closure = shortest_path_closure(n, edges);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::optional<Rational>> best(n);
      std::vector<bool> on_path(n, false);
      std::function<void(std::size_t, Rational)> walk = [&](std::size_t x, Rational len) {
        if (!best[x] || len < *best[x])
          best[x] = len;
        on_path[x] = true;
        for (std::size_t y = 0; y < n; ++y)
          if (!on_path[y] && w[x * n + y])
            walk(y, len + *w[x * n + y]);
        on_path[x] = false;
      };
      walk(s, Rational(0));
      for (std::size_t t = 0; t < n; ++t)
        EXPECT_EQ(closure[s * n + t], best[t]) << s << "->" << t;
    }
  }
}

TEST(MetricSpaceProperty, FinestEdgesGenerateTheMetric)
{
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = testkit::random_metric(rng, 2 + rng.below(8));
    EXPECT_FALSE(check_metric_axioms(s));
    const auto &edges = s.finest_edges();
    const auto closure = shortest_path_closure(s.size(), edges);
    for (std::size_t x = 0; x < s.size(); ++x)
      for (std::size_t y = 0; y < s.size(); ++y)
        EXPECT_EQ(*closure[x * s.size() + y], s.d(x, y));
    for (const auto &e : edges)
      for (PointIndex z = 0; z < s.size(); ++z)
        if (z != e.a && z != e.b) {
          EXPECT_LT(e.length, s.d(e.a, z) + s.d(z, e.b));
        }
  }
}
