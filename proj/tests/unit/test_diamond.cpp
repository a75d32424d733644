#include "lipfree/diamond.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace lipfree;
using lipfree::testkit::at;
using lipfree::testkit::build;

namespace {

// Independent point-count recurrence: the skeleton plus 2n copies minus
// their glued poles, or the poles plus the kept summands minus theirs.
std::size_t count_points(const Ordinal &alpha, std::size_t n, std::size_t width)
{
  if (alpha == Ordinal::natural(1))
    return n + 2;
  const auto c = classify(alpha);
  if (c.kind == OrdinalKind::successor)
    return n + 2 + 2 * n * (count_points(*c.predecessor, n, width) - 2);
  std::size_t total = 2;
  for (std::size_t m = 1; m <= width; ++m)
    total += count_points(fundamental_sequence(alpha, m), n, width) - 2;
  return total;
}

struct LabelEdge
{
  std::string a, b;
  Rational length;
};

// Edge substitution on address labels for finite levels, written
// independently of the library's builder.
std::vector<LabelEdge> finite_graph(std::size_t level, std::size_t n)
{
  std::vector<LabelEdge> out;
  if (level == 1) {
    for (std::size_t i = 1; i <= n; ++i) {
      const std::string x = "x" + std::to_string(i);
      out.push_back({"t", x, Rational(1)});
      out.push_back({x, "b", Rational(1)});
    }
    return out;
  }
  const auto inner = finite_graph(level - 1, n);
  for (std::size_t j = 1; j <= n; ++j)
    for (const char sign : {'+', '-'}) {
      const std::string x = "x" + std::to_string(j);
      auto rename = [&](const std::string &label) {
        if (label == "t")
          return sign == '+' ? std::string("t") : x;
        if (label == "b")
          return sign == '+' ? x : std::string("b");
        return std::string(1, sign) + std::to_string(j) + "." + label;
      };
      for (const auto &e : inner)
        out.push_back({rename(e.a), rename(e.b), e.length / 2});
    }
  return out;
}

}  // namespace

TEST(Diamond, KnownPointCounts)
{
  EXPECT_EQ(build("1", 4)->space().size(), 6u);
  EXPECT_EQ(build("2", 3)->space().size(), 23u);
  EXPECT_EQ(build("3", 3)->space().size(), 131u);
  EXPECT_EQ(build("2", 4)->space().size(), 38u);
  EXPECT_EQ(build("3", 4)->space().size(), 294u);
  EXPECT_EQ(build("w", 3, 3)->space().size(), 155u);
}

TEST(Diamond, EstimateMatchesRecurrenceAndBuild)
{
  for (const char *alpha : {"1", "2", "3", "w", "w+1", "w*2", "w^2"})
    for (std::size_t n : {2u, 3u})
      for (std::size_t width : {1u, 2u}) {
        DiamondSpec spec;
        spec.alpha = Ordinal::parse(alpha);
        spec.branches = n;
        spec.limit_width = width;
        spec.budget_points = 100000;
        const auto expected = count_points(spec.alpha, n, width);
        EXPECT_EQ(estimate_points(spec), expected) << alpha << " n=" << n << " L=" << width;
        if (expected <= 3000) {
          EXPECT_EQ(Diamond::build(spec)->space().size(), expected) << alpha;
        }
      }
}

TEST(Diamond, BudgetIsCheckedBeforeBuilding)
{
  DiamondSpec spec;
  spec.alpha = Ordinal::natural(5);
  spec.branches = 5;
  try {
    Diamond::build(spec);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded &e) {
    EXPECT_EQ(e.budget(), kDefaultPointBudget);
    EXPECT_EQ(e.estimated(), count_points(spec.alpha, 5, 1));
  }
}

TEST(Diamond, InvalidSpecs)
{
  DiamondSpec spec;
  spec.branches = 1;
  EXPECT_THROW(Diamond::build(spec), std::invalid_argument);
  spec.branches = 2;
  spec.alpha = Ordinal::zero();
  EXPECT_THROW(Diamond::build(spec), std::invalid_argument);
  spec.alpha = Ordinal::omega();
  spec.limit_width = 0;
  EXPECT_THROW(Diamond::build(spec), std::invalid_argument);
}

TEST(Diamond, SkeletonDistances)
{
  const auto d = build("1", 3);
  const auto &s = d->space();
  EXPECT_EQ(s.distance(at(*d, "t"), at(*d, "b")), Rational(2));
  EXPECT_EQ(s.distance(at(*d, "t"), at(*d, "x2")), Rational(1));
  EXPECT_EQ(s.distance(at(*d, "x1"), at(*d, "x3")), Rational(2));
  EXPECT_EQ(s.base(), at(*d, "x1"));
}

TEST(Diamond, HandComputedDistancesAtLevelTwo)
{
  const auto d = build("2", 2);
  const auto &s = d->space();
  auto dist = [&](const char *a, const char *b) { return s.distance(at(*d, a), at(*d, b)); };
  EXPECT_EQ(dist("t", "+1.x2"), Rational(1, 2));
  EXPECT_EQ(dist("+1.x2", "b"), Rational(3, 2));
  EXPECT_EQ(dist("+1.x1", "+2.x1"), Rational(1));
  EXPECT_EQ(dist("+1.x1", "-1.x1"), Rational(1));
  EXPECT_EQ(dist("+1.x1", "-2.x2"), Rational(2));
  EXPECT_EQ(dist("t", "b"), Rational(2));
}

TEST(Diamond, FiniteLevelsMatchIndependentSubstitution)
{
  for (std::size_t level : {1u, 2u, 3u})
    for (std::size_t n : {2u, 3u}) {
      const auto d = build(std::to_string(level), n);
      const auto &s = d->space();
      const auto edges = finite_graph(level, n);
      std::map<std::string, std::size_t> id;
      for (const auto &e : edges)
        for (const auto *label : {&e.a, &e.b})
          id.emplace(*label, id.size());
      ASSERT_EQ(id.size(), s.size());
      const auto m = id.size();
      std::vector<std::optional<Rational>> w(m * m);
      for (std::size_t k = 0; k < m; ++k)
        w[k * m + k] = Rational(0);
      for (const auto &e : edges) {
        const auto a = id[e.a], b = id[e.b];
        w[a * m + b] = w[b * m + a] = e.length;
      }
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            if (w[i * m + k] && w[k * m + j] && (!w[i * m + j] || *w[i * m + k] + *w[k * m + j] < *w[i * m + j]))
              w[i * m + j] = *w[i * m + k] + *w[k * m + j];
      for (const auto &[la, a] : id)
        for (const auto &[lb, b] : id) {
          const auto x = s.index_of(la), y = s.index_of(lb);
          ASSERT_TRUE(x && y) << la << " " << lb;
          EXPECT_EQ(s.d(*x, *y), *w[a * m + b]) << la << " " << lb;
        }
    }
}

TEST(Diamond, SubstitutionGraphClosureEqualsMetric)
{
  for (const char *alpha : {"2", "w", "w+1"}) {
    DiamondSpec spec;
    spec.alpha = Ordinal::parse(alpha);
    spec.branches = 2;
    spec.limit_width = 2;
    const auto d = Diamond::build(spec);
    const auto g = substitution_graph(spec);
    ASSERT_EQ(g.labels.size(), d->space().size());
    const auto closure = shortest_path_closure(g.labels.size(), g.edges);
    for (std::size_t a = 0; a < g.labels.size(); ++a)
      for (std::size_t b = 0; b < g.labels.size(); ++b)
        EXPECT_EQ(*closure[a * g.labels.size() + b],
                  d->space().d(*d->space().index_of(g.labels[a]), *d->space().index_of(g.labels[b])));
  }
}

TEST(Diamond, MetricAxiomsHold)
{
  for (const char *alpha : {"1", "2", "3", "w"})
    EXPECT_FALSE(check_metric_axioms(build(alpha, 3, 2)->space())) << alpha;
}

TEST(Diamond, SubcopiesAreHalfScaleIsometries)
{
  const auto d = build("3", 3);
  const auto &pred = d->predecessor()->space();
  for (std::size_t k = 1; k <= 3; ++k)
    for (Side side : {Side::plus, Side::minus}) {
      const auto &map = d->subcopy_map({side, k});
      ASSERT_EQ(map.size(), pred.size());
      for (PointIndex a = 0; a < pred.size(); ++a)
        for (PointIndex b = 0; b < pred.size(); ++b)
          EXPECT_EQ(d->space().d(map[a], map[b]), pred.d(a, b) / 2);
    }
  EXPECT_THROW(d->subcopy_map({Side::plus, 4}), std::out_of_range);
  EXPECT_THROW(build("1", 3)->subcopy_map({Side::plus, 1}), std::invalid_argument);
}

TEST(Diamond, LimitSummandsAreIsometricAndShareThePoles)
{
  const auto d = build("w", 2, 3);
  ASSERT_TRUE(d->is_limit());
  ASSERT_EQ(d->summands().size(), 3u);
  for (std::size_t m = 0; m < 3; ++m) {
    const auto &summand = d->summands()[m];
    EXPECT_EQ(summand.beta, Ordinal::natural(m + 1));
    const auto &inner = summand.diamond->space();
    EXPECT_EQ(summand.injection[summand.diamond->landmarks().top], d->landmarks().top);
    EXPECT_EQ(summand.injection[summand.diamond->landmarks().bottom], d->landmarks().bottom);
    for (PointIndex a = 0; a < inner.size(); ++a)
      for (PointIndex b = 0; b < inner.size(); ++b)
        EXPECT_EQ(d->space().d(summand.injection[a], summand.injection[b]), inner.d(a, b));
  }
}

TEST(Diamond, AddressesRoundTrip)
{
  const auto d = build("w+1", 2, 2);
  for (PointIndex x = 0; x < d->space().size(); ++x) {
    const auto &a = d->addresses()[x];
    EXPECT_EQ(PointAddress::parse(a.to_string()), a);
    EXPECT_EQ(canonicalize(a), a);
    EXPECT_EQ(d->index_of(a), x);
    EXPECT_EQ(d->space().label(x), a.to_string());
  }
}

TEST(Diamond, CanonicalizeResolvesPoles)
{
  EXPECT_EQ(canonicalize(PointAddress::parse("+2.b")).to_string(), "x2");
  EXPECT_EQ(canonicalize(PointAddress::parse("-3.t")).to_string(), "x3");
  EXPECT_EQ(canonicalize(PointAddress::parse("+1.-2.t")).to_string(), "+1.x2");
  EXPECT_EQ(canonicalize(PointAddress::parse("s[w].t")).to_string(), "t");
  const auto d = build("2", 2);
  EXPECT_EQ(d->index_of(PointAddress::parse("+2.b")), at(*d, "x2"));
}

TEST(Diamond, MalformedAddresses)
{
  for (const char *bad : {"", "q", "x0", "+0.t", "+2", "s[w.t", "s w.t", "+1..t", "+1.t.", "x"})
    EXPECT_ANY_THROW(PointAddress::parse(bad)) << bad;
  const auto d = build("2", 2);
  EXPECT_THROW(d->index_of(PointAddress::parse("x5")), std::out_of_range);
}

TEST(Diamond, EmbeddingsAreIsometric)
{
  const auto small = build("2", 2);
  for (const char *target : {"3", "w"}) {
    DiamondSpec spec;
    spec.alpha = Ordinal::parse(target);
    spec.branches = 2;
    spec.limit_width = 2;
    const auto big = Diamond::build(spec);
    std::vector<PointIndex> image;
    for (const auto &a : small->addresses())
      image.push_back(big->index_of(embed_address(a, small->alpha(), big->alpha(), 2)));
    EXPECT_EQ(image[small->landmarks().top], big->landmarks().top) << target;
    EXPECT_EQ(image[small->landmarks().bottom], big->landmarks().bottom) << target;
    for (PointIndex a = 0; a < image.size(); ++a)
      for (PointIndex b = 0; b < image.size(); ++b)
        EXPECT_EQ(big->space().d(image[a], image[b]), small->space().d(a, b)) << target;
  }
  EXPECT_THROW(embed_address(PointAddress::parse("t"), Ordinal::natural(3), Ordinal::natural(2), 1),
               std::invalid_argument);
}

TEST(Diamond, DotListsFinestEdges)
{
  const auto d = build("1", 2);
  const auto dot = to_dot(d->space());
  EXPECT_NE(dot.find("graph"), std::string::npos);
  EXPECT_NE(dot.find("1/1"), std::string::npos);
  EXPECT_EQ(d->space().finest_edges().size(), 4u);
}
