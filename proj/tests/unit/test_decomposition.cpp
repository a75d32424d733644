#include "lipfree/decomposition.hpp"
#include "lipfree/freespace.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace lipfree;
using lipfree::testkit::build;

namespace {

// Star: base 0 joined to 1, 2 (summand 0) and 3 (summand 1); 1-2 also joined.
MetricSpace star()
{
  const std::vector<WeightedEdge> edges{
      {0, 1, Rational(1)}, {0, 2, Rational(2)}, {1, 2, Rational(2)}, {0, 3, Rational(1, 2)}};
  std::vector<Rational> d;
  for (const auto &c : shortest_path_closure(4, edges))
    d.push_back(*c);
  return MetricSpace({"o", "a", "b", "c"}, d, 0);
}

SummandPartition star_partition() { return {0, {{1, 2}, {3}}}; }

}  // namespace

TEST(Partition, Validation)
{
  EXPECT_NO_THROW(star_partition().validate(4));
  EXPECT_THROW((SummandPartition{0, {{1, 2}}}.validate(4)), std::invalid_argument);
  EXPECT_THROW((SummandPartition{0, {{0, 1, 2}, {3}}}.validate(4)), std::invalid_argument);
  EXPECT_THROW((SummandPartition{0, {{1, 2}, {2, 3}}}.validate(4)), std::invalid_argument);
  EXPECT_THROW((SummandPartition{7, {{1, 2}, {3}}}.validate(4)), std::invalid_argument);
  const auto owner = star_partition().summand_of(4);
  EXPECT_EQ(owner, (std::vector<std::size_t>{SummandPartition::npos, 0, 0, 1}));
}

TEST(SummingMetric, CutPointLeavesTheMetricUnchanged)
{
  const auto s = star();
  const auto d1 = summing_metric(s, star_partition());
  EXPECT_EQ(d1.matrix(), s.matrix());
  const auto c = equivalence_constants(s, d1);
  EXPECT_EQ(c.low, Rational(1));
  EXPECT_EQ(c.high, Rational(1));
}

TEST(SummingMetric, ShortcutsAreRemoved)
{
  // Square o-a-c-b-o with unit sides; a and c sit in different summands.
  const std::vector<WeightedEdge> edges{{0, 1, Rational(1)}, {1, 2, Rational(1)}, {2, 3, Rational(1)}, {0, 3, Rational(1)}};
  std::vector<Rational> d;
  for (const auto &c : shortest_path_closure(4, edges))
    d.push_back(*c);
  const MetricSpace s({"o", "a", "c", "b"}, d, 0);
  const auto d1 = summing_metric(s, {0, {{1}, {2, 3}}});
  EXPECT_EQ(d1.d(1, 2), Rational(3));
  EXPECT_EQ(d1.d(2, 3), Rational(1));
  const auto c = equivalence_constants(s, d1);
  EXPECT_EQ(c.low, Rational(1, 3));
  EXPECT_EQ(c.low_pair, (std::pair<PointIndex, PointIndex>{1, 2}));
  EXPECT_EQ(c.high, Rational(1));
}

TEST(SummingMetric, EquivalenceNeedsMatchingSpaces)
{
  const auto s = star();
  EXPECT_THROW(equivalence_constants(s, s.restrict_to(std::vector<PointIndex>{0, 1}, 0)), std::invalid_argument);
  const auto one = s.restrict_to(std::vector<PointIndex>{0}, 0);
  EXPECT_THROW(equivalence_constants(one, one), std::invalid_argument);
}

TEST(Cover, LimitStageCover)
{
  const auto w = build("w", 3, 3);
  const auto &s = w->space();
  const auto cover = build_cover(*w);
  EXPECT_TRUE(cover.covers(s.size()));
  const auto t = w->landmarks().top, b = w->landmarks().bottom;
  const Rational r(3, 2);
  for (PointIndex z = 0; z < s.size(); ++z) {
    const bool in_a = std::binary_search(cover.A.begin(), cover.A.end(), z);
    const bool in_b = std::binary_search(cover.B.begin(), cover.B.end(), z);
    EXPECT_EQ(in_a, s.d(z, b) < r);
    EXPECT_EQ(in_b, s.d(z, t) < r);
    // Brute-force distances to the complements.
    std::optional<Rational> out_a, out_b;
    for (PointIndex y = 0; y < s.size(); ++y) {
      if (!(s.d(y, b) < r) && (!out_a || s.d(z, y) < *out_a))
        out_a = s.d(z, y);
      if (!(s.d(y, t) < r) && (!out_b || s.d(z, y) < *out_b))
        out_b = s.d(z, y);
    }
    EXPECT_EQ(cover.to_outside_A[z], out_a);
    EXPECT_EQ(cover.to_outside_B[z], out_b);
    if (out_a && out_b) {
      EXPECT_EQ(cover.D[z], *out_a + *out_b);
    }
  }
  ASSERT_TRUE(cover.min_D());
  EXPECT_GE(*cover.min_D(), Rational(1));
  EXPECT_THROW(build_cover(*build("2", 3)), std::invalid_argument);
}

TEST(Cover, SubspaceIsPartitionedBySummand)
{
  const auto w = build("w", 3, 3);
  const auto cover = build_cover(*w);
  const auto sub = a_subspace(*w, cover);
  EXPECT_EQ(sub.points, cover.A);
  EXPECT_EQ(sub.points[sub.space.base()], w->landmarks().bottom);
  EXPECT_EQ(sub.partition.summands.size(), 3u);
  EXPECT_NO_THROW(sub.partition.validate(sub.space.size()));
  for (std::size_t m = 0; m < 3; ++m) {
    const auto &inj = w->summands()[m].injection;
    for (auto k : sub.partition.summands[m])
      EXPECT_NE(std::find(inj.begin(), inj.end(), sub.points[k]), inj.end());
  }
  const auto d1 = summing_metric(sub.space, sub.partition);
  const auto c = equivalence_constants(sub.space, d1);
  EXPECT_GT(c.low, 0);
  EXPECT_LE(c.low, c.high);
  EXPECT_EQ(c.high, Rational(1));
}

TEST(Decomposition, SplitBySummandBalancesEachPart)
{
  const auto p = star_partition();
  FreeVector v = FreeVector::delta(1) + Rational(2) * FreeVector::delta(3);
  v.add(2, Rational(-1, 2));
  const auto parts = split_by_summand(p, v, 4);
  ASSERT_EQ(parts.size(), 2u);
  FreeVector sum;
  for (const auto &part : parts) {
    EXPECT_EQ(part.total_mass(), Rational(0));
    sum += part;
  }
  FreeVector balanced = v;
  balanced.add(0, -v.total_mass());
  EXPECT_EQ(sum, balanced);
}

// Norms add across summands under the summing metric, and every prefix
// projection splits the norm exactly.
TEST(DecompositionProperty, AdditivityAndProjection)
{
  const auto w = build("w", 2, 3);
  const auto cover = build_cover(*w);
  const auto sub = a_subspace(*w, cover);
  const auto d1 = summing_metric(sub.space, sub.partition);
  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    FreeVector v;
    for (int k = 0; k < 5; ++k)
      v.add(rng.below(d1.size()), ratio(rng.between(-4, 4), rng.between(1, 3)));
    const auto add = ell1_additivity_check(d1, sub.partition, v);
    EXPECT_TRUE(add.holds);
    EXPECT_EQ(add.whole, free_norm(d1, v).value);
    Rational sum = 0;
    for (const auto &part : add.parts)
      sum += part;
    EXPECT_EQ(sum, add.sum);
    EXPECT_EQ(add.whole, add.sum);
    const auto proj = projection_identity_check(d1, sub.partition, v);
    EXPECT_TRUE(proj.holds);
    EXPECT_EQ(proj.terms.size(), sub.partition.summands.size() + 1);
    EXPECT_EQ(proj.terms.front().projected, Rational(0));
    EXPECT_EQ(proj.terms.back().remainder, Rational(0));
    for (const auto &term : proj.terms)
      EXPECT_EQ(term.projected + term.remainder, proj.whole);
  }
}

TEST(DecompositionProperty, SummingMetricDominates)
{
  Rng rng(72);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = testkit::random_metric(rng, 3 + rng.below(6));
    SummandPartition p;
    p.base = 0;
    p.summands.resize(1 + rng.below(3));
    for (PointIndex x = 1; x < s.size(); ++x)
      p.summands[rng.below(p.summands.size())].push_back(x);
    std::erase_if(p.summands, [](const auto &part) { return part.empty(); });
    const auto d1 = summing_metric(s, p);
    for (PointIndex x = 0; x < s.size(); ++x)
      for (PointIndex y = 0; y < s.size(); ++y)
        EXPECT_LE(s.d(x, y), d1.d(x, y));
    const auto c = equivalence_constants(s, d1);
    EXPECT_EQ(c.high, Rational(1));
    EXPECT_EQ(c.low, s.d(c.low_pair.first, c.low_pair.second) / d1.d(c.low_pair.first, c.low_pair.second));
  }
}
