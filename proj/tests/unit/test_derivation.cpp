#include "lipfree/derivation.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace lipfree;
using lipfree::testkit::at;
using lipfree::testkit::build;

namespace {

WeakNeighborhood neighborhood(FunctionalFamily family, FreeVector center, Rational eta)
{
  return {std::make_shared<const FunctionalFamily>(std::move(family)), std::move(center), std::move(eta)};
}

AdversaryConfig config(AdversaryKind kind, std::uint64_t seed = 1, std::size_t moves = 2)
{
  AdversaryConfig c;
  c.kind = kind;
  c.seed = seed;
  c.moves = moves;
  return c;
}

bool has_kind(const VerificationReport &r, ViolationKind kind)
{
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation &v) { return v.kind == kind; });
}

std::shared_ptr<TranscriptNode> mutable_root(GameTranscript &t)
{
  auto root = std::make_shared<TranscriptNode>(*t.root);
  t.root = root;
  return root;
}

}  // namespace

TEST(Neighborhood, ClosedMembership)
{
  const auto d = build("1", 3);
  const auto &s = d->space();
  const auto f = distance_function(s, at(*d, "t"));
  const FreeVector c = FreeVector::delta(at(*d, "x2"));
  const Rational eta(1, 2);
  auto V = neighborhood({f}, c, eta);
  EXPECT_TRUE(in_neighborhood(V, c));
  // <f, c + s delta(t)> - <f, c> = s f(t) = -s.
  EXPECT_TRUE(in_neighborhood(V, c + Rational(1, 2) * FreeVector::delta(at(*d, "t"))));
  EXPECT_FALSE(in_neighborhood(V, c + Rational(51, 100) * FreeVector::delta(at(*d, "t"))));
  // No functionals: no constraint.
  EXPECT_TRUE(in_neighborhood(neighborhood({}, c, eta), FreeVector::delta(at(*d, "b"))));
  EXPECT_THROW(in_neighborhood(WeakNeighborhood{nullptr, c, eta}, c), std::invalid_argument);
}

TEST(Escape, SymmetricFamilyGivesTheFirstPair)
{
  const auto d = build("1", 8);
  const auto view = DiamondView::whole(d);
  const auto &s = d->space();
  const auto V = neighborhood({distance_function(s, at(*d, "t")), distance_function(s, at(*d, "b"))},
                              pole_molecule(view), Rational(1, 20));
  const auto e = prover_escape(view, V);
  EXPECT_EQ(e.i, 2u);
  EXPECT_EQ(e.j, 3u);
  EXPECT_EQ(free_norm(s, e.gamma - pole_molecule(view)).value, Rational(1));
}

TEST(Escape, SkipsPairsTheFamilySeparates)
{
  // f = d(., x2) - d(x1, x2) pairs with (delta(x_i) - delta(x_j)) / 2 to -1 for
  // i = 2, so the first admissible pair is (3, 4).
  const auto d = build("1", 4);
  const auto view = DiamondView::whole(d);
  const auto V = neighborhood({distance_function(d->space(), at(*d, "x2"))}, pole_molecule(view), Rational(1, 2));
  const auto e = prover_escape(view, V);
  EXPECT_EQ(e.i, 3u);
  EXPECT_EQ(e.j, 4u);
}

TEST(Escape, TwoBranchesAreNotEnough)
{
  const auto d = build("1", 2);
  const auto view = DiamondView::whole(d);
  const auto V = neighborhood({distance_function(d->space(), at(*d, "t"))}, pole_molecule(view), Rational(1));
  try {
    prover_escape(view, V);
    FAIL() << "expected InsufficientBranching";
  } catch (const InsufficientBranching &e) {
    EXPECT_EQ(e.branches(), 2u);
    EXPECT_EQ(e.advisory_branches(), 3u);
    EXPECT_EQ(e.level(), Ordinal::natural(1));
  }
}

TEST(Escape, Preconditions)
{
  const auto d = build("1", 3);
  const auto view = DiamondView::whole(d);
  const auto f = distance_function(d->space(), at(*d, "t"));
  EXPECT_THROW(prover_escape(view, neighborhood({f}, FreeVector::delta(0), Rational(1))), std::invalid_argument);
  const auto w = build("w", 3, 2);
  EXPECT_THROW(prover_escape(DiamondView::whole(w), neighborhood({distance_function(w->space(), 0)},
                                                                 pole_molecule(DiamondView::whole(w)), Rational(1))),
               std::invalid_argument);
}

// Random families: the chosen pair is admissible, lexicographically first,
// and sits at distance exactly 1 from the pole molecule inside the unit ball.
TEST(EscapeProperty, FirstAdmissiblePairAtUnitDistance)
{
  Rng rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng.below(6);
    const auto d = build(rng.below(2) ? "1" : "2", n);
    const auto &s = d->space();
    const auto view = DiamondView::whole(d);
    AdversaryConfig c = config(AdversaryKind::random_lipschitz, trial + 1);
    c.count = 1 + rng.below(3);
    c.horizon = std::nullopt;
    const Adversary adversary(s, anchor_region(*d, std::nullopt), c);
    const auto V = WeakNeighborhood{std::make_shared<const FunctionalFamily>(adversary.family(0, {}, {})),
                                    pole_molecule(view), ratio(rng.between(1, 8), 8)};
    std::optional<std::pair<std::size_t, std::size_t>> first;
    for (std::size_t i = 2; i <= n && !first; ++i)
      for (std::size_t j = i + 1; j <= n && !first; ++j) {
        const FreeVector g =
            midpoint(molecule(s, view.top(), view.mid(j)), molecule(s, view.mid(i), view.bottom())).without_base(s.base());
        if (in_neighborhood(V, g))
          first = {i, j};
      }
    if (!first) {
      EXPECT_THROW(prover_escape(view, V), InsufficientBranching);
      continue;
    }
    const auto e = prover_escape(view, V);
    EXPECT_EQ(std::make_pair(e.i, e.j), *first);
    EXPECT_TRUE(in_neighborhood(V, e.gamma));
    EXPECT_LE(free_norm(s, e.gamma).value, Rational(1));
    EXPECT_EQ(free_norm(s, e.gamma - pole_molecule(view)).value, Rational(1));
  }
}

TEST(AverageLift, CombinesLeaves)
{
  const auto d = build("2", 3);
  const auto view = DiamondView::whole(d);
  const auto plus_view = view.copy({Side::plus, 3});
  const auto minus_view = view.copy({Side::minus, 2});
  auto leaf = [](FreeVector v) {
    auto n = std::make_shared<TranscriptNode>();
    n->target = std::move(v);
    n->epsilon = 1;
    return NodePtr(n);
  };
  const auto p = leaf(pole_molecule(plus_view));
  const auto m = leaf(pole_molecule(minus_view));
  const auto out = average_lift(view, 3, 2, p, m);
  EXPECT_EQ(out->target, midpoint(p->target, m->target));
  EXPECT_EQ(out->depth, 0u);

  EXPECT_THROW(average_lift(view, 2, 2, p, m), std::invalid_argument);
  EXPECT_THROW(average_lift(view, 1, 2, p, m), std::invalid_argument);
  EXPECT_THROW(average_lift(view, 3, 2, m, p), std::invalid_argument);  // supports swapped
  auto deeper = std::make_shared<TranscriptNode>(*m);
  deeper->depth = 1;
  EXPECT_THROW(average_lift(view, 3, 2, p, deeper), std::invalid_argument);
  auto finer = std::make_shared<TranscriptNode>(*m);
  finer->epsilon = Rational(1, 2);
  EXPECT_THROW(average_lift(view, 3, 2, p, finer), std::invalid_argument);
  EXPECT_THROW(average_lift(view, 3, 2, p, nullptr), std::invalid_argument);
}

TEST(Prover, DepthZeroIsASingleNode)
{
  const auto d = build("1", 3);
  const auto t = prover_certify(d, 0, config(AdversaryKind::distance_functions));
  EXPECT_TRUE(t.root->moves.empty());
  EXPECT_EQ(t.families.size(), 2u);
  const auto r = verify_transcript(d->space(), t);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.nodes_checked, 1u);
}

TEST(Prover, DepthOneSeparationsAreExactlyOne)
{
  const auto d = build("1", 8);
  const auto t = prover_certify(d, 1, config(AdversaryKind::random_lipschitz, 3, 4));
  ASSERT_EQ(t.root->moves.size(), 4u);
  for (const auto &move : t.root->moves)
    EXPECT_EQ(free_norm(d->space(), move.response - t.root->target).value, Rational(1));
  EXPECT_TRUE(verify_transcript(d->space(), t).passed());
}

TEST(Prover, Preconditions)
{
  const auto d = build("2", 3);
  EXPECT_THROW(prover_certify(d, 3, {}), std::invalid_argument);
  EXPECT_THROW(prover_certify(d, 1, {}, Rational(0)), std::invalid_argument);
  EXPECT_THROW(prover_certify(build("w", 3, 2), 1, {}), std::invalid_argument);
  AdversaryConfig bad;
  bad.count = 0;
  EXPECT_THROW(prover_certify(d, 1, bad), std::invalid_argument);
}

TEST(Prover, GamesVerifyAndSurviveTheOracle)
{
  struct Case
  {
    const char *alpha;
    std::size_t n, depth;
  };
  for (const auto &c : {Case{"1", 3, 1}, Case{"2", 3, 2}, Case{"2", 4, 2}, Case{"3", 3, 3}})
    for (auto kind : {AdversaryKind::random_lipschitz, AdversaryKind::distance_functions, AdversaryKind::adaptive_dual})
      for (std::uint64_t seed : {1u, 2u}) {
        const auto d = build(c.alpha, c.n);
        auto cfg = config(kind, seed);
        cfg.horizon = c.n - 2;
        const auto t = prover_certify(d, c.depth, cfg);
        NormCache norms(d->space());
        const auto report = verify_transcript(norms, t);
        EXPECT_TRUE(report.passed()) << c.alpha << " " << to_string(kind) << " "
                                     << (report.passed() ? "" : report.violations.front().detail);
        for (bool ok : oracle_soundness(norms, t))
          EXPECT_TRUE(ok) << c.alpha << " " << to_string(kind);
      }
}

TEST(Prover, SummandViewsOfALimit)
{
  const auto w = build("w", 3, 3);
  const auto view = DiamondView::summand(w, 3);
  EXPECT_EQ(view.diamond->alpha(), Ordinal::natural(3));
  EXPECT_EQ(view.top(), w->landmarks().top);
  const auto t = prover_certify(view, 3, config(AdversaryKind::distance_functions));
  EXPECT_TRUE(verify_transcript(w->space(), t).passed());
  EXPECT_THROW(DiamondView::summand(w, 4), std::out_of_range);
  EXPECT_THROW(DiamondView::summand(build("2", 3), 1), std::invalid_argument);
}

TEST(Prover, UnrestrictedAdaptiveAdversaryCanExhaustThreeBranches)
{
  auto cfg = config(AdversaryKind::adaptive_dual, 1, 2);
  cfg.horizon = std::nullopt;
  EXPECT_THROW(prover_certify(build("3", 3), 3, cfg), InsufficientBranching);
}

TEST(Prover, Deterministic)
{
  const auto d = build("2", 4);
  const auto cfg = config(AdversaryKind::random_lipschitz, 9);
  const auto a = prover_certify(d, 2, cfg);
  const auto b = prover_certify(d, 2, cfg);
  EXPECT_EQ(transcript_vectors(a, d->space().base()), transcript_vectors(b, d->space().base()));
  for (std::size_t r = 0; r < a.families.size(); ++r)
    EXPECT_EQ(*a.families[r], *b.families[r]);
}

// Adding branches never turns a winning game into a losing one.
TEST(ProverProperty, MonotoneInBranching)
{
  for (auto kind : {AdversaryKind::random_lipschitz, AdversaryKind::distance_functions, AdversaryKind::adaptive_dual})
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
      for (std::size_t n = 3; n <= 5; ++n) {
        auto cfg = config(kind, seed);
        cfg.horizon = 1;
        const auto small = build("2", n), large = build("2", n + 1);
        const auto t = prover_certify(small, 2, cfg);
        ASSERT_TRUE(verify_transcript(small->space(), t).passed());
        EXPECT_TRUE(verify_transcript(large->space(), prover_certify(large, 2, cfg)).passed())
            << to_string(kind) << " seed " << seed << " n " << n + 1;
      }
}

class PlantedDefect : public ::testing::Test
{
protected:
  void SetUp() override
  {
    d = build("2", 3);
    t = prover_certify(d, 2, config(AdversaryKind::distance_functions));
    ASSERT_TRUE(verify_transcript(d->space(), t).passed());
  }

  VerificationReport verify() const { return verify_transcript(d->space(), t); }

  std::shared_ptr<const Diamond> d;
  GameTranscript t;
};

TEST_F(PlantedDefect, ResponseOutsideTheUnitBall)
{
  auto root = mutable_root(t);
  root->moves[0].response = Rational(3) * root->moves[0].response;
  const auto r = verify();
  EXPECT_TRUE(has_kind(r, ViolationKind::unit_ball));
  EXPECT_FALSE(r.at("root.m0").empty());
  EXPECT_TRUE(r.at("root.m1").empty());
}

TEST_F(PlantedDefect, ResponseOutsideTheNeighborhood)
{
  auto root = mutable_root(t);
  // m(t, x1) and the target m(t, b) pair differently with d(., x2).
  root->moves[1].response = molecule(d->space(), d->landmarks().top, d->space().base());
  auto fam = std::make_shared<FunctionalFamily>(*t.families[1]);
  fam->push_back(distance_function(d->space(), at(*d, "x2")));
  t.families[1] = fam;
  root->moves[1].neighborhood.functionals = fam;
  EXPECT_TRUE(has_kind(verify(), ViolationKind::neighborhood));
}

TEST_F(PlantedDefect, ResponseTooClose)
{
  auto root = mutable_root(t);
  root->moves[0].response = root->target;
  EXPECT_TRUE(has_kind(verify(), ViolationKind::separation));
}

TEST_F(PlantedDefect, OffCentreNeighborhood)
{
  auto root = mutable_root(t);
  root->moves[0].neighborhood.center = FreeVector();
  EXPECT_TRUE(has_kind(verify(), ViolationKind::center));
}

TEST_F(PlantedDefect, MissingMove)
{
  auto root = mutable_root(t);
  root->moves.pop_back();
  EXPECT_TRUE(has_kind(verify(), ViolationKind::move_coverage));
}

TEST_F(PlantedDefect, SubtreeMismatches)
{
  auto root = mutable_root(t);
  auto sub = std::make_shared<TranscriptNode>(*root->moves[0].response_subtree);
  sub->depth = 0;
  sub->moves.clear();
  root->moves[0].response_subtree = sub;
  auto other = std::make_shared<TranscriptNode>(*root->moves[1].target_subtree);
  other->target = FreeVector::delta(d->landmarks().top);
  root->moves[1].target_subtree = other;
  const auto r = verify();
  EXPECT_TRUE(has_kind(r, ViolationKind::subtree_depth));
  EXPECT_TRUE(has_kind(r, ViolationKind::subtree_target));
  EXPECT_FALSE(r.at("root.m1.t").empty());
}

TEST_F(PlantedDefect, FunctionalNotVanishingAtBase)
{
  auto fam = std::make_shared<FunctionalFamily>(*t.families[0]);
  std::vector<Rational> ones(d->space().size(), Rational(1));
  (*fam)[0] = LipschitzFunction::total(ones);
  t.families[0] = fam;
  EXPECT_TRUE(has_kind(verify(), ViolationKind::functional));
}

TEST_F(PlantedDefect, MissingRoot)
{
  t.root = nullptr;
  EXPECT_TRUE(has_kind(verify(), ViolationKind::malformed));
}

TEST(MidpointLift, HalvesSeparationAndStillVerifies)
{
  const auto d = build("2", 3);
  const auto &s = d->space();
  const auto t = prover_certify(d, 2, config(AdversaryKind::random_lipschitz));
  for (const auto &y : {FreeVector(), molecule(s, at(*d, "x3"), at(*d, "b")), -t.root->target}) {
    GameTranscript lifted = t;
    lifted.root = midpoint_lift(s, t.root, y);
    EXPECT_EQ(lifted.root->epsilon, Rational(1, 2));
    EXPECT_EQ(lifted.root->target, midpoint(t.root->target, y).without_base(s.base()));
    EXPECT_TRUE(verify_transcript(s, lifted).passed());
  }
  EXPECT_THROW(midpoint_lift(s, t.root, Rational(3) * FreeVector::delta(at(*d, "t"))), std::invalid_argument);
}

TEST(Oracle, DegenerateCases)
{
  const auto d = build("1", 3);
  const auto &s = d->space();
  const std::vector<FreeVector> two{molecule(s, at(*d, "t"), at(*d, "b")), molecule(s, at(*d, "x2"), at(*d, "b"))};
  const FunctionalFamily blind{LipschitzFunction::zero(s.size())};
  // Zero rounds keep everything; a blind family sees one box of diameter 1.
  EXPECT_EQ(relative_derivation_oracle(s, two, blind, Rational(1, 10), Rational(1), 0).size(), 2u);
  EXPECT_EQ(relative_derivation_oracle(s, two, blind, Rational(1, 10), Rational(1), 5).size(), 2u);
  EXPECT_TRUE(relative_derivation_oracle(s, two, blind, Rational(1, 10), Rational(11, 10), 1).empty());
  EXPECT_TRUE(relative_derivation_oracle(s, {two[0]}, blind, Rational(1, 10), Rational(1, 100), 1).empty());
  // A family that separates them leaves singleton boxes.
  const FunctionalFamily sharp{distance_function(s, at(*d, "x2"))};
  EXPECT_TRUE(relative_derivation_oracle(s, two, sharp, Rational(1, 10), Rational(1), 1).empty());
  EXPECT_THROW(relative_derivation_oracle(s, {Rational(3) * two[0]}, blind, Rational(1), Rational(1), 1),
               std::invalid_argument);
}

TEST(OracleProperty, SurvivorsShrinkWithRounds)
{
  const auto d = build("2", 3);
  const auto &s = d->space();
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<FreeVector> pool;
    for (int k = 0; k < 12; ++k) {
      const PointIndex x = rng.below(s.size()), y = rng.below(s.size());
      if (x != y)
        pool.push_back(molecule(s, x, y).without_base(s.base()));
    }
    auto cfg = config(AdversaryKind::random_lipschitz, trial + 1);
    cfg.horizon = std::nullopt;
    const auto family = Adversary(s, anchor_region(*d, std::nullopt), cfg).family(0, {}, {});
    std::vector<FreeVector> previous = pool;
    for (std::size_t k = 0; k <= 4; ++k) {
      const auto now = relative_derivation_oracle(s, pool, family, Rational(1, 4), Rational(1, 2), k);
      for (const auto &v : now)
        EXPECT_NE(std::find(previous.begin(), previous.end(), v), previous.end());
      previous = now;
    }
  }
}

// Depth-1 averages inside a depth-2 game on D_2[3]: each averaged response is
// the midpoint of the two copy-level escapes, and gluing the halves' dual
// potentials gives an independent lower bound of 1 on the separation.
TEST(AverageLift, SeparationMatchesTheGluedCertificate)
{
  const auto d = build("2", 3);
  const auto &s = d->space();
  const auto view = DiamondView::whole(d);
  const auto t = prover_certify(d, 2, config(AdversaryKind::random_lipschitz, 5, 3));
  ASSERT_TRUE(verify_transcript(s, t).passed());

  for (const auto &root_move : t.root->moves) {
    const auto escape = prover_escape(view, root_move.neighborhood);
    const auto plus = view.copy({Side::plus, escape.j});
    const auto minus = view.copy({Side::minus, escape.i});
    const auto &node = *root_move.response_subtree;
    ASSERT_EQ(node.depth, 1u);
    for (const auto &move : node.moves) {
      const WeakNeighborhood vp{move.neighborhood.functionals, pole_molecule(plus), t.eta};
      const WeakNeighborhood vm{move.neighborhood.functionals, pole_molecule(minus), t.eta};
      const auto rp = prover_escape(plus, vp).gamma, rm = prover_escape(minus, vm).gamma;
      EXPECT_EQ(move.response, midpoint(rp, rm).without_base(s.base()));

      const FreeVector dp = rp - pole_molecule(plus), dm = rm - pole_molecule(minus);
      auto on_copy = [&](const FreeVector &diff, CopyId id) {
        const auto potential = free_norm(s, diff).certificate.potential;
        const Rational shift = potential(d->subcopy_map(id)[d->predecessor()->landmarks().ell]);
        LipschitzFunction f(s.size());
        for (auto x : d->subcopy_points(id))
          f.set(x, potential(x) - shift);
        return f;
      };
      const auto g = glue_poles(*d, escape.j, on_copy(dp, {Side::plus, escape.j}), escape.i,
                                on_copy(dm, {Side::minus, escape.i}));
      const Rational bound = pair(g, move.response - node.target);
      EXPECT_GE(bound, Rational(1));
      EXPECT_EQ(bound, (free_norm(s, dp).value + free_norm(s, dm).value) / 2);
      EXPECT_GE(free_norm(s, move.response - node.target).value, bound);
    }
  }
}
