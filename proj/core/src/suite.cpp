#include "lipfree/suite.hpp"

#include "lipfree/decomposition.hpp"
#include "lipfree/derivation.hpp"
#include "lipfree/errors.hpp"
#include "lipfree/freespace.hpp"
#include "lipfree/io.hpp"
#include "lipfree/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

namespace lipfree {

std::string to_string(CheckStatus status)
{
  switch (status) {
  case CheckStatus::pass:
    return "pass";
  case CheckStatus::fail:
    return "fail";
  case CheckStatus::skip:
    return "skip";
  }
  return {};
}

bool SuiteReport::passed() const
{
  return std::none_of(entries.begin(), entries.end(), [](const SuiteEntry &e) { return e.status == CheckStatus::fail; });
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome
{
  bool ok = true;
  std::string details;
};

/// Collects failure messages; the first few go into the details string.
class Tally
{
public:
  void expect(bool condition, const std::string &what)
  {
    ++checks_;
    if (!condition) {
      ++failures_;
      if (messages_.size() < 3)
        messages_.push_back(what);
    }
  }

  Outcome outcome(const std::string &summary) const
  {
    Outcome out;
    out.ok = failures_ == 0;
    out.details = summary;
    if (!out.ok) {
      out.details += "; " + std::to_string(failures_) + " of " + std::to_string(checks_) + " checks failed";
      for (const auto &m : messages_)
        out.details += "; " + m;
    }
    return out;
  }

  std::size_t checks() const { return checks_; }

private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
};

class Suite
{
public:
  explicit Suite(const SuiteConfig &config) : config_(config) {}

  std::shared_ptr<const Diamond> diamond(const Ordinal &alpha, std::size_t branches, std::size_t width = 1)
  {
    DiamondSpec spec;
    spec.alpha = alpha;
    spec.branches = branches;
    spec.limit_width = width;
    spec.budget_points = config_.budget_points;
    return Diamond::build(spec);
  }

  std::size_t branches_or(std::size_t n) const { return config_.branches.value_or(n); }
  Rng rng(std::uint64_t label) const { return Rng::stream(config_.seed, label); }

  Outcome metric_oracle();
  Outcome molecule_norms();
  Outcome isometric_embedding();
  Outcome duality_gap();
  Outcome single_escape();
  Outcome depth_games();
  Outcome midpoint_combinator();
  Outcome gluing_lemma();
  Outcome decomposition_constants();
  Outcome determinism_round_trip();

  std::uint64_t norm_calls_at_start = free_norm_calls();

private:
  const SuiteConfig &config_;
};

// ---------------------------------------------------------------------------

Outcome Suite::metric_oracle()
{
  Tally tally;
  const auto start = Clock::now();
  std::vector<DiamondSpec> specs;
  for (std::uint64_t a = 1; a <= 3; ++a)
    for (std::size_t n : {3, 4})
      specs.push_back({Ordinal::natural(a), n, 1, config_.budget_points});
  for (std::size_t n : {3, 4})
    specs.push_back({Ordinal::omega(), n, 3, config_.budget_points});

  std::size_t pairs = 0;
  for (const auto &spec : specs) {
    const auto d = Diamond::build(spec);
    const auto &space = d->space();
    const auto name = "D_" + spec.alpha.to_string() + "[" + std::to_string(spec.branches) + "]";
    const auto n = space.size();

    const auto closure = shortest_path_closure(n, space.finest_edges());
    bool same = true;
    for (std::size_t k = 0; k < n * n && same; ++k)
      same = closure[k] && *closure[k] == space.matrix()[k];
    tally.expect(same, name + ": finest-edge closure differs from the recursive metric");

    const auto graph = substitution_graph(spec);
    std::vector<PointIndex> where;
    bool labels_match = graph.labels.size() == n;
    for (const auto &label : graph.labels) {
      const auto k = space.index_of(label);
      labels_match = labels_match && k.has_value();
      where.push_back(k.value_or(0));
    }
    tally.expect(labels_match, name + ": substitution graph has a different vertex set");
    if (labels_match) {
      const auto literal = shortest_path_closure(n, graph.edges);
      bool equal = true;
      for (std::size_t a = 0; a < n && equal; ++a)
        for (std::size_t b = 0; b < n && equal; ++b)
          equal = literal[a * n + b] && *literal[a * n + b] == space.d(where[a], where[b]);
      tally.expect(equal, name + ": substitution-graph closure differs from the recursive metric");
    }
    tally.expect(!check_metric_axioms(space, n).has_value(), name + ": metric axioms fail");
    pairs += n * n;
  }
  const double elapsed = seconds_since(start);
  tally.expect(elapsed < 60, "runtime " + std::to_string(elapsed) + " s exceeds 60 s");
  return tally.outcome(std::to_string(specs.size()) + " truncations, " + std::to_string(pairs) +
                       " ordered pairs equal under both closures");
}

Outcome Suite::molecule_norms()
{
  Tally tally;
  std::size_t count = 0;
  auto check = [&](const MetricSpace &space, PointIndex x, PointIndex y, const std::string &name) {
    const auto m = molecule(space, x, y);
    const auto norm = free_norm(space, m);
    tally.expect(norm.value == 1, name + ": ||m(" + space.label(x) + "," + space.label(y) + ")|| = " +
                                      format_rational(norm.value));
    tally.expect(certificate_is_valid(space, m, norm.certificate), name + ": invalid certificate");
    ++count;
  };
  for (const auto &[alpha, n] : {std::pair<std::uint64_t, std::size_t>{1, 4}, {2, 3}}) {
    const auto d = diamond(Ordinal::natural(alpha), n);
    const auto &space = d->space();
    for (PointIndex x = 0; x < space.size(); ++x)
      for (PointIndex y = 0; y < space.size(); ++y)
        if (x != y)
          check(space, x, y, "D_" + std::to_string(alpha));
  }
  const auto d3 = diamond(Ordinal::natural(3), 3);
  auto r = rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto x = r.below(d3->space().size());
    auto y = r.below(d3->space().size() - 1);
    if (y >= x)
      ++y;
    check(d3->space(), x, y, "D_3");
  }
  return tally.outcome(std::to_string(count) + " molecules of norm exactly 1/1 with valid certificates");
}

FreeVector random_vector(Rng &r, const std::vector<PointIndex> &pool, std::size_t max_support)
{
  FreeVector v;
  const auto k = 1 + r.below(max_support);
  for (std::size_t s = 0; s < k; ++s) {
    std::int64_t num = r.between(-6, 5);
    if (num >= 0)
      ++num;
    v.add(pool[r.below(pool.size())], ratio(num, r.between(1, 4)));
  }
  if (v.is_zero())
    v.add(pool.front(), Rational(1));
  return v;
}

std::vector<PointIndex> all_points(const MetricSpace &space)
{
  std::vector<PointIndex> out(space.size());
  for (PointIndex x = 0; x < space.size(); ++x)
    out[x] = x;
  return out;
}

Outcome Suite::isometric_embedding()
{
  Tally tally;
  const auto d = diamond(Ordinal::natural(3), 3);
  const auto &space = d->space();
  auto r = rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto x = r.below(space.size());
    auto y = r.below(space.size() - 1);
    if (y >= x)
      ++y;
    const auto value = free_norm(space, FreeVector::delta(x) - FreeVector::delta(y)).value;
    tally.expect(value == space.d(x, y), "||delta(" + space.label(x) + ") - delta(" + space.label(y) + ")|| = " +
                                             format_rational(value) + " but d = " + format_rational(space.d(x, y)));
  }
  const auto pool = all_points(space);
  for (int k = 0; k < 50; ++k) {
    const auto v = random_vector(r, pool, 5);
    std::vector<PointIndex> subset{space.base()};
    for (const auto &[x, c] : v.support())
      if (x != space.base())
        subset.push_back(x);
    const auto sub = space.restrict_to(subset, space.base());
    FreeVector local;
    for (const auto &[x, c] : v.support())
      local.add(static_cast<PointIndex>(std::find(subset.begin(), subset.end(), x) - subset.begin()), c);
    const auto whole = free_norm(space, v).value;
    const auto restricted = free_norm(sub, local).value;
    tally.expect(whole == restricted,
                 "norm " + format_rational(whole) + " changes to " + format_rational(restricted) + " on restriction");
  }
  return tally.outcome("100 pairs with ||delta(x) - delta(y)|| = d(x,y); 50 vectors with restriction-invariant norm");
}

Outcome Suite::duality_gap()
{
  Tally tally;
  std::size_t rechecked = 0;
  auto r = rng(4);
  for (const auto &d : {diamond(Ordinal::natural(2), 3), diamond(Ordinal::omega(), 3, 3)}) {
    const auto &space = d->space();
    const auto pool = all_points(space);
    for (int k = 0; k < 100; ++k) {
      const auto v = random_vector(r, pool, 6);
      const auto norm = free_norm(space, v);
      tally.expect(certificate_is_valid(space, v, norm.certificate), "certificate fails the independent check");
      ++rechecked;
    }
  }
  const auto calls = free_norm_calls() - norm_calls_at_start;
  return tally.outcome(std::to_string(calls) + " free_norm evaluations with plan cost = dual pairing = value; " +
                       std::to_string(rechecked) + " certificates re-checked independently");
}

Outcome Suite::single_escape()
{
  Tally tally;
  const auto n = branches_or(8);
  const auto d = diamond(Ordinal::natural(1), n);
  const auto view = DiamondView::whole(d);
  const auto &space = d->space();
  const auto center = pole_molecule(view);
  const AdversaryKind kinds[] = {AdversaryKind::random_lipschitz, AdversaryKind::distance_functions,
                                 AdversaryKind::adaptive_dual};
  std::map<std::pair<std::size_t, std::size_t>, int> pairs;
  for (std::uint64_t s = 0; s < 20; ++s) {
    AdversaryConfig config;
    config.kind = kinds[s % 3];
    config.count = 1 + s % 5;
    config.seed = config_.seed + s;
    config.horizon = n >= 3 ? std::min<std::size_t>(5, n - 2) : 0;
    const Adversary adversary(space, anchor_region(*d, config.horizon), config);
    std::vector<FreeVector> earlier;
    std::size_t round = 0;
    if (config.kind == AdversaryKind::adaptive_dual) {
      const auto first = std::make_shared<const FunctionalFamily>(adversary.family(0, center, {}));
      earlier.push_back(prover_escape(view, {first, center, config.eta}).gamma);
      round = 1;
    }
    const auto family = std::make_shared<const FunctionalFamily>(adversary.family(round, center, earlier));
    const WeakNeighborhood V{family, center, config.eta};
    const auto escape = prover_escape(view, V);
    ++pairs[{escape.i, escape.j}];
    tally.expect(in_neighborhood(V, escape.gamma), "escape outside its neighborhood");
    const auto gap = free_norm(space, escape.gamma - center).value;
    tally.expect(gap == 1, "||gamma - m(t,b)|| = " + format_rational(gap));
  }
  std::ostringstream summary;
  summary << "20 families on D_1[" << n << "]; escape pairs";
  for (const auto &[p, c] : pairs)
    summary << " (" << p.first << "," << p.second << ")x" << c;
  return tally.outcome(summary.str());
}

Outcome Suite::depth_games()
{
  Tally tally;
  struct Case
  {
    std::size_t depth;
    std::size_t branches;
  };
  const Case cases[] = {{1, branches_or(8)}, {2, branches_or(4)}, {3, branches_or(3)}};
  const AdversaryKind kinds[] = {AdversaryKind::random_lipschitz, AdversaryKind::distance_functions,
                                 AdversaryKind::adaptive_dual};
  std::size_t games = 0, nodes = 0;
  double slowest_deep = 0;
  for (const auto &c : cases) {
    const auto d = diamond(Ordinal::natural(c.depth), c.branches);
    NormCache norms(d->space());
    for (auto kind : kinds)
      for (std::uint64_t s = 0; s < 3; ++s) {
        AdversaryConfig config;
        config.kind = kind;
        config.seed = config_.seed + s;
        config.horizon = c.branches >= 3 ? c.branches - 2 : 0;
        const auto start = Clock::now();
        const auto t = prover_certify(d, c.depth, config);
        const auto report = verify_transcript(norms, t);
        const auto sound = oracle_soundness(norms, t);
        const double elapsed = seconds_since(start);
        const auto name = "depth " + std::to_string(c.depth) + " " + to_string(kind) + " seed " +
                          std::to_string(config.seed);
        tally.expect(report.passed(), name + ": verification failed (" +
                                          (report.passed() ? std::string() : to_string(report.violations[0].kind)) +
                                          ")");
        tally.expect(std::all_of(sound.begin(), sound.end(), [](bool b) { return b; }) && !sound.empty(),
                     name + ": root does not survive the oracle");
        if (c.depth == 3) {
          slowest_deep = std::max(slowest_deep, elapsed);
          tally.expect(elapsed < 120, name + ": took " + std::to_string(elapsed) + " s");
        }
        ++games;
        nodes += report.nodes_checked;
      }
  }
  (void)slowest_deep;
  return tally.outcome(std::to_string(games) + " games verified (" + std::to_string(nodes) +
                       " nodes); root survives every oracle run");
}

Outcome Suite::midpoint_combinator()
{
  Tally tally;
  const AdversaryKind kinds[] = {AdversaryKind::random_lipschitz, AdversaryKind::distance_functions,
                                 AdversaryKind::adaptive_dual};
  int produced = 0;
  for (const auto &[depth, n] : {std::pair<std::size_t, std::size_t>{1, branches_or(8)}, {2, branches_or(4)}}) {
    const auto d = diamond(Ordinal::natural(depth), n);
    NormCache norms(d->space());
    for (std::uint64_t s = 0; s < 5; ++s) {
      AdversaryConfig config;
      config.kind = kinds[s % 3];
      config.seed = config_.seed + 10 + s;
      config.horizon = n >= 3 ? n - 2 : 0;
      const auto t = prover_certify(d, depth, config);
      tally.expect(verify_transcript(norms, t).passed(), "input certificate does not verify");
      auto lifted = t;
      lifted.root = midpoint_lift(d->space(), t.root, -t.root->target);
      tally.expect(lifted.root->target.is_zero(), "lifted target is not the zero vector");
      tally.expect(lifted.root->epsilon == t.root->epsilon / 2, "epsilon was not halved");
      const auto report = verify_transcript(norms, lifted);
      tally.expect(report.passed(), "lifted certificate fails verification (" +
                                        (report.passed() ? std::string() : to_string(report.violations[0].kind)) +
                                        ")");
      ++produced;
    }
  }
  return tally.outcome(std::to_string(produced) + " certificates lifted to the zero vector at epsilon 1/2 and verified");
}

Outcome Suite::gluing_lemma()
{
  Tally tally;
  auto r = rng(8);
  int gluings = 0;
  for (std::uint64_t alpha : {2, 3}) {
    const auto d = diamond(Ordinal::natural(alpha), branches_or(3));
    const auto &space = d->space();
    const auto n = d->landmarks().mids.size();
    if (n < 3)
      throw InsufficientBranching(d->alpha(), n, 2);
    const auto pred_ell = d->predecessor()->landmarks().ell;

    // Sub-copy as its own pointed space, with the vector and potential
    // moved between local and ambient indices.
    struct Piece
    {
      std::vector<PointIndex> points;
      PointIndex origin;
      MetricSpace space;
    };
    auto piece = [&](CopyId which) {
      const auto points = d->subcopy_points(which);
      const auto origin = d->subcopy_map(which)[pred_ell];
      return Piece{points, origin, space.restrict_to(points, origin)};
    };

    for (int k = 0; k < 25; ++k) {
      std::size_t j = 2 + r.below(n - 1);
      std::size_t i = 2 + r.below(n - 2);
      if (i >= j)
        ++i;
      const auto plus = piece({Side::plus, j});
      const auto minus = piece({Side::minus, i});

      auto sample = [&](const Piece &p, FreeVector &ambient, LipschitzFunction &potential) {
        FreeVector local = random_vector(r, all_points(p.space), 4).without_base(p.space.base());
        if (local.is_zero())
          local.add(p.space.base() == 0 ? 1 : 0, Rational(1));
        ambient = FreeVector();
        for (const auto &[x, c] : local.support()) {
          ambient.add(p.points[x], c);
          ambient.add(p.origin, -c);
        }
        const auto norm = free_norm(p.space, local);
        potential = LipschitzFunction(space.size());
        for (PointIndex x = 0; x < p.points.size(); ++x)
          potential.set(p.points[x], norm.certificate.potential(x));
        return norm.value;
      };
      FreeVector g_plus, g_minus;
      LipschitzFunction f_plus, f_minus;
      const Rational n_plus = sample(plus, g_plus, f_plus);
      const Rational n_minus = sample(minus, g_minus, f_minus);
      tally.expect(free_norm(space, g_plus).value == n_plus && free_norm(space, g_minus).value == n_minus,
                   "sub-copy norm differs from the ambient norm");

      const auto glued = glue_poles(*d, j, f_plus, i, f_minus);
      tally.expect(lip_constant(space, glued) <= 1, "glued function has constant " +
                                                       format_rational(lip_constant(space, glued)));
      tally.expect(sgn(glued(space.base())) == 0, "glued function does not vanish at the base point");

      const FreeVector average = midpoint(g_plus, g_minus);
      const Rational epsilon = std::min(n_plus, n_minus);
      const Rational value = free_norm(space, average).value;
      tally.expect(value >= epsilon, "||(g+ + g-)/2|| = " + format_rational(value) + " < " + format_rational(epsilon));
      tally.expect(pair(glued, average) == (n_plus + n_minus) / 2, "glued function does not norm the average");
      ++gluings;
    }
  }
  return tally.outcome(std::to_string(gluings) +
                       " gluings 1-Lipschitz and vanishing at the base; averaged norms never below the smaller half");
}

Outcome Suite::decomposition_constants()
{
  Tally tally;
  const auto d = diamond(Ordinal::omega(), 3, 3);
  const auto &space = d->space();
  const auto cover = build_cover(*d);
  tally.expect(cover.covers(space.size()), "A and B do not cover the space");
  const auto min_d = cover.min_D();
  tally.expect(min_d && *min_d >= Rational(1, 2), "min D < 1/2");
  const auto &d_bottom = cover.D[d->landmarks().bottom];
  tally.expect(d_bottom && *d_bottom >= Rational(3, 2), "D(b) < 3/2");

  const auto a = a_subspace(*d, cover);
  const auto summing = summing_metric(a.space, a.partition);
  const auto constants = equivalence_constants(a.space, summing);
  tally.expect(constants.low >= Rational(1, 3), "c_low = " + format_rational(constants.low));
  tally.expect(constants.high <= 1, "c_high = " + format_rational(constants.high));

  auto r = rng(9);
  auto across = [&] {
    FreeVector v;
    for (const auto &summand : a.partition.summands) {
      const auto k = 1 + r.below(2);
      for (std::size_t s = 0; s < k; ++s) {
        std::int64_t num = r.between(-5, 4);
        if (num >= 0)
          ++num;
        v.add(summand[r.below(summand.size())], ratio(num, r.between(1, 3)));
      }
    }
    return v;
  };
  for (int k = 0; k < 30; ++k) {
    const auto report = ell1_additivity_check(summing, a.partition, across());
    tally.expect(report.holds, "additivity: " + format_rational(report.whole) + " vs " + format_rational(report.sum));
  }
  for (int k = 0; k < 30; ++k) {
    const auto report = projection_identity_check(summing, a.partition, across());
    tally.expect(report.holds, "projection identity fails");
  }
  std::ostringstream summary;
  summary << space.size() << " points, |A| = " << cover.A.size() << ", |B| = " << cover.B.size()
          << ", min D = " << (min_d ? format_rational(*min_d) : "inf") << ", c_low = " << format_rational(constants.low)
          << " at (" << a.space.label(constants.low_pair.first) << ", " << a.space.label(constants.low_pair.second)
          << "), c_high = " << format_rational(constants.high) << ", " << a.partition.summands.size()
          << " summands; additivity and projection identity exact on 30 vectors each";
  return tally.outcome(summary.str());
}

// Every exact number below the root of a transcript document.
void collect_numbers(const nlohmann::json &node, const nlohmann::json::json_pointer &at,
                     std::vector<nlohmann::json::json_pointer> &out)
{
  if (node.is_object()) {
    for (const auto &[key, value] : node.items()) {
      if (key == "status" || key == "violations")
        continue;
      collect_numbers(value, at / key, out);
    }
  } else if (node.is_array()) {
    for (std::size_t k = 0; k < node.size(); ++k)
      collect_numbers(node[k], at / k, out);
  } else if (node.is_string()) {
    out.push_back(at);
  }
}

Outcome Suite::determinism_round_trip()
{
  Tally tally;
  const auto d4 = diamond(Ordinal::natural(2), branches_or(4));
  const auto &space = d4->space();

  AdversaryConfig config;
  config.seed = config_.seed;
  config.horizon = branches_or(4) >= 3 ? branches_or(4) - 2 : 0;
  GameTranscript sample;
  for (auto kind : {AdversaryKind::random_lipschitz, AdversaryKind::distance_functions, AdversaryKind::adaptive_dual}) {
    config.kind = kind;
    const auto a = io::write_transcript(space, prover_certify(d4, 2, config));
    const auto b = io::write_transcript(space, prover_certify(d4, 2, config));
    tally.expect(a == b, to_string(kind) + " transcripts differ between identical runs");
    const auto back = io::write_transcript(space, io::read_transcript(space, a));
    tally.expect(back == a, to_string(kind) + " transcript does not round-trip");
    if (kind == AdversaryKind::distance_functions)
      sample = io::read_transcript(space, a);
  }

  SuiteConfig small = config_;
  small.only = {5, 9};
  small.include_timings = false;
  tally.expect(write_report(run_suite(small)) == write_report(run_suite(small)),
               "suite reports differ between identical runs");

  const auto d2 = diamond(Ordinal::natural(2), 3);
  const auto space_text = io::write_space(d2->space(), d2->spec());
  const auto loaded = io::read_space(space_text);
  tally.expect(loaded.space.labels() == d2->space().labels() && loaded.space.matrix() == d2->space().matrix() &&
                   loaded.space.base() == d2->space().base() && loaded.spec == d2->spec(),
               "space does not round-trip");
  tally.expect(io::write_space(loaded.space, loaded.spec) == space_text, "space text is not stable");

  auto r = rng(10);
  const auto pool = all_points(d2->space());
  for (int k = 0; k < 10; ++k) {
    const auto v = random_vector(r, pool, 5);
    tally.expect(io::read_vector(d2->space(), io::write_vector(d2->space(), v)) == v, "vector does not round-trip");
    const auto f = free_norm(d2->space(), v).certificate.potential;
    tally.expect(io::read_function(d2->space(), io::write_function(d2->space(), f)) == f,
                 "function does not round-trip");
  }
  const auto dw = diamond(Ordinal::omega(), 3, 3);
  const auto a = a_subspace(*dw, build_cover(*dw));
  const auto partition_text = io::write_partition(a.space, a.partition);
  const auto partition = io::read_partition(a.space, partition_text);
  tally.expect(partition.base == a.partition.base && partition.summands == a.partition.summands,
               "partition does not round-trip");

  // Mutation fuzzing: change one exact number under the root and re-verify.
  NormCache norms(space);
  tally.expect(verify_transcript(norms, sample).passed(), "unmutated transcript fails verification");
  const auto text = io::write_transcript(space, sample);
  const auto doc = nlohmann::json::parse(text);
  std::vector<nlohmann::json::json_pointer> numbers;
  collect_numbers(doc["root"], nlohmann::json::json_pointer("/root"), numbers);
  int caught = 0;
  const int mutants = 20;
  for (int k = 0; k < mutants; ++k) {
    auto mutant = doc;
    const auto &where = numbers[r.below(numbers.size())];
    Rational value = parse_rational(mutant[where].get<std::string>());
    Rational delta = ratio(r.between(1, 5), r.between(1, 4));
    if (r.below(2) == 0)
      delta = -delta;
    value += delta;
    if (sgn(value) == 0)
      value += delta;
    mutant[where] = format_rational(value);
    const auto t = io::read_transcript(space, mutant.dump(2));
    if (!verify_transcript(norms, t).passed())
      ++caught;
    else
      tally.expect(false, "mutant at " + where.to_string() + " passes verification");
  }
  std::ostringstream summary;
  summary << "transcripts and suite reports byte-identical across runs; space, vector, function, partition and "
             "transcript round-trips exact; "
          << caught << "/" << mutants << " mutants rejected";
  return tally.outcome(summary.str());
}

struct CheckDef
{
  int id;
  const char *name;
  const char *claim;
  Outcome (Suite::*run)();
};

const CheckDef kChecks[] = {
    {1, "metric_oracle", "recursive diamond metric equals the shortest-path closure of its finest edges",
     &Suite::metric_oracle},
    {2, "molecule_norms", "molecules have norm one", &Suite::molecule_norms},
    {3, "isometric_embedding", "x -> delta(x) is an isometry and norms do not depend on the ambient space",
     &Suite::isometric_embedding},
    {5, "single_escape", "every finite weak neighborhood of m(t,b) in D_1 contains a point at distance one",
     &Suite::single_escape},
    {6, "depth_games", "m(t,b) survives k derivation rounds in D_k", &Suite::depth_games},
    {7, "midpoint_combinator", "half a derived point plus half a ball point is derived at half the separation",
     &Suite::midpoint_combinator},
    {8, "gluing_lemma", "averages of separated vectors in disjoint sub-copies stay separated", &Suite::gluing_lemma},
    {9, "decomposition_constants", "A/B cover, summing distance equivalence, l1 additivity and projection identity",
     &Suite::decomposition_constants},
    {10, "determinism_round_trip", "runs are reproducible, formats round-trip, tampering is detected",
     &Suite::determinism_round_trip},
    {4, "duality_gap", "every free-norm evaluation has zero duality gap", &Suite::duality_gap},
};

}  // namespace

SuiteReport run_suite(const SuiteConfig &config, const std::function<void(const SuiteEntry &)> &progress)
{
  SuiteReport report;
  report.seeds = {config.seed};
  report.include_timings = config.include_timings;
  Suite suite(config);
  for (const auto &check : kChecks) {
    if (!config.only.empty() && std::find(config.only.begin(), config.only.end(), check.id) == config.only.end())
      continue;
    SuiteEntry entry;
    entry.id = check.id;
    entry.name = check.name;
    entry.claim = check.claim;
    const auto start = Clock::now();
    try {
      const auto outcome = (suite.*check.run)();
      entry.status = outcome.ok ? CheckStatus::pass : CheckStatus::fail;
      entry.details = outcome.details;
    } catch (const BudgetExceeded &e) {
      entry.status = CheckStatus::skip;
      entry.details = std::string("budget: ") + e.what();
    } catch (const InsufficientBranching &e) {
      entry.status = CheckStatus::fail;
      entry.details = std::string("insufficient branching: ") + e.what();
    } catch (const std::exception &e) {
      entry.status = CheckStatus::fail;
      entry.details = std::string("error: ") + e.what();
    }
    entry.seconds = seconds_since(start);
    if (progress)
      progress(entry);
    report.entries.push_back(std::move(entry));
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const SuiteEntry &a, const SuiteEntry &b) { return a.id < b.id; });
  return report;
}

std::string write_report(const SuiteReport &report)
{
  nlohmann::json doc{{"format", "lipfree-suite-report"},
                     {"version", 1},
                     {"tool_version", report.tool_version},
                     {"seeds", report.seeds},
                     {"verdict", report.passed() ? "pass" : "fail"}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto &e : report.entries) {
    nlohmann::json entry{{"id", e.id},
                         {"name", e.name},
                         {"claim", e.claim},
                         {"status", to_string(e.status)},
                         {"details", e.details}};
    if (report.include_timings)
      entry["seconds"] = e.seconds;
    checks.push_back(std::move(entry));
  }
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

}  // namespace lipfree
