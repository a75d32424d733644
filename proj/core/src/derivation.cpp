#include "lipfree/derivation.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

namespace lipfree {

bool in_neighborhood(const WeakNeighborhood &V, const FreeVector &v)
{
  if (!V.functionals)
    throw std::invalid_argument("neighborhood without functionals");
  const FreeVector difference = v - V.center;
  for (const auto &f : *V.functionals)
    if (abs_value(pair(f, difference)) > V.eta)
      return false;
  return true;
}

InsufficientBranching::InsufficientBranching(Ordinal level, std::size_t branches, std::size_t lowest_index)
    : std::runtime_error("no escape pair at level " + level.to_string() + ": tested " + std::to_string(lowest_index) +
                         " <= i < j <= " + std::to_string(branches) + "; retry with at least " +
                         std::to_string(branches + 1) + " branches"),
      level_(std::move(level)), branches_(branches), lowest_index_(lowest_index)
{
}

// ---------------------------------------------------------------------------
// Views

DiamondView DiamondView::whole(std::shared_ptr<const Diamond> diamond)
{
  DiamondView view;
  view.to_ambient.resize(diamond->space().size());
  std::iota(view.to_ambient.begin(), view.to_ambient.end(), PointIndex{0});
  view.ambient = diamond;
  view.diamond = std::move(diamond);
  return view;
}

DiamondView DiamondView::summand(std::shared_ptr<const Diamond> diamond, std::size_t m)
{
  if (!diamond->is_limit())
    throw std::invalid_argument("summand views exist only at limit stages");
  if (m == 0 || m > diamond->summands().size())
    throw std::out_of_range("summand " + std::to_string(m) + " not kept (limit width " +
                            std::to_string(diamond->summands().size()) + ")");
  const auto &s = diamond->summands()[m - 1];
  DiamondView view;
  view.diamond = s.diamond;
  view.to_ambient = s.injection;
  view.ambient = std::move(diamond);
  return view;
}

DiamondView DiamondView::copy(CopyId which) const
{
  const auto &map = diamond->subcopy_map(which);
  DiamondView view;
  view.ambient = ambient;
  view.diamond = diamond->predecessor();
  view.to_ambient.reserve(map.size());
  for (auto k : map)
    view.to_ambient.push_back(to_ambient[k]);
  return view;
}

std::vector<PointIndex> DiamondView::points() const
{
  std::vector<PointIndex> out = to_ambient;
  std::sort(out.begin(), out.end());
  return out;
}

FreeVector pole_molecule(const DiamondView &view)
{
  const auto &space = view.ambient->space();
  return molecule(space, view.top(), view.bottom()).without_base(space.base());
}

// ---------------------------------------------------------------------------
// Prover

Escape prover_escape(const DiamondView &view, const WeakNeighborhood &V)
{
  if (!view.diamond->is_successor())
    throw std::invalid_argument("escape needs a successor stage, got level " + view.diamond->alpha().to_string());
  const auto &space = view.ambient->space();
  const auto base = space.base();
  if (V.center.without_base(base) != pole_molecule(view))
    throw std::invalid_argument("escape neighborhood must be centred at the pole molecule");

  const auto n = view.branches();
  for (std::size_t i = 2; i <= n; ++i) {
    const FreeVector lower = molecule(space, view.mid(i), view.bottom());
    for (std::size_t j = i + 1; j <= n; ++j) {
      FreeVector gamma = midpoint(molecule(space, view.top(), view.mid(j)), lower).without_base(base);
      if (in_neighborhood(V, gamma))
        return {i, j, std::move(gamma)};
    }
  }
  throw InsufficientBranching(view.diamond->alpha(), n, 2);
}

namespace {

NodePtr leaf(FreeVector target, const Rational &epsilon)
{
  auto node = std::make_shared<TranscriptNode>();
  node->target = std::move(target);
  node->epsilon = epsilon;
  return node;
}

bool same_family(const WeakNeighborhood &a, const WeakNeighborhood &b)
{
  return a.functionals == b.functionals || (a.functionals && b.functionals && *a.functionals == *b.functionals);
}

void require_support(const FreeVector &v, const std::set<PointIndex> &allowed, const char *which)
{
  for (const auto &[x, c] : v.support())
    if (!allowed.count(x))
      throw std::invalid_argument(std::string("average_lift: ") + which + " vector leaves its copy at point " +
                                  std::to_string(x));
}

class AverageLift
{
public:
  AverageLift(std::set<PointIndex> plus_points, std::set<PointIndex> minus_points)
      : plus_(std::move(plus_points)), minus_(std::move(minus_points))
  {
  }

  NodePtr combine(const NodePtr &p, const NodePtr &m)
  {
    if (!p || !m)
      throw std::invalid_argument("average_lift: missing certificate");
    const auto key = std::make_pair(p.get(), m.get());
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
    if (p->depth != m->depth)
      throw std::invalid_argument("average_lift: depths differ (" + std::to_string(p->depth) + " vs " +
                                  std::to_string(m->depth) + ")");
    if (p->epsilon != m->epsilon)
      throw std::invalid_argument("average_lift: epsilons differ");
    if (p->moves.size() != m->moves.size())
      throw std::invalid_argument("average_lift: move counts differ");
    require_support(p->target, plus_, "plus");
    require_support(m->target, minus_, "minus");

    auto node = std::make_shared<TranscriptNode>();
    node->target = midpoint(p->target, m->target);
    node->depth = p->depth;
    node->epsilon = p->epsilon;
    for (std::size_t r = 0; r < p->moves.size(); ++r) {
      const auto &a = p->moves[r];
      const auto &b = m->moves[r];
      if (!same_family(a.neighborhood, b.neighborhood) || a.neighborhood.eta != b.neighborhood.eta)
        throw std::invalid_argument("average_lift: move " + std::to_string(r) + " poses different neighborhoods");
      require_support(a.response, plus_, "plus");
      require_support(b.response, minus_, "minus");
      TranscriptMove move;
      move.neighborhood = {a.neighborhood.functionals, node->target, a.neighborhood.eta};
      move.response = midpoint(a.response, b.response);
      move.response_subtree = combine(a.response_subtree, b.response_subtree);
      move.target_subtree = combine(a.target_subtree, b.target_subtree);
      node->moves.push_back(std::move(move));
    }
    memo_.emplace(key, node);
    return node;
  }

private:
  std::set<PointIndex> plus_;
  std::set<PointIndex> minus_;
  std::map<std::pair<const TranscriptNode *, const TranscriptNode *>, NodePtr> memo_;
};

class MidpointLift
{
public:
  MidpointLift(PointIndex base, FreeVector y) : base_(base), y_(std::move(y)) {}

  NodePtr lift(const NodePtr &x)
  {
    if (!x)
      throw std::invalid_argument("midpoint_lift: missing certificate");
    if (auto it = memo_.find(x.get()); it != memo_.end())
      return it->second;
    auto node = std::make_shared<TranscriptNode>();
    node->target = shifted(x->target);
    node->depth = x->depth;
    node->epsilon = x->epsilon / 2;
    for (const auto &move : x->moves) {
      TranscriptMove out;
      out.neighborhood = {move.neighborhood.functionals, node->target, move.neighborhood.eta};
      out.response = shifted(move.response);
      out.response_subtree = lift(move.response_subtree);
      out.target_subtree = lift(move.target_subtree);
      node->moves.push_back(std::move(out));
    }
    memo_.emplace(x.get(), node);
    return node;
  }

private:
  FreeVector shifted(const FreeVector &v) const { return midpoint(v, y_).without_base(base_); }

  PointIndex base_;
  FreeVector y_;
  std::map<const TranscriptNode *, NodePtr> memo_;
};

class Prover
{
public:
  Prover(const GameTranscript &transcript, const Rational &epsilon) : transcript_(transcript), epsilon_(epsilon) {}

  NodePtr certify(const DiamondView &view, std::size_t depth)
  {
    const auto key = std::make_tuple(view.top(), view.bottom(), depth);
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;

    auto node = std::make_shared<TranscriptNode>();
    node->target = pole_molecule(view);
    node->depth = depth;
    node->epsilon = epsilon_;
    if (depth > 0) {
      const NodePtr same_target = certify(view, depth - 1);
      for (const auto &family : transcript_.families) {
        TranscriptMove move;
        move.neighborhood = {family, node->target, transcript_.eta};
        auto escape = prover_escape(view, move.neighborhood);
        move.response = escape.gamma;
        if (depth == 1)
          move.response_subtree = leaf(escape.gamma, epsilon_);
        else
          move.response_subtree = average_lift(view, escape.j, escape.i, certify(view.copy({Side::plus, escape.j}), depth - 1),
                                               certify(view.copy({Side::minus, escape.i}), depth - 1));
        move.target_subtree = same_target;
        node->moves.push_back(std::move(move));
      }
    }
    memo_.emplace(key, node);
    return node;
  }

private:
  const GameTranscript &transcript_;
  Rational epsilon_;
  std::map<std::tuple<PointIndex, PointIndex, std::size_t>, NodePtr> memo_;
};

}  // namespace

NodePtr average_lift(const DiamondView &view, std::size_t j, std::size_t i, const NodePtr &plus, const NodePtr &minus)
{
  const auto n = view.branches();
  if (i == j || i < 2 || j < 2 || i > n || j > n)
    throw std::invalid_argument("average_lift: need distinct branches i, j in [2, " + std::to_string(n) + "]");
  const auto plus_points = view.copy({Side::plus, j}).points();
  const auto minus_points = view.copy({Side::minus, i}).points();
  AverageLift lift({plus_points.begin(), plus_points.end()}, {minus_points.begin(), minus_points.end()});
  return lift.combine(plus, minus);
}

NodePtr midpoint_lift(const MetricSpace &space, const NodePtr &certificate, const FreeVector &y)
{
  if (free_norm(space, y).value > 1)
    throw std::invalid_argument("midpoint_lift: ||y|| > 1");
  MidpointLift lift(space.base(), y.without_base(space.base()));
  return lift.lift(certificate);
}

GameTranscript prover_certify(const DiamondView &view, std::size_t depth, const AdversaryConfig &adversary,
                              const Rational &epsilon)
{
  adversary.validate();
  if (sgn(epsilon) <= 0)
    throw std::invalid_argument("epsilon must be positive");
  const auto &alpha = view.diamond->alpha();
  if (!alpha.is_finite())
    throw std::invalid_argument("games are played on finite levels; pick a summand of " + alpha.to_string());
  if (depth > alpha.finite_value())
    throw std::invalid_argument("depth " + std::to_string(depth) + " exceeds level " + alpha.to_string());

  const auto &space = view.ambient->space();
  GameTranscript transcript;
  transcript.spec = view.ambient->spec();
  transcript.adversary = adversary;
  transcript.eta = adversary.eta;

  const Adversary source(space, anchor_region(*view.ambient, adversary.horizon), adversary);
  const FreeVector root_target = pole_molecule(view);
  std::vector<FreeVector> root_responses;
  for (std::size_t r = 0; r < adversary.moves; ++r) {
    auto family = std::make_shared<const FunctionalFamily>(source.family(r, root_target, root_responses));
    transcript.families.push_back(family);
    if (depth > 0)
      root_responses.push_back(prover_escape(view, {family, root_target, adversary.eta}).gamma);
  }

  Prover prover(transcript, epsilon);
  transcript.root = prover.certify(view, depth);
  return transcript;
}

GameTranscript prover_certify(const std::shared_ptr<const Diamond> &diamond, std::size_t depth,
                              const AdversaryConfig &adversary, const Rational &epsilon)
{
  return prover_certify(DiamondView::whole(diamond), depth, adversary, epsilon);
}

// ---------------------------------------------------------------------------
// Verification

const Rational &NormCache::norm(const FreeVector &v)
{
  FreeVector key = v.without_base(space_.base());
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    Rational value = free_norm(space_, key).value;
    it = cache_.emplace(std::move(key), std::move(value)).first;
  }
  return it->second;
}

std::string to_string(ViolationKind kind)
{
  switch (kind) {
  case ViolationKind::unit_ball:
    return "unit_ball";
  case ViolationKind::neighborhood:
    return "neighborhood";
  case ViolationKind::separation:
    return "separation";
  case ViolationKind::center:
    return "center";
  case ViolationKind::subtree_target:
    return "subtree_target";
  case ViolationKind::subtree_depth:
    return "subtree_depth";
  case ViolationKind::subtree_epsilon:
    return "subtree_epsilon";
  case ViolationKind::move_coverage:
    return "move_coverage";
  case ViolationKind::functional:
    return "functional";
  case ViolationKind::malformed:
    return "malformed";
  }
  return {};
}

std::vector<Violation> VerificationReport::at(const std::string &node) const
{
  std::vector<Violation> out;
  for (const auto &v : violations)
    if (v.node == node)
      out.push_back(v);
  return out;
}

namespace {

class Verifier
{
public:
  Verifier(NormCache &norms, const GameTranscript &transcript, VerificationReport &report)
      : norms_(norms), t_(transcript), report_(report), base_(norms.space().base())
  {
  }

  void check_families()
  {
    const auto n = norms_.space().size();
    for (std::size_t r = 0; r < t_.families.size(); ++r) {
      const auto where = "family " + std::to_string(r);
      if (!t_.families[r] || t_.families[r]->empty()) {
        fail(where, ViolationKind::functional, "empty family");
        continue;
      }
      for (std::size_t k = 0; k < t_.families[r]->size(); ++k) {
        const auto &f = (*t_.families[r])[k];
        if (f.size() != n || !f.is_total())
          fail(where, ViolationKind::functional, "functional " + std::to_string(k) + " is not total on the space");
        else if (sgn(f(base_)) != 0)
          fail(where, ViolationKind::functional, "functional " + std::to_string(k) + " does not vanish at the base point");
      }
    }
    if (sgn(t_.eta) <= 0)
      fail("transcript", ViolationKind::malformed, "eta must be positive");
  }

  void check(const TranscriptNode &node, const std::string &path)
  {
    ++report_.nodes_checked;
    if (sgn(node.epsilon) <= 0)
      fail(path, ViolationKind::malformed, "epsilon must be positive");
    if (!in_space(node.target)) {
      fail(path, ViolationKind::malformed, "target support outside the space");
      return;
    }
    if (norms_.norm(node.target) > 1)
      fail(path, ViolationKind::unit_ball, "||target|| = " + format_rational(norms_.norm(node.target)));

    if (node.depth == 0) {
      if (!node.moves.empty())
        fail(path, ViolationKind::malformed, "depth-0 node carries moves");
      return;
    }
    if (node.moves.size() != t_.families.size())
      fail(path, ViolationKind::move_coverage,
           std::to_string(node.moves.size()) + " moves for " + std::to_string(t_.families.size()) + " families");

    const FreeVector target = node.target.without_base(base_);
    for (std::size_t r = 0; r < node.moves.size(); ++r) {
      const auto &move = node.moves[r];
      const auto &V = move.neighborhood;
      const auto where = path + ".m" + std::to_string(r);
      if (!V.functionals) {
        fail(where, ViolationKind::malformed, "move without functionals");
        continue;
      }
      if (r < t_.families.size() && t_.families[r] && *V.functionals != *t_.families[r])
        fail(where, ViolationKind::move_coverage, "move does not pose family " + std::to_string(r));
      if (V.eta != t_.eta)
        fail(where, ViolationKind::malformed, "move tolerance differs from the transcript tolerance");
      if (!in_space(V.center) || !in_space(move.response)) {
        fail(where, ViolationKind::malformed, "vector support outside the space");
        continue;
      }
      if (V.center.without_base(base_) != target)
        fail(where, ViolationKind::center, "neighborhood is not centred at the target");
      if (!total_on_space(*V.functionals))
        fail(where, ViolationKind::functional, "functional is not total on the space");
      else if (!in_neighborhood(V, move.response))
        fail(where, ViolationKind::neighborhood, "response outside the posed neighborhood");
      if (norms_.norm(move.response) > 1)
        fail(where, ViolationKind::unit_ball, "||response|| = " + format_rational(norms_.norm(move.response)));
      const Rational &gap = norms_.norm(move.response - node.target);
      if (gap < node.epsilon)
        fail(where, ViolationKind::separation, "||response - target|| = " + format_rational(gap));

      check_subtree(move.response_subtree, move.response, node, where + ".r");
      check_subtree(move.target_subtree, node.target, node, where + ".t");
    }
  }

private:
  void check_subtree(const NodePtr &sub, const FreeVector &expected, const TranscriptNode &parent,
                     const std::string &path)
  {
    if (!sub) {
      fail(path, ViolationKind::malformed, "missing subtree");
      return;
    }
    if (sub->target.without_base(base_) != expected.without_base(base_))
      fail(path, ViolationKind::subtree_target, "subtree target differs from the vector it certifies");
    if (sub->depth + 1 != parent.depth)
      fail(path, ViolationKind::subtree_depth,
           "depth " + std::to_string(sub->depth) + " under a depth-" + std::to_string(parent.depth) + " node");
    if (sub->epsilon != parent.epsilon)
      fail(path, ViolationKind::subtree_epsilon, "epsilon changes between parent and subtree");
    check(*sub, path);
  }

  bool in_space(const FreeVector &v) const
  {
    return v.support().empty() || v.support().rbegin()->first < norms_.space().size();
  }

  bool total_on_space(const FunctionalFamily &family) const
  {
    return std::all_of(family.begin(), family.end(),
                       [&](const LipschitzFunction &f) { return f.size() == norms_.space().size() && f.is_total(); });
  }

  void fail(std::string node, ViolationKind kind, std::string detail)
  {
    report_.violations.push_back({std::move(node), kind, std::move(detail)});
  }

  NormCache &norms_;
  const GameTranscript &t_;
  VerificationReport &report_;
  PointIndex base_;
};

}  // namespace

VerificationReport verify_transcript(NormCache &norms, const GameTranscript &transcript)
{
  VerificationReport report;
  Verifier verifier(norms, transcript, report);
  verifier.check_families();
  if (!transcript.root)
    report.violations.push_back({"root", ViolationKind::malformed, "transcript has no root"});
  else
    verifier.check(*transcript.root, "root");
  return report;
}

VerificationReport verify_transcript(const MetricSpace &space, const GameTranscript &transcript)
{
  NormCache norms(space);
  return verify_transcript(norms, transcript);
}

// ---------------------------------------------------------------------------
// Oracle

std::vector<FreeVector> relative_derivation_oracle(NormCache &norms, const std::vector<FreeVector> &candidates,
                                                   const FunctionalFamily &functionals, const Rational &eta,
                                                   const Rational &epsilon, std::size_t rounds)
{
  const auto base = norms.space().base();
  std::vector<FreeVector> survivors;
  std::set<FreeVector> seen;
  for (const auto &c : candidates) {
    FreeVector v = c.without_base(base);
    if (norms.norm(v) > 1)
      throw std::invalid_argument("oracle candidates must lie in the unit ball");
    if (seen.insert(v).second)
      survivors.push_back(std::move(v));
  }

  // values[k][r] = <f_r, survivor k>, so box membership is a comparison.
  auto pairings = [&](const std::vector<FreeVector> &set) {
    std::vector<std::vector<Rational>> values(set.size());
    for (std::size_t k = 0; k < set.size(); ++k)
      for (const auto &f : functionals)
        values[k].push_back(pair(f, set[k]));
    return values;
  };

  for (std::size_t round = 0; round < rounds; ++round) {
    const auto values = pairings(survivors);
    std::vector<FreeVector> next;
    for (std::size_t c = 0; c < survivors.size(); ++c) {
      std::vector<std::size_t> box;
      for (std::size_t u = 0; u < survivors.size(); ++u) {
        bool inside = true;
        for (std::size_t r = 0; r < functionals.size() && inside; ++r)
          inside = abs_value(values[u][r] - values[c][r]) <= eta;
        if (inside)
          box.push_back(u);
      }
      bool wide = false;
      for (std::size_t a = 0; a < box.size() && !wide; ++a)
        for (std::size_t b = a + 1; b < box.size() && !wide; ++b)
          wide = norms.norm(survivors[box[a]] - survivors[box[b]]) >= epsilon;
      if (wide)
        next.push_back(survivors[c]);
    }
    const bool stable = next.size() == survivors.size();
    survivors = std::move(next);
    if (stable)
      break;
  }
  return survivors;
}

std::vector<FreeVector> relative_derivation_oracle(const MetricSpace &space, const std::vector<FreeVector> &candidates,
                                                   const FunctionalFamily &functionals, const Rational &eta,
                                                   const Rational &epsilon, std::size_t rounds)
{
  NormCache norms(space);
  return relative_derivation_oracle(norms, candidates, functionals, eta, epsilon, rounds);
}

std::vector<FreeVector> transcript_vectors(const GameTranscript &transcript, PointIndex base)
{
  std::vector<FreeVector> out;
  std::set<FreeVector> seen;
  std::set<const TranscriptNode *> visited;
  auto add = [&](const FreeVector &v) {
    FreeVector key = v.without_base(base);
    if (seen.insert(key).second)
      out.push_back(std::move(key));
  };
  auto walk = [&](auto &self, const NodePtr &node) -> void {
    if (!node || !visited.insert(node.get()).second)
      return;
    add(node->target);
    for (const auto &move : node->moves) {
      add(move.response);
      self(self, move.response_subtree);
      self(self, move.target_subtree);
    }
  };
  walk(walk, transcript.root);
  return out;
}

std::vector<bool> oracle_soundness(NormCache &norms, const GameTranscript &transcript)
{
  std::vector<bool> out;
  if (!transcript.root)
    return out;
  const auto base = norms.space().base();
  const auto vectors = transcript_vectors(transcript, base);
  const FreeVector root = transcript.root->target.without_base(base);
  for (const auto &family : transcript.families) {
    const auto survivors = relative_derivation_oracle(norms, vectors, *family, transcript.eta,
                                                      transcript.root->epsilon, transcript.root->depth);
    out.push_back(std::find(survivors.begin(), survivors.end(), root) != survivors.end());
  }
  return out;
}

}  // namespace lipfree
