#pragma once

#include "lipfree/adversary.hpp"
#include "lipfree/diamond.hpp"
#include "lipfree/free_vector.hpp"
#include "lipfree/freespace.hpp"
#include "lipfree/lipschitz.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipfree {

/// {v : |<f, v - center>| <= eta for every f in the family}.
struct WeakNeighborhood
{
  std::shared_ptr<const FunctionalFamily> functionals;
  FreeVector center;
  Rational eta;
};

/// Exact closed membership test. Functionals must be total.
bool in_neighborhood(const WeakNeighborhood &V, const FreeVector &v);

// ---------------------------------------------------------------------------
// Transcripts

struct TranscriptNode;
using NodePtr = std::shared_ptr<const TranscriptNode>;

struct TranscriptMove
{
  WeakNeighborhood neighborhood;
  FreeVector response;
  NodePtr response_subtree;
  NodePtr target_subtree;
};

/// One claim "target survives `depth` rounds at separation epsilon". A node
/// of positive depth answers every family of the transcript exactly once, in
/// family order. Subtrees may be shared between parents.
struct TranscriptNode
{
  FreeVector target;
  std::size_t depth = 0;
  Rational epsilon;
  std::vector<TranscriptMove> moves;
};

struct GameTranscript
{
  /// Space the vectors live in, when it is a generated diamond.
  std::optional<DiamondSpec> spec;
  std::optional<AdversaryConfig> adversary;
  /// Tolerance shared by every posed neighborhood.
  Rational eta;
  std::vector<std::shared_ptr<const FunctionalFamily>> families;
  NodePtr root;
};

// ---------------------------------------------------------------------------
// Prover

class InsufficientBranching : public std::runtime_error
{
public:
  InsufficientBranching(Ordinal level, std::size_t branches, std::size_t lowest_index);

  const Ordinal &level() const { return level_; }
  std::size_t branches() const { return branches_; }
  /// Pairs (i, j) with lowest_index <= i < j <= branches were tested.
  std::size_t lowest_index() const { return lowest_index_; }
  /// Smallest branching worth retrying with.
  std::size_t advisory_branches() const { return branches_ + 1; }

private:
  Ordinal level_;
  std::size_t branches_;
  std::size_t lowest_index_;
};

/// A sub-diamond of a generated space: the diamond it is a copy of, plus the
/// injection of that diamond's indices into the ambient space.
struct DiamondView
{
  std::shared_ptr<const Diamond> ambient;
  std::shared_ptr<const Diamond> diamond;
  std::vector<PointIndex> to_ambient;

  static DiamondView whole(std::shared_ptr<const Diamond> diamond);
  /// Summand number m (1-based) of a limit stage.
  static DiamondView summand(std::shared_ptr<const Diamond> diamond, std::size_t m);

  PointIndex top() const { return to_ambient[diamond->landmarks().top]; }
  PointIndex bottom() const { return to_ambient[diamond->landmarks().bottom]; }
  PointIndex mid(std::size_t k) const { return to_ambient[diamond->landmarks().mids.at(k - 1)]; }
  std::size_t branches() const { return diamond->landmarks().mids.size(); }
  DiamondView copy(CopyId which) const;
  /// Ambient point set, sorted.
  std::vector<PointIndex> points() const;
};

/// m_{top, bottom} of the view, in ambient indices.
FreeVector pole_molecule(const DiamondView &view);

struct Escape
{
  std::size_t i = 0;
  std::size_t j = 0;
  FreeVector gamma;
};

/// gamma = (m_{t,x^j} + m_{x^i,b}) / 2 for the lexicographically smallest
/// 2 <= i < j <= n with gamma in V. V must be centred at the view's pole
/// molecule and the view must be a successor stage. Throws
/// InsufficientBranching when no pair qualifies.
Escape prover_escape(const DiamondView &view, const WeakNeighborhood &V);

/// Combines certificates for vectors supported in the copies D^(j,+) and
/// D^(i,-) of `view` into one for their average. Moves are paired by family.
/// Throws std::invalid_argument on mismatched depths, epsilons or families,
/// or on support outside the designated copies.
NodePtr average_lift(const DiamondView &view, std::size_t j, std::size_t i, const NodePtr &plus, const NodePtr &minus);

/// Certificate for (x + y) / 2 at epsilon / 2 from one for x: every response
/// r becomes (r + y) / 2. Throws std::invalid_argument when ||y|| > 1.
NodePtr midpoint_lift(const MetricSpace &space, const NodePtr &certificate, const FreeVector &y);

/// Plays the game of the given depth on the root pole molecule of `view`.
/// The adversary poses `adversary.moves` families, fixed for the whole
/// game; every node answers each of them. Depth must not exceed the finite
/// level of the view.
GameTranscript prover_certify(const DiamondView &view, std::size_t depth, const AdversaryConfig &adversary,
                              const Rational &epsilon = Rational(1));
GameTranscript prover_certify(const std::shared_ptr<const Diamond> &diamond, std::size_t depth,
                              const AdversaryConfig &adversary, const Rational &epsilon = Rational(1));

// ---------------------------------------------------------------------------
// Verification

/// Free norms keyed by vector (with the base coefficient dropped).
class NormCache
{
public:
  explicit NormCache(const MetricSpace &space) : space_(space) {}
  const Rational &norm(const FreeVector &v);
  const MetricSpace &space() const { return space_; }
  std::size_t size() const { return cache_.size(); }

private:
  const MetricSpace &space_;
  std::map<FreeVector, Rational> cache_;
};

enum class ViolationKind
{
  unit_ball,
  neighborhood,
  separation,
  center,
  subtree_target,
  subtree_depth,
  subtree_epsilon,
  move_coverage,
  functional,
  malformed
};

std::string to_string(ViolationKind kind);

struct Violation
{
  /// Node path: "root", then ".m<r>.r" / ".m<r>.t" per step into the
  /// response or target subtree of move r.
  std::string node;
  ViolationKind kind;
  std::string detail;
};

struct VerificationReport
{
  std::size_t nodes_checked = 0;
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
  /// Violations recorded at one node path.
  std::vector<Violation> at(const std::string &node) const;
};

/// Re-checks every node of the tree: target in the unit ball; for positive
/// depth one move per family, centred at the target, response inside the
/// neighborhood and the unit ball, ||response - target|| >= epsilon, and
/// both subtrees one level shallower with matching targets and epsilon.
/// Uses only free_norm and pairings.
VerificationReport verify_transcript(const MetricSpace &space, const GameTranscript &transcript);
VerificationReport verify_transcript(NormCache &norms, const GameTranscript &transcript);

// ---------------------------------------------------------------------------
// Oracle

/// Finite single-box derivation: in each round a survivor c is kept when
/// {u in survivors : |<f, u - c>| <= eta for all f} has diameter >= epsilon.
/// Candidates must lie in the unit ball (std::invalid_argument otherwise).
std::vector<FreeVector> relative_derivation_oracle(const MetricSpace &space, const std::vector<FreeVector> &candidates,
                                                   const FunctionalFamily &functionals, const Rational &eta,
                                                   const Rational &epsilon, std::size_t rounds);
std::vector<FreeVector> relative_derivation_oracle(NormCache &norms, const std::vector<FreeVector> &candidates,
                                                   const FunctionalFamily &functionals, const Rational &eta,
                                                   const Rational &epsilon, std::size_t rounds);

/// Every target and response in the tree, deduplicated modulo the base
/// point, in a stable order.
std::vector<FreeVector> transcript_vectors(const GameTranscript &transcript, PointIndex base);

/// For each family: whether the root target survives depth-many oracle
/// rounds on the transcript's own vector set.
std::vector<bool> oracle_soundness(NormCache &norms, const GameTranscript &transcript);

}  // namespace lipfree
