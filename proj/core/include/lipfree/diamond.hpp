#pragma once

#include "lipfree/metric_space.hpp"
#include "lipfree/ordinal.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lipfree {

inline constexpr std::size_t kDefaultPointBudget = 2000;

/// Parameters of a finite truncation of the diamond space D_alpha.
struct DiamondSpec
{
  Ordinal alpha = Ordinal::natural(1);
  /// Number n of midpoints x^1..x^n kept at every successor stage.
  std::size_t branches = 2;
  /// Number L of fundamental-sequence summands kept at every limit stage.
  std::size_t limit_width = 1;
  std::size_t budget_points = kDefaultPointBudget;

  void validate() const;

  friend bool operator==(const DiamondSpec &, const DiamondSpec &) = default;
};

/// Exact point count of the truncation, saturating at SIZE_MAX.
std::size_t estimate_points(const DiamondSpec &spec);

// ---------------------------------------------------------------------------
// Addresses

enum class Side
{
  plus,
  minus
};

/// Sub-copy D^(j,+) (poles t, x^j) or D^(i,-) (poles x^i, b) of a successor
/// stage. Branches are 1-based.
struct CopyId
{
  Side side = Side::plus;
  std::size_t branch = 1;

  friend bool operator==(const CopyId &, const CopyId &) = default;
};

struct SummandSegment
{
  Ordinal beta;

  friend bool operator==(const SummandSegment &, const SummandSegment &) = default;
};

using AddressSegment = std::variant<CopyId, SummandSegment>;

enum class TerminalKind
{
  top,
  bottom,
  mid
};

struct Terminal
{
  TerminalKind kind = TerminalKind::top;
  /// 1-based midpoint index when kind == mid.
  std::size_t mid = 0;

  friend bool operator==(const Terminal &, const Terminal &) = default;
};

/// Path from the outermost stage down to a sub-diamond, plus a skeleton
/// point of that sub-diamond. Text form joins segments with '.':
///   "t", "b", "x3", "+2.-1.x3", "s[w+1].+2.b"
struct PointAddress
{
  std::vector<AddressSegment> path;
  Terminal terminal;

  std::string to_string() const;
  static PointAddress parse(std::string_view text);

  friend bool operator==(const PointAddress &, const PointAddress &) = default;
};

/// Resolves pole identifications toward the outermost name: the top or
/// bottom of a sub-copy or summand is rewritten as the parent point it is
/// glued to, repeatedly.
PointAddress canonicalize(PointAddress address);

// ---------------------------------------------------------------------------

struct DiamondLandmarks
{
  PointIndex top = 0;
  PointIndex bottom = 0;
  /// Base point; equals mids[0] at successor stages.
  PointIndex ell = 0;
  /// x^1..x^n (successor stages only).
  std::vector<PointIndex> mids;
  /// plus_copies[j-1][k]: image of predecessor point k in D^(j,+).
  /// Empty at alpha = 1 and at limit stages.
  std::vector<std::vector<PointIndex>> plus_copies;
  std::vector<std::vector<PointIndex>> minus_copies;
};

class Diamond;

struct DiamondSummand
{
  Ordinal beta;
  std::shared_ptr<const Diamond> diamond;
  /// injection[k]: image of summand point k (poles go to the outer poles).
  std::vector<PointIndex> injection;
};

/// A built truncation of D_alpha: metric space, landmarks, and the recursive
/// structure (predecessor for successor stages, summands for limit stages).
class Diamond
{
public:
  /// Throws BudgetExceeded before allocating when the point estimate is over
  /// budget, std::invalid_argument on an invalid spec.
  static std::shared_ptr<const Diamond> build(const DiamondSpec &spec);

  const DiamondSpec &spec() const { return spec_; }
  const Ordinal &alpha() const { return spec_.alpha; }
  const MetricSpace &space() const { return space_; }
  const DiamondLandmarks &landmarks() const { return landmarks_; }
  const std::vector<PointAddress> &addresses() const { return addresses_; }

  bool is_successor() const;
  bool is_limit() const;

  /// Predecessor stage; null for alpha = 1 and for limits.
  const std::shared_ptr<const Diamond> &predecessor() const { return predecessor_; }
  const std::vector<DiamondSummand> &summands() const { return summands_; }

  /// Injection of the predecessor's indices onto the given sub-copy.
  /// Throws std::invalid_argument when alpha has no sub-copies (alpha = 1 or
  /// a limit) and std::out_of_range for a bad branch.
  const std::vector<PointIndex> &subcopy_map(CopyId which) const;

  /// Point set of a sub-copy (poles included), sorted ascending.
  std::vector<PointIndex> subcopy_points(CopyId which) const;

  PointIndex index_of(const PointAddress &address) const;

private:
  Diamond(DiamondSpec spec, MetricSpace space) : spec_(std::move(spec)), space_(std::move(space)) {}

  friend class DiamondBuilder;

  DiamondSpec spec_;
  MetricSpace space_;
  DiamondLandmarks landmarks_;
  std::vector<PointAddress> addresses_;
  std::shared_ptr<const Diamond> predecessor_;
  std::vector<DiamondSummand> summands_;
};

/// Convenience overload of Diamond::subcopy_map on landmarks alone.
const std::vector<PointIndex> &subcopy_map(const DiamondLandmarks &landmarks, CopyId which);

/// Image of a point of D_small in D_big under the pole-preserving isometric
/// embedding (small.alpha <= big.alpha, same branching). Supported when the
/// embedding can follow the recursive structure: successor into successor,
/// anything into a limit through its first large-enough summand. Throws
/// std::invalid_argument otherwise.
PointAddress embed_address(const PointAddress &address, const Ordinal &small, const Ordinal &big,
                           std::size_t limit_width);

/// Weighted graph obtained by literal edge substitution (each edge of D_1
/// replaced by a half-scale copy of the predecessor graph, limit summands
/// glued at the poles). Vertices are labelled by canonical address text.
/// This is an independent route to the metric: its shortest-path closure
/// must equal Diamond::space().
struct LabelledGraph
{
  std::vector<std::string> labels;
  std::vector<WeightedEdge> edges;
};

LabelledGraph substitution_graph(const DiamondSpec &spec);

/// Graphviz rendering of the finest edges with exact length labels.
std::string to_dot(const MetricSpace &space);

}  // namespace lipfree
