#pragma once

#include "lipfree/diamond.hpp"
#include "lipfree/free_vector.hpp"
#include "lipfree/lipschitz.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lipfree {

/// Finite list of functionals, each total and vanishing at the base point.
using FunctionalFamily = std::vector<LipschitzFunction>;

enum class AdversaryKind
{
  random_lipschitz,
  distance_functions,
  adaptive_dual
};

std::string to_string(AdversaryKind kind);
/// Accepts the to_string() names; throws ParseError.
AdversaryKind parse_adversary_kind(std::string_view text);

struct AdversaryConfig
{
  AdversaryKind kind = AdversaryKind::distance_functions;
  /// Functionals per family.
  std::size_t count = 3;
  /// Families posed per game.
  std::size_t moves = 2;
  Rational eta = Rational(1, 20);
  std::uint64_t seed = 1;
  /// Functionals are built from values on the points whose address uses
  /// only branches 1..horizon at every level (poles always included).
  /// nullopt lets them see every point.
  std::optional<std::size_t> horizon = 1;

  void validate() const;

  friend bool operator==(const AdversaryConfig &, const AdversaryConfig &) = default;
};

/// Points of a diamond whose address uses only branches <= horizon, in index
/// order; every point when horizon is nullopt.
std::vector<PointIndex> anchor_region(const Diamond &diamond, std::optional<std::size_t> horizon);

/// x -> d(x, p) - d(base, p).
LipschitzFunction distance_function(const MetricSpace &space, PointIndex p);

/// f restricted to `anchors`, McShane-extended with constant 1 and shifted to
/// vanish at the base point. f must be 1-Lipschitz on the anchors.
LipschitzFunction project_to_anchors(const MetricSpace &space, const LipschitzFunction &f,
                                     const std::vector<PointIndex> &anchors);

/// Seeded source of functional families.
///
/// random_lipschitz: random values on 2-4 anchors, scaled to constant <= 1
/// and McShane-extended. distance_functions: distances to random anchors.
/// adaptive_dual: the dual potentials of earlier responses minus the centre
/// (most recent first, projected to the anchors), padded with distance
/// functions; the first family is a distance family.
class Adversary
{
public:
  Adversary(const MetricSpace &space, std::vector<PointIndex> anchors, AdversaryConfig config);

  const AdversaryConfig &config() const { return config_; }
  const std::vector<PointIndex> &anchors() const { return anchors_; }

  /// Family number `round` (0-based). `earlier` holds the responses given to
  /// families 0..round-1 at `center`; only adaptive_dual reads it.
  FunctionalFamily family(std::size_t round, const FreeVector &center, const std::vector<FreeVector> &earlier) const;

private:
  const MetricSpace &space_;
  std::vector<PointIndex> anchors_;
  AdversaryConfig config_;
};

}  // namespace lipfree
