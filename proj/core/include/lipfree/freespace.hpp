#pragma once

#include "lipfree/free_vector.hpp"
#include "lipfree/lipschitz.hpp"
#include "lipfree/metric_space.hpp"

#include <cstdint>
#include <vector>

namespace lipfree {

struct PlanEntry
{
  PointIndex source = 0;
  PointIndex sink = 0;
  Rational mass;

  friend bool operator==(const PlanEntry &, const PlanEntry &) = default;
};

/// Primal plan plus dual 1-Lipschitz potential for one free-norm evaluation.
/// Plan cost, pairing of the potential with the vector, and `value` agree
/// exactly.
struct TransportCertificate
{
  std::vector<PlanEntry> plan;
  LipschitzFunction potential;
  Rational value;
};

struct FreeNorm
{
  Rational value;
  TransportCertificate certificate;
};

/// m_{x,y} = (delta(x) - delta(y)) / d(x, y). Throws std::invalid_argument
/// when x == y, std::out_of_range for bad indices.
FreeVector molecule(const MetricSpace &space, PointIndex x, PointIndex y);

/// sum_x a_x f(x). The base point term is skipped only when f is undefined
/// there; f must be defined on the rest of the support.
Rational pair(const LipschitzFunction &f, const FreeVector &v);

/// Free-space norm of v: the deficit of v is moved to the base point, then
/// the exact minimum-cost transport from the positive to the negative part
/// is solved. The dual potential is extended to the whole space, shifted to
/// vanish at the base point, and re-verified (1-Lipschitz, zero duality
/// gap) before returning; a failed re-verification throws std::logic_error.
FreeNorm free_norm(const MetricSpace &space, const FreeVector &v);

/// Checks the zero-duality-gap contract of a certificate independently of
/// the solver: marginals, plan cost, potential constant, pairing.
bool certificate_is_valid(const MetricSpace &space, const FreeVector &v, const TransportCertificate &certificate);

/// Number of free_norm evaluations so far in this process. Each one has had
/// its zero duality gap re-verified.
std::uint64_t free_norm_calls();

}  // namespace lipfree
