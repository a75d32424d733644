#pragma once

#include "lipfree/rational.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace lipfree {

/// Exact balanced transportation problem: ship `supply[i]` out of source i
/// and `demand[j]` into sink j (both positive, equal totals) at unit cost
/// cost(i, j), minimizing total cost. Costs must be non-negative.
struct TransportProblem
{
  std::vector<Rational> supply;
  std::vector<Rational> demand;
  std::function<Rational(std::size_t, std::size_t)> cost;
};

struct TransportFlow
{
  std::size_t source = 0;
  std::size_t sink = 0;
  Rational mass;
};

struct TransportSolution
{
  Rational cost;
  /// Nonzero flows ordered by (source, sink).
  std::vector<TransportFlow> flows;
  /// Optimal duals: u[i] - v[j] <= cost(i, j), with equality on every flow,
  /// and sum supply*u - sum demand*v == cost.
  std::vector<Rational> source_potential;
  std::vector<Rational> sink_potential;
};

/// Successive shortest paths (Bellman-Ford on the residual graph) in exact
/// arithmetic. Throws std::invalid_argument for unbalanced or non-positive
/// masses.
TransportSolution solve_transport(const TransportProblem &problem);

}  // namespace lipfree
