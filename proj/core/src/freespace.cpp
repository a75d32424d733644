#include "lipfree/freespace.hpp"

#include "lipfree/transport.hpp"

#include <atomic>
#include <stdexcept>

namespace lipfree {

namespace {

std::atomic<std::uint64_t> calls{0};

}  // namespace

std::uint64_t free_norm_calls()
{
  return calls.load();
}

FreeVector molecule(const MetricSpace &space, PointIndex x, PointIndex y)
{
  if (x == y)
    throw std::invalid_argument("molecule needs two distinct points");
  const Rational inv = 1 / space.distance(x, y);
  FreeVector v;
  v.add(x, inv);
  v.add(y, -inv);
  return v;
}

Rational pair(const LipschitzFunction &f, const FreeVector &v)
{
  Rational total = 0;
  for (const auto &[x, c] : v.support())
    total += c * f(x);
  return total;
}

namespace {

// v with the base coefficient replaced by minus the remaining mass.
FreeVector balanced_at_base(const MetricSpace &space, const FreeVector &v)
{
  FreeVector out = v.without_base(space.base());
  out.add(space.base(), -out.total_mass());
  return out;
}

}  // namespace

FreeNorm free_norm(const MetricSpace &space, const FreeVector &v)
{
  for (const auto &[x, c] : v.support())
    if (x >= space.size())
      throw std::out_of_range("vector support point " + std::to_string(x) + " outside the space");

  const FreeVector balanced = balanced_at_base(space, v);
  std::vector<PointIndex> sources, sinks;
  TransportProblem problem;
  for (const auto &[x, c] : balanced.support()) {
    if (sgn(c) > 0) {
      sources.push_back(x);
      problem.supply.push_back(c);
    } else {
      sinks.push_back(x);
      problem.demand.push_back(-c);
    }
  }
  problem.cost = [&](std::size_t i, std::size_t j) { return space.d(sources[i], sinks[j]); };
  const auto solution = solve_transport(problem);

  FreeNorm out;
  out.value = solution.cost;
  out.certificate.value = solution.cost;
  for (const auto &flow : solution.flows)
    out.certificate.plan.push_back({sources[flow.source], sinks[flow.sink], flow.mass});

  // c-transform of the sink potentials: min_j v_j + d(x, y_j) is
  // 1-Lipschitz everywhere and still attains the optimum.
  std::vector<Rational> values(space.size(), Rational(0));
  if (!sinks.empty()) {
    Rational candidate;
    for (PointIndex x = 0; x < space.size(); ++x) {
      values[x] = solution.sink_potential[0] + space.d(x, sinks[0]);
      for (std::size_t j = 1; j < sinks.size(); ++j) {
        candidate = solution.sink_potential[j] + space.d(x, sinks[j]);
        if (candidate < values[x])
          values[x] = candidate;
      }
    }
    const Rational shift = values[space.base()];
    for (auto &value : values)
      value -= shift;
  }
  out.certificate.potential = LipschitzFunction::total(values);

  if (!is_lipschitz(space, out.certificate.potential, Rational(1)))
    throw std::logic_error("free_norm: dual potential is not 1-Lipschitz");
  if (pair(out.certificate.potential, balanced) != out.value)
    throw std::logic_error("free_norm: nonzero duality gap");
  calls.fetch_add(1);
  return out;
}

bool certificate_is_valid(const MetricSpace &space, const FreeVector &v, const TransportCertificate &certificate)
{
  const FreeVector balanced = balanced_at_base(space, v);
  FreeVector marginal;
  Rational cost = 0;
  for (const auto &entry : certificate.plan) {
    if (sgn(entry.mass) <= 0 || entry.source >= space.size() || entry.sink >= space.size())
      return false;
    marginal.add(entry.source, entry.mass);
    marginal.add(entry.sink, -entry.mass);
    cost += entry.mass * space.d(entry.source, entry.sink);
  }
  if (marginal != balanced || cost != certificate.value)
    return false;
  const auto &f = certificate.potential;
  if (f.size() != space.size() || !f.is_total() || sgn(f(space.base())) != 0)
    return false;
  if (!is_lipschitz(space, f, Rational(1)))
    return false;
  return pair(f, balanced) == certificate.value;
}

}  // namespace lipfree
