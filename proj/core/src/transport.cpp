#include "lipfree/transport.hpp"

#include <optional>
#include <stdexcept>

namespace lipfree {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Residual
{
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<Rational> cost;  // p x q
  std::vector<Rational> flow;  // p x q

  const Rational &c(std::size_t i, std::size_t j) const { return cost[i * q + j]; }
  Rational &f(std::size_t i, std::size_t j) { return flow[i * q + j]; }
  const Rational &f(std::size_t i, std::size_t j) const { return flow[i * q + j]; }

  // Bellman-Ford over sources [0, p) and sinks [p, p+q). Nodes with a value
  // in `dist` on entry are starting points.
  void shortest_paths(std::vector<std::optional<Rational>> &dist, std::vector<std::size_t> &pred) const
  {
    const auto nodes = p + q;
    pred.assign(nodes, kNone);
    Rational candidate;
    for (std::size_t round = 0; round <= nodes; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
          if (dist[i]) {
            candidate = *dist[i] + c(i, j);
            auto &dj = dist[p + j];
            if (!dj || candidate < *dj) {
              dj = candidate;
              pred[p + j] = i;
              changed = true;
            }
          }
          if (dist[p + j] && sgn(f(i, j)) > 0) {
            candidate = *dist[p + j] - c(i, j);
            auto &di = dist[i];
            if (!di || candidate < *di) {
              di = candidate;
              pred[i] = p + j;
              changed = true;
            }
          }
        }
      }
      if (!changed)
        return;
    }
    throw std::logic_error("negative cycle in transport residual graph");
  }
};

}  // namespace

TransportSolution solve_transport(const TransportProblem &problem)
{
  Residual r;
  r.p = problem.supply.size();
  r.q = problem.demand.size();
  Rational total_supply = 0, total_demand = 0;
  for (const auto &s : problem.supply) {
    if (sgn(s) <= 0)
      throw std::invalid_argument("transport supplies must be positive");
    total_supply += s;
  }
  for (const auto &d : problem.demand) {
    if (sgn(d) <= 0)
      throw std::invalid_argument("transport demands must be positive");
    total_demand += d;
  }
  if (total_supply != total_demand)
    throw std::invalid_argument("transport problem is unbalanced");

  TransportSolution out;
  out.cost = 0;
  if (r.p == 0) {
    return out;
  }

  r.cost.resize(r.p * r.q);
  r.flow.assign(r.p * r.q, Rational(0));
  for (std::size_t i = 0; i < r.p; ++i)
    for (std::size_t j = 0; j < r.q; ++j) {
      r.cost[i * r.q + j] = problem.cost(i, j);
      if (sgn(r.cost[i * r.q + j]) < 0)
        throw std::invalid_argument("transport costs must be non-negative");
    }

  std::vector<Rational> supply_left = problem.supply;
  std::vector<Rational> demand_left = problem.demand;
  std::vector<std::optional<Rational>> dist;
  std::vector<std::size_t> pred;

  for (;;) {
    dist.assign(r.p + r.q, std::nullopt);
    bool any = false;
    for (std::size_t i = 0; i < r.p; ++i)
      if (sgn(supply_left[i]) > 0) {
        dist[i] = Rational(0);
        any = true;
      }
    if (!any)
      break;
    r.shortest_paths(dist, pred);

    std::size_t sink = kNone;
    for (std::size_t j = 0; j < r.q; ++j)
      if (sgn(demand_left[j]) > 0 && dist[r.p + j] && (sink == kNone || *dist[r.p + j] < *dist[r.p + sink]))
        sink = j;
    if (sink == kNone)
      throw std::logic_error("transport: remaining demand unreachable");

    // Bottleneck along the path back to its starting source.
    Rational amount = demand_left[sink];
    std::size_t node = r.p + sink;
    while (pred[node] != kNone) {
      const auto prev = pred[node];
      if (node < r.p) {  // backward arc sink prev -> source node
        const auto &fl = r.f(node, prev - r.p);
        if (fl < amount)
          amount = fl;
      }
      node = prev;
    }
    if (supply_left[node] < amount)
      amount = supply_left[node];

    node = r.p + sink;
    while (pred[node] != kNone) {
      const auto prev = pred[node];
      if (node >= r.p)
        r.f(prev, node - r.p) += amount;
      else
        r.f(node, prev - r.p) -= amount;
      node = prev;
    }
    supply_left[node] -= amount;
    demand_left[sink] -= amount;
  }

  // Duals from shortest distances with every node as a start at 0.
  dist.assign(r.p + r.q, Rational(0));
  r.shortest_paths(dist, pred);
  out.source_potential.resize(r.p);
  out.sink_potential.resize(r.q);
  for (std::size_t i = 0; i < r.p; ++i)
    out.source_potential[i] = -*dist[i];
  for (std::size_t j = 0; j < r.q; ++j)
    out.sink_potential[j] = -*dist[r.p + j];

  for (std::size_t i = 0; i < r.p; ++i)
    for (std::size_t j = 0; j < r.q; ++j)
      if (sgn(r.f(i, j)) > 0) {
        out.flows.push_back({i, j, r.f(i, j)});
        out.cost += r.f(i, j) * r.c(i, j);
      }
  return out;
}

}  // namespace lipfree
