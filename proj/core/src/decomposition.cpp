#include "lipfree/decomposition.hpp"

#include "lipfree/freespace.hpp"

#include <algorithm>
#include <stdexcept>

namespace lipfree {

void SummandPartition::validate(std::size_t points) const
{
  (void)summand_of(points);
}

std::vector<std::size_t> SummandPartition::summand_of(std::size_t points) const
{
  if (base >= points)
    throw std::invalid_argument("partition base outside the space");
  std::vector<std::size_t> owner(points, npos);
  std::vector<bool> seen(points, false);
  seen[base] = true;
  for (std::size_t s = 0; s < summands.size(); ++s)
    for (auto x : summands[s]) {
      if (x >= points)
        throw std::invalid_argument("partition point " + std::to_string(x) + " outside the space");
      if (x == base)
        throw std::invalid_argument("the base point belongs to no summand");
      if (seen[x])
        throw std::invalid_argument("point " + std::to_string(x) + " appears in two summands");
      seen[x] = true;
      owner[x] = s;
    }
  for (PointIndex x = 0; x < points; ++x)
    if (!seen[x])
      throw std::invalid_argument("point " + std::to_string(x) + " is in no summand");
  return owner;
}

MetricSpace summing_metric(const MetricSpace &space, const SummandPartition &partition)
{
  const auto n = space.size();
  const auto owner = partition.summand_of(n);
  const auto b = partition.base;
  std::vector<Rational> d1(n * n);
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y) {
      const bool apart = owner[x] != SummandPartition::npos && owner[y] != SummandPartition::npos && owner[x] != owner[y];
      d1[x * n + y] = apart ? Rational(space.d(x, b) + space.d(b, y)) : space.d(x, y);
    }
  MetricSpace out(space.labels(), std::move(d1), b);
  if (auto violation = check_metric_axioms(out, n))
    throw std::invalid_argument("summing distance is not a metric: " + *violation);
  return out;
}

EquivalenceConstants equivalence_constants(const MetricSpace &d, const MetricSpace &d1)
{
  if (d.size() != d1.size() || d.labels() != d1.labels())
    throw std::invalid_argument("equivalence constants need the same point set");
  if (d.size() < 2)
    throw std::invalid_argument("equivalence constants need two points");
  EquivalenceConstants out;
  bool first = true;
  Rational ratio;
  for (PointIndex x = 0; x < d.size(); ++x)
    for (PointIndex y = x + 1; y < d.size(); ++y) {
      ratio = d.d(x, y) / d1.d(x, y);
      if (first || ratio < out.low) {
        out.low = ratio;
        out.low_pair = {x, y};
      }
      if (first || ratio > out.high) {
        out.high = ratio;
        out.high_pair = {x, y};
      }
      first = false;
    }
  return out;
}

bool Cover::covers(std::size_t points) const
{
  std::vector<bool> hit(points, false);
  for (auto x : A)
    hit[x] = true;
  for (auto x : B)
    hit[x] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
}

std::optional<Rational> Cover::min_D() const
{
  std::optional<Rational> best;
  for (const auto &value : D)
    if (value && (!best || *value < *best))
      best = value;
  return best;
}

Cover build_cover(const Diamond &diamond)
{
  if (!diamond.is_limit())
    throw std::invalid_argument("the A/B cover is defined on limit stages, got " + diamond.alpha().to_string());
  const auto &space = diamond.space();
  const auto t = diamond.landmarks().top;
  const auto b = diamond.landmarks().bottom;
  const Rational radius(3, 2);
  const auto n = space.size();

  Cover cover;
  std::vector<bool> in_A(n), in_B(n);
  for (PointIndex z = 0; z < n; ++z) {
    in_A[z] = space.d(z, b) < radius;
    in_B[z] = space.d(z, t) < radius;
    if (in_A[z])
      cover.A.push_back(z);
    if (in_B[z])
      cover.B.push_back(z);
  }

  auto distance_outside = [&](PointIndex z, const std::vector<bool> &inside) {
    std::optional<Rational> best;
    for (PointIndex w = 0; w < n; ++w)
      if (!inside[w] && (!best || space.d(z, w) < *best))
        best = space.d(z, w);
    return best;
  };
  for (PointIndex z = 0; z < n; ++z) {
    cover.to_outside_A.push_back(distance_outside(z, in_A));
    cover.to_outside_B.push_back(distance_outside(z, in_B));
    const auto &a = cover.to_outside_A.back();
    const auto &bb = cover.to_outside_B.back();
    cover.D.push_back(a && bb ? std::optional<Rational>(*a + *bb) : std::nullopt);
  }
  return cover;
}

SummandSubspace a_subspace(const Diamond &diamond, const Cover &cover)
{
  const auto b = diamond.landmarks().bottom;
  std::vector<std::size_t> summand_of(diamond.space().size(), SummandPartition::npos);
  const auto &summands = diamond.summands();
  for (std::size_t m = 0; m < summands.size(); ++m) {
    const auto &inner = summands[m].diamond->landmarks();
    const auto &injection = summands[m].injection;
    for (PointIndex k = 0; k < injection.size(); ++k)
      if (k != inner.top && k != inner.bottom)
        summand_of[injection[k]] = m;
  }

  SummandSubspace out{diamond.space(), {}, cover.A};
  if (std::find(out.points.begin(), out.points.end(), b) == out.points.end())
    throw std::logic_error("bottom pole missing from A");
  out.space = diamond.space().restrict_to(out.points, b);
  out.partition.summands.resize(summands.size());
  for (PointIndex k = 0; k < out.points.size(); ++k) {
    const auto x = out.points[k];
    if (x == b)
      out.partition.base = k;
    else if (summand_of[x] == SummandPartition::npos)
      throw std::logic_error("point " + diamond.space().label(x) + " of A lies in no summand");
    else
      out.partition.summands[summand_of[x]].push_back(k);
  }
  std::erase_if(out.partition.summands, [](const auto &s) { return s.empty(); });
  return out;
}

std::vector<FreeVector> split_by_summand(const SummandPartition &partition, const FreeVector &v, std::size_t points)
{
  const auto owner = partition.summand_of(points);
  std::vector<FreeVector> parts(partition.summands.size());
  for (const auto &[x, c] : v.support()) {
    if (x >= points)
      throw std::out_of_range("vector support outside the space");
    if (owner[x] != SummandPartition::npos)
      parts[owner[x]].add(x, c);
  }
  for (auto &part : parts)
    part.add(partition.base, -part.total_mass());
  return parts;
}

AdditivityReport ell1_additivity_check(const MetricSpace &summing, const SummandPartition &partition,
                                       const FreeVector &v)
{
  AdditivityReport report;
  report.whole = free_norm(summing, v).value;
  report.sum = 0;
  const auto parts = split_by_summand(partition, v, summing.size());
  for (std::size_t s = 0; s < parts.size(); ++s) {
    std::vector<PointIndex> subset{partition.base};
    subset.insert(subset.end(), partition.summands[s].begin(), partition.summands[s].end());
    const MetricSpace piece = summing.restrict_to(subset, partition.base);
    FreeVector local;
    for (const auto &[x, c] : parts[s].support())
      local.add(static_cast<PointIndex>(std::find(subset.begin(), subset.end(), x) - subset.begin()), c);
    report.parts.push_back(free_norm(piece, local).value);
    report.sum += report.parts.back();
  }
  report.holds = report.whole == report.sum;
  return report;
}

ProjectionReport projection_identity_check(const MetricSpace &summing, const SummandPartition &partition,
                                           const FreeVector &v)
{
  ProjectionReport report;
  report.whole = free_norm(summing, v).value;
  report.holds = true;
  const auto parts = split_by_summand(partition, v, summing.size());
  FreeVector projected;
  for (std::size_t n = 0; n <= parts.size(); ++n) {
    if (n > 0)
      projected += parts[n - 1];
    ProjectionTerm term;
    term.n = n;
    term.projected = free_norm(summing, projected).value;
    term.remainder = free_norm(summing, v - projected).value;
    term.holds = report.whole == term.projected + term.remainder;
    report.holds = report.holds && term.holds;
    report.terms.push_back(std::move(term));
  }
  return report;
}

}  // namespace lipfree
