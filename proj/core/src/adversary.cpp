#include "lipfree/adversary.hpp"

#include "lipfree/errors.hpp"
#include "lipfree/freespace.hpp"
#include "lipfree/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace lipfree {

std::string to_string(AdversaryKind kind)
{
  switch (kind) {
  case AdversaryKind::random_lipschitz:
    return "random_lipschitz";
  case AdversaryKind::distance_functions:
    return "distance_functions";
  case AdversaryKind::adaptive_dual:
    return "adaptive_dual";
  }
  return {};
}

AdversaryKind parse_adversary_kind(std::string_view text)
{
  for (auto kind : {AdversaryKind::random_lipschitz, AdversaryKind::distance_functions, AdversaryKind::adaptive_dual})
    if (text == to_string(kind))
      return kind;
  throw ParseError("unknown adversary kind '" + std::string(text) +
                   "' (expected random_lipschitz, distance_functions or adaptive_dual)");
}

void AdversaryConfig::validate() const
{
  if (count == 0)
    throw std::invalid_argument("adversary count must be at least 1");
  if (moves == 0)
    throw std::invalid_argument("adversary must pose at least one family");
  if (sgn(eta) <= 0)
    throw std::invalid_argument("eta must be positive");
}

std::vector<PointIndex> anchor_region(const Diamond &diamond, std::optional<std::size_t> horizon)
{
  std::vector<PointIndex> out;
  const auto &addresses = diamond.addresses();
  for (PointIndex x = 0; x < addresses.size(); ++x) {
    if (horizon) {
      const auto &a = addresses[x];
      bool inside = a.terminal.kind != TerminalKind::mid || a.terminal.mid <= *horizon;
      for (const auto &segment : a.path)
        if (const auto *copy = std::get_if<CopyId>(&segment); copy && copy->branch > *horizon)
          inside = false;
      if (!inside)
        continue;
    }
    out.push_back(x);
  }
  return out;
}

LipschitzFunction distance_function(const MetricSpace &space, PointIndex p)
{
  std::vector<Rational> values(space.size());
  const Rational shift = space.distance(space.base(), p);
  for (PointIndex x = 0; x < space.size(); ++x)
    values[x] = space.d(x, p) - shift;
  return LipschitzFunction::total(values);
}

namespace {

LipschitzFunction shifted_to_base(const MetricSpace &space, const LipschitzFunction &g)
{
  std::vector<Rational> values(space.size());
  const Rational shift = g(space.base());
  for (PointIndex x = 0; x < space.size(); ++x)
    values[x] = g(x) - shift;
  return LipschitzFunction::total(values);
}

std::vector<PointIndex> sample_distinct(Rng &rng, const std::vector<PointIndex> &pool, std::size_t k)
{
  std::vector<PointIndex> items = pool;
  k = std::min(k, items.size());
  for (std::size_t i = 0; i < k; ++i)
    std::swap(items[i], items[i + rng.below(items.size() - i)]);
  items.resize(k);
  return items;
}

}  // namespace

LipschitzFunction project_to_anchors(const MetricSpace &space, const LipschitzFunction &f,
                                     const std::vector<PointIndex> &anchors)
{
  LipschitzFunction partial(space.size());
  for (auto a : anchors)
    partial.set(a, f(a));
  return shifted_to_base(space, mcshane_extend(space, partial, Rational(1)));
}

Adversary::Adversary(const MetricSpace &space, std::vector<PointIndex> anchors, AdversaryConfig config)
    : space_(space), anchors_(std::move(anchors)), config_(std::move(config))
{
  config_.validate();
  if (anchors_.empty())
    throw std::invalid_argument("adversary needs at least one anchor point");
  for (auto a : anchors_)
    if (a >= space_.size())
      throw std::out_of_range("adversary anchor outside the space");
}

FunctionalFamily Adversary::family(std::size_t round, const FreeVector &center,
                                   const std::vector<FreeVector> &earlier) const
{
  Rng rng = Rng::stream(config_.seed, round);
  FunctionalFamily out;

  auto add_distance_functions = [&] {
    while (out.size() < config_.count)
      out.push_back(distance_function(space_, anchors_[rng.below(anchors_.size())]));
  };

  switch (config_.kind) {
  case AdversaryKind::distance_functions:
    add_distance_functions();
    break;

  case AdversaryKind::random_lipschitz:
    while (out.size() < config_.count) {
      const auto chosen = sample_distinct(rng, anchors_, 2 + rng.below(3));
      std::vector<Rational> values;
      for (std::size_t k = 0; k < chosen.size(); ++k)
        values.push_back(ratio(rng.between(-8, 8), 4));
      Rational worst = 0;
      for (std::size_t a = 0; a < chosen.size(); ++a)
        for (std::size_t b = a + 1; b < chosen.size(); ++b) {
          const Rational slope = abs_value(values[a] - values[b]) / space_.d(chosen[a], chosen[b]);
          if (slope > worst)
            worst = slope;
        }
      LipschitzFunction partial(space_.size());
      for (std::size_t k = 0; k < chosen.size(); ++k)
        partial.set(chosen[k], worst > 1 ? Rational(values[k] / worst) : values[k]);
      out.push_back(shifted_to_base(space_, mcshane_extend(space_, partial, Rational(1))));
    }
    break;

  case AdversaryKind::adaptive_dual:
    for (auto it = earlier.rbegin(); it != earlier.rend() && out.size() < config_.count; ++it) {
      const auto difference = *it - center;
      if (difference.without_base(space_.base()).is_zero())
        continue;
      out.push_back(project_to_anchors(space_, free_norm(space_, difference).certificate.potential, anchors_));
    }
    add_distance_functions();
    break;
  }
  return out;
}

}  // namespace lipfree
