#include "lipfree/lipschitz.hpp"

#include <stdexcept>

namespace lipfree {

LipschitzFunction LipschitzFunction::total(const std::vector<Rational> &values)
{
  LipschitzFunction f(values.size());
  for (PointIndex x = 0; x < values.size(); ++x)
    f.values_[x] = values[x];
  return f;
}

LipschitzFunction LipschitzFunction::zero(std::size_t n)
{
  return total(std::vector<Rational>(n, Rational(0)));
}

bool LipschitzFunction::is_total() const
{
  for (const auto &v : values_)
    if (!v)
      return false;
  return true;
}

const Rational &LipschitzFunction::value(PointIndex x) const
{
  if (!defined(x))
    throw std::out_of_range("function undefined at point " + std::to_string(x));
  return *values_[x];
}

void LipschitzFunction::set(PointIndex x, Rational v)
{
  values_.at(x) = std::move(v);
  constant_.reset();
}

std::vector<PointIndex> LipschitzFunction::domain() const
{
  std::vector<PointIndex> out;
  for (PointIndex x = 0; x < values_.size(); ++x)
    if (values_[x])
      out.push_back(x);
  return out;
}

namespace {

void require_shape(const MetricSpace &space, const LipschitzFunction &f)
{
  if (f.size() != space.size())
    throw std::invalid_argument("function has " + std::to_string(f.size()) + " slots for a space of " +
                                std::to_string(space.size()) + " points");
}

}  // namespace

Rational lip_constant(const MetricSpace &space, const LipschitzFunction &f)
{
  require_shape(space, f);
  if (!f.is_total())
    throw std::invalid_argument("lip_constant requires a total function");
  Rational best = 0;
  Rational ratio;
  for (PointIndex x = 0; x < space.size(); ++x)
    for (PointIndex y = x + 1; y < space.size(); ++y) {
      ratio = abs_value(f(x) - f(y)) / space.d(x, y);
      if (ratio > best)
        best = ratio;
    }
  return best;
}

bool is_lipschitz(const MetricSpace &space, const LipschitzFunction &f, const Rational &L)
{
  require_shape(space, f);
  Rational bound;
  if (f.is_total()) {
    for (const auto &e : space.finest_edges()) {
      bound = L * e.length;
      if (abs_value(f(e.a) - f(e.b)) > bound)
        return false;
    }
    return true;
  }
  const auto dom = f.domain();
  for (std::size_t a = 0; a < dom.size(); ++a)
    for (std::size_t b = a + 1; b < dom.size(); ++b) {
      bound = L * space.d(dom[a], dom[b]);
      if (abs_value(f(dom[a]) - f(dom[b])) > bound)
        return false;
    }
  return true;
}

LipschitzFunction mcshane_extend(const MetricSpace &space, const LipschitzFunction &f, const Rational &L)
{
  require_shape(space, f);
  const auto dom = f.domain();
  if (dom.empty())
    throw std::invalid_argument("cannot extend a function with empty domain");
  if (sgn(L) < 0)
    throw std::invalid_argument("Lipschitz bound must be non-negative");
  for (std::size_t a = 0; a < dom.size(); ++a)
    for (std::size_t b = a + 1; b < dom.size(); ++b)
      if (abs_value(f(dom[a]) - f(dom[b])) > L * space.d(dom[a], dom[b]))
        throw std::invalid_argument("function is not " + format_rational(L) + "-Lipschitz on its domain: points " +
                                    space.label(dom[a]) + ", " + space.label(dom[b]));

  std::vector<Rational> values(space.size());
  Rational candidate;
  for (PointIndex x = 0; x < space.size(); ++x) {
    values[x] = f(dom.front()) + L * space.d(x, dom.front());
    for (std::size_t k = 1; k < dom.size(); ++k) {
      candidate = f(dom[k]) + L * space.d(x, dom[k]);
      if (candidate < values[x])
        values[x] = candidate;
    }
  }
  return LipschitzFunction::total(values);
}

LipschitzFunction glue_poles(const Diamond &diamond, std::size_t j, const LipschitzFunction &f_plus, std::size_t i,
                             const LipschitzFunction &f_minus)
{
  if (i == j)
    throw std::invalid_argument("glue_poles requires distinct branches i != j");
  if (i == 1 || j == 1)
    throw std::invalid_argument("glue_poles requires branches i, j >= 2 (branch 1 holds the base point)");
  const auto &space = diamond.space();
  const auto &pred = diamond.predecessor();
  if (!pred)
    throw std::invalid_argument("glue_poles requires a successor stage alpha >= 2");
  require_shape(space, f_plus);
  require_shape(space, f_minus);

  const PointIndex pred_origin = pred->landmarks().ell;
  LipschitzFunction partial(space.size());
  auto take = [&](CopyId copy, const LipschitzFunction &g, const char *name) {
    const auto &map = diamond.subcopy_map(copy);
    LipschitzFunction on_copy(space.size());
    for (PointIndex k : map) {
      if (!g.defined(k))
        throw std::invalid_argument(std::string(name) + " is undefined on its sub-copy");
      on_copy.set(k, g(k));
    }
    if (sgn(g(map[pred_origin])) != 0)
      throw std::invalid_argument(std::string(name) + " does not vanish at the sub-copy origin");
    if (!is_lipschitz(space, on_copy, Rational(1)))
      throw std::invalid_argument(std::string(name) + " is not 1-Lipschitz on its sub-copy");
    for (PointIndex k : map)
      partial.set(k, g(k));
  };
  take({Side::plus, j}, f_plus, "f_plus");
  take({Side::minus, i}, f_minus, "f_minus");
  partial.set(diamond.landmarks().ell, Rational(0));

  if (!is_lipschitz(space, partial, Rational(1)))
    throw std::invalid_argument("glued partial function is not 1-Lipschitz");
  return mcshane_extend(space, partial, Rational(1));
}

}  // namespace lipfree
