#include "lipfree/free_vector.hpp"

namespace lipfree {

FreeVector::FreeVector(Support support) : support_(std::move(support))
{
  std::erase_if(support_, [](const auto &entry) { return sgn(entry.second) == 0; });
}

Rational FreeVector::coefficient(PointIndex x) const
{
  if (auto it = support_.find(x); it != support_.end())
    return it->second;
  return 0;
}

Rational FreeVector::total_mass() const
{
  Rational total = 0;
  for (const auto &[x, c] : support_)
    total += c;
  return total;
}

void FreeVector::add(PointIndex x, const Rational &c)
{
  if (sgn(c) == 0)
    return;
  auto [it, inserted] = support_.emplace(x, c);
  if (inserted)
    return;
  it->second += c;
  if (sgn(it->second) == 0)
    support_.erase(it);
}

FreeVector FreeVector::without_base(PointIndex base) const
{
  FreeVector out = *this;
  out.support_.erase(base);
  return out;
}

FreeVector FreeVector::operator-() const
{
  FreeVector out = *this;
  for (auto &[x, c] : out.support_)
    c = -c;
  return out;
}

FreeVector &FreeVector::operator+=(const FreeVector &rhs)
{
  for (const auto &[x, c] : rhs.support_)
    add(x, c);
  return *this;
}

FreeVector &FreeVector::operator-=(const FreeVector &rhs)
{
  for (const auto &[x, c] : rhs.support_)
    add(x, -c);
  return *this;
}

FreeVector &FreeVector::operator*=(const Rational &s)
{
  if (sgn(s) == 0) {
    support_.clear();
    return *this;
  }
  for (auto &[x, c] : support_)
    c *= s;
  return *this;
}

bool operator<(const FreeVector &a, const FreeVector &b)
{
  auto ia = a.support_.begin();
  auto ib = b.support_.begin();
  for (; ia != a.support_.end() && ib != b.support_.end(); ++ia, ++ib) {
    if (ia->first != ib->first)
      return ia->first < ib->first;
    if (ia->second != ib->second)
      return ia->second < ib->second;
  }
  return ia == a.support_.end() && ib != b.support_.end();
}

}  // namespace lipfree
