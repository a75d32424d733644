#include "lipfree/rational.hpp"

#include <cctype>

namespace lipfree {

namespace {

bool is_integer_literal(std::string_view s)
{
  if (!s.empty() && (s.front() == '-' || s.front() == '+'))
    s.remove_prefix(1);
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
    throw ParseError("malformed rational '" + std::string(text) + "' (expected p/q)");
  if (num.front() == '+')
    num.remove_prefix(1);

  mpz_class p(std::string(num), 10);
  mpz_class q(std::string(den), 10);
  if (q == 0)
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational &value)
{
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace lipfree
