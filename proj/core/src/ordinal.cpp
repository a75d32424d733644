#include "lipfree/ordinal.hpp"

#include "lipfree/errors.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace lipfree {

Ordinal Ordinal::natural(std::uint64_t n)
{
  if (n == 0)
    return {};
  return Ordinal({OrdinalTerm{Ordinal{}, n}});
}

Ordinal Ordinal::omega()
{
  return power(natural(1));
}

Ordinal Ordinal::power(const Ordinal &exponent, std::uint64_t coefficient)
{
  if (coefficient == 0)
    throw std::invalid_argument("ordinal coefficient must be positive");
  return Ordinal({OrdinalTerm{exponent, coefficient}});
}

bool Ordinal::is_finite() const
{
  return terms_.empty() || (terms_.size() == 1 && terms_.front().exponent.is_zero());
}

std::optional<std::uint64_t> Ordinal::finite_value() const
{
  if (terms_.empty())
    return 0;
  if (!is_finite())
    return std::nullopt;
  return terms_.front().coefficient;
}

std::string Ordinal::to_string() const
{
  if (terms_.empty())
    return "0";
  std::string out;
  for (const auto &term : terms_) {
    if (!out.empty())
      out += '+';
    if (term.exponent.is_zero()) {
      out += std::to_string(term.coefficient);
      continue;
    }
    if (term.exponent == natural(1))
      out += 'w';
    else
      out += "w^(" + term.exponent.to_string() + ")";
    if (term.coefficient > 1)
      out += "*" + std::to_string(term.coefficient);
  }
  return out;
}

void Ordinal::add_term(const OrdinalTerm &term)
{
  // Left-to-right ordinal addition: trailing smaller terms are absorbed.
  while (!terms_.empty() && terms_.back().exponent < term.exponent)
    terms_.pop_back();
  if (!terms_.empty() && terms_.back().exponent == term.exponent) {
    auto &c = terms_.back().coefficient;
    if (c > std::numeric_limits<std::uint64_t>::max() - term.coefficient)
      throw std::overflow_error("ordinal coefficient overflow");
    c += term.coefficient;
    return;
  }
  terms_.push_back(term);
}

Ordinal Ordinal::plus(const Ordinal &rhs) const
{
  Ordinal out = *this;
  for (const auto &term : rhs.terms_)
    out.add_term(term);
  return out;
}

Ordinal Ordinal::successor() const
{
  return plus(natural(1));
}

std::strong_ordering operator<=>(const Ordinal &a, const Ordinal &b)
{
  const auto n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto &x = a.terms_[i];
    const auto &y = b.terms_[i];
    if (auto c = x.exponent <=> y.exponent; c != 0)
      return c;
    if (auto c = x.coefficient <=> y.coefficient; c != 0)
      return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal &a, const Ordinal &b)
{
  return a.terms_ == b.terms_;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class OrdinalParser
{
public:
  explicit OrdinalParser(std::string_view text) : text_(text) {}

  Ordinal parse_all()
  {
    Ordinal value = parse_sum();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

private:
  Ordinal parse_sum()
  {
    Ordinal value = parse_product();
    for (;;) {
      skip_space();
      if (!consume('+'))
        return value;
      value = value.plus(parse_product());
    }
  }

  Ordinal parse_product()
  {
    skip_space();
    Ordinal base;
    bool symbolic = false;
    if (consume('w')) {
      symbolic = true;
      Ordinal exponent = Ordinal::natural(1);
      skip_space();
      if (consume('^')) {
        skip_space();
        if (consume('(')) {
          exponent = parse_sum();
          skip_space();
          if (!consume(')'))
            fail("expected ')'");
        } else if (consume('w')) {
          exponent = Ordinal::omega();
        } else {
          exponent = Ordinal::natural(parse_number());
        }
      }
      base = Ordinal::power(exponent, 1);
    } else {
      base = Ordinal::natural(parse_number());
    }

    for (;;) {
      skip_space();
      if (!consume('*'))
        break;
      skip_space();
      const std::uint64_t k = parse_number();
      if (k == 0)
        fail("zero coefficient");
      base = scale(base, k, symbolic);
    }
    return base;
  }

  static Ordinal scale(const Ordinal &base, std::uint64_t k, bool symbolic)
  {
    if (base.is_zero())
      return base;
    const auto &term = base.terms().front();
    if (term.coefficient > std::numeric_limits<std::uint64_t>::max() / k)
      throw std::overflow_error("ordinal coefficient overflow");
    const auto c = term.coefficient * k;
    return symbolic ? Ordinal::power(term.exponent, c) : Ordinal::natural(c);
  }

  std::uint64_t parse_number()
  {
    skip_space();
    const auto start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const auto digit = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
        fail("number too large");
      value = value * 10 + digit;
      ++pos_;
    }
    if (pos_ == start)
      fail("expected a number or 'w'");
    return value;
  }

  bool consume(char c)
  {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string &what) const
  {
    throw ParseError("ordinal syntax error at offset " + std::to_string(pos_) + " in '" + std::string(text_) +
                     "': " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text)
{
  return OrdinalParser(text).parse_all();
}

// ---------------------------------------------------------------------------

OrdinalClass classify(const Ordinal &a)
{
  if (a.is_zero())
    return {OrdinalKind::zero, std::nullopt};
  const auto &last = a.terms().back();
  if (!last.exponent.is_zero())
    return {OrdinalKind::limit, std::nullopt};

  Ordinal pred;
  for (std::size_t i = 0; i + 1 < a.terms().size(); ++i)
    pred = pred.plus(Ordinal::power(a.terms()[i].exponent, a.terms()[i].coefficient));
  if (last.coefficient > 1)
    pred = pred.plus(Ordinal::natural(last.coefficient - 1));
  return {OrdinalKind::successor, pred};
}

Ordinal fundamental_sequence(const Ordinal &a, std::uint64_t m)
{
  if (m == 0)
    throw std::invalid_argument("fundamental sequence index must be positive");
  if (classify(a).kind != OrdinalKind::limit)
    throw std::invalid_argument("fundamental sequence requested for non-limit ordinal " + a.to_string());

  const auto &terms = a.terms();
  Ordinal prefix;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i)
    prefix = prefix.plus(Ordinal::power(terms[i].exponent, terms[i].coefficient));
  const auto &last = terms.back();
  if (last.coefficient > 1)
    prefix = prefix.plus(Ordinal::power(last.exponent, last.coefficient - 1));

  const auto exponent_class = classify(last.exponent);
  if (exponent_class.kind == OrdinalKind::successor)
    return prefix.plus(Ordinal::power(*exponent_class.predecessor, m));
  return prefix.plus(Ordinal::power(fundamental_sequence(last.exponent, m), 1));
}

}  // namespace lipfree
