#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lipfree {

/// Malformed textual input (ordinals, rationals, addresses, files).
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A construction would exceed the configured point budget.
class BudgetExceeded : public std::runtime_error
{
public:
  BudgetExceeded(std::size_t estimated, std::size_t budget)
      : std::runtime_error("estimated " + std::to_string(estimated) + " points exceeds budget of " +
                           std::to_string(budget)),
        estimated_(estimated),
        budget_(budget)
  {
  }

  std::size_t estimated() const { return estimated_; }
  std::size_t budget() const { return budget_; }

private:
  std::size_t estimated_;
  std::size_t budget_;
};

}  // namespace lipfree
