#pragma once

#include "lipfree/diamond.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lipfree {

inline constexpr const char *kToolVersion = "0.1.0";

struct SuiteConfig
{
  std::uint64_t seed = 1;
  std::size_t budget_points = kDefaultPointBudget;
  /// Replaces the branching of every escape and game check when set.
  std::optional<std::size_t> branches;
  /// Check ids to run (1-10); empty runs all of them.
  std::vector<int> only;
  /// Wall times make the serialized report run-dependent, so they are
  /// written only on request.
  bool include_timings = false;
};

enum class CheckStatus
{
  pass,
  fail,
  skip
};

std::string to_string(CheckStatus status);

struct SuiteEntry
{
  int id = 0;
  std::string name;
  /// Mathematical statement the check exercises, in plain words.
  std::string claim;
  CheckStatus status = CheckStatus::skip;
  std::string details;
  double seconds = 0;
};

struct SuiteReport
{
  std::string tool_version = kToolVersion;
  std::vector<std::uint64_t> seeds;
  std::vector<SuiteEntry> entries;
  bool include_timings = false;

  /// No failing entry (skips do not fail the suite).
  bool passed() const;
};

/// Runs the acceptance checks. `progress` is called after each one.
SuiteReport run_suite(const SuiteConfig &config, const std::function<void(const SuiteEntry &)> &progress = {});

/// Byte-stable JSON rendering.
std::string write_report(const SuiteReport &report);

}  // namespace lipfree
