#pragma once

#include "lipfree/decomposition.hpp"
#include "lipfree/derivation.hpp"
#include "lipfree/freespace.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace lipfree::io {

// All formats are JSON documents with a "format" tag, sorted keys, points
// named by label and every number that is not a count written as an exact
// "p/q" string. Writers are byte-stable; readers throw ParseError on
// malformed or inconsistent input.

struct LoadedSpace
{
  MetricSpace space;
  std::optional<DiamondSpec> spec;
};

std::string write_space(const MetricSpace &space, const std::optional<DiamondSpec> &spec = std::nullopt);
LoadedSpace read_space(std::string_view text);

std::string write_vector(const MetricSpace &space, const FreeVector &v);
FreeVector read_vector(const MetricSpace &space, std::string_view text);

std::string write_function(const MetricSpace &space, const LipschitzFunction &f);
LipschitzFunction read_function(const MetricSpace &space, std::string_view text);

/// Norm value with its transport plan and dual potential.
std::string write_norm(const MetricSpace &space, const FreeNorm &norm);

/// When a report is given, every node carries its own pass/fail status and
/// violations.
std::string write_transcript(const MetricSpace &space, const GameTranscript &transcript,
                             const VerificationReport *report = nullptr);
GameTranscript read_transcript(const MetricSpace &space, std::string_view text);
/// Space parameters recorded in a transcript file, if any.
std::optional<DiamondSpec> transcript_spec(std::string_view text);

std::string write_partition(const MetricSpace &space, const SummandPartition &partition);
SummandPartition read_partition(const MetricSpace &space, std::string_view text);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view content);

}  // namespace lipfree::io
