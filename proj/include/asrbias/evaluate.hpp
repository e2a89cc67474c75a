#pragma once

#include "asrbias/bias.hpp"
#include "asrbias/config.hpp"
#include "asrbias/dataset.hpp"
#include "asrbias/measures.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace asrbias {

/// Results for one speech-style slice (or the single slice "all").
struct SliceReport {
    std::string slice;
    std::vector<GroupSummary> groups;
    /// Groups outside the evaluated set, available as norm references.
    std::vector<GroupSummary> external_groups;
    std::optional<DistributionSummary> between;
    std::optional<Rational> macro_average;
    std::vector<BiasProfile> profiles;

    bool operator==(const SliceReport&) const = default;
};

enum class RunMode { Transcripts, Summary };

struct RunCounts {
    std::size_t input = 0;
    std::size_t retained = 0;
    std::size_t excluded_empty_reference = 0;
    std::size_t excluded_missing_attribute = 0;

    bool operator==(const RunCounts&) const = default;
};

/// One system (model, decoding run) evaluated under a shared config.
struct RunReport {
    std::string label;
    RunMode mode = RunMode::Transcripts;
    std::vector<SliceReport> slices;
    /// Macro average over every evaluated group of every slice.
    std::optional<Rational> macro_average_all;
    std::vector<Diagnostic> diagnostics;
    RunCounts counts;

    bool operator==(const RunReport&) const = default;
};

struct EvaluationReport {
    EvaluationConfig config;
    std::vector<RunReport> runs;

    bool operator==(const EvaluationReport&) const = default;
};

/// Normalise, validate, align and aggregate raw transcripts. Alignments run
/// on `threads` workers; the result does not depend on the thread count.
/// Throws Error(ValidationError) when nothing is scoreable.
RunReport evaluate_transcripts(const std::string& label, const std::vector<Utterance>& utts,
                               const EvaluationConfig& config, std::size_t threads = 1,
                               std::vector<Diagnostic> parse_diagnostics = {});

/// Measures and bias straight from group-level WERs.
RunReport evaluate_summaries(const std::string& label, const std::vector<GroupWerRecord>& records,
                             const EvaluationConfig& config);

std::string_view to_string(RunMode mode);

}  // namespace asrbias
