#pragma once

#include "asrbias/align.hpp"
#include "asrbias/dataset.hpp"
#include "asrbias/exact.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace asrbias {

enum class StdevConvention { Sample, Population };

/// Avg, Md, Stdev and Rg of a list of WER values (percent).
struct DistributionSummary {
    std::size_t n = 0;
    Rational avg;
    Rational median;
    /// Absent when n < 2 under the sample convention (n < 1 otherwise).
    std::optional<double> stdev;
    Rational min;
    Rational max;

    bool operator==(const DistributionSummary&) const = default;
};

struct GroupSummary {
    GroupKey group;
    /// Group-level WER used between groups and for bias (convention-dependent).
    Rational wer_percent;
    /// Micro WER (ΣS+ΣD+ΣI)/ΣN over the group's utterances; transcript mode only.
    std::optional<Rational> pooled_wer_percent;
    /// Per-utterance WER distribution; transcript mode only.
    std::optional<DistributionSummary> within;
    std::size_t n_speakers = 0;
    std::optional<std::size_t> n_utts;
    std::optional<std::size_t> n_ref_tokens;
    /// Summed alignment counts; transcript mode only.
    std::optional<AlignmentCounts> totals;

    bool operator==(const GroupSummary&) const = default;
};

/// Middle element, or mean of the two middle elements for even counts.
/// Throws Error(EmptyInput).
Rational median(std::span<const Rational> values);

/// sqrt(Σ(x-mean)²/(n-1)). Throws Error(InsufficientData) when n < 2.
double sample_stdev(std::span<const Rational> values);

/// sqrt(Σ(x-mean)²/n). Throws Error(EmptyInput) when n == 0.
double population_stdev(std::span<const Rational> values);

/// (max, min). Throws Error(EmptyInput).
std::pair<Rational, Rational> range_bounds(std::span<const Rational> values);

/// Unweighted mean. Throws Error(EmptyInput).
Rational macro_average(std::span<const Rational> values);

DistributionSummary summarize(std::span<const Rational> values,
                              StdevConvention convention = StdevConvention::Sample);

GroupSummary summarize_within_group(std::span<const Rational> utterance_wers, const Rational& pooled,
                                    const GroupKey& group,
                                    StdevConvention convention = StdevConvention::Sample);

/// One value per group: each summary's wer_percent.
DistributionSummary summarize_between_groups(std::span<const GroupSummary> summaries,
                                             StdevConvention convention = StdevConvention::Sample);

}  // namespace asrbias
