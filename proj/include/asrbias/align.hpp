#pragma once

#include "asrbias/exact.hpp"
#include "asrbias/normalize.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace asrbias {

/// Error tally of one alignment. substitutions + deletions + correct == ref_len.
struct AlignmentCounts {
    std::uint64_t substitutions = 0;
    std::uint64_t deletions = 0;
    std::uint64_t insertions = 0;
    std::uint64_t correct = 0;
    std::uint64_t ref_len = 0;

    std::uint64_t errors() const noexcept { return substitutions + deletions + insertions; }

    AlignmentCounts& operator+=(const AlignmentCounts& other) noexcept;
    bool operator==(const AlignmentCounts&) const = default;
};

enum class EditKind { Match, Substitute, Delete, Insert };

std::string_view to_string(EditKind kind);

struct EditOp {
    EditKind kind;
    std::optional<std::string> ref_token;
    std::optional<std::string> hyp_token;

    bool operator==(const EditOp&) const = default;
};

struct Alignment {
    std::vector<EditOp> ops;
    AlignmentCounts counts;

    std::uint64_t distance() const noexcept { return counts.errors(); }
};

/// Minimal unit-cost edit alignment. Ties in the backtrace prefer
/// match > substitute > delete > insert, so the op list is deterministic.
Alignment align(const TokenSequence& ref, const TokenSequence& hyp);

/// (S+D+I)/N. Throws Error(ZeroReferenceLength) when N == 0.
Rational utterance_wer(const AlignmentCounts& counts);

/// (ΣS+ΣD+ΣI)/ΣN. Throws Error(ZeroReferenceLength) when ΣN == 0.
Rational pooled_wer(std::span<const AlignmentCounts> counts);

}  // namespace asrbias
