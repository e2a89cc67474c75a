#pragma once

#include "asrbias/dataset.hpp"
#include "asrbias/exact.hpp"
#include "asrbias/measures.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace asrbias {

enum class ReferenceKind { Min, Norm };

struct ReferencePolicy {
    ReferenceKind kind = ReferenceKind::Min;
    /// Required iff kind == Norm.
    std::optional<GroupKey> norm_group;

    /// "min" or "norm:<group>"; see GroupKey::parse for <group>.
    static ReferencePolicy parse(std::string_view text, const std::vector<std::string>& keys = {});
    std::string to_string() const;
    /// "G2min" / "G2norm"
    std::string measure_name() const;

    bool operator==(const ReferencePolicy&) const = default;
};

enum class BiasMode { Diff, RelDiff };

struct Reference {
    GroupKey group;
    Rational base_wer;
    /// True when the reference is one of the evaluated groups; it is then left
    /// out of the overall mean.
    bool member = false;

    bool operator==(const Reference&) const = default;
};

struct GroupBias {
    GroupKey group;
    Rational wer_percent;
    Rational diff;
    /// Absent when the base WER is zero.
    std::optional<Rational> reldiff;

    bool operator==(const GroupBias&) const = default;
};

struct BiasProfile {
    ReferencePolicy policy;
    Reference reference;
    std::vector<GroupBias> per_group;
    Rational overall_diff;
    std::optional<Rational> overall_reldiff;
    std::vector<GroupKey> excluded_from_overall;
    std::vector<std::string> notes;

    bool operator==(const BiasProfile&) const = default;
};

/// Min policy: lowest WER among `groups`, ties to the smallest GroupKey.
/// Norm policy: the named group, searched in `groups` first, then `external`.
/// Throws Error(MissingNormGroup) or Error(EmptyInput).
Reference select_reference(std::span<const GroupSummary> groups, std::span<const GroupWerRecord> external,
                           const ReferencePolicy& policy);

/// group_wer - base
Rational group_bias_diff(const Rational& group_wer, const Rational& base);

/// (group_wer - base) / base. Throws Error(ZeroBaseWer) when base == 0.
Rational group_bias_reldiff(const Rational& group_wer, const Rational& base);

/// Mean per-group bias over every evaluated group except a member reference.
/// Throws Error(NoGroupsRemaining), or Error(ZeroBaseWer) in RelDiff mode.
Rational overall_bias(std::span<const GroupSummary> groups, const Reference& reference, BiasMode mode);

/// Per-group diff/reldiff plus both overall values. Throws
/// Error(NoGroupsRemaining) when the reference leaves nothing to average.
BiasProfile bias_profile(std::span<const GroupSummary> groups, std::span<const GroupWerRecord> external,
                         const ReferencePolicy& policy);

}  // namespace asrbias
