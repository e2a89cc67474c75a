#include "asrbias/bias.hpp"

#include "asrbias/error.hpp"

#include <algorithm>

namespace asrbias {

ReferencePolicy ReferencePolicy::parse(std::string_view text, const std::vector<std::string>& keys)
{
    if (text == "min") {
        return {};
    }
    constexpr std::string_view prefix = "norm:";
    if (text.substr(0, prefix.size()) == prefix && text.size() > prefix.size()) {
        return {ReferenceKind::Norm, GroupKey::parse(text.substr(prefix.size()), keys)};
    }
    throw Error(ErrorKind::ConfigError, "reference policy must be 'min' or 'norm:<group>', got '"
                                            + std::string(text) + "'");
}

std::string ReferencePolicy::to_string() const
{
    if (kind == ReferenceKind::Min) {
        return "min";
    }
    return "norm:" + (norm_group ? norm_group->to_string() : std::string());
}

std::string ReferencePolicy::measure_name() const
{
    return kind == ReferenceKind::Min ? "G2min" : "G2norm";
}

Reference select_reference(std::span<const GroupSummary> groups, std::span<const GroupWerRecord> external,
                           const ReferencePolicy& policy)
{
    if (groups.empty()) {
        throw Error(ErrorKind::EmptyInput, "no groups to select a reference from");
    }
    if (policy.kind == ReferenceKind::Min) {
        const GroupSummary* best = &groups.front();
        for (const auto& g : groups) {
            if (g.wer_percent < best->wer_percent || (g.wer_percent == best->wer_percent && g.group < best->group)) {
                best = &g;
            }
        }
        return {best->group, best->wer_percent, true};
    }
    if (!policy.norm_group) {
        throw Error(ErrorKind::MissingNormGroup, "norm policy without a norm group");
    }
    const GroupKey& wanted = *policy.norm_group;
    for (const auto& g : groups) {
        if (g.group.contains(wanted)) {
            return {g.group, g.wer_percent, true};
        }
    }
    for (const auto& r : external) {
        if (r.group.contains(wanted)) {
            return {r.group, r.wer_percent, false};
        }
    }
    throw Error(ErrorKind::MissingNormGroup, "norm group '" + wanted.to_string() + "' not found");
}

Rational group_bias_diff(const Rational& group_wer, const Rational& base)
{
    return group_wer - base;
}

Rational group_bias_reldiff(const Rational& group_wer, const Rational& base)
{
    if (base == 0) {
        throw Error(ErrorKind::ZeroBaseWer, "reference WER is zero; relative difference is undefined");
    }
    return (group_wer - base) / base;
}

Rational overall_bias(std::span<const GroupSummary> groups, const Reference& reference, BiasMode mode)
{
    Rational total = 0;
    std::size_t count = 0;
    bool skipped = false;
    for (const auto& g : groups) {
        // Only the selected reference is dropped; other groups tied with it stay and add 0.
        if (reference.member && !skipped && g.group == reference.group) {
            skipped = true;
            continue;
        }
        total += mode == BiasMode::Diff ? group_bias_diff(g.wer_percent, reference.base_wer)
                                        : group_bias_reldiff(g.wer_percent, reference.base_wer);
        ++count;
    }
    if (count == 0) {
        throw Error(ErrorKind::NoGroupsRemaining, "no groups remain once the reference group '"
                                                      + reference.group.to_string() + "' is excluded");
    }
    return total / count;
}

BiasProfile bias_profile(std::span<const GroupSummary> groups, std::span<const GroupWerRecord> external,
                         const ReferencePolicy& policy)
{
    BiasProfile profile;
    profile.policy = policy;
    profile.reference = select_reference(groups, external, policy);
    const Reference& ref = profile.reference;

    std::vector<const GroupSummary*> ordered;
    for (const auto& g : groups) {
        ordered.push_back(&g);
    }
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->group < b->group; });
    for (const auto* g : ordered) {
        GroupBias gb{g->group, g->wer_percent, group_bias_diff(g->wer_percent, ref.base_wer), std::nullopt};
        if (ref.base_wer != 0) {
            gb.reldiff = group_bias_reldiff(g->wer_percent, ref.base_wer);
        }
        profile.per_group.push_back(std::move(gb));
    }

    if (ref.member) {
        profile.excluded_from_overall.push_back(ref.group);
        if (policy.kind == ReferenceKind::Norm) {
            profile.notes.push_back("norm group '" + ref.group.to_string()
                                    + "' is one of the evaluated groups; excluded from the overall mean");
        }
    }
    profile.overall_diff = overall_bias(groups, ref, BiasMode::Diff);
    if (ref.base_wer != 0) {
        profile.overall_reldiff = overall_bias(groups, ref, BiasMode::RelDiff);
    } else {
        profile.notes.push_back("reference WER is zero; relative differences are undefined");
    }
    return profile;
}

}  // namespace asrbias
