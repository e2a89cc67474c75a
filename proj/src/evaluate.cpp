#include "asrbias/evaluate.hpp"

#include "asrbias/align.hpp"
#include "asrbias/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

namespace asrbias {

namespace {

const std::string kAllSlice = "all";

bool is_external(const GroupKey& group, const EvaluationConfig& config)
{
    return std::any_of(config.external_groups.begin(), config.external_groups.end(),
                       [&](const GroupKey& pattern) { return group.contains(pattern); });
}

std::vector<AlignmentCounts> align_all(const std::vector<Utterance>& utts, const Normalizer& normalizer,
                                       std::size_t threads)
{
    std::vector<AlignmentCounts> counts(utts.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < utts.size(); i += stride) {
            counts[i] = align(normalizer.normalize(utts[i].ref_text), normalizer.normalize(utts[i].hyp_text)).counts;
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(utts.size(), 1));
    if (threads == 1) {
        work(0, 1);
        return counts;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(work, t, threads);
    }
    return counts;
}

void finish_slice(SliceReport& slice, const EvaluationConfig& config)
{
    if (slice.groups.empty()) {
        return;
    }
    slice.between = summarize_between_groups(slice.groups, config.stdev_convention);
    slice.macro_average = slice.between->avg;

    std::vector<GroupWerRecord> external;
    for (const auto& g : slice.external_groups) {
        external.push_back({g.group, g.wer_percent, g.n_utts, g.n_ref_tokens, true});
    }
    for (const auto& policy : config.reference_policies) {
        try {
            slice.profiles.push_back(bias_profile(slice.groups, external, policy));
        } catch (const Error& e) {
            throw Error(e.kind(), "slice '" + slice.slice + "', reference " + policy.to_string() + ": " + e.what());
        }
    }
}

std::optional<Rational> macro_over_slices(const std::vector<SliceReport>& slices)
{
    std::vector<Rational> all;
    for (const auto& s : slices) {
        for (const auto& g : s.groups) {
            all.push_back(g.wer_percent);
        }
    }
    if (all.empty()) {
        return std::nullopt;
    }
    return macro_average(all);
}

std::string slice_of(const GroupKey& full, const EvaluationConfig& config)
{
    if (!config.style_key) {
        return kAllSlice;
    }
    for (const auto& [k, v] : full.pairs) {
        if (k == *config.style_key) {
            return v;
        }
    }
    throw Error(ErrorKind::MissingAttribute,
                "group '" + full.to_string() + "' lacks style attribute '" + *config.style_key + "'");
}

GroupKey restrict_to(const GroupKey& full, const std::vector<std::string>& keys)
{
    GroupKey out;
    for (const auto& k : keys) {
        auto it = std::find_if(full.pairs.begin(), full.pairs.end(), [&](const auto& p) { return p.first == k; });
        if (it == full.pairs.end()) {
            throw Error(ErrorKind::MissingAttribute,
                        "group '" + full.to_string() + "' lacks grouping attribute '" + k + "'");
        }
        out.pairs.push_back(*it);
    }
    return out;
}

}  // namespace

std::string_view to_string(RunMode mode)
{
    return mode == RunMode::Transcripts ? "transcripts" : "summary";
}

RunReport evaluate_transcripts(const std::string& label, const std::vector<Utterance>& utts,
                               const EvaluationConfig& config, std::size_t threads,
                               std::vector<Diagnostic> parse_diagnostics)
{
    check_config(config);
    RunReport run;
    run.label = label;
    run.mode = RunMode::Transcripts;
    run.diagnostics = std::move(parse_diagnostics);

    std::vector<std::string> keys = config.grouping_keys;
    if (config.style_key) {
        keys.push_back(*config.style_key);
    }
    Normalizer normalizer(config.normalization);
    ValidationReport checked = validate(utts, normalizer, {keys, config.empty_reference, config.strict});
    run.diagnostics.insert(run.diagnostics.end(), checked.findings.begin(), checked.findings.end());
    run.counts = {utts.size(), checked.retained.size(), checked.excluded_empty_reference,
                  checked.excluded_missing_attribute};
    if (checked.retained.empty()) {
        throw Error(ErrorKind::ValidationError, "run '" + label + "': no scoreable utterances");
    }

    const auto& kept = checked.retained;
    std::vector<AlignmentCounts> counts = align_all(kept, normalizer, threads);

    std::map<std::string, std::map<GroupKey, std::vector<std::size_t>>> buckets;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        std::string slice = config.style_key ? kept[i].attributes.at(*config.style_key) : kAllSlice;
        buckets[slice][group_key_of(kept[i], config.grouping_keys)].push_back(i);
    }

    for (const auto& [slice_name, groups] : buckets) {
        SliceReport slice;
        slice.slice = slice_name;
        for (const auto& [key, members] : groups) {
            std::vector<Rational> utt_wers;
            std::vector<AlignmentCounts> member_counts;
            std::set<std::string> speakers;
            for (auto i : members) {
                utt_wers.push_back(percent(utterance_wer(counts[i])));
                member_counts.push_back(counts[i]);
                speakers.insert(kept[i].speaker_id);
            }
            Rational pooled = percent(pooled_wer(member_counts));
            GroupSummary g = summarize_within_group(utt_wers, pooled, key, config.stdev_convention);
            if (config.group_wer_convention == GroupWerConvention::MacroUtts) {
                g.wer_percent = g.within->avg;
            }
            g.n_speakers = speakers.size();
            AlignmentCounts total;
            for (const auto& c : member_counts) {
                total += c;
            }
            g.n_ref_tokens = total.ref_len;
            g.totals = total;
            (is_external(key, config) ? slice.external_groups : slice.groups).push_back(std::move(g));
        }
        finish_slice(slice, config);
        run.slices.push_back(std::move(slice));
    }
    run.macro_average_all = macro_over_slices(run.slices);
    return run;
}

RunReport evaluate_summaries(const std::string& label, const std::vector<GroupWerRecord>& records,
                             const EvaluationConfig& config)
{
    check_config(config);
    RunReport run;
    run.label = label;
    run.mode = RunMode::Summary;
    run.counts.input = records.size();
    run.counts.retained = records.size();

    std::map<std::string, std::map<GroupKey, const GroupWerRecord*>> buckets;
    for (const auto& r : records) {
        std::string slice = slice_of(r.group, config);
        GroupKey key = restrict_to(r.group, config.grouping_keys);
        if (!buckets[slice].emplace(key, &r).second) {
            throw Error(ErrorKind::FormatError, "run '" + label + "': group '" + key.to_string()
                                                    + "' appears twice in slice '" + slice + "'");
        }
    }
    for (const auto& [slice_name, groups] : buckets) {
        SliceReport slice;
        slice.slice = slice_name;
        for (const auto& [key, record] : groups) {
            GroupSummary g;
            g.group = key;
            g.wer_percent = record->wer_percent;
            g.n_utts = record->n_utts;
            g.n_ref_tokens = record->n_ref_tokens;
            (record->external || is_external(key, config) ? slice.external_groups : slice.groups)
                .push_back(std::move(g));
        }
        finish_slice(slice, config);
        run.slices.push_back(std::move(slice));
    }
    run.macro_average_all = macro_over_slices(run.slices);
    return run;
}

}  // namespace asrbias
