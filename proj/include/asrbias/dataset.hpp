#pragma once

#include "asrbias/exact.hpp"
#include "asrbias/normalize.hpp"

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asrbias {

/// Ordered (attribute, label) pairs identifying a speaker group. Pairs keep
/// the config-declared key order; comparison is lexicographic.
struct GroupKey {
    std::vector<std::pair<std::string, std::string>> pairs;

    /// "cohort=DC,style=Read"
    std::string to_string() const;
    /// "DC/Read"; used for table headers.
    std::string label() const;
    /// Accepts "k=v[,k=v...]" or a bare label when exactly one key is given.
    static GroupKey parse(std::string_view text, const std::vector<std::string>& keys = {});

    /// True when every pair of `pattern` is present here.
    bool contains(const GroupKey& pattern) const;

    auto operator<=>(const GroupKey&) const = default;
    bool operator==(const GroupKey&) const = default;
};

struct Utterance {
    std::string utt_id;
    std::string speaker_id;
    std::map<std::string, std::string> attributes;
    std::string ref_text;
    std::string hyp_text;

    bool operator==(const Utterance&) const = default;
};

/// A group-level WER read from a summary CSV or an earlier run.
struct GroupWerRecord {
    GroupKey group;
    Rational wer_percent;
    std::optional<std::size_t> n_utts;
    std::optional<std::size_t> n_ref_tokens;
    /// Rows marked external serve only as norm references.
    bool external = false;

    bool operator==(const GroupWerRecord&) const = default;
};

struct Diagnostic {
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string utt_id;
    std::string message;

    std::string to_string() const;
    bool operator==(const Diagnostic&) const = default;
};

enum class ManifestFormat { Jsonl, Tsv };

struct ManifestParse {
    std::vector<Utterance> utterances;
    std::vector<Diagnostic> diagnostics;
};

/// Malformed records become diagnostics; an unusable TSV header raises
/// Error(FormatError) and a repeated utt_id raises Error(DuplicateUtteranceId).
ManifestParse parse_manifest(std::istream& in, ManifestFormat format);

/// One JSON object per line, keys sorted. parse_manifest reads it back unchanged.
std::string to_jsonl(const std::vector<Utterance>& utts);

enum class EmptyReferencePolicy { Exclude, Error };

struct ValidationOptions {
    std::vector<std::string> grouping_keys;
    EmptyReferencePolicy empty_reference = EmptyReferencePolicy::Exclude;
    bool strict = false;
};

struct ValidationReport {
    std::vector<Utterance> retained;
    std::vector<Diagnostic> findings;
    std::size_t excluded_empty_reference = 0;
    std::size_t excluded_missing_attribute = 0;

    bool clean() const noexcept { return findings.empty(); }
};

/// Flags references that normalise to nothing, missing grouping attributes
/// and groups left without data. Under EmptyReferencePolicy::Error an empty
/// reference raises Error(ValidationError); with strict set, a group emptied
/// by exclusions raises Error(EmptyGroup).
ValidationReport validate(const std::vector<Utterance>& utts, const Normalizer& normalizer,
                          const ValidationOptions& options);

GroupKey group_key_of(const Utterance& utt, const std::vector<std::string>& keys);

/// Exact, disjoint partition; map order is GroupKey order. Utterances lacking
/// a key raise Error(MissingAttribute).
std::map<GroupKey, std::vector<Utterance>> partition(const std::vector<Utterance>& utts,
                                                     const std::vector<std::string>& grouping_keys);

/// CSV with attribute columns, a "wer" column, and optional "n_utts",
/// "n_ref_tokens" and "role" (eval|external) columns.
std::vector<GroupWerRecord> load_group_summaries(std::istream& in);

/// Splits one CSV record honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace asrbias
