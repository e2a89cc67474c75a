#pragma once

#include "asrbias/bias.hpp"
#include "asrbias/dataset.hpp"
#include "asrbias/measures.hpp"
#include "asrbias/normalize.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace asrbias {

enum class GroupWerConvention { Micro, MacroUtts };
enum class TableKind { Wer, Performance, OverallBias, GroupBias };
enum class OutputFormat { Markdown, Csv, Json };

struct Rounding {
    int wer = 1;
    int bias = 2;

    bool operator==(const Rounding&) const = default;
};

/// Every convention that shapes the numbers. Echoed verbatim into reports.
struct EvaluationConfig {
    NormalizationConfig normalization;
    std::vector<std::string> grouping_keys;
    std::optional<std::string> style_key;
    std::vector<ReferencePolicy> reference_policies{ReferencePolicy{}};
    /// Groups that only serve as norm references (e.g. the training-matched set).
    std::vector<GroupKey> external_groups;
    StdevConvention stdev_convention = StdevConvention::Sample;
    GroupWerConvention group_wer_convention = GroupWerConvention::Micro;
    EmptyReferencePolicy empty_reference = EmptyReferencePolicy::Exclude;
    bool strict = false;
    Rounding rounding;
    std::vector<TableKind> tables{TableKind::Wer, TableKind::Performance, TableKind::OverallBias,
                                  TableKind::GroupBias};
    OutputFormat format = OutputFormat::Markdown;

    bool operator==(const EvaluationConfig&) const = default;
};

/// Reads a config document. Unknown keys and invalid values raise
/// Error(ConfigError); omitted keys take the defaults above.
EvaluationConfig config_from_json(const nlohmann::json& doc);

/// Fully resolved document, defaults included.
nlohmann::json config_to_json(const EvaluationConfig& config);

/// Throws Error(ConfigError) when grouping_keys is empty or the style key is
/// also a grouping key.
void check_config(const EvaluationConfig& config);

std::string_view to_string(TableKind kind);
std::string_view to_string(OutputFormat format);
std::string_view to_string(StdevConvention convention);
std::string_view to_string(GroupWerConvention convention);
std::string_view to_string(EmptyReferencePolicy policy);

TableKind parse_table_kind(std::string_view text);
OutputFormat parse_output_format(std::string_view text);

}  // namespace asrbias
