#include "asrbias/config.hpp"

#include "asrbias/error.hpp"

#include <algorithm>
#include <set>

namespace asrbias {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& message)
{
    throw Error(ErrorKind::ConfigError, message);
}

template <typename T>
T get_as(const json& value, const std::string& where)
{
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        config_error("'" + where + "' has the wrong type");
    }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where)
{
    if (!obj.is_object()) {
        config_error("'" + where + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            config_error("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename Enum>
Enum pick(const std::string& text, std::initializer_list<std::pair<std::string_view, Enum>> choices,
          const std::string& where)
{
    for (const auto& [name, value] : choices) {
        if (text == name) {
            return value;
        }
    }
    config_error("invalid value '" + text + "' for '" + where + "'");
}

}  // namespace

std::string_view to_string(TableKind kind)
{
    switch (kind) {
    case TableKind::Wer: return "wer";
    case TableKind::Performance: return "performance";
    case TableKind::OverallBias: return "overall_bias";
    case TableKind::GroupBias: return "group_bias";
    }
    return "?";
}

std::string_view to_string(OutputFormat format)
{
    switch (format) {
    case OutputFormat::Markdown: return "markdown";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    }
    return "?";
}

std::string_view to_string(StdevConvention convention)
{
    return convention == StdevConvention::Sample ? "sample" : "population";
}

std::string_view to_string(GroupWerConvention convention)
{
    return convention == GroupWerConvention::Micro ? "micro" : "macro_utts";
}

std::string_view to_string(EmptyReferencePolicy policy)
{
    return policy == EmptyReferencePolicy::Exclude ? "exclude" : "error";
}

TableKind parse_table_kind(std::string_view text)
{
    return pick<TableKind>(std::string(text),
                           {{"wer", TableKind::Wer},
                            {"performance", TableKind::Performance},
                            {"overall_bias", TableKind::OverallBias},
                            {"group_bias", TableKind::GroupBias}},
                           "tables");
}

OutputFormat parse_output_format(std::string_view text)
{
    return pick<OutputFormat>(std::string(text),
                              {{"markdown", OutputFormat::Markdown},
                               {"csv", OutputFormat::Csv},
                               {"json", OutputFormat::Json}},
                              "format");
}

EvaluationConfig config_from_json(const json& doc)
{
    EvaluationConfig config;
    reject_unknown(doc,
                   {"normalization", "grouping_keys", "style_key", "reference_policies", "external_groups",
                    "stdev_convention", "group_wer_convention", "empty_reference", "strict", "rounding", "tables",
                    "format"},
                   "config");

    if (auto it = doc.find("normalization"); it != doc.end()) {
        reject_unknown(*it, {"tag_patterns", "case_fold", "strip_punctuation"}, "normalization");
        if (auto p = it->find("tag_patterns"); p != it->end()) {
            config.normalization.tag_patterns = get_as<std::vector<std::string>>(*p, "normalization.tag_patterns");
        }
        if (auto p = it->find("case_fold"); p != it->end()) {
            config.normalization.case_fold = get_as<bool>(*p, "normalization.case_fold");
        }
        if (auto p = it->find("strip_punctuation"); p != it->end()) {
            config.normalization.strip_punctuation = get_as<bool>(*p, "normalization.strip_punctuation");
        }
    }
    if (auto it = doc.find("grouping_keys"); it != doc.end()) {
        config.grouping_keys = get_as<std::vector<std::string>>(*it, "grouping_keys");
    }
    if (auto it = doc.find("style_key"); it != doc.end() && !it->is_null()) {
        config.style_key = get_as<std::string>(*it, "style_key");
    }
    if (auto it = doc.find("reference_policies"); it != doc.end()) {
        config.reference_policies.clear();
        for (const auto& text : get_as<std::vector<std::string>>(*it, "reference_policies")) {
            config.reference_policies.push_back(ReferencePolicy::parse(text, config.grouping_keys));
        }
    }
    if (auto it = doc.find("external_groups"); it != doc.end()) {
        for (const auto& text : get_as<std::vector<std::string>>(*it, "external_groups")) {
            config.external_groups.push_back(GroupKey::parse(text, config.grouping_keys));
        }
    }
    if (auto it = doc.find("stdev_convention"); it != doc.end()) {
        config.stdev_convention = pick<StdevConvention>(
            get_as<std::string>(*it, "stdev_convention"),
            {{"sample", StdevConvention::Sample}, {"population", StdevConvention::Population}}, "stdev_convention");
    }
    if (auto it = doc.find("group_wer_convention"); it != doc.end()) {
        config.group_wer_convention = pick<GroupWerConvention>(
            get_as<std::string>(*it, "group_wer_convention"),
            {{"micro", GroupWerConvention::Micro}, {"macro_utts", GroupWerConvention::MacroUtts}},
            "group_wer_convention");
    }
    if (auto it = doc.find("empty_reference"); it != doc.end()) {
        config.empty_reference = pick<EmptyReferencePolicy>(
            get_as<std::string>(*it, "empty_reference"),
            {{"exclude", EmptyReferencePolicy::Exclude}, {"error", EmptyReferencePolicy::Error}}, "empty_reference");
    }
    if (auto it = doc.find("strict"); it != doc.end()) {
        config.strict = get_as<bool>(*it, "strict");
    }
    if (auto it = doc.find("rounding"); it != doc.end()) {
        reject_unknown(*it, {"wer", "bias"}, "rounding");
        if (auto p = it->find("wer"); p != it->end()) {
            config.rounding.wer = get_as<int>(*p, "rounding.wer");
        }
        if (auto p = it->find("bias"); p != it->end()) {
            config.rounding.bias = get_as<int>(*p, "rounding.bias");
        }
        if (config.rounding.wer < 0 || config.rounding.wer > 12 || config.rounding.bias < 0
            || config.rounding.bias > 12) {
            config_error("rounding decimals must be within 0..12");
        }
    }
    if (auto it = doc.find("tables"); it != doc.end()) {
        config.tables.clear();
        for (const auto& text : get_as<std::vector<std::string>>(*it, "tables")) {
            config.tables.push_back(parse_table_kind(text));
        }
    }
    if (auto it = doc.find("format"); it != doc.end()) {
        config.format = parse_output_format(get_as<std::string>(*it, "format"));
    }
    check_config(config);
    return config;
}

json config_to_json(const EvaluationConfig& config)
{
    json doc;
    doc["normalization"] = {{"tag_patterns", config.normalization.tag_patterns},
                            {"case_fold", config.normalization.case_fold},
                            {"strip_punctuation", config.normalization.strip_punctuation}};
    doc["grouping_keys"] = config.grouping_keys;
    doc["style_key"] = config.style_key ? json(*config.style_key) : json(nullptr);
    json policies = json::array();
    for (const auto& p : config.reference_policies) {
        policies.push_back(p.to_string());
    }
    doc["reference_policies"] = policies;
    json external = json::array();
    for (const auto& g : config.external_groups) {
        external.push_back(g.to_string());
    }
    doc["external_groups"] = external;
    doc["stdev_convention"] = to_string(config.stdev_convention);
    doc["group_wer_convention"] = to_string(config.group_wer_convention);
    doc["empty_reference"] = to_string(config.empty_reference);
    doc["strict"] = config.strict;
    doc["rounding"] = {{"wer", config.rounding.wer}, {"bias", config.rounding.bias}};
    json tables = json::array();
    for (auto t : config.tables) {
        tables.push_back(to_string(t));
    }
    doc["tables"] = tables;
    doc["format"] = to_string(config.format);
    return doc;
}

void check_config(const EvaluationConfig& config)
{
    if (config.grouping_keys.empty()) {
        config_error("grouping_keys must not be empty");
    }
    std::set<std::string> unique(config.grouping_keys.begin(), config.grouping_keys.end());
    if (unique.size() != config.grouping_keys.size()) {
        config_error("grouping_keys contains a repeated key");
    }
    if (config.style_key && unique.contains(*config.style_key)) {
        config_error("style_key '" + *config.style_key + "' is also a grouping key");
    }
    for (const auto& p : config.reference_policies) {
        if (p.kind == ReferenceKind::Norm && !p.norm_group) {
            config_error("norm policy without a group");
        }
    }
    Normalizer check(config.normalization);
    (void)check;
}

}  // namespace asrbias
