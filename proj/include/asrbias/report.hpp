#pragma once

#include "asrbias/config.hpp"
#include "asrbias/evaluate.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace asrbias {

enum class TableFormat { Markdown, Csv };
enum class PlotSeries { BiasPerGroup, WithinGroupStats };
enum class PlotFormat { Csv, Json };

/// Header plus rows of already-formatted cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_markdown() const;
    std::string to_csv() const;
};

/// Literal used in tables where a relative difference is undefined.
inline constexpr std::string_view kUndefined = "undef";

/// Builds one of the summary tables. WER cells use config.rounding.wer
/// decimals, bias cells config.rounding.bias; ranges print as "max-min".
/// Throws Error(MissingSection) when the report lacks the needed data.
Table build_table(const EvaluationReport& report, TableKind which);

std::string render_table(const EvaluationReport& report, TableKind which, TableFormat format);

/// bias_per_group: one record per (run, slice, policy, mode, group).
/// within_group_stats: one record per (run, slice, group) with avg, stdev,
/// median, min, max of per-utterance WERs. Values are unrounded.
std::string emit_plot_data(const EvaluationReport& report, PlotSeries series, PlotFormat format);

/// Lossless JSON: exact rationals as strings ("23.175" or "p/q"), standard
/// deviations as shortest round-trip decimals, undefined values as null.
/// Keys are sorted, so identical reports give identical bytes.
std::string write_json_report(const EvaluationReport& report);

/// Inverse of write_json_report. Throws Error(FormatError).
EvaluationReport read_json_report(std::string_view text);

std::string csv_escape(std::string_view field);

}  // namespace asrbias
