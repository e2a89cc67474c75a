#include "asrbias/cli.hpp"

#include "asrbias/align.hpp"
#include "asrbias/config.hpp"
#include "asrbias/error.hpp"
#include "asrbias/evaluate.hpp"
#include "asrbias/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace asrbias {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out = "-";
    std::string format;
    std::vector<std::string> references;
    std::string group_by;
    std::string style_key;
    bool strict = false;
};

struct LabeledPath {
    std::string label;
    fs::path path;
};

LabeledPath split_labeled(const std::string& spec)
{
    auto eq = spec.find('=');
    if (eq != std::string::npos && eq > 0 && spec.substr(0, eq).find('/') == std::string::npos) {
        return {spec.substr(0, eq), spec.substr(eq + 1)};
    }
    fs::path p(spec);
    return {p.stem().string(), p};
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FormatError, "cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_commas(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

/// Config file first, then flags on top.
EvaluationConfig resolve_config(const CommonOptions& opts)
{
    json doc = json::object();
    if (!opts.config_path.empty()) {
        doc = json::parse(read_file(opts.config_path), nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw Error(ErrorKind::ConfigError, "'" + opts.config_path + "' is not a JSON object");
        }
    }
    if (!opts.group_by.empty()) {
        doc["grouping_keys"] = split_commas(opts.group_by);
    }
    if (!opts.style_key.empty()) {
        doc["style_key"] = opts.style_key;
    }
    if (!opts.references.empty()) {
        doc["reference_policies"] = opts.references;
    }
    if (opts.strict) {
        doc["strict"] = true;
    }
    if (!opts.format.empty()) {
        doc["format"] = opts.format;
    }
    return config_from_json(doc);
}

std::string table_file(TableKind kind, OutputFormat format)
{
    return std::string(to_string(kind)) + (format == OutputFormat::Csv ? ".csv" : ".md");
}

using Outputs = std::map<std::string, std::string>;

Outputs build_outputs(const EvaluationReport& report, bool include_within)
{
    const auto& config = report.config;
    Outputs files;
    files["report.json"] = write_json_report(report);
    files["config.json"] = config_to_json(config).dump(2) + "\n";
    if (config.format != OutputFormat::Json) {
        auto fmt = config.format == OutputFormat::Csv ? TableFormat::Csv : TableFormat::Markdown;
        for (auto kind : config.tables) {
            std::string text = render_table(report, kind, fmt);
            if (fmt == TableFormat::Markdown) {
                text += "\n<!-- asrbias config: " + config_to_json(config).dump() + " -->\n";
            }
            files[table_file(kind, config.format)] = std::move(text);
        }
    }
    auto plot_fmt = config.format == OutputFormat::Json ? PlotFormat::Json : PlotFormat::Csv;
    std::string ext = plot_fmt == PlotFormat::Json ? ".json" : ".csv";
    files["bias_per_group" + ext] = emit_plot_data(report, PlotSeries::BiasPerGroup, plot_fmt);
    if (include_within) {
        files["within_group_stats" + ext] = emit_plot_data(report, PlotSeries::WithinGroupStats, plot_fmt);
    }
    return files;
}

void write_outputs(const Outputs& files, const EvaluationReport& report, const std::string& out_dir,
                   std::ostream& out)
{
    if (out_dir == "-") {
        const auto& config = report.config;
        if (config.format == OutputFormat::Json) {
            out << files.at("report.json");
            return;
        }
        bool first = true;
        for (auto kind : config.tables) {
            if (!first) {
                out << "\n";
            }
            first = false;
            out << (config.format == OutputFormat::Markdown ? "### " : "# ") << to_string(kind) << "\n";
            if (config.format == OutputFormat::Markdown) {
                out << "\n";
            }
            out << render_table(report, kind,
                                config.format == OutputFormat::Csv ? TableFormat::Csv : TableFormat::Markdown);
        }
        return;
    }
    fs::create_directories(out_dir);
    for (const auto& [name, content] : files) {
        fs::path target = fs::path(out_dir) / name;
        fs::path tmp = target;
        tmp += ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) {
                throw Error(ErrorKind::FormatError, "cannot write '" + tmp.string() + "'");
            }
            f << content;
        }
        fs::rename(tmp, target);
    }
}

void report_diagnostics(const EvaluationReport& report, std::ostream& err)
{
    for (const auto& run : report.runs) {
        for (const auto& d : run.diagnostics) {
            err << "warning: " << run.label << ": " << d.to_string() << "\n";
        }
    }
}

ManifestFormat manifest_format_for(const fs::path& path, const std::string& requested)
{
    if (requested == "jsonl") {
        return ManifestFormat::Jsonl;
    }
    if (requested == "tsv") {
        return ManifestFormat::Tsv;
    }
    return path.extension() == ".tsv" ? ManifestFormat::Tsv : ManifestFormat::Jsonl;
}

int cmd_evaluate(const std::vector<std::string>& manifests, const std::string& manifest_format,
                 std::size_t threads, const CommonOptions& opts, std::ostream& out, std::ostream& err)
{
    EvaluationReport report;
    report.config = resolve_config(opts);
    for (const auto& spec : manifests) {
        auto [label, path] = split_labeled(spec);
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error(ErrorKind::FormatError, "cannot read manifest '" + path.string() + "'");
        }
        ManifestParse parsed;
        try {
            parsed = parse_manifest(in, manifest_format_for(path, manifest_format));
        } catch (const Error& e) {
            throw Error(e.kind(), path.string() + ": " + e.what());
        }
        for (auto& d : parsed.diagnostics) {
            d.message = path.filename().string() + ": " + d.message;
        }
        report.runs.push_back(
            evaluate_transcripts(label, parsed.utterances, report.config, threads, std::move(parsed.diagnostics)));
    }
    Outputs files = build_outputs(report, true);
    report_diagnostics(report, err);
    write_outputs(files, report, opts.out, out);
    return kExitOk;
}

int cmd_measures(const std::vector<std::string>& summaries, const CommonOptions& opts, std::ostream& out,
                 std::ostream& err)
{
    EvaluationReport report;
    report.config = resolve_config(opts);
    for (const auto& spec : summaries) {
        auto [label, path] = split_labeled(spec);
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error(ErrorKind::FormatError, "cannot read summary '" + path.string() + "'");
        }
        std::vector<GroupWerRecord> records;
        try {
            records = load_group_summaries(in);
        } catch (const Error& e) {
            throw Error(e.kind(), path.string() + ": " + e.what());
        }
        report.runs.push_back(evaluate_summaries(label, records, report.config));
    }
    Outputs files = build_outputs(report, false);
    report_diagnostics(report, err);
    write_outputs(files, report, opts.out, out);
    return kExitOk;
}

int cmd_align(const std::string& ref_text, const std::string& hyp_text, const std::string& config_path,
              std::ostream& out)
{
    NormalizationConfig norm;
    if (!config_path.empty()) {
        json doc = json::parse(read_file(config_path), nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw Error(ErrorKind::ConfigError, "'" + config_path + "' is not a JSON object");
        }
        if (!doc.contains("grouping_keys")) {
            doc["grouping_keys"] = json::array({"_"});
        }
        norm = config_from_json(doc).normalization;
    }
    Normalizer normalizer(norm);
    TokenSequence ref = normalizer.normalize(ref_text);
    TokenSequence hyp = normalizer.normalize(hyp_text);
    Alignment a = align(ref, hyp);
    Rational wer = utterance_wer(a.counts);

    out << "ref: " << join(ref) << "\n";
    out << "hyp: " << join(hyp) << "\n";
    for (const auto& op : a.ops) {
        out << to_string(op.kind) << "\t" << op.ref_token.value_or("*") << "\t" << op.hyp_token.value_or("*")
            << "\n";
    }
    const auto& c = a.counts;
    out << "S=" << c.substitutions << " D=" << c.deletions << " I=" << c.insertions << " C=" << c.correct
        << " N=" << c.ref_len << "\n";
    out << "WER: " << to_fixed(percent(wer), 1) << "% (" << to_exact_string(wer) << ")\n";
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--config", opts.config_path, "JSON config file; flags override its values");
    cmd->add_option("--out", opts.out, "Output directory, or - for standard output")->capture_default_str();
    cmd->add_option("--format", opts.format, "Table format: markdown (default), csv, or json")
        ->check(CLI::IsMember({"markdown", "csv", "json"}));
    cmd->add_option("--reference", opts.references,
                    "Reference policy: min (default) or norm:<group>, e.g. norm:cohort=CGN; repeatable");
    cmd->add_option("--group-by", opts.group_by, "Comma-separated grouping attribute keys");
    cmd->add_option("--style-key", opts.style_key, "Attribute that slices reports by speech style");
    cmd->add_flag("--strict", opts.strict, "Fail when a group is left without scoreable utterances");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"asrbias: word error rates, performance measures and group bias for speech recognition output.\n"
                 "Defaults: sample stdev, micro (pooled) group WER, empty references excluded,\n"
                 "WER tables to 1 decimal, bias tables to 2 decimals, reference policy min."};
    app.require_subcommand(1);

    CommonOptions eval_opts;
    std::vector<std::string> manifests;
    std::string manifest_format = "auto";
    std::size_t threads = 1;
    auto* evaluate = app.add_subcommand("evaluate", "Score transcript manifests and report measures and bias");
    evaluate->add_option("--manifest", manifests, "Manifest file as [label=]path (.jsonl or .tsv); repeatable")
        ->required();
    evaluate->add_option("--manifest-format", manifest_format, "jsonl, tsv, or auto (by extension)")
        ->check(CLI::IsMember({"auto", "jsonl", "tsv"}));
    evaluate->add_option("--threads", threads, "Alignment worker threads; results do not depend on it")
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}));
    add_common(evaluate, eval_opts);

    CommonOptions measure_opts;
    std::vector<std::string> summaries;
    auto* measures = app.add_subcommand("measures", "Compute measures and bias from group-level WER CSV files");
    measures->add_option("--summary", summaries, "Group-summary CSV as [label=]path; repeatable")->required();
    add_common(measures, measure_opts);

    std::string ref_text;
    std::string hyp_text;
    std::string align_config;
    auto* align_cmd = app.add_subcommand("align", "Show the alignment and WER of one transcript pair");
    align_cmd->add_option("ref", ref_text, "Reference transcript")->required();
    align_cmd->add_option("hyp", hyp_text, "Hypothesis transcript")->required();
    align_cmd->add_option("--config", align_config, "JSON config file (normalization section is used)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (evaluate->parsed()) {
            return cmd_evaluate(manifests, manifest_format, threads, eval_opts, out, err);
        }
        if (measures->parsed()) {
            return cmd_measures(summaries, measure_opts, out, err);
        }
        return cmd_align(ref_text, hyp_text, align_config, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace asrbias
