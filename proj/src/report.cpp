#include "asrbias/report.hpp"

#include "asrbias/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace asrbias {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void missing(const std::string& what)
{
    throw Error(ErrorKind::MissingSection, what);
}

std::string column_name(const std::string& slice, const std::string& label)
{
    return slice == "all" ? label : slice + ":" + label;
}

std::vector<std::string> slice_names(const EvaluationReport& report)
{
    std::set<std::string> names;
    for (const auto& run : report.runs) {
        for (const auto& s : run.slices) {
            names.insert(s.slice);
        }
    }
    return {names.begin(), names.end()};
}

const SliceReport* find_slice(const RunReport& run, const std::string& name)
{
    for (const auto& s : run.slices) {
        if (s.slice == name) {
            return &s;
        }
    }
    return nullptr;
}

const BiasProfile* find_profile(const SliceReport& slice, const ReferencePolicy& policy)
{
    for (const auto& p : slice.profiles) {
        if (p.policy == policy) {
            return &p;
        }
    }
    return nullptr;
}

std::string policy_column(const EvaluationConfig& config, const ReferencePolicy& policy)
{
    std::size_t same = std::count_if(config.reference_policies.begin(), config.reference_policies.end(),
                                     [&](const ReferencePolicy& p) { return p.kind == policy.kind; });
    std::string name = policy.measure_name();
    if (same > 1 && policy.norm_group) {
        name += "[" + policy.norm_group->label() + "]";
    }
    return name;
}

std::string fmt_opt(const std::optional<Rational>& value, int decimals)
{
    return value ? to_fixed(*value, decimals) : std::string(kUndefined);
}

std::string plot_number(const Rational& value)
{
    return to_roundtrip_string(to_double(value));
}

Table wer_table(const EvaluationReport& report)
{
    const int d = report.config.rounding.wer;
    auto slices = slice_names(report);
    std::map<std::string, std::set<GroupKey>> columns;
    for (const auto& run : report.runs) {
        for (const auto& s : run.slices) {
            for (const auto& g : s.external_groups) {
                columns[s.slice].insert(g.group);
            }
            for (const auto& g : s.groups) {
                columns[s.slice].insert(g.group);
            }
        }
    }
    if (columns.empty()) {
        missing("no group WERs in report");
    }

    Table t;
    t.header.push_back("run");
    for (const auto& s : slices) {
        for (const auto& g : columns[s]) {
            t.header.push_back(column_name(s, g.label()));
        }
    }
    for (const auto& s : slices) {
        t.header.push_back("Avg " + s);
    }
    if (slices.size() > 1) {
        t.header.push_back("Avg All");
    }

    for (const auto& run : report.runs) {
        std::vector<std::string> row{run.label};
        for (const auto& s : slices) {
            const SliceReport* slice = find_slice(run, s);
            for (const auto& key : columns[s]) {
                std::string cell;
                if (slice) {
                    for (const auto* list : {&slice->groups, &slice->external_groups}) {
                        for (const auto& g : *list) {
                            if (g.group == key) {
                                cell = to_fixed(g.wer_percent, d);
                            }
                        }
                    }
                }
                row.push_back(cell);
            }
        }
        for (const auto& s : slices) {
            const SliceReport* slice = find_slice(run, s);
            row.push_back(slice && slice->macro_average ? to_fixed(*slice->macro_average, d) : "");
        }
        if (slices.size() > 1) {
            row.push_back(run.macro_average_all ? to_fixed(*run.macro_average_all, d) : "");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table performance_table(const EvaluationReport& report)
{
    const int d = report.config.rounding.wer;
    auto slices = slice_names(report);
    bool any = false;
    for (const auto& run : report.runs) {
        for (const auto& s : run.slices) {
            any = any || s.between.has_value();
        }
    }
    if (!any) {
        missing("no between-group summaries in report");
    }
    Table t;
    t.header.push_back("run");
    for (const char* stat : {"Md", "Stdev", "Rg"}) {
        for (const auto& s : slices) {
            t.header.push_back(std::string(stat) + " " + s);
        }
    }
    for (const auto& run : report.runs) {
        std::vector<std::string> md, sd, rg;
        for (const auto& s : slices) {
            const SliceReport* slice = find_slice(run, s);
            if (!slice || !slice->between) {
                md.emplace_back();
                sd.emplace_back();
                rg.emplace_back();
                continue;
            }
            const auto& b = *slice->between;
            md.push_back(to_fixed(b.median, d));
            sd.push_back(b.stdev ? to_fixed(*b.stdev, d) : "n/a");
            rg.push_back(to_fixed(b.max, d) + "-" + to_fixed(b.min, d));
        }
        std::vector<std::string> row{run.label};
        for (auto* part : {&md, &sd, &rg}) {
            row.insert(row.end(), part->begin(), part->end());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

bool has_profiles(const EvaluationReport& report)
{
    for (const auto& run : report.runs) {
        for (const auto& s : run.slices) {
            if (!s.profiles.empty()) {
                return true;
            }
        }
    }
    return false;
}

Table overall_bias_table(const EvaluationReport& report)
{
    if (!has_profiles(report)) {
        missing("no bias profiles in report");
    }
    const int d = report.config.rounding.bias;
    auto slices = slice_names(report);
    const auto& policies = report.config.reference_policies;
    Table t;
    t.header.push_back("run");
    for (const char* mode : {"diff", "reldiff"}) {
        for (const auto& p : policies) {
            for (const auto& s : slices) {
                t.header.push_back(policy_column(report.config, p) + "_" + mode + " " + s);
            }
        }
    }
    for (const auto& run : report.runs) {
        std::vector<std::string> row{run.label};
        for (bool rel : {false, true}) {
            for (const auto& p : policies) {
                for (const auto& s : slices) {
                    const SliceReport* slice = find_slice(run, s);
                    const BiasProfile* profile = slice ? find_profile(*slice, p) : nullptr;
                    if (!profile) {
                        row.emplace_back();
                    } else if (rel) {
                        row.push_back(fmt_opt(profile->overall_reldiff, d));
                    } else {
                        row.push_back(to_fixed(profile->overall_diff, d));
                    }
                }
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table group_bias_table(const EvaluationReport& report)
{
    if (!has_profiles(report)) {
        missing("no bias profiles in report");
    }
    const int wd = report.config.rounding.wer;
    const int bd = report.config.rounding.bias;
    Table t;
    t.header = {"run", "slice", "reference", "reference_group", "base_wer", "group", "wer", "diff", "reldiff",
                "in_overall"};
    for (const auto& run : report.runs) {
        for (const auto& s : run.slices) {
            for (const auto& p : s.profiles) {
                for (const auto& g : p.per_group) {
                    bool excluded = std::find(p.excluded_from_overall.begin(), p.excluded_from_overall.end(),
                                              g.group)
                                    != p.excluded_from_overall.end();
                    t.rows.push_back({run.label, s.slice, p.policy.to_string(), p.reference.group.label(),
                                      to_fixed(p.reference.base_wer, wd), g.group.label(),
                                      to_fixed(g.wer_percent, wd), to_fixed(g.diff, bd), fmt_opt(g.reldiff, bd),
                                      excluded ? "no" : "yes"});
                }
            }
        }
    }
    return t;
}

// ---- JSON serialisation ----------------------------------------------------

json key_to_json(const GroupKey& key)
{
    json arr = json::array();
    for (const auto& [k, v] : key.pairs) {
        arr.push_back(json::array({k, v}));
    }
    return arr;
}

GroupKey key_from_json(const json& j)
{
    GroupKey key;
    for (const auto& pair : j) {
        key.pairs.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    return key;
}

json exact(const Rational& r)
{
    return to_exact_string(r);
}

json exact(const std::optional<Rational>& r)
{
    return r ? json(to_exact_string(*r)) : json(nullptr);
}

Rational read_exact(const json& j)
{
    return parse_exact(j.get<std::string>());
}

std::optional<Rational> read_exact_opt(const json& j)
{
    if (j.is_null()) {
        return std::nullopt;
    }
    return read_exact(j);
}

double read_double(const json& j)
{
    std::string text = j.get<std::string>();
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::FormatError, "bad number '" + text + "' in report");
    }
    return value;
}

template <typename T>
json opt_count(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

json counts_to_json(const AlignmentCounts& c)
{
    return {{"substitutions", c.substitutions}, {"deletions", c.deletions}, {"insertions", c.insertions},
            {"correct", c.correct}, {"ref_len", c.ref_len}};
}

AlignmentCounts counts_from_json(const json& j)
{
    return {j.at("substitutions").get<std::uint64_t>(), j.at("deletions").get<std::uint64_t>(),
            j.at("insertions").get<std::uint64_t>(), j.at("correct").get<std::uint64_t>(),
            j.at("ref_len").get<std::uint64_t>()};
}

json dist_to_json(const DistributionSummary& s)
{
    return {{"n", s.n},
            {"avg", exact(s.avg)},
            {"median", exact(s.median)},
            {"stdev", s.stdev ? json(to_roundtrip_string(*s.stdev)) : json(nullptr)},
            {"min", exact(s.min)},
            {"max", exact(s.max)}};
}

DistributionSummary dist_from_json(const json& j)
{
    DistributionSummary s;
    s.n = j.at("n").get<std::size_t>();
    s.avg = read_exact(j.at("avg"));
    s.median = read_exact(j.at("median"));
    if (!j.at("stdev").is_null()) {
        s.stdev = read_double(j.at("stdev"));
    }
    s.min = read_exact(j.at("min"));
    s.max = read_exact(j.at("max"));
    return s;
}

json group_to_json(const GroupSummary& g)
{
    return {{"group", key_to_json(g.group)},
            {"label", g.group.label()},
            {"wer_percent", exact(g.wer_percent)},
            {"pooled_wer_percent", exact(g.pooled_wer_percent)},
            {"within", g.within ? dist_to_json(*g.within) : json(nullptr)},
            {"n_speakers", g.n_speakers},
            {"n_utts", opt_count(g.n_utts)},
            {"n_ref_tokens", opt_count(g.n_ref_tokens)},
            {"totals", g.totals ? counts_to_json(*g.totals) : json(nullptr)}};
}

GroupSummary group_from_json(const json& j)
{
    GroupSummary g;
    g.group = key_from_json(j.at("group"));
    g.wer_percent = read_exact(j.at("wer_percent"));
    g.pooled_wer_percent = read_exact_opt(j.at("pooled_wer_percent"));
    if (!j.at("within").is_null()) {
        g.within = dist_from_json(j.at("within"));
    }
    g.n_speakers = j.at("n_speakers").get<std::size_t>();
    if (!j.at("n_utts").is_null()) {
        g.n_utts = j.at("n_utts").get<std::size_t>();
    }
    if (!j.at("n_ref_tokens").is_null()) {
        g.n_ref_tokens = j.at("n_ref_tokens").get<std::size_t>();
    }
    if (!j.at("totals").is_null()) {
        g.totals = counts_from_json(j.at("totals"));
    }
    return g;
}

json profile_to_json(const BiasProfile& p)
{
    json per_group = json::array();
    for (const auto& g : p.per_group) {
        per_group.push_back({{"group", key_to_json(g.group)},
                             {"label", g.group.label()},
                             {"wer_percent", exact(g.wer_percent)},
                             {"diff", exact(g.diff)},
                             {"reldiff", exact(g.reldiff)}});
    }
    json excluded = json::array();
    for (const auto& k : p.excluded_from_overall) {
        excluded.push_back(key_to_json(k));
    }
    return {{"policy", p.policy.to_string()},
            {"measure", p.policy.measure_name()},
            {"reference",
             {{"group", key_to_json(p.reference.group)},
              {"base_wer", exact(p.reference.base_wer)},
              {"member", p.reference.member}}},
            {"per_group", per_group},
            {"overall_diff", exact(p.overall_diff)},
            {"overall_reldiff", exact(p.overall_reldiff)},
            {"excluded_from_overall", excluded},
            {"notes", p.notes}};
}

BiasProfile profile_from_json(const json& j, const std::vector<std::string>& keys)
{
    BiasProfile p;
    p.policy = ReferencePolicy::parse(j.at("policy").get<std::string>(), keys);
    const auto& ref = j.at("reference");
    p.reference = {key_from_json(ref.at("group")), read_exact(ref.at("base_wer")), ref.at("member").get<bool>()};
    for (const auto& g : j.at("per_group")) {
        p.per_group.push_back({key_from_json(g.at("group")), read_exact(g.at("wer_percent")),
                               read_exact(g.at("diff")), read_exact_opt(g.at("reldiff"))});
    }
    p.overall_diff = read_exact(j.at("overall_diff"));
    p.overall_reldiff = read_exact_opt(j.at("overall_reldiff"));
    for (const auto& k : j.at("excluded_from_overall")) {
        p.excluded_from_overall.push_back(key_from_json(k));
    }
    p.notes = j.at("notes").get<std::vector<std::string>>();
    return p;
}

json slice_to_json(const SliceReport& s)
{
    json groups = json::array();
    for (const auto& g : s.groups) {
        groups.push_back(group_to_json(g));
    }
    json external = json::array();
    for (const auto& g : s.external_groups) {
        external.push_back(group_to_json(g));
    }
    json profiles = json::array();
    for (const auto& p : s.profiles) {
        profiles.push_back(profile_to_json(p));
    }
    return {{"slice", s.slice},
            {"groups", groups},
            {"external_groups", external},
            {"between", s.between ? dist_to_json(*s.between) : json(nullptr)},
            {"macro_average", exact(s.macro_average)},
            {"bias_profiles", profiles}};
}

SliceReport slice_from_json(const json& j, const std::vector<std::string>& keys)
{
    SliceReport s;
    s.slice = j.at("slice").get<std::string>();
    for (const auto& g : j.at("groups")) {
        s.groups.push_back(group_from_json(g));
    }
    for (const auto& g : j.at("external_groups")) {
        s.external_groups.push_back(group_from_json(g));
    }
    if (!j.at("between").is_null()) {
        s.between = dist_from_json(j.at("between"));
    }
    s.macro_average = read_exact_opt(j.at("macro_average"));
    for (const auto& p : j.at("bias_profiles")) {
        s.profiles.push_back(profile_from_json(p, keys));
    }
    return s;
}

json run_to_json(const RunReport& run)
{
    json slices = json::array();
    for (const auto& s : run.slices) {
        slices.push_back(slice_to_json(s));
    }
    json diagnostics = json::array();
    for (const auto& d : run.diagnostics) {
        diagnostics.push_back({{"line", d.line}, {"utt_id", d.utt_id}, {"message", d.message}});
    }
    return {{"label", run.label},
            {"mode", to_string(run.mode)},
            {"slices", slices},
            {"macro_average_all", exact(run.macro_average_all)},
            {"diagnostics", diagnostics},
            {"counts",
             {{"input", run.counts.input},
              {"retained", run.counts.retained},
              {"excluded_empty_reference", run.counts.excluded_empty_reference},
              {"excluded_missing_attribute", run.counts.excluded_missing_attribute}}}};
}

RunReport run_from_json(const json& j, const std::vector<std::string>& keys)
{
    RunReport run;
    run.label = j.at("label").get<std::string>();
    run.mode = j.at("mode").get<std::string>() == "summary" ? RunMode::Summary : RunMode::Transcripts;
    for (const auto& s : j.at("slices")) {
        run.slices.push_back(slice_from_json(s, keys));
    }
    run.macro_average_all = read_exact_opt(j.at("macro_average_all"));
    for (const auto& d : j.at("diagnostics")) {
        run.diagnostics.push_back(
            {d.at("line").get<std::size_t>(), d.at("utt_id").get<std::string>(), d.at("message").get<std::string>()});
    }
    const auto& c = j.at("counts");
    run.counts = {c.at("input").get<std::size_t>(), c.at("retained").get<std::size_t>(),
                  c.at("excluded_empty_reference").get<std::size_t>(),
                  c.at("excluded_missing_attribute").get<std::size_t>()};
    return run;
}

}  // namespace

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string Table::to_markdown() const
{
    auto line = [](const std::vector<std::string>& cells) {
        std::string out = "|";
        for (const auto& c : cells) {
            std::string cell = c;
            // A literal pipe would split the cell.
            for (std::size_t pos = 0; (pos = cell.find('|', pos)) != std::string::npos; pos += 2) {
                cell.replace(pos, 1, "\\|");
            }
            out += " " + cell + " |";
        }
        return out + "\n";
    };
    std::string out = line(header);
    out += "|";
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += i == 0 ? " --- |" : " ---: |";
    }
    out += "\n";
    for (const auto& row : rows) {
        out += line(row);
    }
    return out;
}

std::string Table::to_csv() const
{
    auto line = [](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += csv_escape(cells[i]);
        }
        return out + "\n";
    };
    std::string out = line(header);
    for (const auto& row : rows) {
        out += line(row);
    }
    return out;
}

Table build_table(const EvaluationReport& report, TableKind which)
{
    if (report.runs.empty()) {
        missing("report has no runs");
    }
    switch (which) {
    case TableKind::Wer: return wer_table(report);
    case TableKind::Performance: return performance_table(report);
    case TableKind::OverallBias: return overall_bias_table(report);
    case TableKind::GroupBias: return group_bias_table(report);
    }
    missing("unknown table");
}

std::string render_table(const EvaluationReport& report, TableKind which, TableFormat format)
{
    Table t = build_table(report, which);
    return format == TableFormat::Markdown ? t.to_markdown() : t.to_csv();
}

std::string emit_plot_data(const EvaluationReport& report, PlotSeries series, PlotFormat format)
{
    Table t;
    std::vector<ordered_json> records;
    auto add = [&](std::vector<std::string> row, ordered_json record) {
        t.rows.push_back(std::move(row));
        records.push_back(std::move(record));
    };

    if (series == PlotSeries::BiasPerGroup) {
        if (!has_profiles(report)) {
            missing("no bias profiles in report");
        }
        t.header = {"run", "slice", "policy", "measure", "mode", "group", "value", "in_overall"};
        for (const auto& run : report.runs) {
            for (const auto& s : run.slices) {
                for (const auto& p : s.profiles) {
                    for (bool rel : {false, true}) {
                        for (const auto& g : p.per_group) {
                            bool in_overall = std::find(p.excluded_from_overall.begin(),
                                                        p.excluded_from_overall.end(), g.group)
                                              == p.excluded_from_overall.end();
                            std::optional<Rational> value = rel ? g.reldiff : std::optional<Rational>(g.diff);
                            const char* mode = rel ? "reldiff" : "diff";
                            std::string measure = p.policy.measure_name() + "_" + mode;
                            add({run.label, s.slice, p.policy.to_string(), measure, mode, g.group.label(),
                                 value ? plot_number(*value) : std::string(kUndefined),
                                 in_overall ? "yes" : "no"},
                                ordered_json{{"run", run.label},
                                             {"slice", s.slice},
                                             {"policy", p.policy.to_string()},
                                             {"measure", measure},
                                             {"mode", mode},
                                             {"group", g.group.label()},
                                             {"value", value ? ordered_json(to_double(*value)) : ordered_json()},
                                             {"in_overall", in_overall}});
                        }
                    }
                }
            }
        }
    } else {
        t.header = {"run", "slice", "group", "external", "n", "pooled", "avg", "stdev", "median", "min", "max"};
        bool any = false;
        for (const auto& run : report.runs) {
            for (const auto& s : run.slices) {
                for (bool external : {false, true}) {
                    for (const auto& g : external ? s.external_groups : s.groups) {
                        if (!g.within) {
                            continue;
                        }
                        any = true;
                        const auto& w = *g.within;
                        Rational pooled = g.pooled_wer_percent.value_or(g.wer_percent);
                        add({run.label, s.slice, g.group.label(), external ? "yes" : "no", std::to_string(w.n),
                             plot_number(pooled), plot_number(w.avg),
                             w.stdev ? to_roundtrip_string(*w.stdev) : std::string(kUndefined), plot_number(w.median),
                             plot_number(w.min), plot_number(w.max)},
                            ordered_json{{"run", run.label},
                                         {"slice", s.slice},
                                         {"group", g.group.label()},
                                         {"external", external},
                                         {"n", w.n},
                                         {"pooled", to_double(pooled)},
                                         {"avg", to_double(w.avg)},
                                         {"stdev", w.stdev ? ordered_json(*w.stdev) : ordered_json()},
                                         {"median", to_double(w.median)},
                                         {"min", to_double(w.min)},
                                         {"max", to_double(w.max)}});
                    }
                }
            }
        }
        if (!any) {
            missing("no per-utterance statistics in report (summary-only input)");
        }
    }

    if (format == PlotFormat::Csv) {
        return t.to_csv();
    }
    ordered_json doc = ordered_json::array();
    for (auto& r : records) {
        doc.push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

std::string write_json_report(const EvaluationReport& report)
{
    json runs = json::array();
    for (const auto& run : report.runs) {
        runs.push_back(run_to_json(run));
    }
    json doc = {{"format_version", 1}, {"config", config_to_json(report.config)}, {"runs", runs}};
    return doc.dump(2) + "\n";
}

EvaluationReport read_json_report(std::string_view text)
{
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorKind::FormatError, "report is not a JSON object");
    }
    try {
        EvaluationReport report;
        report.config = config_from_json(doc.at("config"));
        for (const auto& run : doc.at("runs")) {
            report.runs.push_back(run_from_json(run, report.config.grouping_keys));
        }
        return report;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::FormatError, std::string("malformed report: ") + e.what());
    }
}

}  // namespace asrbias
