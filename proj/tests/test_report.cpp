#include "asrbias/error.hpp"
#include "asrbias/evaluate.hpp"
#include "asrbias/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace asrbias;

namespace {

const std::string kSource = ASRBIAS_SOURCE_DIR;

EvaluationConfig jasmin_config()
{
    std::ifstream in(kSource + "/data/jasmin/config.json");
    return config_from_json(nlohmann::json::parse(in));
}

RunReport jasmin_run(const std::string& name, const EvaluationConfig& config)
{
    std::ifstream in(kSource + "/data/jasmin/" + name + ".csv");
    REQUIRE(in);
    return evaluate_summaries(name, load_group_summaries(in), config);
}

EvaluationReport jasmin_report()
{
    EvaluationReport report;
    report.config = jasmin_config();
    report.runs.push_back(jasmin_run("NoAug", report.config));
    return report;
}

std::vector<std::string> cells(const std::string& csv_line)
{
    return split_csv_line(csv_line);
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

Utterance utt(const std::string& id, const std::string& cohort, const std::string& ref, const std::string& hyp)
{
    return {id, "spk-" + cohort, {{"cohort", cohort}}, ref, hyp};
}

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::FormatError;
}

}  // namespace

TEST_CASE("overall bias table reproduces the NoAug row")
{
    auto report = jasmin_report();
    auto t = build_table(report, TableKind::OverallBias);
    REQUIRE(t.rows.size() == 1);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        row[t.header[i]] = t.rows[0][i];
    }
    CHECK(row["G2min_diff Read"] == "23.18");
    CHECK(row["G2min_diff HMI"] == "13.20");
    CHECK(row["G2norm_diff Read"] == "30.54");
    CHECK(row["G2norm_diff HMI"] == "25.46");
    CHECK(row["G2min_reldiff Read"] == "1.08");
    CHECK(row["G2min_reldiff HMI"] == "0.34");
    CHECK(row["G2norm_reldiff Read"] == "3.21");
    // Printed as 1.08; the exact mean of the five ratios is 1.0743.
    CHECK(row["G2norm_reldiff HMI"] == "1.07");

    std::string md = render_table(report, TableKind::OverallBias, TableFormat::Markdown);
    CHECK(md.find("| NoAug |") != std::string::npos);
    CHECK(md.find("23.18") != std::string::npos);
}

TEST_CASE("performance table")
{
    auto report = jasmin_report();
    std::string csv = render_table(report, TableKind::Performance, TableFormat::Csv);
    auto l = lines(csv);
    REQUIRE(l.size() == 2);
    CHECK(cells(l[0]) == std::vector<std::string>{"run", "Md HMI", "Md Read", "Stdev HMI", "Stdev Read", "Rg HMI",
                                                  "Rg Read"});
    CHECK(cells(l[1]) == std::vector<std::string>{"NoAug", "48.7", "41.6", "9.6", "15.3", "59.4-38.6", "57.2-21.5"});
}

TEST_CASE("wer table")
{
    auto report = jasmin_report();
    auto t = build_table(report, TableKind::Wer);
    REQUIRE(t.rows.size() == 1);
    auto find = [&](const std::string& col) {
        auto it = std::find(t.header.begin(), t.header.end(), col);
        REQUIRE(it != t.header.end());
        return t.rows[0][static_cast<std::size_t>(it - t.header.begin())];
    };
    CHECK(find("Read:DC") == "41.6");
    CHECK(find("Read:CGN") == "9.5");
    CHECK(find("Avg Read") == "40.0");
    CHECK(find("Avg HMI") == "49.2");
    CHECK(find("Avg All") == "44.6");
}

TEST_CASE("missing sections")
{
    EvaluationReport empty;
    empty.config = jasmin_config();
    CHECK(kind_of([&] { render_table(empty, TableKind::Wer, TableFormat::Csv); }) == ErrorKind::MissingSection);

    auto report = jasmin_report();
    CHECK(kind_of([&] { emit_plot_data(report, PlotSeries::WithinGroupStats, PlotFormat::Csv); })
          == ErrorKind::MissingSection);

    EvaluationReport no_policies = jasmin_report();
    for (auto& s : no_policies.runs[0].slices) {
        s.profiles.clear();
    }
    CHECK(kind_of([&] { build_table(no_policies, TableKind::OverallBias); }) == ErrorKind::MissingSection);
}

TEST_CASE("bias_per_group plot series")
{
    auto report = jasmin_report();
    auto out = lines(emit_plot_data(report, PlotSeries::BiasPerGroup, PlotFormat::Csv));
    std::map<std::string, std::string> read_min_diff;
    for (const auto& l : out) {
        auto c = cells(l);
        if (c[1] == "Read" && c[2] == "min" && c[4] == "diff") {
            read_min_diff[c[5]] = c[6];
        }
    }
    CHECK(read_min_diff["DC"] == "20.1");
    CHECK(read_min_diff["DT"] == "0");
    CHECK(read_min_diff["NnT"] == "30.7");
    CHECK(read_min_diff["NnA"] == "35.7");
    CHECK(read_min_diff["DOA"] == "6.2");

    auto doc = nlohmann::json::parse(emit_plot_data(report, PlotSeries::BiasPerGroup, PlotFormat::Json));
    CHECK(doc.size() == out.size() - 1);
}

TEST_CASE("within_group_stats plot series")
{
    EvaluationConfig config;
    config.grouping_keys = {"cohort"};
    std::vector<Utterance> utts{utt("1", "A", "de kat", "de kat"), utt("2", "A", "ja", "ja"),
                                utt("3", "B", "een twee", "een drie")};
    EvaluationReport report{config, {evaluate_transcripts("run", utts, config)}};
    auto out = lines(emit_plot_data(report, PlotSeries::WithinGroupStats, PlotFormat::Csv));
    REQUIRE(out.size() == 3);
    CHECK(cells(out[0]) == std::vector<std::string>{"run", "slice", "group", "external", "n", "pooled", "avg", "stdev",
                                                    "median", "min", "max"});
    CHECK(cells(out[1]) == std::vector<std::string>{"run", "all", "A", "no", "2", "0", "0", "0", "0", "0", "0"});
    CHECK(cells(out[2]) == std::vector<std::string>{"run", "all", "B", "no", "1", "50", "50", "undef", "50", "50", "50"});
}

TEST_CASE("json report round trip and determinism")
{
    auto report = jasmin_report();
    std::string first = write_json_report(report);
    CHECK(read_json_report(first) == report);
    CHECK(write_json_report(read_json_report(first)) == first);

    EvaluationConfig config;
    config.grouping_keys = {"cohort"};
    std::vector<Utterance> utts{utt("1", "A", "de kat zit", "de kat"), utt("2", "B", "ja nee", "ja ja nee"),
                                utt("3", "B", "x", "")};
    EvaluationReport raw{config, {evaluate_transcripts("raw", utts, config, 3)}};
    std::string text = write_json_report(raw);
    CHECK(read_json_report(text) == raw);
    CHECK(write_json_report(raw) == text);

    EvaluationReport none;
    none.config = config;
    auto doc = nlohmann::json::parse(write_json_report(none));
    CHECK(doc.at("config").at("grouping_keys") == nlohmann::json::array({"cohort"}));
    CHECK(doc.at("config").at("stdev_convention") == "sample");
    CHECK(doc.at("runs").empty());
}

TEST_CASE("rendered cells match the JSON values after rounding")
{
    auto report = jasmin_report();
    auto doc = nlohmann::json::parse(write_json_report(report));
    auto t = build_table(report, TableKind::OverallBias);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        row[t.header[i]] = t.rows[0][i];
    }
    for (const auto& slice : doc["runs"][0]["slices"]) {
        for (const auto& p : slice["bias_profiles"]) {
            std::string suffix = " " + slice["slice"].get<std::string>();
            std::string m = p["measure"].get<std::string>();
            CHECK(row[m + "_diff" + suffix] == to_fixed(parse_exact(p["overall_diff"].get<std::string>()), 2));
            CHECK(row[m + "_reldiff" + suffix] == to_fixed(parse_exact(p["overall_reldiff"].get<std::string>()), 2));
        }
    }
}

TEST_CASE("undefined reldiff renders as undef and null")
{
    EvaluationConfig config;
    config.grouping_keys = {"cohort"};
    std::vector<Utterance> utts{utt("1", "A", "de kat", "de kat"), utt("2", "B", "een twee", "een drie")};
    EvaluationReport report{config, {evaluate_transcripts("run", utts, config)}};
    auto t = build_table(report, TableKind::OverallBias);
    CHECK(t.rows[0].back() == "undef");
    auto doc = nlohmann::json::parse(write_json_report(report));
    CHECK(doc["runs"][0]["slices"][0]["bias_profiles"][0]["overall_reldiff"].is_null());
}

TEST_CASE("csv quoting")
{
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    Table t{{"x", "y"}, {{"1,2", "3"}}};
    CHECK(t.to_csv() == "x,y\n\"1,2\",3\n");
}
