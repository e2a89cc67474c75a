#include "asrbias/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace asrbias;
namespace fs = std::filesystem;

namespace {

const std::string kSource = ASRBIAS_SOURCE_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("asrbias_cli_test_" + std::to_string(::getpid()) + "_"
                                             + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

void write(const std::string& path, const std::string& text)
{
    std::ofstream(path, std::ios::binary) << text;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kTwoGroups =
    R"({"utt_id":"1","speaker_id":"a","cohort":"DC","ref":"de kat zit","hyp":"de kat zat"})"
    "\n"
    R"({"utt_id":"2","speaker_id":"a","cohort":"DC","ref":"op de mat","hyp":"op de mat"})"
    "\n"
    R"({"utt_id":"3","speaker_id":"b","cohort":"DT","ref":"ja nee","hyp":"ja"})"
    "\n";

}  // namespace

TEST_CASE("evaluate writes report, tables and plot data")
{
    TempDir dir;
    write(dir / "m.jsonl", kTwoGroups);
    auto r = run({"evaluate", "--manifest", "sys=" + (dir / "m.jsonl"), "--group-by", "cohort", "--reference",
                  "min", "--reference", "norm:cohort=DC", "--out", dir / "out"});
    CHECK(r.code == 0);
    CAPTURE(r.err);
    for (const char* name : {"report.json", "config.json", "wer.md", "performance.md", "overall_bias.md",
                             "group_bias.md", "bias_per_group.csv", "within_group_stats.csv"}) {
        CHECK(fs::exists(fs::path(dir / "out") / name));
    }
    auto doc = nlohmann::json::parse(slurp(dir / "out/report.json"));
    const auto& slice = doc["runs"][0]["slices"][0];
    CHECK(doc["runs"][0]["label"] == "sys");
    CHECK(slice["groups"].size() == 2);
    CHECK(slice["bias_profiles"].size() == 2);
    CHECK(doc["config"]["reference_policies"] == nlohmann::json::array({"min", "norm:cohort=DC"}));
    CHECK(slurp(dir / "out/wer.md").find("asrbias config:") != std::string::npos);

    TempDir again;
    auto r2 = run({"evaluate", "--manifest", "sys=" + (dir / "m.jsonl"), "--group-by", "cohort", "--reference",
                   "min", "--reference", "norm:cohort=DC", "--out", again / "out"});
    CHECK(r2.code == 0);
    for (const auto& entry : fs::directory_iterator(dir / "out")) {
        CHECK(slurp(entry.path().string()) == slurp(again / ("out/" + entry.path().filename().string())));
    }
}

TEST_CASE("evaluate with only empty references fails without writing")
{
    TempDir dir;
    write(dir / "m.jsonl", R"({"utt_id":"1","speaker_id":"a","cohort":"DC","ref":"[lach]","hyp":"ja"})"
                           "\n");
    auto r = run({"evaluate", "--manifest", dir / "m.jsonl", "--group-by", "cohort", "--out", dir / "out"});
    CHECK(r.code == 1);
    CHECK(r.err.find("no scoreable utterances") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("evaluate reports malformed input with exit status 1")
{
    TempDir dir;
    write(dir / "m.jsonl", std::string(kTwoGroups) + kTwoGroups);
    auto r = run({"evaluate", "--manifest", dir / "m.jsonl", "--group-by", "cohort", "--out", "-"});
    CHECK(r.code == 1);
    CHECK(r.err.find("DuplicateUtteranceId") != std::string::npos);

    auto missing = run({"evaluate", "--manifest", dir / "nope.jsonl", "--group-by", "cohort"});
    CHECK(missing.code == 1);

    write(dir / "ok.jsonl", kTwoGroups);
    auto no_keys = run({"evaluate", "--manifest", dir / "ok.jsonl"});
    CHECK(no_keys.code == 1);
    CHECK(no_keys.err.find("grouping_keys") != std::string::npos);

    auto bad_flag = run({"evaluate", "--bogus"});
    CHECK(bad_flag.code == 1);
}

TEST_CASE("evaluate prints tables to stdout with --out -")
{
    TempDir dir;
    write(dir / "m.tsv", "utt_id\tspeaker_id\tcohort\tref\thyp\n1\ta\tDC\tde kat\tde kat\n2\tb\tDT\tja nee\tja\n");
    auto r = run({"evaluate", "--manifest", dir / "m.tsv", "--group-by", "cohort", "--format", "csv", "--out", "-"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# wer\nrun,DC,DT,Avg all\nm,0.0,50.0,25.0\n") != std::string::npos);
}

TEST_CASE("measures reproduces overall bias from group WERs")
{
    TempDir dir;
    auto r = run({"measures", "--config", kSource + "/data/jasmin/config.json", "--summary",
                  "NoAug=" + kSource + "/data/jasmin/NoAug.csv", "--summary", "Ws=" + kSource + "/data/jasmin/Ws.csv",
                  "--format", "csv", "--out", dir / "out"});
    CHECK(r.code == 0);
    CAPTURE(r.err);
    std::string table = slurp(dir / "out/overall_bias.csv");
    CHECK(table.find("NoAug,13.20,23.18,25.46,30.54,0.34,1.08,1.07,3.21") != std::string::npos);
    CHECK(table.find("Ws,18.85,21.08,1.58,25.26,0.46,0.83,0.03,1.48") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out/within_group_stats.csv"));
}

TEST_CASE("measures with a single group under min policy fails")
{
    TempDir dir;
    write(dir / "one.csv", "cohort,wer\nDC,41.6\n");
    auto r = run({"measures", "--summary", dir / "one.csv", "--group-by", "cohort", "--out", dir / "out"});
    CHECK(r.code == 1);
    CHECK(r.err.find("NoGroupsRemaining") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("align subcommand")
{
    auto same = run({"align", "de kat", "De kat."});
    CHECK(same.code == 0);
    CHECK(same.out.find("WER: 0.0%") != std::string::npos);

    auto r = run({"align", "a b c", "a x c d"});
    CHECK(r.code == 0);
    CHECK(r.out.find("S=1 D=0 I=1 C=2 N=3") != std::string::npos);
    CHECK(r.out.find("WER: 66.7% (2/3)") != std::string::npos);
    CHECK(r.out.find("substitute\tb\tx") != std::string::npos);

    auto empty = run({"align", "", "a"});
    CHECK(empty.code == 1);
    CHECK(empty.err.find("ZeroReferenceLength") != std::string::npos);
}

TEST_CASE("help exits cleanly")
{
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("evaluate") != std::string::npos);
}
