#include "asrbias/error.hpp"
#include "asrbias/normalize.hpp"

#include <doctest.h>

#include <random>

using namespace asrbias;

namespace {

TokenSequence seq(std::initializer_list<const char*> items)
{
    return TokenSequence(items.begin(), items.end());
}

}  // namespace

TEST_CASE("tokenize")
{
    NormalizationConfig config;
    CHECK(tokenize("", config).empty());
    CHECK(tokenize("   \t\n", config).empty());
    CHECK(tokenize("de  kat  zit", config) == seq({"de", "kat", "zit"}));
    CHECK(tokenize("De kat, zit.", config) == seq({"de", "kat", "zit"}));

    NormalizationConfig raw;
    raw.case_fold = false;
    raw.strip_punctuation = false;
    CHECK(tokenize("De kat, zit.", raw) == seq({"De", "kat,", "zit."}));
}

TEST_CASE("punctuation is stripped at the edges only")
{
    NormalizationConfig config;
    CHECK(tokenize("'s-avonds zo'n", config) == seq({"'s-avonds", "zo'n"}));
    CHECK(tokenize("\"hallo\" -- ...", config) == seq({"hallo"}));
    CHECK(tokenize("e-mail", config) == seq({"e-mail"}));
}

TEST_CASE("case folding covers Latin-1 letters")
{
    CHECK(fold_case("ÉÉN Ärger") == "één ärger");
    CHECK(fold_case("×") == "×");
    CHECK(fold_case("DRIE") == "drie");
}

TEST_CASE("strip_tags")
{
    NormalizationConfig config;
    CHECK(strip_tags(seq({"[lach]", "ja", "<ggg>"}), config) == seq({"ja"}));
    CHECK(strip_tags({}, config).empty());
    CHECK(strip_tags(seq({"ja", "nee"}), config) == seq({"ja", "nee"}));
    CHECK(strip_tags(seq({"(uh)", "{ruis}", "ja"}), config) == seq({"ja"}));
    // Not fully enclosed, so not a tag.
    CHECK(strip_tags(seq({"[ja", "nee)"}), config) == seq({"[ja", "nee)"}));
}

TEST_CASE("normalize composes tokenize and strip_tags")
{
    NormalizationConfig config;
    CHECK(normalize("Ja. [lach] Nee!", config) == seq({"ja", "nee"}));
    CHECK(normalize("", config).empty());
    CHECK(normalize("DRIE drie", config) == seq({"drie", "drie"}));
    CHECK(normalize("ja [lach]. nee", config) == seq({"ja", "nee"}));
    CHECK(normalize("[LACH] ok", config) == seq({"ok"}));
}

TEST_CASE("custom tag patterns")
{
    NormalizationConfig config;
    config.tag_patterns = {"uh+", "ggg"};
    CHECK(normalize("uh ja uhh. ggg <x>", config) == seq({"ja", "x"}));

    config.tag_patterns = {"a*"};
    CHECK_THROWS_AS(Normalizer{config}, Error);
    config.tag_patterns = {"("};
    CHECK_THROWS_AS(Normalizer{config}, Error);
}

TEST_CASE("normalize properties over random strings")
{
    const std::string pieces[] = {"Ja",  "nee", "[lach]", "<ggg>", "(uh)", ".",    ",",   "!",  "'s",
                                  "De",  "KAT", "zit.",   "--",    "e-mail", "{x}", "[a",  "b]", "ÉÉN",
                                  "  ",  "\t",  "(",      ")",     "a(b)c",  "[x].", "?!", "zo'n"};
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(pieces) - 1);
    std::uniform_int_distribution<int> len(0, 12);
    std::vector<NormalizationConfig> configs(4);
    configs[1].case_fold = false;
    configs[2].strip_punctuation = false;
    configs[3].tag_patterns = {"uh+", R"(\[.*\])"};

    for (int trial = 0; trial < 600; ++trial) {
        std::string text;
        for (int k = len(rng); k > 0; --k) {
            text += pieces[pick(rng)];
            text += rng() % 3 == 0 ? "" : " ";
        }
        const auto& config = configs[static_cast<std::size_t>(trial) % configs.size()];
        Normalizer n(config);
        TokenSequence once = n.normalize(text);
        CAPTURE(text);
        CHECK(n.normalize(join(once)) == once);
        CHECK(once == n.strip_tags(n.tokenize(text)));
        CHECK(once.size() <= tokenize(text, NormalizationConfig{{}, false, false}).size());
        for (const auto& tok : once) {
            CHECK(!tok.empty());
            CHECK(tok.find_first_of(" \t\n\r\f\v") == std::string::npos);
        }
        CHECK(n.normalize(text) == once);
    }
}
