#include "asrbias/normalize.hpp"

#include "asrbias/error.hpp"

#include <utility>

namespace asrbias {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_strippable(char c)
{
    auto u = static_cast<unsigned char>(c);
    bool ascii_punct = (u >= 0x21 && u <= 0x2F) || (u >= 0x3A && u <= 0x40) || (u >= 0x5B && u <= 0x60)
                       || (u >= 0x7B && u <= 0x7E);
    return ascii_punct && c != '\'';
}

bool is_sentence_mark(char c)
{
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == '"';
}

template <typename Pred>
std::string_view strip_edges(std::string_view token, Pred pred)
{
    while (!token.empty() && pred(token.front())) {
        token.remove_prefix(1);
    }
    while (!token.empty() && pred(token.back())) {
        token.remove_suffix(1);
    }
    return token;
}

}  // namespace

std::vector<std::string> NormalizationConfig::default_tag_patterns()
{
    return {R"(\(.*\))", R"(\[.*\])", R"(<.*>)", R"(\{.*\})"};
}

Normalizer::Normalizer(NormalizationConfig config)
    : config_(std::move(config))
{
    tags_.reserve(config_.tag_patterns.size());
    for (const auto& pattern : config_.tag_patterns) {
        std::regex re;
        try {
            re = std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw Error(ErrorKind::ConfigError, "invalid tag pattern '" + pattern + "': " + e.what());
        }
        if (std::regex_match(std::string(), re)) {
            throw Error(ErrorKind::ConfigError, "tag pattern '" + pattern + "' matches the empty string");
        }
        tags_.push_back(std::move(re));
    }
}

bool Normalizer::is_tag(std::string_view token) const
{
    for (const auto& re : tags_) {
        if (std::regex_match(token.begin(), token.end(), re)) {
            return true;
        }
    }
    return false;
}

TokenSequence Normalizer::tokenize(std::string_view text) const
{
    TokenSequence tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && is_space(text[pos])) {
            ++pos;
        }
        std::size_t end = pos;
        while (end < text.size() && !is_space(text[end])) {
            ++end;
        }
        if (end == pos) {
            break;
        }
        std::string token = config_.case_fold ? fold_case(text.substr(pos, end - pos))
                                              : std::string(text.substr(pos, end - pos));
        pos = end;
        // Tags keep their brackets so strip_tags can still recognise them,
        // including tags glued to sentence punctuation ("[lach].").
        if (config_.strip_punctuation && !is_tag(token)) {
            std::string_view bare = strip_edges(token, is_sentence_mark);
            token = std::string(is_tag(bare) ? bare : strip_edges(token, is_strippable));
        }
        if (!token.empty()) {
            tokens.push_back(std::move(token));
        }
    }
    return tokens;
}

TokenSequence Normalizer::strip_tags(const TokenSequence& seq) const
{
    TokenSequence out;
    out.reserve(seq.size());
    for (const auto& token : seq) {
        if (!is_tag(token)) {
            out.push_back(token);
        }
    }
    return out;
}

TokenSequence Normalizer::normalize(std::string_view text) const
{
    return strip_tags(tokenize(text));
}

TokenSequence tokenize(std::string_view text, const NormalizationConfig& config)
{
    return Normalizer(config).tokenize(text);
}

TokenSequence strip_tags(const TokenSequence& seq, const NormalizationConfig& config)
{
    return Normalizer(config).strip_tags(seq);
}

TokenSequence normalize(std::string_view text, const NormalizationConfig& config)
{
    return Normalizer(config).normalize(text);
}

std::string fold_case(std::string_view token)
{
    std::string out(token);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto c = static_cast<unsigned char>(out[i]);
        if (c >= 'A' && c <= 'Z') {
            out[i] = static_cast<char>(c + 0x20);
        } else if (c == 0xC3 && i + 1 < out.size()) {
            // U+00C0..U+00DE except U+00D7 (multiplication sign)
            auto next = static_cast<unsigned char>(out[i + 1]);
            if (next >= 0x80 && next <= 0x9E && next != 0x97) {
                out[i + 1] = static_cast<char>(next + 0x20);
            }
            ++i;
        }
    }
    return out;
}

std::string join(const TokenSequence& seq, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += seq[i];
    }
    return out;
}

}  // namespace asrbias
