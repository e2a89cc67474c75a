#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace asrbias {

/// Transcript clean-up rules. Tag patterns are ECMAScript regular
/// expressions that must match a whole token; a pattern that matches the
/// empty string is rejected.
struct NormalizationConfig {
    std::vector<std::string> tag_patterns = default_tag_patterns();
    bool case_fold = true;
    /// Strips leading/trailing ASCII punctuation of each token. The
    /// apostrophe is kept so that "'s-avonds" and "zo'n" survive intact.
    bool strip_punctuation = true;

    static std::vector<std::string> default_tag_patterns();

    bool operator==(const NormalizationConfig&) const = default;
};

/// Ordered list of non-empty, whitespace-free tokens.
using TokenSequence = std::vector<std::string>;

/// Compiled form of a NormalizationConfig. Immutable after construction and
/// safe to share between threads.
class Normalizer {
public:
    explicit Normalizer(NormalizationConfig config);

    const NormalizationConfig& config() const noexcept { return config_; }

    TokenSequence tokenize(std::string_view text) const;
    TokenSequence strip_tags(const TokenSequence& seq) const;
    TokenSequence normalize(std::string_view text) const;

    bool is_tag(std::string_view token) const;

private:
    NormalizationConfig config_;
    std::vector<std::regex> tags_;
};

TokenSequence tokenize(std::string_view text, const NormalizationConfig& config);
TokenSequence strip_tags(const TokenSequence& seq, const NormalizationConfig& config);
TokenSequence normalize(std::string_view text, const NormalizationConfig& config);

/// Simple case mapping: ASCII plus the Latin-1 uppercase letters encoded as
/// UTF-8. No locale is consulted.
std::string fold_case(std::string_view token);

std::string join(const TokenSequence& seq, std::string_view sep = " ");

}  // namespace asrbias
