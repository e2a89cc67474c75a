#include "asrbias/align.hpp"

#include "asrbias/error.hpp"

#include <algorithm>

namespace asrbias {

AlignmentCounts& AlignmentCounts::operator+=(const AlignmentCounts& other) noexcept
{
    substitutions += other.substitutions;
    deletions += other.deletions;
    insertions += other.insertions;
    correct += other.correct;
    ref_len += other.ref_len;
    return *this;
}

std::string_view to_string(EditKind kind)
{
    switch (kind) {
    case EditKind::Match: return "match";
    case EditKind::Substitute: return "substitute";
    case EditKind::Delete: return "delete";
    case EditKind::Insert: return "insert";
    }
    return "?";
}

Alignment align(const TokenSequence& ref, const TokenSequence& hyp)
{
    const std::size_t n = ref.size();
    const std::size_t m = hyp.size();
    const std::size_t width = m + 1;

    // cost[i * width + j]: distance between ref[0, i) and hyp[0, j)
    std::vector<std::uint32_t> cost((n + 1) * width);
    for (std::size_t j = 0; j <= m; ++j) {
        cost[j] = static_cast<std::uint32_t>(j);
    }
    for (std::size_t i = 1; i <= n; ++i) {
        std::uint32_t* row = &cost[i * width];
        const std::uint32_t* prev = &cost[(i - 1) * width];
        row[0] = static_cast<std::uint32_t>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            std::uint32_t diag = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0U : 1U);
            row[j] = std::min({diag, prev[j] + 1U, row[j - 1] + 1U});
        }
    }

    Alignment result;
    result.ops.reserve(std::max(n, m));
    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        const std::uint32_t here = cost[i * width + j];
        if (i > 0 && j > 0) {
            const std::uint32_t diag = cost[(i - 1) * width + (j - 1)];
            if (ref[i - 1] == hyp[j - 1] && here == diag) {
                result.ops.push_back({EditKind::Match, ref[i - 1], hyp[j - 1]});
                ++result.counts.correct;
                --i;
                --j;
                continue;
            }
            if (ref[i - 1] != hyp[j - 1] && here == diag + 1) {
                result.ops.push_back({EditKind::Substitute, ref[i - 1], hyp[j - 1]});
                ++result.counts.substitutions;
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && here == cost[(i - 1) * width + j] + 1) {
            result.ops.push_back({EditKind::Delete, ref[i - 1], std::nullopt});
            ++result.counts.deletions;
            --i;
            continue;
        }
        result.ops.push_back({EditKind::Insert, std::nullopt, hyp[j - 1]});
        ++result.counts.insertions;
        --j;
    }
    std::reverse(result.ops.begin(), result.ops.end());
    result.counts.ref_len = n;
    return result;
}

Rational utterance_wer(const AlignmentCounts& counts)
{
    if (counts.ref_len == 0) {
        throw Error(ErrorKind::ZeroReferenceLength, "reference has no tokens; WER is undefined");
    }
    return Rational(counts.errors()) / Rational(counts.ref_len);
}

Rational pooled_wer(std::span<const AlignmentCounts> counts)
{
    AlignmentCounts total;
    for (const auto& c : counts) {
        total += c;
    }
    if (total.ref_len == 0) {
        throw Error(ErrorKind::ZeroReferenceLength, "pooled reference length is zero; WER is undefined");
    }
    return utterance_wer(total);
}

}  // namespace asrbias
