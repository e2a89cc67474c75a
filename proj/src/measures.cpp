#include "asrbias/measures.hpp"

#include "asrbias/error.hpp"

#include <algorithm>
#include <cmath>

namespace asrbias {

namespace {

void require_nonempty(std::span<const Rational> values, const char* what)
{
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, std::string(what) + " of an empty list");
    }
}

// Exact sum of squared deviations; the only inexact step is the final sqrt.
Rational squared_deviation(std::span<const Rational> values)
{
    Rational mean = macro_average(values);
    Rational total = 0;
    for (const auto& v : values) {
        Rational d = v - mean;
        total += d * d;
    }
    return total;
}

}  // namespace

Rational median(std::span<const Rational> values)
{
    require_nonempty(values, "median");
    std::vector<Rational> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t mid = sorted.size() / 2;
    if (sorted.size() % 2 == 1) {
        return sorted[mid];
    }
    return (sorted[mid - 1] + sorted[mid]) / 2;
}

double sample_stdev(std::span<const Rational> values)
{
    if (values.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "sample standard deviation needs at least two values");
    }
    return std::sqrt(to_double(squared_deviation(values) / (values.size() - 1)));
}

double population_stdev(std::span<const Rational> values)
{
    require_nonempty(values, "standard deviation");
    return std::sqrt(to_double(squared_deviation(values) / values.size()));
}

std::pair<Rational, Rational> range_bounds(std::span<const Rational> values)
{
    require_nonempty(values, "range");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*hi, *lo};
}

Rational macro_average(std::span<const Rational> values)
{
    require_nonempty(values, "average");
    Rational total = 0;
    for (const auto& v : values) {
        total += v;
    }
    return total / values.size();
}

DistributionSummary summarize(std::span<const Rational> values, StdevConvention convention)
{
    require_nonempty(values, "summary");
    DistributionSummary s;
    s.n = values.size();
    s.avg = macro_average(values);
    s.median = median(values);
    std::tie(s.max, s.min) = range_bounds(values);
    if (convention == StdevConvention::Population) {
        s.stdev = population_stdev(values);
    } else if (values.size() >= 2) {
        s.stdev = sample_stdev(values);
    }
    return s;
}

GroupSummary summarize_within_group(std::span<const Rational> utterance_wers, const Rational& pooled,
                                    const GroupKey& group, StdevConvention convention)
{
    GroupSummary g;
    g.group = group;
    g.wer_percent = pooled;
    g.pooled_wer_percent = pooled;
    g.within = summarize(utterance_wers, convention);
    g.n_utts = utterance_wers.size();
    return g;
}

DistributionSummary summarize_between_groups(std::span<const GroupSummary> summaries, StdevConvention convention)
{
    if (summaries.empty()) {
        throw Error(ErrorKind::EmptyInput, "between-group summary needs at least one group");
    }
    std::vector<Rational> values;
    values.reserve(summaries.size());
    for (const auto& g : summaries) {
        values.push_back(g.wer_percent);
    }
    return summarize(values, convention);
}

}  // namespace asrbias
