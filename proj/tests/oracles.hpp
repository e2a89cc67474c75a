#pragma once

// Test-only reference computations, written independently of src/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Seq = std::vector<std::string>;

/// Top-down memoised recursion over suffixes.
inline std::size_t edit_distance(const Seq& a, const Seq& b)
{
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == a.size()) {
            return b.size() - j;
        }
        if (j == b.size()) {
            return a.size() - i;
        }
        auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        std::size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
        best = std::min(best, go(i + 1, j) + 1);
        best = std::min(best, go(i, j + 1) + 1);
        memo[key] = best;
        return best;
    };
    return go(0, 0);
}

/// Breadth-first search over edit scripts applied to `from`, using only
/// symbols from both sequences. Returns the shortest script length, or
/// max_steps + 1 when none is found within max_steps.
inline std::size_t shortest_edit_script(const Seq& from, const Seq& to, std::size_t max_steps)
{
    std::set<std::string> alphabet(from.begin(), from.end());
    alphabet.insert(to.begin(), to.end());
    std::set<Seq> seen{from};
    std::deque<std::pair<Seq, std::size_t>> queue{{from, 0}};
    while (!queue.empty()) {
        auto [cur, steps] = queue.front();
        queue.pop_front();
        if (cur == to) {
            return steps;
        }
        if (steps == max_steps) {
            continue;
        }
        std::vector<Seq> next;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            Seq del = cur;
            del.erase(del.begin() + static_cast<long>(i));
            next.push_back(del);
            for (const auto& s : alphabet) {
                if (s != cur[i]) {
                    Seq sub = cur;
                    sub[i] = s;
                    next.push_back(sub);
                }
            }
        }
        for (std::size_t i = 0; i <= cur.size(); ++i) {
            for (const auto& s : alphabet) {
                Seq ins = cur;
                ins.insert(ins.begin() + static_cast<long>(i), s);
                next.push_back(ins);
            }
        }
        for (auto& n : next) {
            if (seen.insert(n).second) {
                queue.emplace_back(std::move(n), steps + 1);
            }
        }
    }
    return max_steps + 1;
}

/// Every sequence of length 0..max_len over the given alphabet.
inline std::vector<Seq> all_sequences(const std::vector<std::string>& alphabet, std::size_t max_len)
{
    std::vector<Seq> out{Seq{}};
    std::vector<Seq> frontier{Seq{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Seq> grown;
        for (const auto& s : frontier) {
            for (const auto& sym : alphabet) {
                Seq t = s;
                t.push_back(sym);
                grown.push_back(std::move(t));
            }
        }
        out.insert(out.end(), grown.begin(), grown.end());
        frontier = std::move(grown);
    }
    return out;
}

inline bool near(double actual, double expected, double tolerance)
{
    return std::fabs(actual - expected) <= tolerance;
}

inline long double mean(const std::vector<long double>& v)
{
    long double s = 0;
    for (auto x : v) {
        s += x;
    }
    return s / static_cast<long double>(v.size());
}

inline long double sample_stdev(const std::vector<long double>& v)
{
    long double m = mean(v);
    long double ss = 0;
    for (auto x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<long double>(v.size() - 1));
}

}  // namespace oracle
