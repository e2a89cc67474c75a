#include "asrbias/dataset.hpp"

#include "asrbias/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>

namespace asrbias {

namespace {

using nlohmann::json;

constexpr std::string_view kRequired[] = {"utt_id", "speaker_id", "ref", "hyp"};

bool is_blank(std::string_view line)
{
    return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

std::vector<std::string> split_tabs(std::string_view line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        fields.emplace_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) {
            break;
        }
        start = tab + 1;
    }
    return fields;
}

std::string trim_copy(std::string_view s)
{
    auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

class IdRegistry {
public:
    void add(const std::string& id, std::size_t line)
    {
        auto [it, inserted] = seen_.emplace(id, line);
        if (!inserted) {
            throw Error(ErrorKind::DuplicateUtteranceId, "utt_id '" + id + "' on line " + std::to_string(line)
                                                             + " already used on line " + std::to_string(it->second));
        }
    }

private:
    std::map<std::string, std::size_t> seen_;
};

void parse_jsonl(std::istream& in, ManifestParse& out)
{
    IdRegistry ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded()) {
            out.diagnostics.push_back({lineno, {}, "invalid JSON"});
            continue;
        }
        if (!record.is_object()) {
            out.diagnostics.push_back({lineno, {}, "record is not a JSON object"});
            continue;
        }
        std::string utt_id;
        if (auto it = record.find("utt_id"); it != record.end() && it->is_string()) {
            utt_id = it->get<std::string>();
        }
        bool ok = true;
        for (auto field : kRequired) {
            auto it = record.find(std::string(field));
            if (it == record.end()) {
                out.diagnostics.push_back({lineno, utt_id, "missing field '" + std::string(field) + "'"});
                ok = false;
            } else if (!it->is_string()) {
                out.diagnostics.push_back({lineno, utt_id, "field '" + std::string(field) + "' is not a string"});
                ok = false;
            }
        }
        Utterance utt;
        for (const auto& [key, value] : record.items()) {
            if (std::find(std::begin(kRequired), std::end(kRequired), key) != std::end(kRequired)) {
                continue;
            }
            if (!value.is_string()) {
                out.diagnostics.push_back({lineno, utt_id, "attribute '" + key + "' is not a string"});
                ok = false;
                continue;
            }
            utt.attributes.emplace(key, value.get<std::string>());
        }
        if (!ok) {
            continue;
        }
        utt.utt_id = std::move(utt_id);
        if (utt.utt_id.empty()) {
            out.diagnostics.push_back({lineno, {}, "utt_id is empty"});
            continue;
        }
        utt.speaker_id = record["speaker_id"].get<std::string>();
        utt.ref_text = record["ref"].get<std::string>();
        utt.hyp_text = record["hyp"].get<std::string>();
        ids.add(utt.utt_id, lineno);
        out.utterances.push_back(std::move(utt));
    }
}

void parse_tsv(std::istream& in, ManifestParse& out)
{
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (!is_blank(line)) {
            header = split_tabs(line);
            break;
        }
    }
    if (header.empty()) {
        throw Error(ErrorKind::FormatError, "TSV manifest has no header row");
    }
    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].empty() || !column.emplace(header[i], i).second) {
            throw Error(ErrorKind::FormatError, "TSV header has an empty or repeated column name at column "
                                                    + std::to_string(i + 1));
        }
    }
    for (auto field : kRequired) {
        if (!column.contains(std::string(field))) {
            throw Error(ErrorKind::FormatError, "TSV header lacks required column '" + std::string(field) + "'");
        }
    }

    IdRegistry ids;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        auto fields = split_tabs(line);
        if (fields.size() != header.size()) {
            out.diagnostics.push_back({lineno, {}, "expected " + std::to_string(header.size()) + " fields, found "
                                                       + std::to_string(fields.size())});
            continue;
        }
        Utterance utt;
        utt.utt_id = fields[column["utt_id"]];
        utt.speaker_id = fields[column["speaker_id"]];
        utt.ref_text = fields[column["ref"]];
        utt.hyp_text = fields[column["hyp"]];
        if (utt.utt_id.empty()) {
            out.diagnostics.push_back({lineno, {}, "utt_id is empty"});
            continue;
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (std::find(std::begin(kRequired), std::end(kRequired), header[i]) == std::end(kRequired)) {
                utt.attributes.emplace(header[i], fields[i]);
            }
        }
        ids.add(utt.utt_id, lineno);
        out.utterances.push_back(std::move(utt));
    }
}

}  // namespace

std::string GroupKey::to_string() const
{
    std::string out;
    for (const auto& [key, value] : pairs) {
        if (!out.empty()) {
            out += ',';
        }
        out += key + "=" + value;
    }
    return out;
}

std::string GroupKey::label() const
{
    std::string out;
    for (const auto& [key, value] : pairs) {
        if (!out.empty()) {
            out += '/';
        }
        out += value;
    }
    return out;
}

GroupKey GroupKey::parse(std::string_view text, const std::vector<std::string>& keys)
{
    GroupKey key;
    if (text.find('=') == std::string_view::npos) {
        if (keys.size() != 1 || text.empty()) {
            throw Error(ErrorKind::ConfigError, "group '" + std::string(text)
                                                    + "' must be written as key=value when grouping by "
                                                      "more than one key");
        }
        key.pairs.emplace_back(keys.front(), std::string(text));
        return key;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view item = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
        auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw Error(ErrorKind::ConfigError, "malformed group '" + std::string(text) + "'");
        }
        key.pairs.emplace_back(trim_copy(item.substr(0, eq)), trim_copy(item.substr(eq + 1)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (!keys.empty()) {
        // Reorder to the declared key order so equality with partition keys holds.
        GroupKey ordered;
        for (const auto& k : keys) {
            auto it = std::find_if(key.pairs.begin(), key.pairs.end(), [&](const auto& p) { return p.first == k; });
            if (it != key.pairs.end()) {
                ordered.pairs.push_back(*it);
            }
        }
        if (ordered.pairs.size() == key.pairs.size()) {
            return ordered;
        }
    }
    return key;
}

bool GroupKey::contains(const GroupKey& pattern) const
{
    return std::all_of(pattern.pairs.begin(), pattern.pairs.end(), [&](const auto& p) {
        return std::find(pairs.begin(), pairs.end(), p) != pairs.end();
    });
}

std::string Diagnostic::to_string() const
{
    std::string out;
    if (line > 0) {
        out += "line " + std::to_string(line) + ": ";
    }
    if (!utt_id.empty()) {
        out += "[" + utt_id + "] ";
    }
    return out + message;
}

ManifestParse parse_manifest(std::istream& in, ManifestFormat format)
{
    ManifestParse out;
    if (!in) {
        throw Error(ErrorKind::FormatError, "manifest stream is not readable");
    }
    if (format == ManifestFormat::Jsonl) {
        parse_jsonl(in, out);
    } else {
        parse_tsv(in, out);
    }
    return out;
}

std::string to_jsonl(const std::vector<Utterance>& utts)
{
    std::string out;
    for (const auto& utt : utts) {
        json record = json::object();
        for (const auto& [key, value] : utt.attributes) {
            record[key] = value;
        }
        record["utt_id"] = utt.utt_id;
        record["speaker_id"] = utt.speaker_id;
        record["ref"] = utt.ref_text;
        record["hyp"] = utt.hyp_text;
        out += record.dump();
        out += '\n';
    }
    return out;
}

GroupKey group_key_of(const Utterance& utt, const std::vector<std::string>& keys)
{
    GroupKey key;
    key.pairs.reserve(keys.size());
    for (const auto& k : keys) {
        auto it = utt.attributes.find(k);
        if (it == utt.attributes.end()) {
            throw Error(ErrorKind::MissingAttribute, "utterance '" + utt.utt_id + "' lacks attribute '" + k + "'");
        }
        key.pairs.emplace_back(k, it->second);
    }
    return key;
}

ValidationReport validate(const std::vector<Utterance>& utts, const Normalizer& normalizer,
                          const ValidationOptions& options)
{
    ValidationReport report;
    std::set<GroupKey> seen_groups;
    std::set<GroupKey> kept_groups;
    for (const auto& utt : utts) {
        bool complete = true;
        for (const auto& key : options.grouping_keys) {
            if (!utt.attributes.contains(key)) {
                report.findings.push_back({0, utt.utt_id, "missing grouping attribute '" + key + "'"});
                complete = false;
            }
        }
        if (!complete) {
            ++report.excluded_missing_attribute;
            continue;
        }
        GroupKey group = group_key_of(utt, options.grouping_keys);
        seen_groups.insert(group);
        if (normalizer.normalize(utt.ref_text).empty()) {
            if (options.empty_reference == EmptyReferencePolicy::Error) {
                throw Error(ErrorKind::ValidationError,
                            "utterance '" + utt.utt_id + "' has an empty reference after normalization");
            }
            report.findings.push_back({0, utt.utt_id, "reference is empty after normalization; excluded"});
            ++report.excluded_empty_reference;
            continue;
        }
        kept_groups.insert(group);
        report.retained.push_back(utt);
    }
    for (const auto& group : seen_groups) {
        if (kept_groups.contains(group)) {
            continue;
        }
        if (options.strict) {
            throw Error(ErrorKind::EmptyGroup, "group '" + group.to_string() + "' has no scoreable utterances");
        }
        report.findings.push_back({0, {}, "group '" + group.to_string() + "' has no scoreable utterances"});
    }
    return report;
}

std::map<GroupKey, std::vector<Utterance>> partition(const std::vector<Utterance>& utts,
                                                     const std::vector<std::string>& grouping_keys)
{
    std::map<GroupKey, std::vector<Utterance>> groups;
    for (const auto& utt : utts) {
        groups[group_key_of(utt, grouping_keys)].push_back(utt);
    }
    return groups;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) {
        throw Error(ErrorKind::FormatError, "unterminated quoted CSV field");
    }
    fields.push_back(std::move(field));
    return fields;
}

std::vector<GroupWerRecord> load_group_summaries(std::istream& in)
{
    if (!in) {
        throw Error(ErrorKind::FormatError, "summary stream is not readable");
    }
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (!is_blank(line)) {
            for (auto& name : split_csv_line(line)) {
                header.push_back(trim_copy(name));
            }
            break;
        }
    }
    if (header.empty()) {
        throw Error(ErrorKind::FormatError, "summary CSV has no header row");
    }

    std::optional<std::size_t> wer_col, utts_col, tokens_col, role_col;
    std::vector<std::size_t> attr_cols;
    std::set<std::string> names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& name = header[i];
        if (name.empty() || !names.insert(name).second) {
            throw Error(ErrorKind::FormatError, "summary CSV header has an empty or repeated column at column "
                                                    + std::to_string(i + 1));
        }
        if (name == "wer") {
            wer_col = i;
        } else if (name == "n_utts") {
            utts_col = i;
        } else if (name == "n_ref_tokens") {
            tokens_col = i;
        } else if (name == "role") {
            role_col = i;
        } else {
            attr_cols.push_back(i);
        }
    }
    if (!wer_col) {
        throw Error(ErrorKind::FormatError, "summary CSV header lacks a 'wer' column");
    }
    if (attr_cols.empty()) {
        throw Error(ErrorKind::FormatError, "summary CSV header declares no attribute columns");
    }

    auto parse_count = [&](const std::string& text, const char* what) -> std::optional<std::size_t> {
        std::string t = trim_copy(text);
        if (t.empty()) {
            return std::nullopt;
        }
        if (t.find_first_not_of("0123456789") != std::string::npos) {
            throw Error(ErrorKind::FormatError,
                        "line " + std::to_string(lineno) + ": " + what + " is not a count: '" + t + "'");
        }
        return static_cast<std::size_t>(std::stoull(t));
    };

    std::vector<GroupWerRecord> records;
    std::set<GroupKey> keys;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::FormatError, "line " + std::to_string(lineno) + ": expected "
                                                    + std::to_string(header.size()) + " fields, found "
                                                    + std::to_string(fields.size()));
        }
        GroupWerRecord record;
        for (auto col : attr_cols) {
            record.group.pairs.emplace_back(header[col], trim_copy(fields[col]));
        }
        try {
            record.wer_percent = parse_exact(fields[*wer_col]);
        } catch (const Error&) {
            throw Error(ErrorKind::FormatError,
                        "line " + std::to_string(lineno) + ": wer is not a number: '" + fields[*wer_col] + "'");
        }
        if (record.wer_percent < 0) {
            throw Error(ErrorKind::NegativeWer, "line " + std::to_string(lineno) + ": wer "
                                                    + trim_copy(fields[*wer_col]) + " is negative");
        }
        if (utts_col) {
            record.n_utts = parse_count(fields[*utts_col], "n_utts");
        }
        if (tokens_col) {
            record.n_ref_tokens = parse_count(fields[*tokens_col], "n_ref_tokens");
        }
        if (role_col) {
            std::string role = trim_copy(fields[*role_col]);
            if (role == "external") {
                record.external = true;
            } else if (!role.empty() && role != "eval") {
                throw Error(ErrorKind::FormatError,
                            "line " + std::to_string(lineno) + ": role must be 'eval' or 'external', got '" + role + "'");
            }
        }
        if (!keys.insert(record.group).second) {
            throw Error(ErrorKind::FormatError, "line " + std::to_string(lineno) + ": group '"
                                                    + record.group.to_string() + "' appears twice");
        }
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace asrbias
