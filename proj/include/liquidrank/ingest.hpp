// Rating log parsing (CSV / JSONL) and window partitioning.
//
// CSV columns, in order: rater, ratee, kind, aspect, category, value, weight,
// event, timestamp. An empty field means "absent". JSONL carries one object per
// line with the same nine keys.

#pragma once

#include <algorithm>
#include <charconv>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "types.hpp"

namespace liquidrank {

enum class LogFormat { Csv, Jsonl };

namespace detail {

inline bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        if (c < 0x80) extra = 0;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2) extra = 1;
        else if ((c & 0xF0) == 0xE0) extra = 2;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4) extra = 3;
        else return false;
        if (extra > 0 && i + extra >= s.size()) return false;
        for (std::size_t k = 1; k <= extra; ++k)
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        i += extra + 1;
    }
    return true;
}

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"' && fields.back().empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    if (quoted) throw InputError("unterminated quoted field", line_no);
    return fields;
}

/// Quotes a CSV field when it contains a delimiter, quote or line break.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline double parse_double(std::string_view text, const char* field, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw InputError(std::string("malformed ") + field + " '" + std::string(text) + "'", line_no);
    return v;
}

inline Epoch parse_epoch(std::string_view text, const char* field, std::size_t line_no) {
    Epoch v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw InputError(std::string("malformed ") + field + " '" + std::string(text) + "'", line_no);
    return v;
}

inline RatingKind parse_kind(std::string_view text, std::size_t line_no) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "stake") return RatingKind::Stake;
    if (lower == "transaction") return RatingKind::Transaction;
    throw InputError("unknown rating kind '" + std::string(text) + "'", line_no);
}

inline std::optional<std::string> optional_field(std::string s) {
    if (s.empty()) return std::nullopt;
    return s;
}

inline ParticipantId participant(std::string s, const char* field, std::size_t line_no) {
    if (s.empty()) throw InputError(std::string("missing ") + field, line_no);
    return ParticipantId(std::move(s));
}

inline RatingRecord parse_csv_record(std::string_view line, std::size_t line_no) {
    auto f = split_csv_line(line, line_no);
    if (f.size() != 9) throw InputError("expected 9 fields, found " + std::to_string(f.size()), line_no);
    RatingRecord r;
    r.rater = participant(std::move(f[0]), "rater", line_no);
    r.ratee = participant(std::move(f[1]), "ratee", line_no);
    r.kind = parse_kind(f[2], line_no);
    r.aspect = optional_field(std::move(f[3]));
    r.category = optional_field(std::move(f[4]));
    r.value = parse_double(f[5], "value", line_no);
    r.weight = f[6].empty() ? 1.0 : parse_double(f[6], "weight", line_no);
    r.event = optional_field(std::move(f[7]));
    r.timestamp = parse_epoch(f[8], "timestamp", line_no);
    return r;
}

inline std::optional<std::string> json_label(const nlohmann::json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return optional_field(it->get<std::string>());
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    throw InputError(std::string("field '") + key + "' must be a string", line_no);
}

inline double json_number(const nlohmann::json& obj, const char* key, std::size_t line_no,
                          std::optional<double> fallback = std::nullopt) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null() || (it->is_string() && it->get<std::string>().empty())) {
        if (fallback) return *fallback;
        throw InputError(std::string("missing ") + key, line_no);
    }
    if (it->is_number()) return it->get<double>();
    if (it->is_string()) return parse_double(it->get<std::string>(), key, line_no);
    throw InputError(std::string("field '") + key + "' must be a number", line_no);
}

inline RatingRecord parse_jsonl_record(std::string_view line, std::size_t line_no) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw InputError("JSONL line must be an object", line_no);
    RatingRecord r;
    r.rater = participant(json_label(obj, "rater", line_no).value_or(""), "rater", line_no);
    r.ratee = participant(json_label(obj, "ratee", line_no).value_or(""), "ratee", line_no);
    auto kind = json_label(obj, "kind", line_no);
    if (!kind) throw InputError("missing kind", line_no);
    r.kind = parse_kind(*kind, line_no);
    r.aspect = json_label(obj, "aspect", line_no);
    r.category = json_label(obj, "category", line_no);
    r.value = json_number(obj, "value", line_no);
    r.weight = json_number(obj, "weight", line_no, 1.0);
    r.event = json_label(obj, "event", line_no);
    auto ts = obj.find("timestamp");
    if (ts == obj.end() || ts->is_null()) throw InputError("missing timestamp", line_no);
    if (ts->is_number_integer()) r.timestamp = ts->get<Epoch>();
    else if (ts->is_string()) r.timestamp = parse_epoch(ts->get<std::string>(), "timestamp", line_no);
    else throw InputError("timestamp must be an integer", line_no);
    return r;
}

}  // namespace detail

/// Parses and validates a whole rating log, preserving input order.
/// Blank lines are skipped; a CSV log may start with a `rater,ratee,...` header.
inline std::vector<RatingRecord> parse_log(std::istream& in, LogFormat format) {
    std::vector<RatingRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!detail::valid_utf8(line)) throw InputError("invalid UTF-8", line_no);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (format == LogFormat::Csv && line_no == 1 && line.rfind("rater,ratee,", 0) == 0) continue;
        RatingRecord r = format == LogFormat::Csv ? detail::parse_csv_record(line, line_no)
                                                  : detail::parse_jsonl_record(line, line_no);
        validate(r, line_no);
        out.push_back(std::move(r));
    }
    return out;
}

/// Renders one record as a CSV log line (no trailing newline).
inline std::string to_csv_line(const RatingRecord& r) {
    char buf[64];
    auto num = [&](double v) {
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::string out;
    out += detail::csv_field(r.rater.str()) + ',' + detail::csv_field(r.ratee.str()) + ',' + to_string(r.kind) + ',';
    out += detail::csv_field(r.aspect.value_or("")) + ',' + detail::csv_field(r.category.value_or("")) + ',';
    out += num(r.value) + ',' + num(r.weight) + ',' + detail::csv_field(r.event.value_or("")) + ',';
    out += std::to_string(r.timestamp);
    return out;
}

// Window modes.

struct WholeHistory {
    friend bool operator==(const WholeHistory&, const WholeHistory&) = default;
};
struct PerTransaction {
    friend bool operator==(const PerTransaction&, const PerTransaction&) = default;
};
struct Periodic {
    Epoch length = 1;
    friend bool operator==(const Periodic&, const Periodic&) = default;
};
struct PerBlock {
    std::size_t block_size = 1;
    friend bool operator==(const PerBlock&, const PerBlock&) = default;
};

using WindowMode = std::variant<WholeHistory, PerTransaction, Periodic, PerBlock>;

/// Parses `whole`, `tx`, `period:<N>` or `block:<N>`.
inline WindowMode parse_window_mode(std::string_view text) {
    auto positive = [&](std::string_view digits) {
        long long n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || n <= 0)
            throw ConfigError("window parameter must be a positive integer: '" + std::string(text) + "'");
        return n;
    };
    if (text == "whole") return WholeHistory{};
    if (text == "tx") return PerTransaction{};
    if (text.rfind("period:", 0) == 0) return Periodic{positive(text.substr(7))};
    if (text.rfind("block:", 0) == 0) return PerBlock{static_cast<std::size_t>(positive(text.substr(6)))};
    throw ConfigError("unknown window mode '" + std::string(text) + "'");
}

/// Half-open interval [start, end) plus the slice of sorted records it owns.
struct WindowBounds {
    Epoch start = 0;
    Epoch end = 0;
    std::size_t offset = 0;
    std::size_t count = 0;

    friend bool operator==(const WindowBounds&, const WindowBounds&) = default;
};

struct Partition {
    std::vector<RatingRecord> records;  // sorted by timestamp, stable
    std::vector<WindowBounds> windows;

    std::span<const RatingRecord> slice(std::size_t window) const {
        const auto& w = windows.at(window);
        return std::span<const RatingRecord>(records).subspan(w.offset, w.count);
    }
};

/// Splits a log into evaluation windows.
///
/// WholeHistory: one window [t_origin, max t + 1). Periodic(L): consecutive
/// [t_origin + kL, t_origin + (k+1)L), empty ones included. PerTransaction: one
/// window [t, t + 1) per record. PerBlock(B): chunks of B records bounded by
/// [min t, max t + 1). An empty log yields no windows.
inline Partition partition(std::vector<RatingRecord> records, const WindowMode& mode, Epoch t_origin) {
    std::stable_sort(records.begin(), records.end(),
                     [](const RatingRecord& a, const RatingRecord& b) { return a.timestamp < b.timestamp; });
    if (!records.empty() && records.front().timestamp < t_origin)
        throw InputError("record at t=" + std::to_string(records.front().timestamp) + " precedes origin " +
                         std::to_string(t_origin));
    Partition p;
    p.records = std::move(records);
    const auto& recs = p.records;
    const std::size_t n = recs.size();
    if (n == 0) return p;

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, WholeHistory>) {
                p.windows.push_back({t_origin, recs.back().timestamp + 1, 0, n});
            } else if constexpr (std::is_same_v<M, PerTransaction>) {
                for (std::size_t i = 0; i < n; ++i) p.windows.push_back({recs[i].timestamp, recs[i].timestamp + 1, i, 1});
            } else if constexpr (std::is_same_v<M, Periodic>) {
                if (m.length <= 0) throw ConfigError("period length must be positive");
                std::size_t i = 0;
                for (Epoch start = t_origin; i < n; start += m.length) {
                    const Epoch end = start + m.length;
                    const std::size_t first = i;
                    while (i < n && recs[i].timestamp < end) ++i;
                    p.windows.push_back({start, end, first, i - first});
                }
            } else {
                if (m.block_size == 0) throw ConfigError("block size must be positive");
                for (std::size_t i = 0; i < n; i += m.block_size) {
                    const std::size_t count = std::min(m.block_size, n - i);
                    p.windows.push_back({recs[i].timestamp, recs[i + count - 1].timestamp + 1, i, count});
                }
            }
        },
        mode);
    return p;
}

}  // namespace liquidrank
