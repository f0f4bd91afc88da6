#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "capsig/errors.hpp"

// Minimal TOML reader covering the scenario schema: [tables], bare keys,
// numbers, booleans, quoted strings, single-line arrays and # comments.
// Nothing in the sandbox ships a TOML library, so the subset lives here.

namespace capsig::toml_lite {

struct Value {
    enum class Kind { number, boolean, string, number_array, string_array };
    Kind kind = Kind::number;
    double num = 0.0;
    bool is_integer = false;       ///< literal had integer form
    std::uint64_t uint_val = 0;    ///< valid when is_integer and non-negative
    bool boolean = false;
    std::string str;
    std::vector<double> numbers;
    std::vector<std::string> strings;
    int line = 0;
};

using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

namespace detail {

[[noreturn]] inline void fail(const std::string& origin, int line, const std::string& msg) {
    throw validation_error(origin, "line " + std::to_string(line) + ": " + msg);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool bare_key(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
}

/// Strip a trailing comment, honouring quoted strings.
inline std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (c == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

inline std::string parse_string_literal(std::string_view text, const std::string& origin,
                                        int line) {
    // text starts and ends with unescaped quotes
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        char c = text[i];
        if (c == '\\' && i + 2 < text.size()) {
            const char next = text[i + 1];
            switch (next) {
                case '"': out.push_back('"'); ++i; continue;
                case '\\': out.push_back('\\'); ++i; continue;
                case 'n': out.push_back('\n'); ++i; continue;
                case 't': out.push_back('\t'); ++i; continue;
                default: fail(origin, line, "unsupported escape sequence");
            }
        }
        if (c == '"') fail(origin, line, "unexpected quote inside string");
        out.push_back(c);
    }
    return out;
}

inline Value parse_scalar(std::string_view text, const std::string& origin, int line) {
    Value v;
    v.line = line;
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        v.kind = Value::Kind::string;
        v.str = parse_string_literal(text, origin, line);
        return v;
    }
    if (text == "true" || text == "false") {
        v.kind = Value::Kind::boolean;
        v.boolean = (text == "true");
        return v;
    }
    const char* first = text.data();
    const char* last = text.data() + text.size();
    double d = 0.0;
    const auto res = std::from_chars(first, last, d);
    if (res.ec != std::errc() || res.ptr != last) {
        fail(origin, line, "cannot parse value '" + std::string(text) + "'");
    }
    v.kind = Value::Kind::number;
    v.num = d;
    bool integer = !text.empty();
    std::size_t start = (text.front() == '+' || text.front() == '-') ? 1 : 0;
    if (start == text.size()) integer = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            integer = false;
            break;
        }
    }
    v.is_integer = integer;
    if (integer && text.front() != '-') {
        std::uint64_t u = 0;
        const auto ures = std::from_chars(text.data() + start, last, u);
        if (ures.ec != std::errc() || ures.ptr != last) {
            fail(origin, line, "integer literal out of range: '" + std::string(text) + "'");
        }
        v.uint_val = u;
    }
    return v;
}

inline Value parse_array(std::string_view text, const std::string& origin, int line) {
    // text starts with '[' and ends with ']'
    Value v;
    v.line = line;
    std::string_view inner = trim(text.substr(1, text.size() - 2));
    std::vector<std::string_view> items;
    bool in_string = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
        if (i < inner.size() && inner[i] == '"' && (i == 0 || inner[i - 1] != '\\')) {
            in_string = !in_string;
        }
        if (i == inner.size() || (inner[i] == ',' && !in_string)) {
            const auto item = trim(inner.substr(start, i - start));
            if (!item.empty()) items.push_back(item);
            start = i + 1;
        }
    }
    if (in_string) fail(origin, line, "unterminated string in array");
    if (items.empty()) {
        v.kind = Value::Kind::number_array;
        return v;
    }
    const bool string_array = items.front().front() == '"';
    v.kind = string_array ? Value::Kind::string_array : Value::Kind::number_array;
    for (const auto item : items) {
        const Value elem = parse_scalar(item, origin, line);
        if (string_array) {
            if (elem.kind != Value::Kind::string) fail(origin, line, "mixed array element types");
            v.strings.push_back(elem.str);
        } else {
            if (elem.kind != Value::Kind::number) fail(origin, line, "mixed array element types");
            v.numbers.push_back(elem.num);
        }
    }
    return v;
}

}  // namespace detail

/// Parse a TOML-subset document. `origin` labels errors (file name).
[[nodiscard]] inline Document parse(std::string_view text, const std::string& origin = "scenario") {
    Document doc;
    std::string section;  // top-level keys live under ""
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view s = detail::trim(detail::strip_comment(raw));
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') detail::fail(origin, line_no, "unterminated table header");
            const auto name = detail::trim(s.substr(1, s.size() - 2));
            if (!detail::bare_key(name)) {
                detail::fail(origin, line_no, "invalid table name '" + std::string(name) + "'");
            }
            section = std::string(name);
            doc.try_emplace(section);
            continue;
        }

        const std::size_t eq = s.find('=');
        if (eq == std::string_view::npos) detail::fail(origin, line_no, "expected 'key = value'");
        const auto key = detail::trim(s.substr(0, eq));
        const auto value_text = detail::trim(s.substr(eq + 1));
        if (!detail::bare_key(key)) {
            detail::fail(origin, line_no, "invalid key '" + std::string(key) + "'");
        }
        if (value_text.empty()) detail::fail(origin, line_no, "missing value");

        Value value;
        if (value_text.front() == '[') {
            if (value_text.back() != ']') detail::fail(origin, line_no, "unterminated array");
            value = detail::parse_array(value_text, origin, line_no);
        } else {
            value = detail::parse_scalar(value_text, origin, line_no);
        }
        auto [it, inserted] = doc[section].emplace(std::string(key), std::move(value));
        if (!inserted) detail::fail(origin, line_no, "duplicate key '" + std::string(key) + "'");
    }
    return doc;
}

}  // namespace capsig::toml_lite
