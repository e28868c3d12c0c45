#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace bayescmp {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Parses the whole of `text` as a double; nullopt on any trailing garbage.
inline std::optional<double> parse_double(std::string_view text) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

} // namespace bayescmp
