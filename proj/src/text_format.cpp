#include "jb/text_format.hpp"

#include <charconv>
#include <limits>
#include <cstdio>
#include <string>
#include <system_error>

#include "jb/errors.hpp"

namespace jb::text {

std::string format_exact(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_general(double x, int digits) {
    if (digits <= 0) return format_shortest(x);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    if (text == "inf" || text == "Inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || first == last) {
        throw InvalidArgument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty()) return value;
    // Accept integral values written in scientific notation, e.g. 1e6.
    const double d = parse_double(text);
    if (d != static_cast<double>(static_cast<std::int64_t>(d)) || d > 9.0e18 || d < -9.0e18) {
        throw InvalidArgument("not an integer: '" + std::string(text) + "'");
    }
    return static_cast<std::int64_t>(d);
}

std::uint64_t parse_uint(std::string_view text) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty()) return value;
    const std::int64_t v = parse_int(text);
    if (v < 0) throw InvalidArgument("not a nonnegative integer: '" + std::string(text) + "'");
    return static_cast<std::uint64_t>(v);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace jb::text
