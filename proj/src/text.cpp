#include <fran/errors.hpp>
#include <fran/text.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace fran {

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

double parse_number(std::string_view text, std::string_view what)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (text == "nan") {
        return std::nan("");
    }
    if (text == "inf") {
        return INFINITY;
    }
    if (text == "-inf") {
        return -INFINITY;
    }
    double value = 0.0;
    const auto* first = text.data();
    if (!text.empty() && text.front() == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError(std::string(what) + ": expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

} // namespace fran
