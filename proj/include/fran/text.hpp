#ifndef FRAN_TEXT_HPP
#define FRAN_TEXT_HPP

#include <string>
#include <string_view>

namespace fran {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// Strict full-string parse; throws ConfigError mentioning `what` on failure.
double parse_number(std::string_view text, std::string_view what);

} // namespace fran

#endif // FRAN_TEXT_HPP
