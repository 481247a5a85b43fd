#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace riskscore {

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Strict numeric parsing: the whole token must be consumed.
double parse_double(std::string_view token, const std::string& context);
long parse_long(std::string_view token, const std::string& context);

// Shortest decimal form that round-trips through double. Integers render
// without a trailing ".0" so integer thresholds survive text round trips.
std::string format_number(double v);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace riskscore
