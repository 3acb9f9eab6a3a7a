#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace skelnav {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);
/// Fixed-point with `digits` decimals, for human-facing output.
std::string format_fixed(double v, int digits);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);

}  // namespace skelnav
