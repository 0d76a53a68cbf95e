#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

namespace schaake::csv {

/// Split one line on commas; no quoting support (none of our formats need it).
std::vector<std::string_view> split(std::string_view line);

std::string_view trim(std::string_view s) noexcept;

bool parse_double(std::string_view s, double& out) noexcept;
bool parse_int(std::string_view s, long long& out) noexcept;

/// Shortest round-trip representation.
std::string format_double(double v);

}  // namespace schaake::csv
