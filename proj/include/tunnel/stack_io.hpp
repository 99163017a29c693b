#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "tunnel/optics.hpp"

namespace tunnel {

// Stack definition files are line oriented, '#' starts a comment:
//
//   ambient <n>
//   layer <n> <thickness_nm>     (zero or more)
//   substrate <n>

LayerStack parse_stack(std::string_view text);
LayerStack read_stack_file(const std::filesystem::path& path);

/// Writes with round-trip precision, so parse_stack(format_stack(s)) == s.
std::string format_stack(const LayerStack& stack, std::string_view comment = {});
void write_stack_file(const std::filesystem::path& path, const LayerStack& stack,
                      std::string_view comment = {});

/// Strict decimal parse (optional sign and exponent, no trailing junk).
double parse_number(std::string_view token);

}  // namespace tunnel
