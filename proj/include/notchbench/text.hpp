#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace notchbench {

/// Strips surrounding spaces, tabs, CR and LF.
std::string trim(const std::string& s);

/// Splits on a single-character delimiter; empty fields are kept.
std::vector<std::string> split(const std::string& s, char delim);

/// Shortest round-trip decimal form of a double ("%.17g").
std::string fmt_double(double v);

/// Exact hexfloat form ("%a"), for lossless persistence.
std::string fmt_hex_double(double v);

/// Parses a decimal or hexfloat double; the whole token must be consumed.
/// Throws ParseError otherwise.
double parse_double(const std::string& token);

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a64(const std::string& data);

/// fnv1a64 rendered as 16 hex digits.
std::string fnv1a64_hex(const std::string& data);

}  // namespace notchbench
