#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eragent::util {

/// Lowercase ASCII copy.
std::string to_lower(std::string s);

/// Lowercase, split on non-alphanumeric characters, drop empties.
std::vector<std::string> tokenize(const std::string& text);

/// Collapse runs of whitespace to single spaces and trim the ends.
std::string collapse_whitespace(const std::string& s);

std::string trim(const std::string& s);

/// Normalization used for dedup keys: lowercase, strip punctuation,
/// collapse whitespace.
std::string normalize_text(const std::string& s);

/// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(const std::string& data);

/// FNV-1a 64-bit hash (stable across platforms).
std::uint64_t fnv1a64(const std::string& s);

/// Round half-up to two decimals and format with exactly two digits,
/// e.g. 40.505 -> "40.51", 50 -> "50.00".
std::string format_pct(double value);

/// Write content to path atomically (temp file in the same directory,
/// then rename).
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace eragent::util
