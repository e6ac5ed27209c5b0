#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace impactgraph {

/// Trims, collapses internal whitespace runs to a single space. Case is kept.
std::string collapse_whitespace(std::string_view text);

/// Variable-name key: collapse_whitespace + ASCII case-fold. Bytes >= 0x80
/// (UTF-8 continuation/lead bytes) pass through unchanged.
std::string normalize_name(std::string_view text);

std::string to_lower_ascii(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

/// 64-bit FNV-1a. Used for prompt hashes and content-addressed ids, never
/// for anything security related.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex64(std::uint64_t value);

std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: temp file in the same
/// directory, then rename.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace impactgraph
