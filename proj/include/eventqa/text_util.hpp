// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace eventqa {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Hex SHA-256 of the input.
std::string sha256_hex(std::string_view data);

// First 16 hex digits of the SHA-256; used to tag prompts in traces.
std::string short_hash(std::string_view data);

// Truncates to at most max_bytes without splitting a UTF-8 sequence.
std::string truncate_utf8(std::string_view s, std::size_t max_bytes);


// Whole-file read; throws IoFailure.
std::string read_text_file(const std::string& path);
// Writes through a temporary file and renames it into place.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace eventqa
