#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wpf::text {

/// A decoded code point together with its byte range in the source string.
struct CodePoint {
    char32_t value;
    std::size_t offset;
    std::size_t length;
};

/// Decodes UTF-8. Invalid sequences decode as U+FFFD covering one byte.
std::vector<CodePoint> decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

/// Replaces invalid UTF-8 with U+FFFD. Returns the number of replacements.
std::size_t sanitize_utf8(std::string_view in, std::string& out);

bool is_space(char32_t cp);
bool is_cyrillic(char32_t cp);
bool is_latin_letter(char32_t cp);
bool is_letter(char32_t cp);
bool is_alnum(char32_t cp);
bool is_cjk(char32_t cp);

std::string_view trim(std::string_view s);
/// Trims and replaces every run of Unicode whitespace with one ASCII space.
std::string collapse_whitespace(std::string_view s);

/// Unicode NFC via ICU.
std::string nfc(std::string_view s);
/// Full Unicode lowercasing via ICU (root locale).
std::string to_lower(std::string_view s);

/// Maps typographic quotes and guillemets to their ASCII counterparts.
std::string ascii_quotes(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

std::string sha256_hex(std::string_view bytes);

}  // namespace wpf::text
