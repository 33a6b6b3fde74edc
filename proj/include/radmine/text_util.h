#ifndef RADMINE_TEXT_UTIL_H_
#define RADMINE_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace radmine {

// ASCII-only character classes. Bytes >= 0x80 are never letters, digits or
// whitespace here, so UTF-8 continuation bytes are passed through untouched.
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
inline char to_lower(char c) { return is_upper(c) ? char(c - 'A' + 'a') : c; }

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool ends_with_ci(std::string_view s, std::string_view suffix);

std::vector<std::string_view> split(std::string_view s, char sep);

// Escaping for tab-separated stores: backslash, tab, CR and LF become
// \\, \t, \r, \n.
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace radmine

#endif  // RADMINE_TEXT_UTIL_H_
