#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "epibias/error.hpp"
#include "epibias/textprep.hpp"

namespace epibias {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes
};

// Lenient UTF-8 decode; invalid bytes decode as themselves with length 1.
CodePoint decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0 && cont(1))
    return {static_cast<char32_t>(((b0 & 0x1F) << 6) | (s[i + 1] & 0x3F)), 2};
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2))
    return {static_cast<char32_t>(((b0 & 0x0F) << 12) | ((s[i + 1] & 0x3F) << 6) |
                                  (s[i + 2] & 0x3F)),
            3};
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3))
    return {static_cast<char32_t>(((b0 & 0x07) << 18) | ((s[i + 1] & 0x3F) << 12) |
                                  ((s[i + 2] & 0x3F) << 6) | (s[i + 3] & 0x3F)),
            4};
  return {b0, 1};
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
         c == 0xA0 || (c >= 0x2000 && c <= 0x200B) || c == 0x3000;
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_currency(char32_t c) {
  return c == '$' || c == 0xA3 || c == 0xA5 || c == 0x20AC || c == 0xA2 || c == 0x20B9;
}

bool is_apostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

bool is_letter(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0xC0 && c <= 0x24F) return true;            // Latin-1 / Latin Extended
  if (c >= 0x250 && c <= 0x2AF) return true;           // IPA
  if (c >= 0x370 && c <= 0x1FFF) return true;          // Greek .. Latin Extended Additional
  if (c >= 0x2000 && c <= 0x2BFF) return false;        // punctuation, symbols, arrows
  if (c >= 0x3000 && c <= 0x303F) return false;        // CJK punctuation
  if (c >= 0xFF00 && c <= 0xFF0F) return false;
  if (c >= 0x1F000) return false;                      // emoji and pictographs
  return c >= 0x3040;
}

bool is_word_char(char32_t c) { return is_letter(c) || is_digit(c); }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool has_letter(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    CodePoint cp = decode(s, i);
    if (is_letter(cp.value)) return true;
    i += cp.length;
  }
  return false;
}

std::vector<SurfacePiece> split_surface(std::string_view text) {
  std::vector<SurfacePiece> pieces;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto peek = [&](std::size_t at) -> CodePoint {
    return at < n ? decode(text, at) : CodePoint{0, 0};
  };

  while (i < n) {
    CodePoint cp = decode(text, i);
    if (is_space(cp.value)) {
      i += cp.length;
      continue;
    }

    const std::size_t start = i;
    const bool currency_number = is_currency(cp.value) && is_digit(peek(i + cp.length).value);
    if (currency_number || is_digit(cp.value)) {
      // amount: [currency] digits ([,.] digits)* [letter suffix such as m, bn, k, nd]
      if (currency_number) i += cp.length;
      while (i < n) {
        CodePoint c = decode(text, i);
        if (is_digit(c.value)) {
          i += c.length;
        } else if ((c.value == ',' || c.value == '.') && is_digit(peek(i + 1).value)) {
          i += 1;
        } else {
          break;
        }
      }
      while (i < n) {
        CodePoint c = decode(text, i);
        if (!is_word_char(c.value)) break;
        i += c.length;
      }
      pieces.push_back({std::string(text.substr(start, i - start)), start, false, true});
      continue;
    }

    if (is_letter(cp.value)) {
      i += cp.length;
      while (i < n) {
        CodePoint c = decode(text, i);
        if (is_word_char(c.value)) {
          i += c.length;
          continue;
        }
        // internal hyphen or apostrophe joins two word parts
        if ((c.value == '-' || is_apostrophe(c.value)) && is_word_char(peek(i + c.length).value)) {
          i += c.length;
          continue;
        }
        break;
      }
      pieces.push_back({std::string(text.substr(start, i - start)), start, false, false});
      continue;
    }

    i += cp.length;
    pieces.push_back({std::string(text.substr(start, i - start)), start, true, false});
  }
  return pieces;
}

}  // namespace epibias
