#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dialscore::utf8 {

struct DecodeResult {
  char32_t cp = 0;
  std::size_t length = 0;  // bytes consumed; 0 on invalid input
};

// Decode one code point at byte offset `i`. Rejects overlong forms,
// surrogates and values above U+10FFFF.
inline DecodeResult decode(std::string_view s, std::size_t i) {
  const auto byte = [&](std::size_t k) { return static_cast<std::uint8_t>(s[k]); };
  if (i >= s.size()) return {};
  std::uint8_t b0 = byte(i);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t k) {
    return k < s.size() && (byte(k) & 0xc0) == 0x80;
  };
  if ((b0 & 0xe0) == 0xc0) {
    if (!cont(i + 1)) return {};
    char32_t cp = ((b0 & 0x1f) << 6) | (byte(i + 1) & 0x3f);
    if (cp < 0x80) return {};
    return {cp, 2};
  }
  if ((b0 & 0xf0) == 0xe0) {
    if (!cont(i + 1) || !cont(i + 2)) return {};
    char32_t cp = ((b0 & 0x0f) << 12) | ((byte(i + 1) & 0x3f) << 6) | (byte(i + 2) & 0x3f);
    if (cp < 0x800 || (cp >= 0xd800 && cp <= 0xdfff)) return {};
    return {cp, 3};
  }
  if ((b0 & 0xf8) == 0xf0) {
    if (!cont(i + 1) || !cont(i + 2) || !cont(i + 3)) return {};
    char32_t cp = ((b0 & 0x07) << 18) | ((byte(i + 1) & 0x3f) << 12) |
                  ((byte(i + 2) & 0x3f) << 6) | (byte(i + 3) & 0x3f);
    if (cp < 0x10000 || cp > 0x10ffff) return {};
    return {cp, 4};
  }
  return {};
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

// All code points, or nullopt if the string is not valid UTF-8.
inline std::optional<std::vector<char32_t>> decode_all(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    DecodeResult d = decode(s, i);
    if (d.length == 0) return std::nullopt;
    cps.push_back(d.cp);
    i += d.length;
  }
  return cps;
}

inline bool valid(std::string_view s) { return decode_all(s).has_value(); }

}  // namespace dialscore::utf8
