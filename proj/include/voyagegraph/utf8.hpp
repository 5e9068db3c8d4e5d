#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voyagegraph::utf8 {

/// Byte offset of each code point start, plus a final entry equal to the
/// byte length. Returns nullopt for malformed input.
inline std::optional<std::vector<std::size_t>> code_point_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    if (lead < 0x80) {
      len = 1;
    } else if ((lead & 0xE0) == 0xC0 && lead >= 0xC2) {
      len = 2;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
    } else if ((lead & 0xF8) == 0xF0 && lead <= 0xF4) {
      len = 4;
    } else {
      return std::nullopt;
    }
    if (i + len > text.size()) return std::nullopt;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return std::nullopt;
    }
    offsets.push_back(i);
    i += len;
  }
  offsets.push_back(text.size());
  return offsets;
}

inline std::size_t length(std::string_view text) {
  auto offsets = code_point_offsets(text);
  return offsets ? offsets->size() - 1 : 0;
}

/// Code-point slice [start, end). Caller guarantees valid bounds.
inline std::string slice(std::string_view text, std::size_t start, std::size_t end) {
  auto offsets = code_point_offsets(text);
  if (!offsets || start > end || end >= offsets->size()) return {};
  return std::string(text.substr((*offsets)[start], (*offsets)[end] - (*offsets)[start]));
}

}  // namespace voyagegraph::utf8
