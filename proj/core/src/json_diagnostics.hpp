#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace semem::detail {

// "line L, column C" for a 1-based byte offset as reported by nlohmann::json.
inline std::string describe_position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t end = byte == 0 ? 0 : byte - 1;
  for (std::size_t i = 0; i < end && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace semem::detail
