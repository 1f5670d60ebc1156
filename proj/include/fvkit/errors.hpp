// Error types shared across the library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fv {

// Structurally invalid serialized input (vault record, model document, CSV).
// `offset` is a byte offset for binary inputs and a 1-based line number for
// text inputs.
class FormatError : public std::runtime_error {
  public:
    FormatError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

}  // namespace fv
