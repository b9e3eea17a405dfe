#pragma once

#include <stdexcept>
#include <string>

namespace btkit {

// All toolkit errors carry a single-line message suitable for CLI output.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &message) : std::runtime_error(message) {}
};

} // namespace btkit
