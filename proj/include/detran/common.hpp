#pragma once

#include <stdexcept>
#include <string>

namespace detran {

inline constexpr const char* kVersion = "0.1.0";

/// Single exception type for all library failures; the message carries
/// the context (file, line number, token) the caller needs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace detran
