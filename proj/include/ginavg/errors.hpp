#pragma once

#include <stdexcept>
#include <string>

namespace ginavg {

// Raised when a computation fails numerically (non-finite integrand sample,
// singular normalization block, overflow in a ratio).  Precondition and
// usage violations raise std::invalid_argument instead.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ginavg
