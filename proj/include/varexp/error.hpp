#pragma once

#include <stdexcept>
#include <string>

namespace varexp {

// Raised for violated preconditions and numerical failures of library operations.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace varexp
