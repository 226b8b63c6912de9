#pragma once

#include <stdexcept>
#include <string>

namespace nfb {

// File-system problems (missing paths, unwritable outputs).
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Measured quantities failed a numeric check that the caller asked to be
// enforced (certification failures, verification failures).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nfb
