#pragma once

#include <stdexcept>
#include <string>

namespace seqvpr {

/// Raised for malformed inputs and I/O failures (unreadable files, bad
/// formats, inconsistent data). Precondition violations on arguments use
/// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqvpr
