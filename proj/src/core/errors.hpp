#pragma once

#include <stdexcept>
#include <string>

namespace mtlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// kernel or operator evaluated at a singular pair (x = z style)
struct SingularPoint : Error {
  using Error::Error;
};

// root bracket with f_lo * f_hi > 0
struct NoSignChange : Error {
  using Error::Error;
};

// argument outside a function's mathematical domain
struct DomainError : Error {
  using Error::Error;
};

// n outside the supported range for the requested operation
struct UnsupportedDimension : Error {
  using Error::Error;
};

// malformed parameter (orders, tolerances, boxes, ...)
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace mtlab
