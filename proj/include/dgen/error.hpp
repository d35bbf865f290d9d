#pragma once

#include <stdexcept>
#include <string>

namespace dgen {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file or stream; the message carries line/record context.
struct ParseError : Error {
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Predictor or service failure.
struct TransportError : Error {
  using Error::Error;
};

}  // namespace dgen
