#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed concrete syntax. `position` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Unbound variable, application of a non-arrow, argument mismatch.
class TypeError : public Error {
 public:
  using Error::Error;
};

// A symbol outside the closed vocabulary, or too many binders / too deep a path.
class VocabularyError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// The depth budget stranded the term generator; callers redraw.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Non-finite gradient or loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace stlc
