#pragma once

#include <stdexcept>
#include <string>

namespace tgfd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Anything raised while reading an input file or rule text.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownVariable : public ParseError {
 public:
  using ParseError::ParseError;
};

class InvalidDelta : public ParseError {
 public:
  using ParseError::ParseError;
};

class EmptyConsequent : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownVertex : public Error {
 public:
  explicit UnknownVertex(const std::string& id) : Error("unknown vertex '" + id + "'") {}
};

class DeleteMissingEdge : public Error {
 public:
  explicit DeleteMissingEdge(const std::string& edge) : Error("delete of missing edge " + edge) {}
};

class JobOutOfBounds : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class InsufficientPairs : public Error {
 public:
  using Error::Error;
};

}  // namespace tgfd
