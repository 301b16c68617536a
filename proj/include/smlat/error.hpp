#pragma once

#include <stdexcept>
#include <string>

namespace smlat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed instance or matching text. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Well-formed input that violates an instance invariant (e.g. a list that is
// not a permutation). The message names the offending agent.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotAMatching : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class WorkerListsDiffer : public Error {
 public:
  using Error::Error;
};

class NotOneN : public Error {
 public:
  using Error::Error;
};

class NotZeroN : public Error {
 public:
  using Error::Error;
};

class NotExposed : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NotASublattice : public Error {
 public:
  using Error::Error;
};

class BoundaryTheta : public Error {
 public:
  using Error::Error;
};

class FixtureMismatch : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace smlat
