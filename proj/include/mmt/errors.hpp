#pragma once

#include <stdexcept>
#include <string>

namespace mmt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to a library call. `field` names the offending input.
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class OutOfRange : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class IncompatibleDilation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateConstruction : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InfeasibleConfig : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class QuadratureUnderresolved : public Error {
 public:
  using Error::Error;
};

}  // namespace mmt
