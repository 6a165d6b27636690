#pragma once

#include <stdexcept>
#include <string>

namespace densevec {

/// Base of every error thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroDenominatorError : Error {
  explicit ZeroDenominatorError(const std::string& what = "division by zero")
      : Error(what) {}
};

struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& what = "dimension mismatch")
      : Error(what) {}
};

/// Raised by the text front-end; carries a 1-based source position.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& what, int line_, int column_)
      : Error(what + " at " + std::to_string(line_) + ":" + std::to_string(column_)),
        line(line_),
        column(column_) {}
};

struct UnboundVariableError : Error {
  explicit UnboundVariableError(const std::string& name)
      : Error("unbound variable: " + name) {}
};

struct QuantifierInDnfInputError : Error {
  QuantifierInDnfInputError() : Error("DNF input must be quantifier-free") {}
};

struct NotLinearizedError : Error {
  explicit NotLinearizedError(const std::string& what = "literal not in linear normal form")
      : Error(what) {}
};

struct NotQuantifierFreeError : Error {
  explicit NotQuantifierFreeError(const std::string& what = "formula must be quantifier-free")
      : Error(what) {}
};

struct FreeVariablesError : Error {
  explicit FreeVariablesError(const std::string& name)
      : Error("sentence has free variable: " + name) {}
};

struct DependentDirectionsError : Error {
  DependentDirectionsError() : Error("directions are Q-linearly dependent") {}
};

struct EmptyBoxError : Error {
  EmptyBoxError() : Error("box is empty (needs rational endpoints a < b)") {}
};

struct UnknownSymbolError : Error {
  explicit UnknownSymbolError(const std::string& name)
      : Error("unknown symbol: " + name) {}
};

struct ArityMismatchError : Error {
  explicit ArityMismatchError(const std::string& what = "arity mismatch") : Error(what) {}
};

struct MalformedThetaError : Error {
  explicit MalformedThetaError(const std::string& what = "malformed theta") : Error(what) {}
};

struct MissingAssignmentError : Error {
  explicit MissingAssignmentError(const std::string& what = "missing Skolem assignment")
      : Error(what) {}
};

}  // namespace densevec
