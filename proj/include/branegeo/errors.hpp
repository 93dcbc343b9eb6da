#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace branegeo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SignatureMismatch : Error {
  SignatureMismatch() : Error("signature mismatch") {}
};

struct GradeOutOfRange : Error {
  explicit GradeOutOfRange(int r) : Error("grade out of range: " + std::to_string(r)), grade(r) {}
  int grade;
};

struct NotOrthonormal : Error {
  using Error::Error;
};

// Positions are 1-based character offsets into the source text.
struct SyntaxError : Error {
  SyntaxError(std::size_t pos, std::string exp)
      : Error("syntax error at position " + std::to_string(pos) + ": expected " + exp),
        position(pos), expected(std::move(exp)) {}
  std::size_t position;
  std::string expected;
};

struct UnknownIdentifier : Error {
  UnknownIdentifier(std::string n, std::size_t pos)
      : Error("unknown identifier '" + n + "' at position " + std::to_string(pos)),
        name(std::move(n)), position(pos) {}
  std::string name;
  std::size_t position;
};

struct DomainError : Error {
  using Error::Error;
};

// Raised when a quantity needs more Taylor orders than the jets carry.
struct InsufficientJetOrder : Error {
  using Error::Error;
  InsufficientJetOrder() : Error("insufficient jet order") {}
};

struct DegenerateTangent : Error {
  using Error::Error;
};

struct IsotropicDirection : Error {
  using Error::Error;
};

struct NotTangent : Error {
  using Error::Error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

// Manifest problems carry the 1-based line of the offending entry (0 if global).
struct ManifestError : Error {
  ManifestError(std::string kind_, std::size_t line_, const std::string& msg)
      : Error(kind_ + " (line " + std::to_string(line_) + "): " + msg), kind(std::move(kind_)), line(line_) {}
  std::string kind;
  std::size_t line;
};

}  // namespace branegeo
