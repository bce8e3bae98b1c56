#pragma once

#include <stdexcept>
#include <string>

namespace opmatch {

// Error categories map onto CLI exit codes (see tools/opmatch.cpp).
enum class ErrorKind {
  structural,      // malformed indices, dimension mismatch
  contract,        // caller violated a documented precondition
  config,          // bad parameter combination or value
  validation,      // bad input data
  parse,           // malformed file contents
  size_limit,      // instance larger than a search cap
  capacity,        // generator cannot satisfy parameters
  empty_sample,    // sampling produced an empty dataset; retry with a new seed
  undefined_metric // metric has a zero denominator
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define OPMATCH_DEFINE_ERROR(Name, Kind)                          \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(Kind, what) {} \
  };

OPMATCH_DEFINE_ERROR(StructuralError, ErrorKind::structural)
OPMATCH_DEFINE_ERROR(ContractViolation, ErrorKind::contract)
OPMATCH_DEFINE_ERROR(ConfigError, ErrorKind::config)
OPMATCH_DEFINE_ERROR(ValidationError, ErrorKind::validation)
OPMATCH_DEFINE_ERROR(SizeLimitError, ErrorKind::size_limit)
OPMATCH_DEFINE_ERROR(CapacityError, ErrorKind::capacity)
OPMATCH_DEFINE_ERROR(EmptySampleError, ErrorKind::empty_sample)
OPMATCH_DEFINE_ERROR(UndefinedMetric, ErrorKind::undefined_metric)

#undef OPMATCH_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace opmatch
