#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sisi {

enum class ErrorKind {
  NegativeParameter,
  InadmissibleParams,
  InvalidPoint,
  InvalidTensor,
  DegenerateRegime,
  NoInteriorPoint,
  NonConvergence,
  WrongRegime,
  DegenerateInput,
  RegimeUnsatisfiable,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeParameter: return "NegativeParameter";
    case ErrorKind::InadmissibleParams: return "InadmissibleParams";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidTensor: return "InvalidTensor";
    case ErrorKind::DegenerateRegime: return "DegenerateRegime";
    case ErrorKind::NoInteriorPoint: return "NoInteriorPoint";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::WrongRegime: return "WrongRegime";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::RegimeUnsatisfiable: return "RegimeUnsatisfiable";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sisi
