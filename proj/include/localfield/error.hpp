#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace localfield {

enum class ErrorKind {
  kInvalidArgument,
  kNonFinite,
  kPoleOfRelation,       // N alpha hits the Lorentz-Lorenz pole (N alpha = 3)
  kLocalFieldResonance,  // eps = -2
  kOutOfRange,           // tabulated query outside the table
  kZeroArgument,
  kZeroSeparation,
  kOnPole,               // Green's function evaluated on a real pole
  kOutsideValidity,      // |q0| / Lambda above the regularisation threshold
  kLosslessMedium,
  kNonConvergentQuadrature,
  kInsufficientDecay,
  kParse,
  kIo,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNonFinite: return "non-finite";
    case ErrorKind::kPoleOfRelation: return "pole-of-relation";
    case ErrorKind::kLocalFieldResonance: return "local-field-resonance";
    case ErrorKind::kOutOfRange: return "out-of-range";
    case ErrorKind::kZeroArgument: return "zero-argument";
    case ErrorKind::kZeroSeparation: return "zero-separation";
    case ErrorKind::kOnPole: return "on-pole";
    case ErrorKind::kOutsideValidity: return "outside-validity";
    case ErrorKind::kLosslessMedium: return "lossless-medium";
    case ErrorKind::kNonConvergentQuadrature: return "nonconvergent-quadrature";
    case ErrorKind::kInsufficientDecay: return "insufficient-decay";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kIo: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace localfield
