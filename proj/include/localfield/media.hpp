#pragma once

// Dielectric media: the dimensionless polarisability N*alpha(omega) and the
// complex permittivity eps(omega), connected by the Lorentz-Lorenz relation.

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "localfield/error.hpp"
#include "localfield/types.hpp"

namespace localfield {

/// Absolute tolerance of the guards on |N alpha - 3| and |eps + 2|.
inline constexpr double kPoleGuard = 1e-9;

/// eps = 1 + N alpha / (1 - N alpha / 3).
template <typename T>
Complex<T> lorentz_lorenz(const Complex<T>& n_alpha) {
  if (!detail::is_finite(n_alpha)) throw Error(ErrorKind::kNonFinite, "lorentz_lorenz: N alpha");
  if (std::abs(n_alpha - T(3)) < T(kPoleGuard))
    throw Error(ErrorKind::kPoleOfRelation, "lorentz_lorenz: N alpha = 3");
  return T(1) + n_alpha / (T(1) - n_alpha / T(3));
}

/// N alpha = 3 (eps - 1) / (eps + 2).
template <typename T>
Complex<T> inverse_lorentz_lorenz(const Complex<T>& eps) {
  if (!detail::is_finite(eps)) throw Error(ErrorKind::kNonFinite, "inverse_lorentz_lorenz: eps");
  if (std::abs(eps + T(2)) < T(kPoleGuard))
    throw Error(ErrorKind::kLocalFieldResonance, "inverse_lorentz_lorenz: eps = -2");
  return T(3) * (eps - T(1)) / (eps + T(2));
}

/// Complex refractive index n = sqrt(eps) on the passive branch.
///
/// Principal root (Re n >= 0), so Im n >= 0 whenever Im eps >= 0 and n -> 1 as
/// eps -> 1 for gain media as well. A negative real eps maps to +i sqrt(-eps)
/// regardless of the sign of the zero imaginary part.
template <typename T>
Complex<T> refractive_index(const Complex<T>& eps) {
  if (eps.imag() == T(0) && eps.real() < T(0)) return {T(0), std::sqrt(-eps.real())};
  return std::sqrt(eps);
}

/// Single Lorentz oscillator, eps = 1 + fp / (omega0^2 - omega^2 - i gamma omega).
struct LorentzOscillatorModel {
  double omega0 = 1.0;
  double gamma = 0.0;
  double fp = 0.0;

  void validate() const;
  cdouble permittivity(double omega) const {
    return 1.0 + fp / cdouble(omega0 * omega0 - omega * omega, -gamma * omega);
  }
};

/// Radiatively broadened two-level medium.
///
/// N alpha = -w * 6 pi rho * (gamma/2) / (Delta + i gamma/2), with Delta and
/// gamma in units of the free-space rate Gamma0. `gamma0_ref` is Gamma0
/// expressed in units of omega_ref and converts omega - omega0 to Delta.
/// w is the population difference (ground minus excited).
struct TwoLevelResonantModel {
  double rho = 0.0;
  double w = 1.0;
  double gamma_total = 1.0;
  double omega0 = 1.0;
  double gamma0_ref = 1.0;

  void validate() const;
  cdouble n_alpha_at_detuning(double detuning) const;
  cdouble n_alpha(double omega) const { return n_alpha_at_detuning((omega - omega0) / gamma0_ref); }
};

/// Two-level polarisability for explicit linewidth and detuning (both in Gamma0).
cdouble two_level_n_alpha(double rho, double w, double gamma, double detuning);

/// Linear interpolation of a sampled complex response; no extrapolation.
class TabulatedResponse {
 public:
  TabulatedResponse() = default;
  TabulatedResponse(std::vector<double> omega, std::vector<cdouble> values);

  cdouble at(double omega) const;
  double omega_min() const { return omega_.front(); }
  double omega_max() const { return omega_.back(); }
  std::size_t size() const { return omega_.size(); }
  const std::vector<double>& omega() const { return omega_; }
  const std::vector<cdouble>& values() const { return values_; }

 private:
  std::vector<double> omega_;
  std::vector<cdouble> values_;
};

/// Parse a three-column CSV (`omega,<re>,<im>`) whose header must equal `header`.
TabulatedResponse read_response_csv(std::istream& in, const std::string& header);

struct TabulatedPermittivity {
  static constexpr const char* kHeader = "omega,re_eps,im_eps";
  TabulatedResponse table;

  static TabulatedPermittivity from_csv(std::istream& in);
  static TabulatedPermittivity from_file(const std::filesystem::path& path);
};

struct TabulatedNAlpha {
  static constexpr const char* kHeader = "omega,re_nalpha,im_nalpha";
  TabulatedResponse table;

  static TabulatedNAlpha from_csv(std::istream& in);
  static TabulatedNAlpha from_file(const std::filesystem::path& path);
};

using PolarizabilityModel =
    std::variant<LorentzOscillatorModel, TwoLevelResonantModel, TabulatedPermittivity, TabulatedNAlpha>;

/// N alpha(omega) for any model; permittivity-based models go through the
/// inverse Lorentz-Lorenz map.
cdouble n_alpha(const PolarizabilityModel& model, double omega);

/// eps(omega) for any model; polarisability-based models go through Lorentz-Lorenz.
cdouble permittivity(const PolarizabilityModel& model, double omega);

}  // namespace localfield
