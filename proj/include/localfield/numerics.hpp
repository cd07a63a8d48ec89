#pragma once

// Kramers-Kronig residuals, the local-field causality discriminator and
// low-density series extraction. Adaptive quadrature lives in quadrature.hpp.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "localfield/media.hpp"
#include "localfield/quadrature.hpp"
#include "localfield/rates.hpp"

namespace localfield {

/// Uniform frequency grid [omega_min, omega_max] with `count` nodes.
struct FrequencyGrid {
  double omega_min = 0.0;
  double omega_max = 1.0;
  std::size_t count = 2;

  double step() const { return (omega_max - omega_min) / static_cast<double>(count - 1); }
  double at(std::size_t i) const { return omega_min + step() * static_cast<double>(i); }
  std::vector<double> nodes() const;
  void validate(std::size_t min_count = 2) const;
};

struct SampledResponse {
  FrequencyGrid grid;
  std::vector<cdouble> values;
};

/// Minimum node count accepted by the Kramers-Kronig operations.
inline constexpr std::size_t kMinKKPoints = 256;

/// Discrete principal-value Hilbert transform (1/pi) PV Int f(w')/(w' - w) dw'
/// of uniformly spaced samples, exact for the piecewise-linear interpolant on
/// the grid. The result does not depend on the grid step. Values at the two
/// end nodes carry the truncation's log singularity and should be ignored.
std::vector<double> hilbert_transform(std::span<const double> samples);

struct KKReport {
  double residual_rms = 0.0;
  double residual_max = 0.0;
  double peak = 0.0;  // max |g - g_inf| over the grid
  cdouble subtracted_asymptote{};

  double relative_rms() const { return peak > 0.0 ? residual_rms / peak : 0.0; }
};

/// Mismatch between Re(g - g_inf) and the Hilbert transform of Im(g - g_inf),
/// i.e. how far g is from the boundary value of a function analytic in the
/// upper half plane. The end nodes are excluded from the statistics.
///
/// `asymptote` defaults to the mean of the two edge samples. Throws
/// kInsufficientDecay when an edge sample of |g - g_inf| exceeds 1% of the peak.
KKReport hilbert_residual(const SampledResponse& g, std::optional<cdouble> asymptote = std::nullopt);

/// C(omega) = sqrt(eps) * factor(eps) - 1 on the grid. Negative frequencies
/// are filled by the reality condition C(-omega) = conj(C(omega)).
SampledResponse sample_bulk_response(const LorentzOscillatorModel& model, const FrequencyGrid& grid,
                                     LocalFieldFactor factor);

struct CausalityReport {
  KKReport square;
  KKReport absolute_square;

  double separation() const {
    return square.residual_rms > 0.0 ? absolute_square.residual_rms / square.residual_rms : 0.0;
  }
};

/// KK residuals of the bulk emission factor built with the squared and with
/// the absolute-squared Lorentz factor. Only the bulk term is tested. The
/// grid must contain the resonance with 10 linewidths to spare.
CausalityReport causality_discriminator(const LorentzOscillatorModel& model, const FrequencyGrid& grid);

struct SeriesCoefficients {
  double c1 = 0.0;  // f'(0)
  double c2 = 0.0;  // f''(0) / 2
  double spread = 0.0;  // last Richardson tier change, relative to the coefficient scale
  bool reliable = true;
};

/// Central differences at steps h, h/2, ... with Richardson extrapolation.
/// `reliable` is cleared when the last two tiers disagree by more than 1e-4.
SeriesCoefficients extract_series_coefficients(const std::function<double(double)>& f, double step = 0.05,
                                                int levels = 4);

}  // namespace localfield
