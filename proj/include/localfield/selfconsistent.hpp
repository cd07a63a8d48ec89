#pragma once

// Self-consistent rate and shift for a dense gas of identical two-level atoms.
//
// The medium atoms have the same linewidth Gamma and the same shifted
// resonance as the probe, so (Gamma, h) -> N alpha -> eps -> (Gamma, h) is
// iterated to a fixed point with damped mixing.

#include <optional>
#include <string>
#include <vector>

#include "localfield/media.hpp"
#include "localfield/rates.hpp"

namespace localfield {

struct SelfConsistentProblem {
  /// rho, w and the initial linewidth gamma_total (in Gamma0) of the medium.
  TwoLevelResonantModel model;
  /// Probe frequency minus the bare medium resonance, in Gamma0.
  double detuning = 0.0;
  /// Feed the 1/R and 1/R^3 terms (vacuum-subtracted shift) into the loop.
  bool include_nn = false;
  RegularizationParams reg = RegularizationParams::from_r(0.05);
  NearFieldForm form = NearFieldForm::kAsymptotic;
  double mixing = 0.5;
  double tol = 1e-10;
  int max_iter = 500;

  void validate() const;
};

struct FixedPointIterate {
  double gamma;
  double h;
  cdouble eps;
};

struct FixedPointTrace {
  std::vector<FixedPointIterate> iterates;
  bool converged = false;
  double residual = 0.0;  // max-norm of G(x) - x at the returned point
};

struct SelfConsistentResult {
  RateBreakdown<double> rates;
  cdouble eps;
  FixedPointTrace trace;

  double gamma() const { return trace.iterates.back().gamma; }
  double h() const { return trace.iterates.back().h; }
  int iterations() const { return static_cast<int>(trace.iterates.size()); }
};

/// One evaluation of the update map at (gamma, h); returns the new rates and eps.
struct UpdateMapValue {
  RateBreakdown<double> rates;
  cdouble n_alpha;
  cdouble eps;
  double gamma;
  double h;
};
UpdateMapValue evaluate_update_map(const SelfConsistentProblem& p, double gamma, double h);

/// Damped iteration x <- (1 - beta) x + beta G(x) from (gamma_total, 0).
/// Returns the last iterate x with |G(x) - x| <= tol when converged; on
/// nonconvergence the trace is returned with converged = false. Hitting the
/// Lorentz-Lorenz pole throws kLocalFieldResonance.
SelfConsistentResult solve_fixed_point(const SelfConsistentProblem& p);

struct SweepRow {
  double rho;
  double gamma;
  double h;
  cdouble eps;
  int iterations;
  bool converged;
  std::optional<std::string> error;
};

/// Solves one problem per density. Points run concurrently; rows follow the
/// order of `rho_grid` and failures are recorded per row.
std::vector<SweepRow> density_sweep(const SelfConsistentProblem& p, const std::vector<double>& rho_grid,
                                    unsigned threads = 0);

}  // namespace localfield
