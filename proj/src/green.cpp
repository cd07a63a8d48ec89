#include "localfield/green.hpp"

#include <iostream>
#include <vector>

namespace localfield {

cdouble f_zero_closed_form(const cdouble& eps, const RegularizationParams& reg, NearFieldForm form,
                           ValidityPolicy policy) {
  if (!reg.valid_for(eps)) {
    const std::string msg = "|q0|/Lambda = " + std::to_string(reg.pole_ratio(eps)) + " exceeds " +
                            std::to_string(kValidityRatio);
    if (policy == ValidityPolicy::kThrow) throw Error(ErrorKind::kOutsideValidity, "f_zero_closed_form: " + msg);
    std::clog << "warning: f_zero_closed_form: " << msg << '\n';
  }
  return zero_separation_terms(eps, form).value(reg.r_param());
}

ZeroSeparationQuadrature f_zero_quadrature(double omega, const cdouble& n_alpha, const RegularizationParams& reg,
                                           double rel_tol) {
  if (!(std::isfinite(omega) && omega > 0.0))
    throw Error(ErrorKind::kInvalidArgument, "f_zero_quadrature: omega must be > 0");
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "f_zero_quadrature: rel_tol must be > 0");
  const cdouble eps = lorentz_lorenz(n_alpha);
  if (eps.imag() < 0.0 || (eps.imag() == 0.0 && n_alpha.imag() != 0.0))
    throw Error(ErrorKind::kLosslessMedium, "f_zero_quadrature: needs a passive medium");

  const double k = omega;
  const double q0 = std::abs(dyson_pole(omega, n_alpha));
  const double lambda = reg.lambda() * k;

  // Panels split at the resonance peak near |q0| and at the cutoff knee.
  std::vector<double> cuts = {q0, 4.0 * q0, lambda, 4.0 * lambda};
  std::sort(cuts.begin(), cuts.end());
  std::vector<Panel> panels;
  double lo = 0.0;
  for (double c : cuts) {
    if (c > lo * (1.0 + 1e-12)) {
      panels.push_back({lo, c});
      lo = c;
    }
  }
  panels.push_back({lo, std::numeric_limits<double>::infinity()});

  auto integrand = [&](double q) { return q * q * f_regularized(q, omega, n_alpha, reg); };
  const auto r = integrate(integrand, panels, {.rel_tol = rel_tol, .abs_tol = 0.0, .max_subdivisions = 20000});

  // (1/2 pi^2) in front of the radial integral, divided by k^3 / (6 pi).
  const double scale = 3.0 / (kPi<double> * k * k * k);
  return {r.value * scale, r.error * scale, r.evaluations};
}

}  // namespace localfield
