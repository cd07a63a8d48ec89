#include "localfield/rates.hpp"

#include <cmath>

namespace localfield {

namespace {

// CODATA 2018.
constexpr double kHbar = 1.054571817e-34;
constexpr double kEps0 = 8.8541878128e-12;
constexpr double kC = 299792458.0;

}  // namespace

double gamma0(const DipoleTransition& t) {
  if (!(t.dipole >= 0.0) || !(t.omega > 0.0))
    throw Error(ErrorKind::kInvalidArgument, "gamma0: need dipole >= 0 and omega > 0");
  return t.dipole * t.dipole * t.omega * t.omega * t.omega / (3.0 * kPi<double> * kHbar * kEps0 * kC * kC * kC);
}

FormulaComparison compare_formulas(const cdouble& n) {
  if (!(n.real() > 0.0)) throw Error(ErrorKind::kInvalidArgument, "compare_formulas: Re n must be > 0");
  const double nr = n.real();
  const auto bulk = bulk_emission_factor(n * n);
  return {gamma_nienhuis(nr), gamma_virtual(nr), gamma_empty(nr), gamma_barnett(n), bulk.real()};
}

DensityExpansion density_expansion(const cdouble& alpha, double n_density, int order) {
  if (order != 1 && order != 2) throw Error(ErrorKind::kInvalidArgument, "density_expansion: order must be 1 or 2");
  const cdouble a = alpha * n_density;
  const double re = a.real();
  const double im = a.imag();
  DensityExpansion e{1.0 + 7.0 / 6.0 * re, 0.5 * (7.0 / 6.0 * im), std::abs(a) <= 0.5};
  if (order == 2) {
    e.gamma += 17.0 / 24.0 * (re * re - im * im);
    e.h += 0.5 * (17.0 / 12.0 * re * im);
  }
  return e;
}

}  // namespace localfield
