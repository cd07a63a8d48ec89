#pragma once

// Decay rates and excited-state level shifts of a probe dipole in a
// dielectric, in units of the free-space rate Gamma0. A positive shift is a
// blue shift of the transition.

#include "localfield/green.hpp"
#include "localfield/types.hpp"

namespace localfield {

/// Rate and shift split into the bulk and the 1/R, 1/R^3 near-field parts.
template <typename T>
struct RateBreakdown {
  T gamma_bulk{};
  T gamma_r1{};
  T gamma_r3{};
  T h_bulk{};
  T h_r1{};
  T h_r3{};
  T r_used{};
  bool valid = true;  // |q0| / Lambda within the regularisation threshold

  T gamma_total() const { return gamma_bulk + gamma_r1 + gamma_r3; }
  T h_total() const { return h_bulk + h_r1 + h_r3; }
};

/// Gamma/Gamma0 = Re F~(0), h/Gamma0 = Im F~(0) / 2, term by term.
template <typename T>
RateBreakdown<T> gamma_h(const Complex<T>& eps, const RegularizationParams& reg,
                         NearFieldForm form = NearFieldForm::kAsymptotic) {
  const auto t = zero_separation_terms(eps, form);
  const T r = T(reg.r_param());
  const T r3 = r * r * r;
  RateBreakdown<T> b;
  b.gamma_bulk = t.bulk.real();
  b.gamma_r1 = t.r1.imag() / r;
  b.gamma_r3 = t.r3.imag() / r3;
  b.h_bulk = t.bulk.imag() / T(2);
  b.h_r1 = -t.r1.real() / (T(2) * r);
  b.h_r3 = -t.r3.real() / (T(2) * r3);
  b.r_used = r;
  b.valid = reg.valid_for(cdouble(eps));
  return b;
}

/// gamma_h with the vacuum (eps = 1) shift removed; rates are untouched
/// because the vacuum near-field rate terms vanish.
template <typename T>
RateBreakdown<T> gamma_h_vacuum_subtracted(const Complex<T>& eps, const RegularizationParams& reg,
                                           NearFieldForm form = NearFieldForm::kAsymptotic) {
  auto b = gamma_h(eps, reg, form);
  const auto vac = gamma_h(Complex<T>(1), reg, form);
  b.h_bulk -= vac.h_bulk;
  b.h_r1 -= vac.h_r1;
  b.h_r3 -= vac.h_r3;
  return b;
}

enum class LocalFieldFactor {
  kSquare,          // ((eps + 2)/3)^2
  kAbsoluteSquare,  // |(eps + 2)/3|^2
};

/// sqrt(eps) times the squared or absolute-squared Lorentz factor.
template <typename T>
Complex<T> bulk_emission_factor(const Complex<T>& eps, LocalFieldFactor factor = LocalFieldFactor::kSquare) {
  const Complex<T> lf = (eps + T(2)) / T(3);
  const Complex<T> sq = factor == LocalFieldFactor::kSquare ? lf * lf : Complex<T>(std::norm(lf));
  return refractive_index(eps) * sq;
}

// Reference formulas for an emitter in a homogeneous dielectric.

template <typename T>
T gamma_nienhuis(T n) {
  return n;
}

template <typename T>
T gamma_virtual(T n) {
  const T lf = (n * n + T(2)) / T(3);
  return n * lf * lf;
}

template <typename T>
T gamma_empty(T n) {
  const T f = T(3) * n * n / (T(2) * n * n + T(1));
  return n * f * f;
}

/// n' |(n^2 + 2)/3|^2.
template <typename T>
T gamma_barnett(const Complex<T>& n) {
  return n.real() * std::norm((n * n + T(2)) / T(3));
}

struct FormulaComparison {
  double nienhuis;
  double virtual_cavity;
  double empty_cavity;
  double barnett;
  double local_field_bulk;
};

/// All reference formulas at refractive index n; the lossless formulas use Re n.
FormulaComparison compare_formulas(const cdouble& n);

struct DensityExpansion {
  double gamma;
  double h;
  bool within_radius;  // |alpha N| <= 0.5
};

/// Low-density series of the bulk rate and shift,
/// Gamma/Gamma0 = 1 + 7/6 a' + 17/24 (a'^2 - a''^2), h/Gamma0 = (7/6 a'' + 17/12 a' a'')/2,
/// with a = alpha N, truncated at `order` (1 or 2).
DensityExpansion density_expansion(const cdouble& alpha, double n_density, int order = 2);

/// Electric-dipole transition in SI units.
struct DipoleTransition {
  double dipole;  // C m
  double omega;   // rad / s
};

/// Free-space rate wp^2 omega^3 / (3 pi hbar eps0 c^3), in 1/s.
double gamma0(const DipoleTransition& t);

template <typename T>
struct RateMatrices {
  Mat3<T> gamma;
  Mat3<T> shift;
};

/// Gamma_mn = 2 wp_m wp_n Re D_mn(0), h_mn = wp_m wp_n Im D_mn(0) (hbar = 1).
template <typename T>
RateMatrices<T> rates_from_gf(const DyadicGF<T>& at_origin, const Vec3<T>& dipole) {
  const Mat3<T> pp = dipole * dipole.transpose();
  return {T(2) * pp.cwiseProduct(at_origin.tensor.real()), pp.cwiseProduct(at_origin.tensor.imag())};
}

}  // namespace localfield
