#pragma once

// Retarded dyadic Green's functions of the displacement field.
//
// Values are in reduced units: the common factor hbar/eps0 is divided out,
// c = 1 and k = omega. Zero-separation values are further divided by the
// free-space scale hbar omega^3 / (6 pi eps0 c^3), so the vacuum value of the
// bulk part is exactly 1.
//
// The +i0 prescription is applied as omega^2 -> omega^2 (1 + i*shift), i.e.
// every k^2 in one evaluation carries the same small positive imaginary part.

#include <cmath>
#include <numbers>

#include "localfield/error.hpp"
#include "localfield/media.hpp"
#include "localfield/quadrature.hpp"
#include "localfield/types.hpp"

namespace localfield {

inline constexpr double kRetardedShift = 1e-8;

/// Regularisation is trusted while |q0| / Lambda stays below this.
inline constexpr double kValidityRatio = 0.1;

template <typename T>
struct DyadicGF {
  CMat3<T> tensor = CMat3<T>::Zero();
  Complex<T> delta_weight{0, 0};  // coefficient of delta(x) * 1 (coordinate space only)
};

template <typename T>
struct PQFactors {
  Complex<T> p;
  Complex<T> q;
};

/// P(z) = 1 - 1/z + 1/z^2 and Q(z) = -1 + 3/z - 3/z^2.
template <typename T>
PQFactors<T> pq_factors(const Complex<T>& z) {
  if (z == Complex<T>(0)) throw Error(ErrorKind::kZeroArgument, "pq_factors: z = 0");
  const Complex<T> inv = T(1) / z;
  return {T(1) - inv + inv * inv, T(-1) + T(3) * inv - T(3) * inv * inv};
}

namespace detail {

template <typename T>
Complex<T> retarded_k2(T omega, T shift) {
  return omega * omega * Complex<T>(T(1), shift);
}

template <typename T>
CMat3<T> outer(const Vec3<T>& v) {
  return (v * v.transpose()).template cast<Complex<T>>();
}

template <typename T>
void check_finite(const Vec3<T>& v, T omega, const char* who) {
  if (!v.allFinite() || !std::isfinite(omega)) throw Error(ErrorKind::kNonFinite, who);
}

}  // namespace detail

/// Free-space D0(q, omega+) = i [k^2/(k^2 - q^2) Delta_q + q q / q^2].
///
/// At q = 0 the longitudinal projector is replaced by its transverse limit,
/// giving i * 1.
template <typename T>
DyadicGF<T> d0_reciprocal(const Vec3<T>& q, T omega, T shift = T(kRetardedShift)) {
  detail::check_finite(q, omega, "d0_reciprocal");
  const Complex<T> i(0, 1);
  const Complex<T> k2 = detail::retarded_k2(omega, shift);
  const T q2 = q.squaredNorm();
  DyadicGF<T> g;
  if (q2 == T(0)) {
    g.tensor = i * CMat3<T>::Identity();
    return g;
  }
  if (k2 - q2 == Complex<T>(0)) throw Error(ErrorKind::kOnPole, "d0_reciprocal: q = k without shift");
  const CMat3<T> longitudinal = detail::outer<T>(q) / Complex<T>(q2);
  const CMat3<T> transverse = CMat3<T>::Identity() - longitudinal;
  g.tensor = i * (k2 / (k2 - q2) * transverse + longitudinal);
  return g;
}

/// Same Green's function from the matrix-inverse form i k^2 [k^2 1 - q^2 Delta_q]^-1.
template <typename T>
DyadicGF<T> d0_reciprocal_inverse_form(const Vec3<T>& q, T omega, T shift = T(kRetardedShift)) {
  detail::check_finite(q, omega, "d0_reciprocal_inverse_form");
  const Complex<T> i(0, 1);
  const Complex<T> k2 = detail::retarded_k2(omega, shift);
  const CMat3<T> q2_delta = Complex<T>(q.squaredNorm()) * CMat3<T>::Identity() - detail::outer<T>(q);
  const CMat3<T> m = k2 * CMat3<T>::Identity() - q2_delta;
  DyadicGF<T> g;
  g.tensor = i * k2 * m.inverse();
  return g;
}

/// Coordinate-space D0(x, omega+):
/// -i omega^2 e^{ikx} / (4 pi x) [P(ikx) 1 + Q(ikx) x x / x^2] + (i/3) delta(x) 1.
template <typename T>
DyadicGF<T> d0_coordinate(const Vec3<T>& x, T omega) {
  detail::check_finite(x, omega, "d0_coordinate");
  const T r = x.norm();
  if (r == T(0)) throw Error(ErrorKind::kZeroSeparation, "d0_coordinate: regular part at x = 0");
  const Complex<T> i(0, 1);
  const T kx = omega * r;
  const auto [p, qf] = pq_factors(Complex<T>(0, kx));
  const Complex<T> scale = -i * omega * omega * std::exp(i * kx) / (T(4) * kPi<T> * r);
  DyadicGF<T> g;
  g.tensor = scale * (p * CMat3<T>::Identity() + qf * detail::outer<T>(x) / Complex<T>(r * r));
  g.delta_weight = Complex<T>(0, T(1) / T(3));
  return g;
}

/// Local-field corrected F0 = D0 - (i/3) 1, i.e.
/// -i [(q^2/3 + 2k^2/3) 1 - q q] / (q^2 - k^2).
template <typename T>
DyadicGF<T> f0_reciprocal(const Vec3<T>& q, T omega, T shift = T(kRetardedShift)) {
  detail::check_finite(q, omega, "f0_reciprocal");
  const Complex<T> i(0, 1);
  const Complex<T> k2 = detail::retarded_k2(omega, shift);
  const T q2 = q.squaredNorm();
  const Complex<T> den = q2 - k2;
  if (den == Complex<T>(0)) throw Error(ErrorKind::kOnPole, "f0_reciprocal: q = k without shift");
  const Complex<T> a = q2 / T(3) + T(2) * k2 / T(3);
  DyadicGF<T> g;
  g.tensor = -i * (a * CMat3<T>::Identity() - detail::outer<T>(q)) / den;
  return g;
}

namespace detail {

template <typename T>
T medium_shift(const Complex<T>& n_alpha, T shift) {
  return n_alpha.imag() == T(0) ? shift : T(0);
}

template <typename T>
void check_dyson_denominators(const Complex<T>& den, const Complex<T>& b, T scale, const char* who) {
  if (std::abs(b) < T(kPoleGuard)) throw Error(ErrorKind::kOnPole, std::string(who) + ": 1 + 2 N alpha / 3 = 0");
  if (std::abs(den) <= T(64) * std::numeric_limits<T>::epsilon() * scale)
    throw Error(ErrorKind::kOnPole, std::string(who) + ": q on the real pole of a lossless medium");
}

}  // namespace detail

/// Closed-form solution of the local-field corrected Dyson equation,
/// F = F0 + i N alpha F0 F (reduced units), for a medium of polarisability N alpha.
///
/// The retarded shift is applied only when the medium is lossless (Im N alpha = 0).
template <typename T>
DyadicGF<T> f_dyadic(const Vec3<T>& q, T omega, const Complex<T>& n_alpha, T shift = T(kRetardedShift)) {
  detail::check_finite(q, omega, "f_dyadic");
  if (!detail::is_finite(n_alpha)) throw Error(ErrorKind::kNonFinite, "f_dyadic: N alpha");
  const Complex<T> i(0, 1);
  const Complex<T> k2 = detail::retarded_k2(omega, detail::medium_shift(n_alpha, shift));
  const T q2 = q.squaredNorm();
  const Complex<T> a = q2 / T(3) + T(2) * k2 / T(3);
  const Complex<T> b = T(1) + T(2) * n_alpha / T(3);
  const Complex<T> den = q2 - k2 - n_alpha * a;
  detail::check_dyson_denominators(den, b, q2 + std::abs(k2), "f_dyadic");
  DyadicGF<T> g;
  g.tensor = -i * (a * b * CMat3<T>::Identity() - detail::outer<T>(q)) / (den * b);
  return g;
}

template <typename T>
DyadicGF<T> f_dyadic(T q, T omega, const Complex<T>& n_alpha, T shift = T(kRetardedShift)) {
  return f_dyadic<T>(Vec3<T>(T(0), T(0), q), omega, n_alpha, shift);
}

/// Orientation average (1/3) tr F of the Dyson solution:
/// -(2i/3) [q^2 N alpha / 3 + k^2 (1 + 2 N alpha / 3)] / [(q^2 - k^2 - N alpha (q^2/3 + 2k^2/3)) (1 + 2 N alpha/3)].
template <typename T>
Complex<T> f_scalar(T q, T omega, const Complex<T>& n_alpha, T shift = T(kRetardedShift)) {
  if (!std::isfinite(q) || !std::isfinite(omega) || !detail::is_finite(n_alpha))
    throw Error(ErrorKind::kNonFinite, "f_scalar");
  const Complex<T> k2 = detail::retarded_k2(omega, detail::medium_shift(n_alpha, shift));
  const T q2 = q * q;
  const Complex<T> b = T(1) + T(2) * n_alpha / T(3);
  const Complex<T> den = q2 - k2 - n_alpha * (q2 / T(3) + T(2) * k2 / T(3));
  detail::check_dyson_denominators(den, b, q2 + std::abs(k2), "f_scalar");
  return Complex<T>(0, T(-2) / T(3)) * (q2 * n_alpha / T(3) + k2 * b) / (den * b);
}

/// q0^2 at which the Dyson denominator vanishes, from its coefficients:
/// q^2 (1 - N alpha/3) = k^2 (1 + 2 N alpha/3). No retarded shift.
template <typename T>
Complex<T> dyson_pole_squared(T omega, const Complex<T>& n_alpha) {
  const Complex<T> lead = T(1) - n_alpha / T(3);
  if (std::abs(lead) < T(kPoleGuard)) throw Error(ErrorKind::kPoleOfRelation, "dyson_pole_squared: N alpha = 3");
  return omega * omega * (T(1) + T(2) * n_alpha / T(3)) / lead;
}

/// Pole q0 with Im q0 >= 0 for passive media.
template <typename T>
Complex<T> dyson_pole(T omega, const Complex<T>& n_alpha) {
  return refractive_index(dyson_pole_squared(omega, n_alpha));
}

/// Quartic momentum cutoff Lambda^4 / (q^4 + Lambda^4).
///
/// Lambda is stored in units of k; R = k / (sqrt(2) Lambda) is always derived.
class RegularizationParams {
 public:
  static RegularizationParams from_lambda(double lambda_over_k) {
    if (!(std::isfinite(lambda_over_k) && lambda_over_k > 0.0))
      throw Error(ErrorKind::kInvalidArgument, "RegularizationParams: Lambda must be > 0");
    return RegularizationParams(lambda_over_k);
  }
  static RegularizationParams from_r(double r) {
    if (!(std::isfinite(r) && r > 0.0)) throw Error(ErrorKind::kInvalidArgument, "RegularizationParams: R must be > 0");
    return RegularizationParams(1.0 / (std::numbers::sqrt2 * r));
  }

  double lambda() const { return lambda_; }
  double r_param() const { return 1.0 / (std::numbers::sqrt2 * lambda_); }

  /// |q0| / Lambda for a medium of permittivity eps (both in units of k).
  double pole_ratio(const cdouble& eps) const { return std::abs(refractive_index(eps)) / lambda_; }
  bool valid_for(const cdouble& eps) const { return pole_ratio(eps) <= kValidityRatio; }

 private:
  explicit RegularizationParams(double lambda) : lambda_(lambda) {}
  double lambda_;
};

template <typename T>
T cutoff_factor(T q, T lambda_abs) {
  const T q4 = q * q * q * q;
  const T l4 = lambda_abs * lambda_abs * lambda_abs * lambda_abs;
  return l4 / (q4 + l4);
}

/// F~(q) = F(q) Lambda^4 / (q^4 + Lambda^4) with Lambda = reg.lambda() * k.
template <typename T>
Complex<T> f_regularized(T q, T omega, const Complex<T>& n_alpha, const RegularizationParams& reg,
                         T shift = T(kRetardedShift)) {
  return f_scalar(q, omega, n_alpha, shift) * cutoff_factor(q, T(reg.lambda()) * std::abs(omega));
}

/// Which coefficients multiply the 1/R and 1/R^3 near-field terms.
enum class NearFieldForm {
  /// Large-Lambda asymptote of the quartic-cutoff integral:
  /// L^2 / (2R) + L (eps - 1) / (12 eps R^3).
  kAsymptotic,
  /// Commonly quoted coefficients: L^2 / R + (2/3) L (eps - 1) / R^3.
  /// Kept for comparison; it does not reproduce the cutoff integral.
  kLiterature,
};

/// Zero-separation value split as bulk - i (r1 / R + r3 / R^3).
template <typename T>
struct ZeroSeparationTerms {
  Complex<T> bulk;
  Complex<T> r1;
  Complex<T> r3;

  Complex<T> value(T r) const { return bulk - Complex<T>(0, 1) * (r1 / r + r3 / (r * r * r)); }
};

/// bulk = sqrt(eps) ((eps + 2)/3)^2, with sqrt(eps) from refractive_index.
template <typename T>
ZeroSeparationTerms<T> zero_separation_terms(const Complex<T>& eps, NearFieldForm form = NearFieldForm::kAsymptotic) {
  if (!detail::is_finite(eps)) throw Error(ErrorKind::kNonFinite, "zero_separation_terms: eps");
  const Complex<T> lf = (eps + T(2)) / T(3);
  ZeroSeparationTerms<T> t;
  t.bulk = refractive_index(eps) * lf * lf;
  if (form == NearFieldForm::kLiterature) {
    t.r1 = lf * lf;
    t.r3 = T(2) / T(3) * lf * (eps - T(1));
  } else {
    t.r1 = lf * lf / T(2);
    // eps = 0 is the longitudinal resonance of the Dyson solution.
    if (eps == Complex<T>(0)) throw Error(ErrorKind::kOnPole, "zero_separation_terms: eps = 0");
    t.r3 = lf * (eps - T(1)) / (T(12) * eps);
  }
  return t;
}

enum class ValidityPolicy { kThrow, kWarn };

/// F~(x = 0, omega+) in units of hbar omega^3 / (6 pi eps0 c^3).
cdouble f_zero_closed_form(const cdouble& eps, const RegularizationParams& reg,
                           NearFieldForm form = NearFieldForm::kAsymptotic,
                           ValidityPolicy policy = ValidityPolicy::kThrow);

struct ZeroSeparationQuadrature {
  cdouble value;
  double error;
  int evaluations;
};

/// F~(x = 0) = (1/2 pi^2) Int_0^inf q^2 F~(q) dq, integrated numerically and
/// returned in the same units as f_zero_closed_form. The medium must be passive;
/// for a lossless medium the pole is resolved through the +i0 shift.
ZeroSeparationQuadrature f_zero_quadrature(double omega, const cdouble& n_alpha, const RegularizationParams& reg,
                                           double rel_tol = 1e-8);

}  // namespace localfield
