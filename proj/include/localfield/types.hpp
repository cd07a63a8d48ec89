#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace localfield {

template <typename T>
using Complex = std::complex<T>;

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;

template <typename T>
using Mat3 = Eigen::Matrix<T, 3, 3>;

template <typename T>
using CMat3 = Eigen::Matrix<Complex<T>, 3, 3>;

using cdouble = Complex<double>;

template <typename T>
inline constexpr T kPi = std::numbers::pi_v<T>;

// Reduced units used throughout the library:
//  - c = 1 and frequencies are measured in a reference frequency omega_ref,
//    so the vacuum wavenumber is k = omega;
//  - Green's-function values are stored divided by hbar/eps0;
//  - zero-separation values are stored divided by hbar omega^3 / (6 pi eps0 c^3);
//  - rates are reported as Gamma/Gamma0 and shifts as h/Gamma0;
//  - densities are rho = N / k^3.

namespace detail {

template <typename T>
bool is_finite(const Complex<T>& z) {
  using std::isfinite;
  return isfinite(z.real()) && isfinite(z.imag());
}

}  // namespace detail

}  // namespace localfield
