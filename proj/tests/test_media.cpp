#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "localfield/error.hpp"
#include "localfield/media.hpp"

using namespace localfield;
using doctest::Approx;

namespace {

double rel_err(cdouble a, cdouble b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected localfield::Error");
  return ErrorKind::kInvalidArgument;
}

}  // namespace

TEST_CASE("lorentz_lorenz: fixed points") {
  CHECK(lorentz_lorenz(cdouble(0.0)) == cdouble(1.0));
  CHECK(rel_err(lorentz_lorenz(cdouble(0.3)), cdouble(4.0 / 3.0)) < 1e-15);
  CHECK(kind_of([] { lorentz_lorenz(cdouble(3.0)); }) == ErrorKind::kPoleOfRelation);
}

TEST_CASE("inverse_lorentz_lorenz: fixed points") {
  CHECK(inverse_lorentz_lorenz(cdouble(1.0)) == cdouble(0.0));
  CHECK(std::abs(inverse_lorentz_lorenz(cdouble(4.0 / 3.0)) - 0.3) < 1e-15);
  CHECK(kind_of([] { inverse_lorentz_lorenz(cdouble(-2.0)); }) == ErrorKind::kLocalFieldResonance);
}

TEST_CASE("Lorentz-Lorenz inverse pair round trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  int tested = 0;
  while (tested < 2000) {
    const cdouble eps(u(rng), u(rng));
    if (std::abs(eps + 2.0) < 1e-6) continue;
    ++tested;
    CHECK(rel_err(lorentz_lorenz(inverse_lorentz_lorenz(eps)), eps) < 1e-12);
  }
}

TEST_CASE("dilute limit is first order in N alpha") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const cdouble na = std::polar(0.5 * std::sqrt(u(rng)), 2.0 * kPi<double> * u(rng));
    CHECK(std::abs(lorentz_lorenz(na) - 1.0 - na) <= std::norm(na));
  }
}

TEST_CASE("refractive_index branch") {
  CHECK(rel_err(refractive_index(cdouble(2.25)), cdouble(1.5)) < 1e-15);
  CHECK(rel_err(refractive_index(cdouble(0.0, 1.0)), cdouble(std::sqrt(0.5), std::sqrt(0.5))) < 1e-15);
  CHECK(rel_err(refractive_index(cdouble(-1.0)), cdouble(0.0, 1.0)) < 1e-15);
  CHECK(rel_err(refractive_index(cdouble(-1.0, 0.0)), cdouble(0.0, 1.0)) < 1e-15);
  CHECK(refractive_index(cdouble(-1.0, -0.0)).imag() > 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const cdouble eps(u(rng), std::abs(u(rng)));
    const cdouble n = refractive_index(eps);
    CHECK(rel_err(n * n, eps) < 1e-12);
    CHECK(n.imag() >= 0.0);
  }
}

TEST_CASE("Lorentz oscillator is passive") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int i = 0; i < 200; ++i) {
    const LorentzOscillatorModel m{u(rng), 0.1 * u(rng), u(rng)};
    for (double w = 0.01; w < 10.0; w *= 1.3) CHECK(m.permittivity(w).imag() > 0.0);
  }
  const LorentzOscillatorModel empty{1.0, 0.1, 0.0};
  CHECK(empty.permittivity(0.7) == cdouble(1.0));
  CHECK(n_alpha(PolarizabilityModel{empty}, 0.7) == cdouble(0.0));
}

TEST_CASE("two-level polarisability") {
  const TwoLevelResonantModel m{0.001, 1.0, 0.37, 1.0, 1.0};
  const cdouble on = m.n_alpha(m.omega0);
  CHECK(on.real() == 0.0);
  CHECK(on.imag() == Approx(0.006 * kPi<double>).epsilon(1e-14));
  CHECK(on.imag() == Approx(0.018850).epsilon(1e-4));

  auto inverted = m;
  inverted.w = -1.0;
  for (double d : {-3.0, -0.2, 0.0, 0.5, 4.0}) CHECK(inverted.n_alpha_at_detuning(d) == -m.n_alpha_at_detuning(d));

  auto empty = m;
  empty.rho = 0.0;
  CHECK(empty.n_alpha(1.3) == cdouble(0.0));

  // Re vanishes at resonance and Im carries the sign of w for any linewidth.
  for (double g : {0.1, 1.0, 7.0}) {
    for (double w : {-1.0, -0.3, 0.4, 1.0}) {
      const cdouble na = two_level_n_alpha(0.01, w, g, 0.0);
      CHECK(na.real() == 0.0);
      CHECK(na.imag() == Approx(6.0 * kPi<double> * 0.01 * w).epsilon(1e-14));
    }
  }

  // gamma0_ref maps frequency offsets onto detuning in Gamma0 units.
  TwoLevelResonantModel scaled{0.001, 1.0, 1.0, 2.0, 0.01};
  CHECK(rel_err(scaled.n_alpha(2.03), scaled.n_alpha_at_detuning(3.0)) < 1e-12);
}

TEST_CASE("model validation") {
  CHECK(kind_of([] { LorentzOscillatorModel{-1.0, 0.1, 0.1}.validate(); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { LorentzOscillatorModel{1.0, -0.1, 0.1}.validate(); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { TwoLevelResonantModel{-1.0, 1.0, 1.0, 1.0, 1.0}.validate(); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { TwoLevelResonantModel{0.1, 2.0, 1.0, 1.0, 1.0}.validate(); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { TwoLevelResonantModel{0.1, 1.0, 0.0, 1.0, 1.0}.validate(); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("tabulated permittivity") {
  std::istringstream in("omega,re_eps,im_eps\n1.0,2.0,0.1\n2.0,4.0,0.3\n3.0,3.0,0.2\n");
  const auto t = TabulatedPermittivity::from_csv(in);
  const PolarizabilityModel model{t};
  CHECK(rel_err(permittivity(model, 1.5), cdouble(3.0, 0.2)) < 1e-15);
  CHECK(rel_err(permittivity(model, 3.0), cdouble(3.0, 0.2)) < 1e-15);
  CHECK(rel_err(n_alpha(model, 2.0), inverse_lorentz_lorenz(cdouble(4.0, 0.3))) < 1e-15);
  CHECK(kind_of([&] { permittivity(model, 3.5); }) == ErrorKind::kOutOfRange);
  CHECK(kind_of([&] { permittivity(model, 0.5); }) == ErrorKind::kOutOfRange);
}

TEST_CASE("tabulated polarisability goes through Lorentz-Lorenz") {
  std::istringstream in("omega,re_nalpha,im_nalpha\n0.5,0.1,0.0\n1.5,0.3,0.2\n");
  const PolarizabilityModel model{TabulatedNAlpha::from_csv(in)};
  CHECK(rel_err(n_alpha(model, 1.0), cdouble(0.2, 0.1)) < 1e-15);
  CHECK(rel_err(permittivity(model, 1.0), lorentz_lorenz(cdouble(0.2, 0.1))) < 1e-15);
}

TEST_CASE("CSV parse errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return TabulatedPermittivity::from_csv(in);
  };
  CHECK(kind_of([&] { parse("omega,re,im\n1,2,3\n2,3,4\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([&] { parse("omega,re_eps,im_eps\n1,2\n2,3,4\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([&] { parse("omega,re_eps,im_eps\n1,2,x\n2,3,4\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([&] { parse("omega,re_eps,im_eps\n2,2,0\n1,3,4\n"); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { parse("omega,re_eps,im_eps\n1,2,0\n"); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { TabulatedPermittivity::from_file("/nonexistent/eps.csv"); }) == ErrorKind::kIo);
}

TEST_CASE("CSV from file") {
  const auto path = std::filesystem::temp_directory_path() / "localfield_test_eps.csv";
  {
    std::ofstream f(path);
    f << "omega,re_eps,im_eps\n0,1,0\n1,2,0.5\n";
  }
  const auto t = TabulatedPermittivity::from_file(path);
  CHECK(t.table.size() == 2);
  CHECK(rel_err(t.table.at(0.5), cdouble(1.5, 0.25)) < 1e-15);
  std::filesystem::remove(path);
}
