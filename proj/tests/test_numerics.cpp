#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <limits>

#include "localfield/error.hpp"
#include "localfield/numerics.hpp"

using namespace localfield;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SampledResponse sample(const FrequencyGrid& grid, const std::function<cdouble(double)>& g) {
  SampledResponse s{grid, {}};
  for (double w : grid.nodes()) s.values.push_back(g(w));
  return s;
}

}  // namespace

TEST_CASE("adaptive quadrature on known integrals") {
  SUBCASE("exponential over two panels") {
    const std::array<Panel, 2> panels{{{0.0, 10.0}, {10.0, 50.0}}};
    const auto r = integrate([](double q) { return std::exp(-q); }, panels, {.rel_tol = 1e-10});
    CHECK(r.value == Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(r.value - (1.0 - std::exp(-50.0))) <= r.error + 1e-15);
  }

  SUBCASE("regularizer tail to infinity") {
    const std::array<Panel, 2> panels{{{0.0, 1.0}, {1.0, kInf}}};
    const auto r = integrate([](double q) { return q * q / (q * q * q * q + 1.0); }, panels, {.rel_tol = 1e-10});
    const double exact = kPi<double> / (2.0 * std::sqrt(2.0));
    CHECK(r.value == Approx(1.110721).epsilon(1e-6));
    CHECK(std::abs(r.value - exact) < 1e-8);
    CHECK(std::abs(r.value - exact) <= r.error + 1e-15);
  }

  SUBCASE("narrow Lorentzian peak") {
    const double w = 1e-3;
    const double x0 = 0.37;
    const double exact = std::atan((1.0 - x0) / w) + std::atan(x0 / w);
    const std::array<Panel, 1> panels{{{0.0, 1.0}}};
    const auto r = integrate([&](double x) { return w / ((x - x0) * (x - x0) + w * w); }, panels, {.rel_tol = 1e-9});
    CHECK(r.intervals > 1);
    CHECK(r.error <= 1e-9 * std::abs(r.value));
    CHECK(std::abs(r.value - exact) <= 10.0 * r.error);
  }

  SUBCASE("complex integrand") {
    const std::array<Panel, 1> panels{{{0.0, kPi<double>}}};
    const auto r = integrate([](double x) { return std::exp(cdouble(0.0, x)); }, panels);
    CHECK(std::abs(r.value - cdouble(0.0, 2.0)) < 1e-12);
  }

  SUBCASE("subdivision limit") {
    const std::array<Panel, 1> panels{{{0.0, 1.0}}};
    auto rough = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); };
    try {
      integrate(rough, panels, {.rel_tol = 1e-14, .max_subdivisions = 10});
      FAIL("expected nonconvergence");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNonConvergentQuadrature);
    }

    // The panel midpoint is a quadrature node, so this one hits the pole.
    auto pole = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.5)); };
    try {
      integrate(pole, panels);
      FAIL("expected a non-finite sample");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNonFinite);
    }
  }

  SUBCASE("bad panels") {
    const std::array<Panel, 1> backwards{{{1.0, 0.0}}};
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, backwards), Error);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, std::span<const Panel>{}), Error);
  }
}

TEST_CASE("Hilbert transform is linear and maps odd to even") {
  const FrequencyGrid grid{-10.0, 10.0, 1001};
  std::vector<double> odd, even, mix;
  for (double w : grid.nodes()) {
    odd.push_back(w * std::exp(-w * w));
    even.push_back(std::exp(-w * w / 3.0));
    mix.push_back(2.0 * odd.back() - 0.5 * even.back());
  }
  const auto ho = hilbert_transform(odd);
  const auto he = hilbert_transform(even);
  const auto hm = hilbert_transform(mix);
  const std::size_t n = grid.count;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    CHECK(hm[i] == Approx(2.0 * ho[i] - 0.5 * he[i]).epsilon(1e-12).scale(1.0));
    CHECK(ho[i] == Approx(ho[n - 1 - i]).epsilon(1e-12).scale(1.0));
    CHECK(he[i] == Approx(-he[n - 1 - i]).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(hilbert_transform(std::vector<double>{1.0}), Error);
}

TEST_CASE("Kramers-Kronig residual of a Lorentzian") {
  const double w0 = 0.0;
  const double g = 1.0;
  auto causal = [&](double w) { return 1.0 / cdouble(w0 - w, -g / 2.0); };
  auto anti = [&](double w) { return 1.0 / cdouble(w0 - w, g / 2.0); };

  const FrequencyGrid coarse{-200.0, 200.0, 8192};
  const FrequencyGrid fine{-200.0, 200.0, 16384};
  const cdouble zero{0.0, 0.0};
  const auto rc = hilbert_residual(sample(coarse, causal), zero);
  const auto rf = hilbert_residual(sample(fine, causal), zero);
  const auto ra = hilbert_residual(sample(coarse, anti), zero);

  CHECK(rc.residual_rms < 1e-3);
  CHECK(rc.relative_rms() < 1e-3);
  CHECK(rf.residual_rms < rc.residual_rms / 2.0);
  CHECK(ra.residual_rms >= 10.0 * rc.residual_rms);
  CHECK(rc.residual_max >= rc.residual_rms);
  CHECK(rc.peak == Approx(2.0 / g).epsilon(1e-3));
}

TEST_CASE("Kramers-Kronig residual edge cases") {
  const FrequencyGrid grid{-1.0, 1.0, 512};
  const auto flat = hilbert_residual(sample(grid, [](double) { return cdouble(2.5); }));
  CHECK(flat.residual_rms == 0.0);
  CHECK(flat.subtracted_asymptote == cdouble(2.5));

  auto slow = [](double w) { return 1.0 / cdouble(-w, -0.5); };
  CHECK_THROWS_AS(hilbert_residual(sample(grid, slow), cdouble(0.0)), Error);
  try {
    hilbert_residual(sample(grid, slow), cdouble(0.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInsufficientDecay);
  }

  const FrequencyGrid small{-1.0, 1.0, 100};
  CHECK_THROWS_AS(hilbert_residual(sample(small, [](double) { return cdouble(0.0); })), Error);
}

TEST_CASE("causality discriminator") {
  const LorentzOscillatorModel model{1.0, 0.01, 0.05};
  const auto base = causality_discriminator(model, {-3.0, 3.0, 8192});
  const auto refined = causality_discriminator(model, {-3.0, 3.0, 16384});

  CHECK(base.square.relative_rms() < 1e-3);
  CHECK(base.separation() >= 10.0);
  CHECK(refined.separation() > base.separation());
  CHECK(refined.square.residual_rms <= base.square.residual_rms / 2.0);
  CHECK(refined.absolute_square.residual_rms == Approx(base.absolute_square.residual_rms).epsilon(0.2));

  const auto vacuum = causality_discriminator({1.0, 0.01, 0.0}, {-3.0, 3.0, 1024});
  CHECK(vacuum.square.residual_rms == 0.0);
  CHECK(vacuum.absolute_square.residual_rms == 0.0);

  CHECK_THROWS_AS(causality_discriminator({1.0, 0.0, 0.05}, {-3.0, 3.0, 1024}), Error);
  CHECK_THROWS_AS(causality_discriminator(model, {-3.0, 1.05, 1024}), Error);
}

TEST_CASE("bulk response respects the reality condition") {
  const LorentzOscillatorModel model{1.0, 0.05, 0.2};
  const FrequencyGrid grid{-2.0, 2.0, 401};
  const auto s = sample_bulk_response(model, grid, LocalFieldFactor::kSquare);
  for (std::size_t i = 0; i < grid.count; ++i)
    CHECK(std::abs(s.values[i] - std::conj(s.values[grid.count - 1 - i])) < 1e-12);
}

TEST_CASE("series coefficients") {
  SUBCASE("polynomials up to degree four") {
    const auto c = extract_series_coefficients([](double n) { return 1.0 + 7.0 * n / 6.0 + 17.0 * n * n / 24.0; });
    CHECK(c.c1 == Approx(7.0 / 6.0).epsilon(1e-10));
    CHECK(c.c2 == Approx(17.0 / 24.0).epsilon(1e-10));
    CHECK(c.reliable);

    const auto q = extract_series_coefficients(
        [](double n) { return -0.5 + 2.0 * n - 3.0 * n * n + 4.0 * n * n * n - 5.0 * n * n * n * n; });
    CHECK(q.c1 == Approx(2.0).epsilon(1e-10));
    CHECK(q.c2 == Approx(-3.0).epsilon(1e-10));
  }

  const auto reg = RegularizationParams::from_r(0.05);
  SUBCASE("bulk rate at real polarisability") {
    const auto c = extract_series_coefficients([&](double n) { return gamma_h(lorentz_lorenz(cdouble(n)), reg).gamma_bulk; });
    CHECK(c.c1 == Approx(7.0 / 6.0).epsilon(1e-6));
    CHECK(c.c2 == Approx(17.0 / 24.0).epsilon(1e-6));
  }

  SUBCASE("shift of a pure absorber") {
    const auto c = extract_series_coefficients(
        [&](double n) { return 2.0 * gamma_h(lorentz_lorenz(cdouble(0.0, n)), reg).h_bulk; });
    CHECK(c.c1 == Approx(7.0 / 6.0).epsilon(1e-6));
    CHECK(std::abs(c.c2) < 1e-6);
  }

  SUBCASE("mixed polarisability carries the cross term") {
    const auto c = extract_series_coefficients(
        [&](double n) { return 2.0 * gamma_h(lorentz_lorenz(cdouble(n, n)), reg).h_bulk; });
    CHECK(c.c2 == Approx(17.0 / 12.0).epsilon(1e-6));
  }

  SUBCASE("noise is flagged") {
    int calls = 0;
    const auto c = extract_series_coefficients([&](double n) { return n + ((++calls % 2) ? 1e-6 : -1e-6); });
    CHECK_FALSE(c.reliable);
  }

  CHECK_THROWS_AS(extract_series_coefficients([](double) { return 0.0; }, 0.0), Error);
}
