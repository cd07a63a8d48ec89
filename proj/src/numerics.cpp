#include "localfield/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace localfield {

std::vector<double> FrequencyGrid::nodes() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

void FrequencyGrid::validate(std::size_t min_count) const {
  if (count < min_count)
    throw Error(ErrorKind::kInvalidArgument, "FrequencyGrid: need at least " + std::to_string(min_count) + " points");
  if (!(std::isfinite(omega_min) && std::isfinite(omega_max) && omega_max > omega_min))
    throw Error(ErrorKind::kInvalidArgument, "FrequencyGrid: need omega_min < omega_max");
}

namespace {

// ln|(m + 1)/m| with the two logarithmic singularities dropped; they cancel
// in pairs for every interior node, which is the principal value.
double log_ratio(long m) {
  if (m == 0 || m == -1) return 0.0;
  return std::log(std::abs(static_cast<double>(m + 1) / static_cast<double>(m)));
}

// Integrals over the unit cell [m, m+1] (in units of the grid step, measured
// from the evaluation node) of the left and right hat functions divided by s.
double left_hat(long m) { return static_cast<double>(m + 1) * log_ratio(m) - 1.0; }
double right_hat(long m) { return 1.0 - static_cast<double>(m) * log_ratio(m); }

}  // namespace

std::vector<double> hilbert_transform(std::span<const double> f) {
  const long n = static_cast<long>(f.size());
  if (n < 2) throw Error(ErrorKind::kInvalidArgument, "hilbert_transform: need at least 2 samples");

  // Interior node j seen from node i: left hat of cell j plus right hat of cell j-1.
  std::vector<double> w(static_cast<std::size_t>(2 * n - 1));
  for (long d = -(n - 1); d <= n - 1; ++d) w[static_cast<std::size_t>(d + n - 1)] = left_hat(d) + right_hat(d - 1);

  std::vector<double> h(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double* wi = w.data() + (n - 1 - i);  // wi[j] = W(j - i)
    double acc = 0.0;
    for (long j = 1; j < n - 1; ++j) acc += f[static_cast<std::size_t>(j)] * wi[j];
    acc += f[0] * left_hat(-i);
    acc += f[static_cast<std::size_t>(n - 1)] * right_hat(n - 2 - i);
    h[static_cast<std::size_t>(i)] = acc / kPi<double>;
  }
  return h;
}

KKReport hilbert_residual(const SampledResponse& g, std::optional<cdouble> asymptote) {
  g.grid.validate(kMinKKPoints);
  if (g.values.size() != g.grid.count)
    throw Error(ErrorKind::kInvalidArgument, "hilbert_residual: sample count does not match grid");
  for (const auto& v : g.values)
    if (!detail::is_finite(v)) throw Error(ErrorKind::kNonFinite, "hilbert_residual: sample");

  KKReport report;
  report.subtracted_asymptote = asymptote.value_or(0.5 * (g.values.front() + g.values.back()));

  const std::size_t n = g.values.size();
  std::vector<double> re(n);
  std::vector<double> im(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cdouble d = g.values[i] - report.subtracted_asymptote;
    re[i] = d.real();
    im[i] = d.imag();
    report.peak = std::max(report.peak, std::abs(d));
  }
  if (report.peak == 0.0) return report;

  const double edge = std::max(std::hypot(re.front(), im.front()), std::hypot(re.back(), im.back()));
  if (edge > 0.01 * report.peak)
    throw Error(ErrorKind::kInsufficientDecay, "hilbert_residual: edge value " + std::to_string(edge) +
                                                   " exceeds 1% of peak " + std::to_string(report.peak));

  const auto h = hilbert_transform(im);
  double sum2 = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = std::abs(re[i] - h[i]);
    sum2 += r * r;
    report.residual_max = std::max(report.residual_max, r);
  }
  report.residual_rms = std::sqrt(sum2 / static_cast<double>(n - 2));
  return report;
}

SampledResponse sample_bulk_response(const LorentzOscillatorModel& model, const FrequencyGrid& grid,
                                     LocalFieldFactor factor) {
  model.validate();
  grid.validate();
  SampledResponse out{grid, std::vector<cdouble>(grid.count)};
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double w = grid.at(i);
    const cdouble c = bulk_emission_factor(model.permittivity(std::abs(w)), factor) - 1.0;
    out.values[i] = w < 0.0 ? std::conj(c) : c;
  }
  return out;
}

CausalityReport causality_discriminator(const LorentzOscillatorModel& model, const FrequencyGrid& grid) {
  model.validate();
  if (!(model.gamma > 0.0)) throw Error(ErrorKind::kInvalidArgument, "causality_discriminator: model must be lossy");
  grid.validate(kMinKKPoints);
  const double margin = 10.0 * model.gamma;
  if (model.fp > 0.0 && (model.omega0 - margin < grid.omega_min || model.omega0 + margin > grid.omega_max))
    throw Error(ErrorKind::kInvalidArgument, "causality_discriminator: grid must span omega0 +- 10 gamma");

  // eps -> 1 at high frequency, so both responses tend to zero.
  const cdouble asymptote{0.0, 0.0};
  return {hilbert_residual(sample_bulk_response(model, grid, LocalFieldFactor::kSquare), asymptote),
          hilbert_residual(sample_bulk_response(model, grid, LocalFieldFactor::kAbsoluteSquare), asymptote)};
}

SeriesCoefficients extract_series_coefficients(const std::function<double(double)>& f, double step, int levels) {
  if (!(step > 0.0) || levels < 2)
    throw Error(ErrorKind::kInvalidArgument, "extract_series_coefficients: need step > 0 and levels >= 2");

  const double f0 = f(0.0);
  const auto n = static_cast<std::size_t>(levels);
  std::vector<std::vector<double>> d1(n, std::vector<double>(n));
  std::vector<std::vector<double>> d2(n, std::vector<double>(n));
  double h = step;
  for (std::size_t k = 0; k < n; ++k, h *= 0.5) {
    const double fp = f(h);
    const double fm = f(-h);
    d1[k][0] = (fp - fm) / (2.0 * h);
    d2[k][0] = (fp - 2.0 * f0 + fm) / (2.0 * h * h);
    double p = 1.0;
    for (std::size_t j = 1; j <= k; ++j) {
      p *= 4.0;
      d1[k][j] = d1[k][j - 1] + (d1[k][j - 1] - d1[k - 1][j - 1]) / (p - 1.0);
      d2[k][j] = d2[k][j - 1] + (d2[k][j - 1] - d2[k - 1][j - 1]) / (p - 1.0);
    }
  }

  SeriesCoefficients c;
  c.c1 = d1[n - 1][n - 1];
  c.c2 = d2[n - 1][n - 1];
  const double scale = std::max({std::abs(c.c1), std::abs(c.c2), std::abs(f0), 1e-300});
  c.spread = std::max(std::abs(c.c1 - d1[n - 2][n - 2]), std::abs(c.c2 - d2[n - 2][n - 2])) / scale;
  c.reliable = c.spread <= 1e-4;
  return c;
}

}  // namespace localfield
