#include "localfield/media.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

namespace localfield {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kInvalidArgument, what);
}

bool finite(double x) { return std::isfinite(x); }

// std::from_chars for double is locale-independent.
double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end)
    throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  return value;
}

}  // namespace

void LorentzOscillatorModel::validate() const {
  require(finite(omega0) && omega0 > 0.0, "LorentzOscillatorModel: omega0 must be > 0");
  require(finite(gamma) && gamma >= 0.0, "LorentzOscillatorModel: gamma must be >= 0");
  require(finite(fp) && fp >= 0.0, "LorentzOscillatorModel: fp must be >= 0");
}

void TwoLevelResonantModel::validate() const {
  require(finite(rho) && rho >= 0.0, "TwoLevelResonantModel: rho must be >= 0");
  require(finite(w) && std::abs(w) <= 1.0, "TwoLevelResonantModel: |w| must be <= 1");
  require(finite(gamma_total) && gamma_total > 0.0, "TwoLevelResonantModel: gamma_total must be > 0");
  require(finite(omega0) && omega0 > 0.0, "TwoLevelResonantModel: omega0 must be > 0");
  require(finite(gamma0_ref) && gamma0_ref > 0.0, "TwoLevelResonantModel: gamma0_ref must be > 0");
}

cdouble two_level_n_alpha(double rho, double w, double gamma, double detuning) {
  if (rho == 0.0 || w == 0.0) return {0.0, 0.0};
  const double half = 0.5 * gamma;
  return -w * 6.0 * kPi<double> * rho * half / cdouble(detuning, half);
}

cdouble TwoLevelResonantModel::n_alpha_at_detuning(double detuning) const {
  return two_level_n_alpha(rho, w, gamma_total, detuning);
}

TabulatedResponse::TabulatedResponse(std::vector<double> omega, std::vector<cdouble> values)
    : omega_(std::move(omega)), values_(std::move(values)) {
  require(omega_.size() == values_.size(), "TabulatedResponse: column length mismatch");
  require(omega_.size() >= 2, "TabulatedResponse: need at least 2 samples");
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    if (!finite(omega_[i]) || !detail::is_finite(values_[i]))
      throw Error(ErrorKind::kNonFinite, "TabulatedResponse: sample " + std::to_string(i));
    if (i > 0 && !(omega_[i] > omega_[i - 1]))
      throw Error(ErrorKind::kInvalidArgument, "TabulatedResponse: omega must be strictly increasing");
  }
}

cdouble TabulatedResponse::at(double omega) const {
  if (!(omega >= omega_.front() && omega <= omega_.back()))
    throw Error(ErrorKind::kOutOfRange, "tabulated response queried at omega = " + std::to_string(omega));
  auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
  if (it == omega_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - omega_.begin());
  const auto lo = hi - 1;
  const double t = (omega - omega_[lo]) / (omega_[hi] - omega_[lo]);
  return {(1.0 - t) * values_[lo].real() + t * values_[hi].real(),
          (1.0 - t) * values_[lo].imag() + t * values_[hi].imag()};
}

TabulatedResponse read_response_csv(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "empty table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(ErrorKind::kParse, "expected header '" + header + "', got '" + line + "'");

  std::vector<double> omega;
  std::vector<cdouble> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    double cols[3];
    for (int c = 0; c < 3; ++c) {
      const auto comma = rest.find(',');
      if ((c < 2) != (comma != std::string_view::npos))
        throw Error(ErrorKind::kParse, "line " + std::to_string(lineno) + ": expected 3 columns");
      cols[c] = parse_double(rest.substr(0, comma), lineno);
      if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
    omega.push_back(cols[0]);
    values.emplace_back(cols[1], cols[2]);
  }
  return TabulatedResponse(std::move(omega), std::move(values));
}

namespace {

template <typename Table>
Table load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return Table::from_csv(in);
}

}  // namespace

TabulatedPermittivity TabulatedPermittivity::from_csv(std::istream& in) {
  return {read_response_csv(in, kHeader)};
}

TabulatedPermittivity TabulatedPermittivity::from_file(const std::filesystem::path& path) {
  return load_table<TabulatedPermittivity>(path);
}

TabulatedNAlpha TabulatedNAlpha::from_csv(std::istream& in) { return {read_response_csv(in, kHeader)}; }

TabulatedNAlpha TabulatedNAlpha::from_file(const std::filesystem::path& path) {
  return load_table<TabulatedNAlpha>(path);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

cdouble n_alpha(const PolarizabilityModel& model, double omega) {
  return std::visit(
      overloaded{
          [&](const LorentzOscillatorModel& m) { return inverse_lorentz_lorenz(m.permittivity(omega)); },
          [&](const TwoLevelResonantModel& m) { return m.n_alpha(omega); },
          [&](const TabulatedPermittivity& m) { return inverse_lorentz_lorenz(m.table.at(omega)); },
          [&](const TabulatedNAlpha& m) { return m.table.at(omega); },
      },
      model);
}

cdouble permittivity(const PolarizabilityModel& model, double omega) {
  return std::visit(
      overloaded{
          [&](const LorentzOscillatorModel& m) { return m.permittivity(omega); },
          [&](const TwoLevelResonantModel& m) { return lorentz_lorenz(m.n_alpha(omega)); },
          [&](const TabulatedPermittivity& m) { return m.table.at(omega); },
          [&](const TabulatedNAlpha& m) { return lorentz_lorenz(m.table.at(omega)); },
      },
      model);
}

}  // namespace localfield
