#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "localfield/media.hpp"
#include "localfield/rates.hpp"
#include "localfield/selfconsistent.hpp"
#include "localfield/validation.hpp"

namespace localfield::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Writes to --out when given, otherwise to the command's stdout stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error(ErrorKind::kIo, "cannot open output file '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorKind::kIo, "failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

const char* kRatesHeader = "gamma_bulk,gamma_r1,gamma_r3,gamma_total,h_bulk,h_r1,h_r3,h_total";

std::string rates_csv_fields(const RateBreakdown<double>& b) {
  return num(b.gamma_bulk) + ',' + num(b.gamma_r1) + ',' + num(b.gamma_r3) + ',' + num(b.gamma_total()) + ',' +
         num(b.h_bulk) + ',' + num(b.h_r1) + ',' + num(b.h_r3) + ',' + num(b.h_total());
}

RateBreakdown<double> evaluate(const cdouble& eps, double r_param, bool raw_shift, NearFieldForm form) {
  const auto reg = RegularizationParams::from_r(r_param);
  return raw_shift ? gamma_h(eps, reg, form) : gamma_h_vacuum_subtracted(eps, reg, form);
}

const std::map<std::string, NearFieldForm> kForms{{"asymptotic", NearFieldForm::kAsymptotic},
                                                 {"literature", NearFieldForm::kLiterature}};

struct Common {
  std::string out;
  std::string format = "json";
  double r_param = 0.05;
  bool raw_shift = false;
  NearFieldForm form = NearFieldForm::kAsymptotic;
};

void add_r_param(CLI::App* cmd, Common& c) {
  cmd->add_option("--r-param", c.r_param, "near-field radius R = k/(sqrt2 Lambda)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_shift_flags(CLI::App* cmd, Common& c) {
  cmd->add_flag("--raw-shift", c.raw_shift, "report h without subtracting the vacuum (eps = 1) shift");
  cmd->add_option("--near-field", c.form, "near-field coefficients")
      ->transform(CLI::CheckedTransformer(kForms, CLI::ignore_case))
      ->default_str("asymptotic");
}

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--out", c.out, "output file (default: standard output)");
}

void warn_validity(const RateBreakdown<double>& b, const cdouble& eps, std::ostream& err) {
  if (b.valid) return;
  err << "warning: |q0|/Lambda = " << num(RegularizationParams::from_r(b.r_used).pole_ratio(eps))
      << " exceeds " << kValidityRatio << "; near-field terms are outside their validity range\n";
}

// ---- rates ----

struct RatesArgs {
  Common c;
  double eps_re = 1.0;
  double eps_im = 0.0;
};

int cmd_rates(const RatesArgs& a, std::ostream& out, std::ostream& err) {
  const cdouble eps(a.eps_re, a.eps_im);
  const auto b = evaluate(eps, a.c.r_param, a.c.raw_shift, a.c.form);
  warn_validity(b, eps, err);
  Sink sink(a.c.out, out);
  if (a.c.format == "csv") {
    *sink << "re_eps,im_eps," << kRatesHeader << ",r_param,valid\n"
          << num(a.eps_re) << ',' << num(a.eps_im) << ',' << rates_csv_fields(b) << ',' << num(a.c.r_param) << ','
          << (b.valid ? "true" : "false") << '\n';
  } else {
    json j;
    j["eps_re"] = a.eps_re;
    j["eps_im"] = a.eps_im;
    j["r_param"] = a.c.r_param;
    j["gamma_bulk"] = b.gamma_bulk;
    j["gamma_r1"] = b.gamma_r1;
    j["gamma_r3"] = b.gamma_r3;
    j["gamma_total"] = b.gamma_total();
    j["h_bulk"] = b.h_bulk;
    j["h_r1"] = b.h_r1;
    j["h_r3"] = b.h_r3;
    j["h_total"] = b.h_total();
    j["shift"] = a.c.raw_shift ? "raw" : "vacuum-subtracted";
    j["valid"] = b.valid;
    *sink << j.dump(2) << '\n';
  }
  sink.finish();
  return kOk;
}

// ---- sweep ----

struct SweepArgs {
  Common c;
  std::string model = "vacuum";
  double omega0 = 1.0;
  double gamma = 0.1;
  double fp = 0.1;
  double rho = 0.0;
  double w = 1.0;
  double gamma_total = 1.0;
  double gamma0_ref = 1.0;
  std::string table;
  double omega_min = 0.5;
  double omega_max = 1.5;
  std::size_t points = 101;
};

PolarizabilityModel make_model(const SweepArgs& a) {
  if (a.model == "lorentz") return LorentzOscillatorModel{a.omega0, a.gamma, a.fp};
  if (a.model == "two-level") return TwoLevelResonantModel{a.rho, a.w, a.gamma_total, a.omega0, a.gamma0_ref};
  if (a.model == "table") return TabulatedPermittivity::from_file(a.table);
  if (a.model == "nalpha-table") return TabulatedNAlpha::from_file(a.table);
  return LorentzOscillatorModel{a.omega0, a.gamma, 0.0};  // vacuum: no oscillator strength
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if ((a.model == "table" || a.model == "nalpha-table") && a.table.empty())
    throw CLI::RequiredError("--table (needed by --model " + a.model + ")");
  if (!(a.omega_max > a.omega_min)) throw CLI::ValidationError("--omega-max", "must exceed --omega-min");

  const auto model = make_model(a);
  std::string body;
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < a.points; ++i) {
    const double omega =
        i + 1 == a.points ? a.omega_max
                          : a.omega_min + (a.omega_max - a.omega_min) * static_cast<double>(i) /
                                              static_cast<double>(a.points - 1);
    const cdouble eps = permittivity(model, omega);
    const auto b = evaluate(eps, a.c.r_param, a.c.raw_shift, a.c.form);
    if (!b.valid) ++invalid;
    body += num(omega) + ',' + num(eps.real()) + ',' + num(eps.imag()) + ',' + rates_csv_fields(b) + '\n';
  }
  if (invalid > 0)
    err << "warning: " << invalid << " of " << a.points
        << " rows have |q0|/Lambda above the validity limit; near-field terms there are unreliable\n";

  Sink sink(a.c.out, out);
  *sink << "omega,re_eps,im_eps," << kRatesHeader << '\n' << body;
  sink.finish();
  return kOk;
}

// ---- compare ----

struct CompareArgs {
  Common c;
  double n_re = 1.0;
  double n_im = 0.0;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const auto f = compare_formulas(cdouble(a.n_re, a.n_im));
  Sink sink(a.c.out, out);
  if (a.c.format == "csv") {
    *sink << "n_re,n_im,nienhuis,virtual_cavity,empty_cavity,barnett,local_field_bulk\n"
          << num(a.n_re) << ',' << num(a.n_im) << ',' << num(f.nienhuis) << ',' << num(f.virtual_cavity) << ','
          << num(f.empty_cavity) << ',' << num(f.barnett) << ',' << num(f.local_field_bulk) << '\n';
  } else {
    json j;
    j["n_re"] = a.n_re;
    j["n_im"] = a.n_im;
    j["nienhuis"] = f.nienhuis;
    j["virtual_cavity"] = f.virtual_cavity;
    j["empty_cavity"] = f.empty_cavity;
    j["barnett"] = f.barnett;
    j["local_field_bulk"] = f.local_field_bulk;
    *sink << j.dump(2) << '\n';
  }
  sink.finish();
  return kOk;
}

// ---- selfconsistent ----

struct SelfConsistentArgs {
  Common c;
  SelfConsistentProblem p;
};

int cmd_selfconsistent(const SelfConsistentArgs& a, std::ostream& out, std::ostream& err) {
  auto p = a.p;
  p.reg = RegularizationParams::from_r(a.c.r_param);
  p.form = a.c.form;
  const auto r = solve_fixed_point(p);

  json j;
  j["gamma_ratio"] = r.gamma();
  j["h_ratio"] = r.h();
  j["eps_re"] = r.eps.real();
  j["eps_im"] = r.eps.imag();
  j["iterations"] = r.iterations();
  j["converged"] = r.trace.converged;
  j["residual"] = r.trace.residual;
  Sink sink(a.c.out, out);
  *sink << j.dump(2) << '\n';
  sink.finish();
  if (!r.trace.converged) {
    err << "error: nonconvergence after " << r.iterations() << " iterations (residual " << num(r.trace.residual)
        << ")\n";
    return kNonConvergence;
  }
  return kOk;
}

// ---- validate ----

int cmd_validate(bool list, const std::string& fault, std::ostream& out) {
  if (list) {
    for (const auto& c : validation::checks()) out << c.name << "  " << c.summary << '\n';
    return kOk;
  }
  validation::Options opts;
  opts.absolute_square_fault = fault == "absolute-square";
  return validation::run_all(opts, out) ? kOk : kValidationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local-field corrected emission rates and Lamb shifts in absorbing dielectrics", "localfield"};
  app.require_subcommand(1);

  RatesArgs rates;
  auto* rates_cmd = app.add_subcommand("rates", "rate and shift for a given permittivity");
  rates_cmd->add_option("--eps-re", rates.eps_re, "Re eps")->required();
  rates_cmd->add_option("--eps-im", rates.eps_im, "Im eps")->capture_default_str();
  add_r_param(rates_cmd, rates.c);
  add_shift_flags(rates_cmd, rates.c);
  add_format(rates_cmd, rates.c);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "rates over a frequency grid, written as CSV");
  sweep_cmd->add_option("--model", sweep.model, "medium model")
      ->check(CLI::IsMember({"vacuum", "lorentz", "two-level", "table", "nalpha-table"}))
      ->capture_default_str();
  sweep_cmd->add_option("--omega0", sweep.omega0, "resonance frequency")->capture_default_str();
  sweep_cmd->add_option("--gamma", sweep.gamma, "Lorentz damping")->capture_default_str();
  sweep_cmd->add_option("--fp", sweep.fp, "Lorentz oscillator strength")->capture_default_str();
  sweep_cmd->add_option("--rho", sweep.rho, "two-level density N/k^3")->capture_default_str();
  sweep_cmd->add_option("--w", sweep.w, "two-level population difference")->capture_default_str();
  sweep_cmd->add_option("--gamma-total", sweep.gamma_total, "two-level linewidth in Gamma0")->capture_default_str();
  sweep_cmd->add_option("--gamma0-ref", sweep.gamma0_ref, "Gamma0 in frequency units")->capture_default_str();
  sweep_cmd->add_option("--table", sweep.table, "CSV table for table models")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--omega-min", sweep.omega_min)->capture_default_str();
  sweep_cmd->add_option("--omega-max", sweep.omega_max)->capture_default_str();
  sweep_cmd->add_option("--points", sweep.points)->check(CLI::Range(std::size_t{2}, std::size_t{10000000}))
      ->capture_default_str();
  add_r_param(sweep_cmd, sweep.c);
  add_shift_flags(sweep_cmd, sweep.c);
  sweep_cmd->add_option("--out", sweep.c.out, "output file (default: standard output)");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "reference formulas side by side");
  compare_cmd->add_option("--n-re", compare.n_re, "Re n")->required()->check(CLI::PositiveNumber);
  compare_cmd->add_option("--n-im", compare.n_im, "Im n")->capture_default_str();
  add_format(compare_cmd, compare.c);

  SelfConsistentArgs sc;
  auto* sc_cmd = app.add_subcommand("selfconsistent", "self-consistent rate and shift of a dense two-level gas");
  sc_cmd->add_option("--rho", sc.p.model.rho, "density N/k^3")->required()->check(CLI::NonNegativeNumber);
  sc_cmd->add_option("--w", sc.p.model.w, "population difference")->capture_default_str();
  sc_cmd->add_option("--omega-detuning", sc.p.detuning, "probe detuning in Gamma0")->capture_default_str();
  sc_cmd->add_option("--gamma-total", sc.p.model.gamma_total, "initial linewidth in Gamma0")->capture_default_str();
  sc_cmd->add_flag("--include-nn", sc.p.include_nn, "feed the near-field terms back into the loop");
  add_r_param(sc_cmd, sc.c);
  sc_cmd->add_option("--near-field", sc.c.form, "near-field coefficients")
      ->transform(CLI::CheckedTransformer(kForms, CLI::ignore_case))
      ->default_str("asymptotic");
  sc_cmd->add_option("--tol", sc.p.tol)->check(CLI::PositiveNumber)->capture_default_str();
  sc_cmd->add_option("--beta", sc.p.mixing, "mixing parameter in (0, 1]")
      ->check(CLI::Validator(
          [](const std::string& v) {
            const double b = std::stod(v);
            return b > 0.0 && b <= 1.0 ? std::string() : std::string("must be in (0, 1]");
          },
          "(0, 1]"))
      ->capture_default_str();
  sc_cmd->add_option("--max-iter", sc.p.max_iter)->check(CLI::PositiveNumber)->capture_default_str();
  sc_cmd->add_option("--out", sc.c.out, "output file (default: standard output)");

  bool list = false;
  std::string fault;
  auto* validate_cmd = app.add_subcommand("validate", "run the oracle checks");
  validate_cmd->add_flag("--list", list, "list checks without running them");
  validate_cmd->add_option("--inject-fault", fault, "deliberately break one ingredient")
      ->check(CLI::IsMember({"absolute-square"}));

  try {
    app.parse(argc, argv);
    if (*rates_cmd) return cmd_rates(rates, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, out, err);
    if (*compare_cmd) return cmd_compare(compare, out);
    if (*sc_cmd) return cmd_selfconsistent(sc, out, err);
    if (*validate_cmd) return cmd_validate(list, fault, out);
    return kUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace localfield::cli
