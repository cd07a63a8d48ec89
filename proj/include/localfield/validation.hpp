#pragma once

// End-to-end checks of the library against independent oracles. Shared by the
// `validate` command and the acceptance test binary.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "localfield/green.hpp"

namespace localfield::validation {

struct Options {
  /// Build the "square" causality response with the absolute-square factor.
  bool absolute_square_fault = false;
};

struct CheckResult {
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Check {
  std::string name;
  std::string summary;
  std::function<CheckResult(const Options&)> run;
};

const std::vector<Check>& checks();

/// Runs every check, printing one PASS/FAIL line each. Returns true iff all pass.
bool run_all(const Options& opts, std::ostream& out);

struct BornSeriesCase {
  double q;       // |q| in units of k
  cdouble n_alpha;
  int axis;       // direction of q
};

struct BornSeriesReport {
  std::vector<double> errors;  // |F - S_n| (spectral norm), n = 1..terms
  std::vector<double> bounds;  // geometric tail bound for the same n
  double ratio = 0.0;          // |i N alpha F0| (spectral norm)
};

/// Partial sums S_n = sum_{j<n} (i N alpha F0)^j F0 of the local-field
/// corrected Dyson series at fixed q, compared with the closed-form solution.
BornSeriesReport born_series(const BornSeriesCase& c, double omega, int terms);

}  // namespace localfield::validation
