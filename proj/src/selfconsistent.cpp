#include "localfield/selfconsistent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace localfield {

void SelfConsistentProblem::validate() const {
  model.validate();
  if (!std::isfinite(detuning)) throw Error(ErrorKind::kInvalidArgument, "SelfConsistentProblem: detuning");
  if (!(mixing > 0.0 && mixing <= 1.0))
    throw Error(ErrorKind::kInvalidArgument, "SelfConsistentProblem: mixing must be in (0, 1]");
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "SelfConsistentProblem: tol must be > 0");
  if (max_iter < 1) throw Error(ErrorKind::kInvalidArgument, "SelfConsistentProblem: max_iter must be >= 1");
}

UpdateMapValue evaluate_update_map(const SelfConsistentProblem& p, double gamma, double h) {
  UpdateMapValue v;
  // Medium resonance sits at omega0 + h, so the probe sees detuning - h.
  v.n_alpha = two_level_n_alpha(p.model.rho, p.model.w, gamma, p.detuning - h);
  try {
    v.eps = lorentz_lorenz(v.n_alpha);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kPoleOfRelation) throw;
    throw Error(ErrorKind::kLocalFieldResonance, "self-consistent loop reached N alpha = 3");
  }
  v.rates = gamma_h_vacuum_subtracted(v.eps, p.reg, p.form);
  if (p.include_nn) {
    v.gamma = v.rates.gamma_total();
    v.h = v.rates.h_total();
  } else {
    v.gamma = v.rates.gamma_bulk;
    v.h = v.rates.h_bulk;
  }
  if (!(std::isfinite(v.gamma) && std::isfinite(v.h)))
    throw Error(ErrorKind::kNonFinite, "self-consistent update produced a non-finite rate");
  return v;
}

SelfConsistentResult solve_fixed_point(const SelfConsistentProblem& p) {
  p.validate();
  SelfConsistentResult out;
  double gamma = p.model.gamma_total;
  double h = 0.0;
  for (int it = 0; it < p.max_iter; ++it) {
    const auto g = evaluate_update_map(p, gamma, h);
    const double residual = std::max(std::abs(g.gamma - gamma), std::abs(g.h - h));
    out.trace.iterates.push_back({gamma, h, g.eps});
    out.trace.residual = residual;
    out.rates = g.rates;
    out.eps = g.eps;
    if (residual <= p.tol) {
      out.trace.converged = true;
      return out;
    }
    gamma = (1.0 - p.mixing) * gamma + p.mixing * g.gamma;
    h = (1.0 - p.mixing) * h + p.mixing * g.h;
    // A non-positive linewidth has no two-level meaning; the map is undefined there.
    if (!(gamma > 0.0)) break;
  }
  return out;
}

std::vector<SweepRow> density_sweep(const SelfConsistentProblem& p, const std::vector<double>& rho_grid,
                                    unsigned threads) {
  std::vector<SweepRow> rows(rho_grid.size());
  auto solve_one = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row = {rho_grid[i], 0.0, 0.0, {0.0, 0.0}, 0, false, std::nullopt};
    try {
      auto q = p;
      q.model.rho = rho_grid[i];
      const auto r = solve_fixed_point(q);
      row.gamma = r.gamma();
      row.h = r.h();
      row.eps = r.eps;
      row.iterations = r.iterations();
      row.converged = r.trace.converged;
      if (!row.converged) row.error = "nonconvergence";
    } catch (const Error& e) {
      row.error = std::string(e.name());
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(rows.size(), 1)));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) solve_one(i);
      });
    }
  }
  return rows;
}

}  // namespace localfield
