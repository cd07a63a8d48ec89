#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature over a list of panels.
// Works for real- and complex-valued integrands; a panel with an infinite
// upper limit is mapped onto (0, 1] by x = a + (1 - t)/t.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

#include "localfield/error.hpp"

namespace localfield {

struct Panel {
  double a;
  double b;  // may be +infinity
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

template <typename V>
struct QuadratureResult {
  V value{};
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename V>
struct Interval {
  double a, b;
  V value;
  double error;
  std::size_t panel;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename V, typename G>
std::pair<V, double> gauss_kronrod_15(const G& g, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const V fc = g(centre);
  V kronrod = fc * kKronrodWeights[7];
  V gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const V f1 = g(centre - dx);
    const V f2 = g(centre + dx);
    kronrod += (f1 + f2) * kKronrodWeights[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kGaussWeights[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  using std::abs;
  return {kronrod, abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrate f over the union of panels until the summed error estimate is at
/// most max(rel_tol * |value|, abs_tol). The error estimate of each interval
/// is |K15 - G7|, which bounds the Kronrod error for smooth integrands.
template <typename F>
auto integrate(F&& f, std::span<const Panel> panels, const QuadratureOptions& opts = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using V = std::decay_t<std::invoke_result_t<F&, double>>;
  using std::abs;
  if (panels.empty()) throw Error(ErrorKind::kInvalidArgument, "integrate: no panels");

  QuadratureResult<V> result;
  std::vector<bool> mapped(panels.size());
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& pn = panels[p];
    if (!std::isfinite(pn.a) || std::isnan(pn.b) || !(pn.b > pn.a))
      throw Error(ErrorKind::kInvalidArgument, "integrate: panel must satisfy a < b with finite a");
    mapped[p] = std::isinf(pn.b);
  }

  auto eval_raw = [&](std::size_t p, double lo, double hi) {
    if (!mapped[p]) {
      return detail::gauss_kronrod_15<V>([&](double x) { return V(f(x)); }, lo, hi);
    }
    const double a = panels[p].a;
    return detail::gauss_kronrod_15<V>(
        [&](double t) {
          const double x = a + (1.0 - t) / t;
          return V(f(x)) * (1.0 / (t * t));
        },
        lo, hi);
  };
  auto eval_on = [&](std::size_t p, double lo, double hi) {
    auto r = eval_raw(p, lo, hi);
    if (!std::isfinite(r.second) || !std::isfinite(abs(r.first)))
      throw Error(ErrorKind::kNonFinite, "integrate: integrand not finite on [" + std::to_string(lo) + ", " +
                                             std::to_string(hi) + "]");
    return r;
  };

  std::priority_queue<detail::Interval<V>> heap;
  V total{};
  double total_error = 0.0;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double lo = mapped[p] ? 0.0 : panels[p].a;
    const double hi = mapped[p] ? 1.0 : panels[p].b;
    auto [v, e] = eval_on(p, lo, hi);
    result.evaluations += 15;
    heap.push({lo, hi, v, e, p});
    total += v;
    total_error += e;
  }

  auto target = [&] { return std::max(opts.rel_tol * abs(total), opts.abs_tol); };
  int splits = 0;
  while (total_error > target()) {
    if (splits >= opts.max_subdivisions) {
      throw Error(ErrorKind::kNonConvergentQuadrature,
                  "integrate: error estimate " + std::to_string(total_error) + " after " +
                      std::to_string(splits) + " subdivisions");
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorKind::kNonConvergentQuadrature, "integrate: interval below floating-point resolution");
    }
    heap.pop();
    auto [v1, e1] = eval_on(worst.panel, worst.a, mid);
    auto [v2, e2] = eval_on(worst.panel, mid, worst.b);
    result.evaluations += 30;
    heap.push({worst.a, mid, v1, e1, worst.panel});
    heap.push({mid, worst.b, v2, e2, worst.panel});
    ++splits;

    // Re-sum from the heap occasionally to keep rounding drift out of the totals.
    total += v1 + v2 - worst.value;
    total_error += e1 + e2 - worst.error;
    if (splits % 64 == 0) {
      auto copy = heap;
      total = V{};
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }

  // Final sum in a fixed order so results do not depend on heap internals.
  std::vector<detail::Interval<V>> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const auto& l, const auto& r) {
    return l.panel != r.panel ? l.panel < r.panel : l.a < r.a;
  });
  result.value = V{};
  result.error = 0.0;
  for (const auto& part : parts) {
    result.value += part.value;
    result.error += part.error;
  }
  result.intervals = static_cast<int>(parts.size());
  return result;
}

}  // namespace localfield
