#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "disclab/error.hpp"

namespace disclab {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the minimum of a unimodal `f` on [lo, hi];
/// stops once the bracket is narrower than `tol`.
template <typename F>
ScalarOptimum golden_section_minimize(F&& f, double lo, double hi, double tol) {
  if (!(hi > lo)) throw InvalidParameter("golden section needs lo < hi");
  if (!(tol > 0.0)) throw InvalidParameter("golden section needs tol > 0");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 500 && hi - lo > tol; ++iter) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};
}

template <typename F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double tol) {
  auto r = golden_section_minimize([&](double x) { return -f(x); }, lo, hi, tol);
  return {r.x, -r.value};
}

/// Samples `f` at `samples` evenly spaced points of [lo, hi] (inclusive),
/// then golden-section refines the bracket around the best sample. The
/// lowest x wins ties. Safe for piecewise-smooth unimodal objectives that may
/// be +inf outside a feasible sub-interval.
template <typename F>
ScalarOptimum bracketed_minimize(F&& f, double lo, double hi, std::size_t samples, double tol) {
  samples = std::max<std::size_t>(samples, 3);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  const double step = (hi - lo) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = i + 1 == samples ? hi : lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!std::isfinite(best_value)) throw ConstructionError("objective is infeasible on the whole interval");
  const double a = best == 0 ? lo : lo + step * static_cast<double>(best - 1);
  const double b = best + 1 >= samples ? hi : lo + step * static_cast<double>(best + 1);
  ScalarOptimum refined = golden_section_minimize(f, a, b, tol);
  const double at_best = lo + step * static_cast<double>(best);
  if (!(refined.value < best_value)) refined = {best + 1 == samples ? hi : at_best, best_value};
  return refined;
}

}  // namespace disclab
