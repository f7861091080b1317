#pragma once

// The variational problem behind the lower bound: admissible and strongly
// admissible jump functions, the shapes of their Q' / Q'' parts, the closed
// forms for the part integrals and their optimal parameters, the assembled
// extremal functions and numeric oracles that check minimality
// independently of the closed forms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/optimize.hpp"
#include "disclab/parallel.hpp"
#include "disclab/piecewise_linear.hpp"

namespace disclab {

using PLJumpFunction = PiecewiseLinear;

/// Structural comparisons (slopes, jump heights, endpoint values).
inline constexpr double kStructuralTolerance = 1e-9;

/// Thresholds of the admissibility properties for given (a, t).
struct AdmissibleParams {
  double a = 3.5;
  int t = 1;

  static AdmissibleParams make(double a, int t) {
    if (!(a > 3.0 && a < 4.0)) throw RangeError("a must lie in (3,4), got " + format_real(a));
    if (t < 1) throw InvalidParameter("t must be >= 1, got " + std::to_string(t));
    return {a, t};
  }

  /// a^{t-1}
  double scale() const { return std::pow(a, t - 1); }
  double max_slope_magnitude() const { return std::pow(a, t); }
  double min_slope_magnitude() const { return (a - 2.0) * scale(); }
  double jump_budget() const { return std::pow(a, t); }
  double required_unit_jumps() const { return (a - 2.0) * scale(); }
};

/// Signed slopes of a two-slope side: `steep` is the minimal slope s_m,
/// `shallow` the maximal slope s_M.
struct SlopePair {
  double steep;
  double shallow;
};

/// Slope band of admissible functions: s_m = -a^t, s_M = -(a-2) a^{t-1}.
inline SlopePair admissible_slopes(const AdmissibleParams& p) {
  return {-p.max_slope_magnitude(), -p.min_slope_magnitude()};
}

/// Condition-A slope pair for selector v in [0,2]:
/// s_m = -(a^t - v a^{t-1}), s_M = min(-(a^t - (v+1) a^{t-1}), -(a^t - 2 a^{t-1})).
inline SlopePair strong_slopes(double v, const AdmissibleParams& p) {
  const double at = p.max_slope_magnitude();
  const double s = p.scale();
  return {-(at - v * s), std::min(-(at - (v + 1.0) * s), -(at - 2.0 * s))};
}

enum class PartKind { qprime, qdoubleprime };

/// One zero-to-zero part [alpha, beta] with a single jump at gamma:
/// f(gamma) = -delta, right limit tau.
struct SegmentSpec {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  PartKind kind = PartKind::qprime;
  double v = 0.0;        // left-side slope selector (strong mode)
  double v_prime = 0.0;  // right-side slope selector (strong mode)
};

// ---------------------------------------------------------------------------
// Part construction

namespace detail {

// Slack for the inclusive feasibility checks on delta and tau.
inline double feasibility_slack(double scale) { return 1e-12 * std::max(1.0, scale); }

// Left side: 0 at alpha, -depth at gamma; `shallow` on [alpha, x1), `steep`
// on [x1, gamma). x1 solves -depth = s_M (x1 - alpha) + s_m (gamma - x1).
inline std::optional<std::string> left_side(PiecewiseLinearBuilder& b, double alpha, double gamma, double depth,
                                            SlopePair s) {
  const double h = gamma - alpha;
  const double lo = h * -s.shallow;
  const double hi = h * -s.steep;
  const double slack = feasibility_slack(hi);
  if (depth < lo - slack || depth > hi + slack)
    return "left side infeasible: delta = " + format_real(depth) + " outside [" + format_real(lo) + ", " +
           format_real(hi) + "]";
  double x1 = alpha;
  if (s.shallow - s.steep > 0.0) x1 = (-depth + s.shallow * alpha - s.steep * gamma) / (s.shallow - s.steep);
  x1 = std::clamp(x1, alpha, gamma);
  b.add(x1, s.shallow, 0.0);
  b.add(gamma, s.steep, s.shallow * (x1 - alpha));
  return std::nullopt;
}

// Right side: tau just right of gamma, 0 at beta; `steep` on (gamma, x2],
// `shallow` on (x2, beta]. x2 solves tau + s_m (x2 - gamma) + s_M (beta - x2) = 0.
inline std::optional<std::string> right_side(PiecewiseLinearBuilder& b, double gamma, double beta, double tau,
                                             SlopePair s) {
  const double h = beta - gamma;
  const double lo = h * -s.shallow;
  const double hi = h * -s.steep;
  const double slack = feasibility_slack(hi);
  if (tau < lo - slack || tau > hi + slack)
    return "right side infeasible: tau = " + format_real(tau) + " outside [" + format_real(lo) + ", " +
           format_real(hi) + "]";
  double x2 = beta;
  if (s.shallow - s.steep > 0.0) x2 = (s.steep * gamma - s.shallow * beta - tau) / (s.steep - s.shallow);
  x2 = std::clamp(x2, gamma, beta);
  b.add(x2, s.steep, tau);
  b.add(beta, s.shallow, tau + s.steep * (x2 - gamma));
  return std::nullopt;
}

inline std::optional<std::string> check_part(const SegmentSpec& seg) {
  if (!(seg.alpha < seg.gamma && seg.gamma < seg.beta))
    return "part needs alpha < gamma < beta, got " + format_real(seg.alpha) + ", " + format_real(seg.gamma) +
           ", " + format_real(seg.beta);
  if (!(seg.delta >= 0.0 && seg.tau >= 0.0)) return "part needs delta, tau >= 0";
  if (seg.kind == PartKind::qprime && seg.delta + seg.tau < 1.0 - kStructuralTolerance)
    return "Q' part needs a jump of height >= 1, got " + format_real(seg.delta + seg.tau);
  return std::nullopt;
}

struct PartResult {
  std::optional<PiecewiseLinear> function;
  std::string error;
};

inline PartResult try_two_slope_part(const SegmentSpec& seg, SlopePair left, SlopePair right) {
  if (auto err = check_part(seg)) return {std::nullopt, *err};
  PiecewiseLinearBuilder b(seg.alpha, 0.0);
  if (auto err = left_side(b, seg.alpha, seg.gamma, seg.delta, left)) return {std::nullopt, *err};
  if (auto err = right_side(b, seg.gamma, seg.beta, seg.tau, right)) return {std::nullopt, *err};
  return {std::move(b).build(), {}};
}

inline PiecewiseLinear unwrap(PartResult r) {
  if (!r.function) throw ConstructionError(r.error);
  return std::move(*r.function);
}

inline PartResult try_qprime_strong(const SegmentSpec& seg, const AdmissibleParams& p) {
  if (!(seg.v >= 0.0 && seg.v <= 2.0 && seg.v_prime >= 0.0 && seg.v_prime <= 2.0))
    return {std::nullopt, "slope selectors must lie in [0,2]"};
  return try_two_slope_part(seg, strong_slopes(seg.v, p), strong_slopes(seg.v_prime, p));
}

}  // namespace detail

/// Admissible-optimal Q' shape for given (alpha, beta, gamma, delta, tau):
/// slope -(a-2) a^{t-1} next to the zeros, -a^t next to the jump. Breakpoints
/// come from continuity at both ends.
inline PLJumpFunction build_qprime_admissible(const SegmentSpec& seg, const AdmissibleParams& p) {
  const auto s = admissible_slopes(p);
  return detail::unwrap(detail::try_two_slope_part(seg, s, s));
}

/// Strongly admissible two-slope Q' shape with selectors v (left of the jump)
/// and v' (right of it).
inline PLJumpFunction build_qprime_strong(const SegmentSpec& seg, const AdmissibleParams& p) {
  return detail::unwrap(detail::try_qprime_strong(seg, p));
}

/// Q'' shape: slope -(a-2) a^{t-1} throughout, jump at gamma (midpoint by
/// default).
inline PLJumpFunction build_qdoubleprime(double alpha, double beta, const AdmissibleParams& p,
                                         std::optional<double> gamma = std::nullopt) {
  const double g = gamma.value_or(0.5 * (alpha + beta));
  if (!(alpha < g && g < beta)) throw ConstructionError("Q'' part needs alpha < gamma < beta");
  const double slope = -p.min_slope_magnitude();
  PiecewiseLinearBuilder b(alpha, 0.0);
  b.add(g, slope, 0.0);
  b.add(beta, slope, -slope * (beta - g));
  return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Closed forms

/// \int over an admissible-optimal Q' part of length chi (delta = 1/2,
/// midpoint jump): (a^{1-t} + 4 chi - 2 a chi - 2 a^t chi^2 + a^{1+t} chi^2) / 8.
inline double q1_integral(double chi, const AdmissibleParams& p) {
  if (!(chi > 0.0)) throw InvalidParameter("q1 integral needs chi > 0, got " + format_real(chi));
  const double a = p.a;
  const double at = std::pow(a, p.t);
  return (1.0 / p.scale() + 4.0 * chi - 2.0 * a * chi - 2.0 * at * chi * chi + a * at * chi * chi) / 8.0;
}

/// \int over a Q'' part of length chi: chi^2 (a-2) a^{t-1} / 4.
inline double q2_integral(double chi, const AdmissibleParams& p) {
  if (chi < 0.0) throw InvalidParameter("q2 integral needs chi >= 0, got " + format_real(chi));
  return chi * chi / 4.0 * p.min_slope_magnitude();
}

/// Feasible Q' lengths for the strong closed form (selector v in [0,1]).
struct ChiRange {
  double lo;
  double hi;
};

inline ChiRange strong_chi_range(const AdmissibleParams& p) {
  const double inv = 1.0 / p.scale();
  return {inv / (p.a - 0.5), inv / (p.a - 1.5)};
}

/// \int over a strong Q' part of length chi at its optimum (delta = 1/2,
/// midpoint jump, v = v' = a - 1/2 - a^{1-t}/chi): chi (4a - a^t chi) / (16 a).
inline double strong_q_integral(double chi, const AdmissibleParams& p) {
  const auto range = strong_chi_range(p);
  const double slack = 1e-12 * range.hi;
  if (!(chi >= range.lo - slack && chi <= range.hi + slack))
    throw RangeError("strong Q' length " + format_real(chi) + " outside [" + format_real(range.lo) + ", " +
                     format_real(range.hi) + "]");
  return chi * (4.0 * p.a - std::pow(p.a, p.t) * chi) / (16.0 * p.a);
}

/// Depth delta minimising the admissible Q' integral at fixed jump place:
/// 1/2 + (a-2) a^{t-1} (2 gamma - alpha - beta) / 2.
inline double optimal_delta(double alpha, double beta, double gamma, const AdmissibleParams& p) {
  if (!(alpha < gamma && gamma < beta))
    throw InvalidParameter("optimal delta needs alpha < gamma < beta");
  return 0.5 + 0.5 * p.min_slope_magnitude() * (2.0 * gamma - alpha - beta);
}

struct SlopeSelector {
  double stationary;  // a - 1/2 - delta / ((gamma - alpha) a^{t-1})
  double clamped;     // projected onto [0,1]
};

/// Selector v minimising the left-side integral for given (alpha, gamma, delta).
inline SlopeSelector optimal_slope_selector(double alpha, double gamma, double delta, const AdmissibleParams& p) {
  if (!(alpha < gamma)) throw InvalidParameter("slope selector needs alpha < gamma");
  const double h = gamma - alpha;
  if (!(delta > 0.0) || delta > h * p.max_slope_magnitude() * (1.0 + 1e-12))
    throw InvalidParameter("delta = " + format_real(delta) + " is not reachable within slope -a^t over " +
                           format_real(h));
  const double v = p.a - 0.5 - delta / (h * p.scale());
  return {v, std::clamp(v, 0.0, 1.0)};
}

/// chi_a = (a-2)(8a+3) / (8 (1-2a)^2); independent of t. Defined on [3,4].
inline double chi_lower_bound(double a) {
  if (!(a >= 3.0 && a <= 4.0)) throw RangeError("chi_a needs a in [3,4], got " + format_real(a));
  return (a - 2.0) * (8.0 * a + 3.0) / (8.0 * (1.0 - 2.0 * a) * (1.0 - 2.0 * a));
}

// ---------------------------------------------------------------------------
// Admissibility

enum class Property { endpoints, magnitude, discontinuities, unit_jumps, slope_band, condition_a };

inline std::string_view property_name(Property p) {
  switch (p) {
    case Property::endpoints: return "i-endpoints";
    case Property::magnitude: return "ii-magnitude";
    case Property::discontinuities: return "iii-discontinuities";
    case Property::unit_jumps: return "iv-unit-jumps";
    case Property::slope_band: return "v-slope-band";
    case Property::condition_a: return "condition-A";
  }
  return "?";
}

struct Witness {
  Property property;
  double x;         // where the violation was measured
  double measured;  // offending value, slope, spread or count
};

struct AdmissibilityReport {
  bool endpoints = true;
  bool magnitude = true;
  bool discontinuities = true;
  bool unit_jumps = true;
  bool slope_band = true;
  std::optional<bool> condition_a;  // set by check_condition_A only
  std::vector<Witness> witnesses;

  bool admissible() const { return endpoints && magnitude && discontinuities && unit_jumps && slope_band; }
  bool strongly_admissible() const { return admissible() && condition_a.value_or(false); }
  /// Conjunction of every evaluated flag.
  bool ok() const { return admissible() && condition_a.value_or(true); }

  bool passed(Property p) const {
    switch (p) {
      case Property::endpoints: return endpoints;
      case Property::magnitude: return magnitude;
      case Property::discontinuities: return discontinuities;
      case Property::unit_jumps: return unit_jumps;
      case Property::slope_band: return slope_band;
      case Property::condition_a: return condition_a.value_or(true);
    }
    return false;
  }
};

/// Properties i)-v): zero endpoints, |f| <= a^t, at most a^t discontinuities
/// all with positive jumps, at least (a-2) a^{t-1} jumps of height >= 1, and
/// every slope in [-a^t, -(a-2) a^{t-1}].
inline AdmissibilityReport check_admissible(const PLJumpFunction& f, const AdmissibleParams& p) {
  constexpr double tol = kStructuralTolerance;
  AdmissibilityReport r;
  auto fail = [&r](bool& flag, Property prop, double x, double measured) {
    if (flag) r.witnesses.push_back({prop, x, measured});
    flag = false;
  };

  if (std::abs(f.value_at_begin()) > tol) fail(r.endpoints, Property::endpoints, f.begin(), f.value_at_begin());
  const double at_end = f.left_limit(f.end());
  if (std::abs(at_end) > tol) fail(r.endpoints, Property::endpoints, f.end(), at_end);

  const double bound = p.max_slope_magnitude();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto s = f.segment(k);
    for (double y : {s.value_left, s.value_right()})
      if (std::abs(y) > bound + tol) fail(r.magnitude, Property::magnitude, s.x_left, y);
  }

  std::size_t discontinuities = 0;
  std::size_t unit = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double j = f.jump(k);
    if (std::abs(j) <= tol) continue;
    ++discontinuities;
    const double x = f.breakpoints()[k];
    if (j < 0.0) fail(r.discontinuities, Property::discontinuities, x, j);
    if (static_cast<double>(discontinuities) > p.jump_budget() + tol)
      fail(r.discontinuities, Property::discontinuities, x, static_cast<double>(discontinuities));
    if (j >= 1.0 - tol) ++unit;
  }
  if (static_cast<double>(unit) < p.required_unit_jumps() - tol)
    fail(r.unit_jumps, Property::unit_jumps, f.end(), static_cast<double>(unit));

  const double steepest = -p.max_slope_magnitude();
  const double flattest = -p.min_slope_magnitude();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double s = f.slopes()[k];
    if (s < steepest - tol || s > flattest + tol) fail(r.slope_band, Property::slope_band, f.breakpoints()[k], s);
  }
  return r;
}

/// Admissibility plus condition A: on every maximal jump-free interval, split
/// where f passes through zero, the largest slope is at most
/// min(s_min + a^{t-1}, -(a-2) a^{t-1}) with s_min the smallest slope there.
inline AdmissibilityReport check_condition_A(const PLJumpFunction& f, const AdmissibleParams& p) {
  constexpr double tol = kStructuralTolerance;
  AdmissibilityReport r = check_admissible(f, p);
  r.condition_a = true;
  const double band = p.scale();
  const double flattest = -p.min_slope_magnitude();

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double group_start = f.begin();
  auto close = [&] {
    if (lo <= hi && hi > std::min(lo + band, flattest) + tol) {
      if (*r.condition_a) r.witnesses.push_back({Property::condition_a, group_start, hi - lo});
      r.condition_a = false;
    }
    lo = std::numeric_limits<double>::infinity();
    hi = -std::numeric_limits<double>::infinity();
  };
  auto include = [&](double slope) {
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  };

  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto s = f.segment(k);
    if (k > 0 && (std::abs(f.jump(k)) > tol || std::abs(s.value_left) <= tol)) {
      close();
      group_start = s.x_left;
    }
    const double y1 = s.value_right();
    if ((s.value_left < -tol && y1 > tol) || (s.value_left > tol && y1 < -tol)) {
      // Zero inside the segment: its slope belongs to both halves.
      include(s.slope);
      close();
      group_start = s.x_left - s.value_left / s.slope;
    }
    include(s.slope);
  }
  close();
  return r;
}

// ---------------------------------------------------------------------------
// Extremal functions

enum class ExtremalMode { admissible, strong };
enum class CountRounding { admissible, nearest };

namespace detail {

// Area of |f| on a side of length h reaching depth d, shallow slope first.
inline double two_slope_side_area(double h, double depth, double shallow_mag, double steep_mag) {
  double x1 = 0.0;
  if (steep_mag - shallow_mag > 0.0) x1 = std::clamp((steep_mag * h - depth) / (steep_mag - shallow_mag), 0.0, h);
  const double knee = shallow_mag * x1;
  return 0.5 * knee * x1 + 0.5 * (knee + depth) * (h - x1);
}

inline bool side_feasible(double h, double depth, SlopePair s) {
  const double slack = feasibility_slack(-s.steep * h);
  return depth >= h * -s.shallow - slack && depth <= h * -s.steep + slack;
}

// Selector for a symmetric strong Q' part of length chi, clamped to [0,1].
inline double strong_selector(double chi, const AdmissibleParams& p) {
  return std::clamp(p.a - 0.5 - 1.0 / (chi * p.scale()), 0.0, 1.0);
}

// Minimal integral of a symmetric Q' part of length chi (delta = 1/2,
// midpoint jump); +inf when infeasible.
inline double qprime_part_integral(double chi, const AdmissibleParams& p, ExtremalMode mode) {
  const SlopePair s = mode == ExtremalMode::admissible ? admissible_slopes(p) : strong_slopes(strong_selector(chi, p), p);
  const double h = 0.5 * chi;
  if (!side_feasible(h, 0.5, s)) return std::numeric_limits<double>::infinity();
  return 2.0 * two_slope_side_area(h, 0.5, -s.shallow, -s.steep);
}

struct Tiling {
  double qprime_length = 0.0;
  double qdoubleprime_length = 0.0;
  double total = 0.0;
};

// Best equal-length tiling of [0,1] by `nq1` Q' parts and `nq2` Q'' parts.
inline Tiling optimal_tiling(const AdmissibleParams& p, ExtremalMode mode, double nq1, double nq2) {
  if (!(nq1 > 0.0)) throw ConstructionError("tiling needs at least one Q' part");
  const double lo = 1.0 / p.max_slope_magnitude();
  const double hi = std::min(1.0 / p.min_slope_magnitude(), 1.0 / nq1);
  auto total = [&](double chi) {
    const double q1 = qprime_part_integral(chi, p, mode);
    if (nq2 <= 0.0) return nq1 * q1;
    const double rest = std::max(0.0, 1.0 - nq1 * chi) / nq2;
    return nq1 * q1 + nq2 * q2_integral(rest, p);
  };
  if (nq2 <= 0.0) {
    const double chi = 1.0 / nq1;
    const double value = total(chi);
    if (!(chi >= lo * (1.0 - 1e-12) && std::isfinite(value)))
      throw ConstructionError("Q' parts alone cannot tile [0,1] with feasible lengths");
    return {chi, 0.0, value};
  }
  if (!(hi >= lo)) throw ConstructionError("no feasible Q' length for this part count");
  const auto best = bracketed_minimize(total, lo, hi, 2001, 1e-14);
  return {best.x, std::max(0.0, 1.0 - nq1 * best.x) / nq2, best.value};
}

}  // namespace detail

/// A concrete extremal candidate on [0,1] with its tiling data.
struct ExtremalConstruction {
  PLJumpFunction function;
  ExtremalMode mode = ExtremalMode::strong;
  std::size_t qprime_count = 0;
  std::size_t qdoubleprime_count = 0;
  double qprime_length = 0.0;
  double qdoubleprime_length = 0.0;
  double selector = 0.0;           // v = v' of every Q' part (strong mode)
  double integral = 0.0;           // \int_0^1 |f|
  double real_count_total = 0.0;   // optimum with the real part counts
  double rounding_gap = 0.0;       // integral - real_count_total
  std::vector<SegmentSpec> parts;  // left to right
};

/// Minimum of the part model with the real counts (a-2) a^{t-1} Q' parts and
/// 2 a^{t-1} Q'' parts, lengths chosen optimally.
inline double real_count_minimum(const AdmissibleParams& p, ExtremalMode mode) {
  return detail::optimal_tiling(p, mode, p.required_unit_jumps(), 2.0 * p.scale()).total;
}

/// Builds a function from `parts`, which must tile an interval left to right.
inline PLJumpFunction build_from_parts(const std::vector<SegmentSpec>& parts, const AdmissibleParams& p,
                                       ExtremalMode mode) {
  if (parts.empty()) throw ConstructionError("no parts to assemble");
  PiecewiseLinearBuilder b(parts.front().alpha, 0.0);
  for (const auto& part : parts) {
    if (part.kind == PartKind::qdoubleprime) {
      const double slope = -p.min_slope_magnitude();
      if (!(part.alpha < part.gamma && part.gamma < part.beta))
        throw ConstructionError("Q'' part needs alpha < gamma < beta");
      b.append(build_qdoubleprime(part.alpha, part.beta, p, part.gamma));
      (void)slope;
    } else if (mode == ExtremalMode::strong) {
      b.append(build_qprime_strong(part, p));
    } else {
      b.append(build_qprime_admissible(part, p));
    }
  }
  return std::move(b).build();
}

/// Tiles [0,1] with equal-length Q' parts (jump height 1 split evenly at the
/// midpoint) followed by equal-length Q'' parts. Part counts: `admissible`
/// rounding takes ceil((a-2) a^{t-1}) Q' parts and as many of round(2 a^{t-1})
/// Q'' parts as the discontinuity budget floor(a^t) allows; `nearest` rounds
/// both counts to the nearest integer.
inline ExtremalConstruction assemble_extremal(const AdmissibleParams& p, ExtremalMode mode,
                                              CountRounding rounding = CountRounding::admissible) {
  const double need = p.required_unit_jumps();
  long long nq1 = 0;
  long long nq2 = 0;
  if (rounding == CountRounding::admissible) {
    nq1 = static_cast<long long>(std::ceil(need - kStructuralTolerance));
    const auto budget = static_cast<long long>(std::floor(p.jump_budget() + kStructuralTolerance));
    nq2 = std::min(std::llround(2.0 * p.scale()), budget - nq1);
  } else {
    nq1 = std::llround(need);
    nq2 = std::llround(2.0 * p.scale());
  }
  nq2 = std::max(0LL, nq2);
  if (nq1 < 1) throw ConstructionError("rounded Q' count is zero");

  const auto tiling = detail::optimal_tiling(p, mode, static_cast<double>(nq1), static_cast<double>(nq2));

  ExtremalConstruction out;
  out.mode = mode;
  out.qprime_count = static_cast<std::size_t>(nq1);
  out.qdoubleprime_count = static_cast<std::size_t>(nq2);
  out.qprime_length = tiling.qprime_length;
  out.qdoubleprime_length = tiling.qdoubleprime_length;
  out.selector = mode == ExtremalMode::strong ? detail::strong_selector(tiling.qprime_length, p) : 0.0;

  double x = 0.0;
  for (long long i = 0; i < nq1; ++i) {
    const double chi = tiling.qprime_length;
    out.parts.push_back({x, x + chi, x + 0.5 * chi, 0.5, 0.5, PartKind::qprime, out.selector, out.selector});
    x += chi;
  }
  for (long long i = 0; i < nq2; ++i) {
    const double len = tiling.qdoubleprime_length;
    if (len <= 0.0) break;
    const double half = 0.5 * len;
    const double depth = p.min_slope_magnitude() * half;
    out.parts.push_back({x, x + len, x + half, depth, depth, PartKind::qdoubleprime, 0.0, 0.0});
    x += len;
  }
  out.parts.back().beta = 1.0;

  out.function = build_from_parts(out.parts, p, mode);
  out.integral = integrate_abs(out.function);
  out.real_count_total = real_count_minimum(p, mode);
  out.rounding_gap = out.integral - out.real_count_total;
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

enum class OracleFamily { structured, perturbed };

struct OracleResult {
  double minimum = std::numeric_limits<double>::infinity();
  /// structured: (chi, delta, gamma offset as a fraction of chi, v, v') at the
  /// minimum.
  std::array<double, 5> argmin{};
  std::size_t evaluations = 0;
  /// perturbed: competitors that built and were strongly admissible.
  std::size_t accepted = 0;
  /// perturbed: accepted competitors beating the baseline by more than 1e-9.
  std::size_t improving = 0;
  double baseline = std::numeric_limits<double>::infinity();
};

namespace detail {

// Real-count objective of the two-slope strong family, computed from built
// shapes: (a-2) a^{t-1} Q' parts with parameters theta plus 2 a^{t-1}
// symmetric Q'' parts filling the rest of [0,1].
inline double structured_objective(const std::array<double, 5>& theta, const AdmissibleParams& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double chi = theta[0];
  const double delta = theta[1];
  const double frac = theta[2];
  if (!(chi > 0.0 && delta > 0.0 && delta < 1.0 && frac > 0.0 && frac < 1.0)) return inf;
  const double nq1 = p.required_unit_jumps();
  const double nq2 = 2.0 * p.scale();
  const double rest = (1.0 - nq1 * chi) / nq2;
  if (rest < 0.0) return inf;
  SegmentSpec seg{0.0, chi, frac * chi, delta, 1.0 - delta, PartKind::qprime, theta[3], theta[4]};
  auto part = try_qprime_strong(seg, p);
  if (!part.function) return inf;
  double total = nq1 * integrate_abs(*part.function);
  if (rest > 0.0) total += nq2 * integrate_abs(build_qdoubleprime(0.0, rest, p));
  return total;
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::array<double, 5> theta{};
};

inline OracleResult structured_oracle(const AdmissibleParams& p, std::size_t resolution) {
  const double inv = 1.0 / p.scale();
  const std::array<double, 5> lo{inv / p.a, 0.0, 0.0, 0.0, 0.0};
  const std::array<double, 5> hi{inv / (p.a - 2.0), 1.0, 1.0, 2.0, 2.0};
  constexpr std::size_t grid = 9;

  OracleResult result;
  // Coarse grid, lexicographic order; strict improvement keeps the first
  // minimum found.
  std::vector<Candidate> per_chunk(grid);
  std::vector<std::size_t> counts(grid, 0);
  parallel_chunks(grid, std::min(grid, thread_limit()), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i0 = begin; i0 < end; ++i0) {
      Candidate best;
      std::array<double, 5> th{};
      auto at = [&](std::size_t d, std::size_t i) {
        return lo[d] + (hi[d] - lo[d]) * static_cast<double>(i) / static_cast<double>(grid - 1);
      };
      th[0] = at(0, i0);
      for (std::size_t i1 = 0; i1 < grid; ++i1)
        for (std::size_t i2 = 0; i2 < grid; ++i2)
          for (std::size_t i3 = 0; i3 < grid; ++i3)
            for (std::size_t i4 = 0; i4 < grid; ++i4) {
              th[1] = at(1, i1);
              th[2] = at(2, i2);
              th[3] = at(3, i3);
              th[4] = at(4, i4);
              const double v = structured_objective(th, p);
              ++counts[i0];
              if (v < best.value) best = {v, th};
            }
      per_chunk[i0] = best;
    }
  });
  Candidate best;
  for (std::size_t i = 0; i < grid; ++i) {
    result.evaluations += counts[i];
    if (per_chunk[i].value < best.value) best = per_chunk[i];
  }
  if (!std::isfinite(best.value)) throw ConstructionError("structured oracle found no feasible grid point");

  // Pattern refinement: 5 offsets per axis around the incumbent, halving the
  // step until it drops below range / resolution^2.
  std::array<double, 5> step{};
  for (std::size_t d = 0; d < 5; ++d) step[d] = (hi[d] - lo[d]) / static_cast<double>(grid - 1);
  const double final_fraction = 1.0 / (static_cast<double>(resolution) * static_cast<double>(resolution));
  constexpr std::array<double, 5> offsets{-1.0, -0.5, 0.0, 0.5, 1.0};
  while (step[0] > (hi[0] - lo[0]) * final_fraction) {
    bool moved = true;
    while (moved) {
      moved = false;
      const Candidate centre = best;
      std::array<std::size_t, 5> idx{};
      for (std::size_t flat = 0; flat < 3125; ++flat) {
        std::size_t rem = flat;
        for (std::size_t d = 5; d-- > 0;) {
          idx[d] = rem % 5;
          rem /= 5;
        }
        std::array<double, 5> th{};
        for (std::size_t d = 0; d < 5; ++d)
          th[d] = std::clamp(centre.theta[d] + offsets[idx[d]] * step[d], lo[d], hi[d]);
        const double v = structured_objective(th, p);
        ++result.evaluations;
        if (v < best.value - 1e-15) {
          best = {v, th};
          moved = true;
        }
      }
    }
    for (auto& s : step) s *= 0.5;
  }
  result.minimum = best.value;
  result.argmin = best.theta;
  return result;
}

inline OracleResult perturbed_oracle(const AdmissibleParams& p, std::size_t resolution) {
  const auto base = assemble_extremal(p, ExtremalMode::strong);
  OracleResult result;
  result.baseline = base.integral;
  result.minimum = base.integral;

  std::mt19937_64 rng(0x5eed0f5eedULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const std::size_t trials = 16 * resolution;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const double eps = std::pow(10.0, -2.0 - static_cast<double>(trial % 4));
    auto parts = base.parts;
    for (auto& part : parts) {
      if (!coin(rng)) continue;
      const double len = (part.beta - part.alpha) * (1.0 + eps * unit(rng));
      const double frac = std::clamp((part.gamma - part.alpha) / (part.beta - part.alpha) + eps * unit(rng), 0.01, 0.99);
      part.beta = part.alpha + len;
      part.gamma = part.alpha + frac * len;
      if (part.kind == PartKind::qprime) {
        part.delta = part.delta + eps * unit(rng);
        part.tau = 1.0 - part.delta + (coin(rng) ? eps * std::abs(unit(rng)) : 0.0);
        part.v = std::clamp(part.v + eps * unit(rng), 0.0, 2.0);
        part.v_prime = std::clamp(part.v_prime + eps * unit(rng), 0.0, 2.0);
      }
    }
    // Re-tile [0,1] left to right.
    double total = 0.0;
    for (const auto& part : parts) total += part.beta - part.alpha;
    double x = 0.0;
    for (auto& part : parts) {
      const double scale = 1.0 / total;
      const double len = (part.beta - part.alpha) * scale;
      const double off = (part.gamma - part.alpha) * scale;
      if (part.kind == PartKind::qdoubleprime) {
        part.delta = p.min_slope_magnitude() * off;
        part.tau = p.min_slope_magnitude() * (len - off);
      }
      part.alpha = x;
      part.gamma = x + off;
      part.beta = x + len;
      x += len;
    }
    parts.back().beta = 1.0;

    ++result.evaluations;
    PLJumpFunction candidate;
    try {
      candidate = build_from_parts(parts, p, ExtremalMode::strong);
    } catch (const ConstructionError&) {
      continue;
    }
    if (!check_condition_A(candidate, p).strongly_admissible()) continue;
    ++result.accepted;
    const double value = integrate_abs(candidate);
    if (value < result.minimum) result.minimum = value;
    if (base.integral - value > 1e-9) ++result.improving;
  }
  return result;
}

}  // namespace detail

/// Numeric search for the strongly admissible minimum, independent of the
/// closed forms. `structured` grid-searches (chi, delta, gamma offset, v, v')
/// over the two-slope family with real part counts; `perturbed` applies
/// random strongly admissible perturbations to assemble_extremal(strong) and
/// counts improvements.
inline OracleResult oracle_minimize(const AdmissibleParams& p, OracleFamily family, std::size_t resolution) {
  if (resolution < 8) throw InvalidParameter("oracle resolution must be >= 8");
  return family == OracleFamily::structured ? detail::structured_oracle(p, resolution)
                                            : detail::perturbed_oracle(p, resolution);
}

}  // namespace disclab
