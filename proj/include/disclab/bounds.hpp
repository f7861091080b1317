#pragma once

// From chi_a to the discrepancy constant: c(a) = chi_a / (2 ln a), its
// maximisation over a, the range-splitting inequality, and finite-N checks of
// the bound chain on concrete sequences.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "disclab/discrepancy.hpp"
#include "disclab/envelope.hpp"
#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/optimize.hpp"
#include "disclab/points.hpp"
#include "disclab/variational.hpp"

namespace disclab {

/// Known values of the constant: previous lower bound, upper bound, and the
/// lower bound reproduced here.
struct ReferenceConstants {
  double bejian = 0.06015;
  double ostromoukhov_upper = 0.222;
  double theorem = 0.0646363;
};

/// chi_a / (2 ln a) on the open interval (3,4).
inline double c_of_a(double a) {
  if (!(a > 3.0 && a < 4.0)) throw RangeError("c(a) needs a in (3,4), got " + format_real(a));
  return chi_lower_bound(a) / (2.0 * std::log(a));
}

struct ScanPoint {
  double a;
  double c;
};

namespace detail {
// Endpoints outside the open domain are pulled inside by a relative hair.
inline double inside_domain(double a, double width) {
  const double hair = 1e-9 * width;
  return std::clamp(a, 3.0 + hair, 4.0 - hair);
}
}  // namespace detail

/// c(a) at `samples` evenly spaced points of [lo, hi] (inclusive, endpoints
/// nudged into (3,4)).
inline std::vector<ScanPoint> scan_constant(double lo, double hi, std::size_t samples) {
  if (!(lo >= 3.0 && hi <= 4.0 && lo < hi)) throw RangeError("scan interval must satisfy 3 <= lo < hi <= 4");
  if (samples < 2) throw InvalidParameter("scan needs at least 2 samples");
  std::vector<ScanPoint> out(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double raw = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double a = detail::inside_domain(raw, hi - lo);
    out[i] = {a, c_of_a(a)};
  }
  return out;
}

/// Number of sign changes of the discrete difference of a scan; 0 or 1 means
/// unimodal.
inline std::size_t scan_sign_changes(const std::vector<ScanPoint>& scan) {
  std::size_t changes = 0;
  int last = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    const double d = scan[i].c - scan[i - 1].c;
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

struct ConstantOptimum {
  double a_star = 0.0;
  double c_star_lower = 0.0;
  bool unimodal = false;  // pre-scan saw at most one sign change
};

/// Maximises c(a) over [lo, hi]: a 1000-point pre-scan certifies unimodality
/// and brackets the maximum, golden-section search refines it to `tol`.
/// Endpoints count when they lie inside (3,4).
inline ConstantOptimum optimize_constant(double lo, double hi, double tol) {
  if (!(lo >= 3.0 && hi <= 4.0 && lo < hi))
    throw RangeError("optimisation interval must satisfy 3 <= lo < hi <= 4, got (" + format_real(lo) + ", " +
                     format_real(hi) + ")");
  if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");
  constexpr std::size_t samples = 1000;
  const auto scan = scan_constant(lo, hi, samples);
  ConstantOptimum out;
  out.unimodal = scan_sign_changes(scan) <= 1;

  // Smallest a wins ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples; ++i)
    if (scan[i].c > scan[best].c) best = i;
  const double left = scan[best == 0 ? 0 : best - 1].a;
  const double right = scan[std::min(best + 1, samples - 1)].a;
  auto refined = golden_section_maximize([](double a) { return c_of_a(a); }, left, right, tol);
  if (!(refined.value > scan[best].c)) refined = {scan[best].a, scan[best].c};
  out.a_star = refined.x;
  out.c_star_lower = refined.value;
  return out;
}

struct BoundReport {
  std::optional<double> a;  // evaluation point, when one was requested
  std::optional<double> chi_a;
  std::optional<double> c_of_a;
  std::optional<ConstantOptimum> optimum;
  ReferenceConstants references;
  std::vector<ScanPoint> scan;
};

inline nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  if (r.a) {
    j["a"] = *r.a;
    j["chi_a"] = *r.chi_a;
    j["c_of_a"] = *r.c_of_a;
  }
  if (r.optimum) {
    j["a_star"] = r.optimum->a_star;
    j["c_star_lower"] = r.optimum->c_star_lower;
    j["chi_a_star"] = chi_lower_bound(r.optimum->a_star);
    j["unimodal_scan"] = r.optimum->unimodal;
  }
  j["references"] = {{"bejian", r.references.bejian},
                     {"ostromoukhov-upper", r.references.ostromoukhov_upper},
                     {"theorem", r.references.theorem}};
  if (!r.scan.empty()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : r.scan) arr.push_back({s.a, s.c});
    j["scan"] = std::move(arr);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Range splitting

struct RangeSplit {
  double lhs;  // max - min over all values
  double rhs;  // half spreads of both subsets plus half the max/min offsets
};

/// For values indexed 1..|A| and 1-based index subsets A0, A2:
/// lhs = max_A - min_A, rhs = (max_{A2} - min_{A2})/2 + (max_{A0} - min_{A0})/2
///       + |max_{A2} - max_{A0}|/2 + |min_{A2} - min_{A0}|/2.
inline RangeSplit range_split_inequality(std::span<const double> values, std::span<const std::size_t> a0,
                                         std::span<const std::size_t> a2) {
  if (values.empty()) throw InvalidParameter("range split needs a nonempty value set");
  if (a0.empty() || a2.empty()) throw InvalidParameter("range split needs nonempty subsets A0 and A2");
  auto extremes = [&](std::span<const std::size_t> idx) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i : idx) {
      if (i < 1 || i > values.size())
        throw InvalidParameter("subset index " + std::to_string(i) + " outside 1.." + std::to_string(values.size()));
      lo = std::min(lo, values[i - 1]);
      hi = std::max(hi, values[i - 1]);
    }
    return std::pair{lo, hi};
  };
  const auto [min_all, max_all] = std::minmax_element(values.begin(), values.end());
  const auto [min0, max0] = extremes(a0);
  const auto [min2, max2] = extremes(a2);
  return {*max_all - *min_all,
          0.5 * (max2 - min2) + 0.5 * (max0 - min0) + 0.5 * std::abs(max2 - max0) + 0.5 * std::abs(min2 - min0)};
}

// ---------------------------------------------------------------------------
// Finite-N checks

struct BoundCheck {
  bool holds = false;
  std::size_t witness_n = 0;  // prefix length attaining max n D_n*
  double margin = 0.0;        // max n D_n* - threshold
  double threshold = 0.0;     // log N * c(a)
  double max_nd = 0.0;
};

/// max over scheduled n <= N of n D_n*, compared with log N * c(a). A finite
/// check only: the asymptotic statement is about infinitely many n.
inline BoundCheck verify_bound(const PointSet& points, double a,
                               const ProfileSchedule& schedule = ProfileSchedule::standard()) {
  if (points.size() < 2) throw InvalidParameter("bound check needs N >= 2 points");
  const double c = c_of_a(a);
  const auto prof = profile(points, schedule);
  BoundCheck out;
  for (const auto& e : prof.entries)
    if (e.n_dstar > out.max_nd) {
      out.max_nd = e.n_dstar;
      out.witness_n = e.n;
    }
  out.threshold = std::log(static_cast<double>(points.size())) * c;
  out.margin = out.max_nd - out.threshold;
  out.holds = out.margin >= 0.0;
  return out;
}

struct ChainStep {
  int t = 0;
  std::size_t N = 0;
  double p = 0.0;      // P(t)
  double bound = 0.0;  // t * chi_a
  bool pass = false;   // P(t) >= t chi_a - 1e-9
};

/// P(t) for t = 1..t_max against t * chi_a.
inline std::vector<ChainStep> p_chain_check(const PointSet& points, double a, int t_max) {
  if (t_max < 1) throw InvalidParameter("t-max must be >= 1");
  const auto last = WindowScheme::make(a, t_max);
  check_scheme(points, last);
  const double chi = chi_lower_bound(a);
  std::vector<ChainStep> out;
  for (int t = 1; t <= t_max; ++t) {
    const auto scheme = WindowScheme::make(a, t);
    ChainStep s;
    s.t = t;
    s.N = scheme.N;
    s.p = p_integral(points, scheme);
    s.bound = t * chi;
    s.pass = s.p >= s.bound - 1e-9;
    out.push_back(s);
  }
  return out;
}

}  // namespace disclab
