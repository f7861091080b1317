#pragma once

// Counting function A_n(x), discrepancy function D_n(x), exact star
// discrepancy of finite sets and per-prefix n * D_n* profiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/points.hpp"

namespace disclab {

namespace detail {
inline void check_prefix(const PointSet& points, std::size_t n) {
  if (n < 1 || n > points.size())
    throw InvalidParameter("prefix length n = " + std::to_string(n) + " outside 1.." +
                           std::to_string(points.size()));
}
}  // namespace detail

/// A_n(x) = #{ i <= n : x_i < x }.
inline std::size_t count_below(const PointSet& points, std::size_t n, double x) {
  detail::check_prefix(points, n);
  const auto v = points.values().first(n);
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [x](double p) { return p < x; }));
}

/// D_n(x) = A_n(x) - n x.
inline double disc_function(const PointSet& points, std::size_t n, double x) {
  return static_cast<double>(count_below(points, n, x)) - static_cast<double>(n) * x;
}

/// n * D_n* for an ascending range of n values:
/// max_i max(i - n x_(i), n x_(i) - (i - 1)).
template <typename SortedRange>
double scaled_star_discrepancy(const SortedRange& sorted) {
  const double n = static_cast<double>(std::size(sorted));
  double best = 0.0;
  double i = 0.0;
  for (double v : sorted) {
    i += 1.0;
    best = std::max(best, std::max(i - n * v, n * v - (i - 1.0)));
  }
  return best;
}

/// D_N* = sup_x |A_N(x)/N - x|, evaluated exactly from the sorted values.
inline double star_discrepancy(const PointSet& points) {
  if (points.empty()) throw InvalidParameter("star discrepancy of an empty point set");
  const auto sorted = points.sorted_values();
  return scaled_star_discrepancy(sorted) / static_cast<double>(sorted.size());
}

// ---------------------------------------------------------------------------
// Profiles

struct ProfileSchedule {
  enum class Kind { all, checkpointed };

  Kind kind = Kind::all;
  double ratio = 1.01;           // geometric growth between checkpoints
  std::size_t dense_until = 0;   // every n <= dense_until is evaluated

  static ProfileSchedule all() { return {Kind::all, 1.0, 0}; }

  static ProfileSchedule checkpointed(double ratio, std::size_t dense_until = 0) {
    if (!(ratio > 1.0)) throw InvalidParameter("checkpoint ratio must exceed 1, got " + format_real(ratio));
    return {Kind::checkpointed, ratio, dense_until};
  }

  /// Exact for n <= 4096, geometric checkpoints of ratio 1.01 beyond.
  static ProfileSchedule standard() { return checkpointed(1.01, 4096); }

  /// The evaluated prefix lengths up to `count`, ascending; `count` itself is
  /// always included.
  std::vector<std::size_t> indices(std::size_t count) const {
    std::vector<std::size_t> out;
    if (count == 0) return out;
    if (kind == Kind::all) {
      out.resize(count);
      for (std::size_t n = 1; n <= count; ++n) out[n - 1] = n;
      return out;
    }
    std::size_t n = 1;
    while (n <= count) {
      out.push_back(n);
      if (n < dense_until) {
        ++n;
      } else {
        const auto grown = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio));
        n = std::max(n + 1, grown);
      }
    }
    if (out.back() != count) out.push_back(count);
    return out;
  }
};

struct ProfileEntry {
  std::size_t n = 0;
  double n_dstar = 0.0;  // n * D_n*

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

struct DiscrepancyProfile {
  std::vector<ProfileEntry> entries;
  ProfileSchedule schedule;
};

/// n * D_n* of every scheduled prefix. The prefix is kept in an ordered
/// multiset (O(log n) insertion) and scanned in O(n) at each evaluated n.
inline DiscrepancyProfile profile(const PointSet& points,
                                  const ProfileSchedule& schedule = ProfileSchedule::all()) {
  if (points.empty()) throw InvalidParameter("profile of an empty point set");
  DiscrepancyProfile result;
  result.schedule = schedule;
  const auto wanted = schedule.indices(points.size());
  result.entries.reserve(wanted.size());
  std::multiset<double> prefix;
  auto next = wanted.begin();
  const auto values = points.values();
  for (std::size_t n = 1; n <= values.size() && next != wanted.end(); ++n) {
    prefix.insert(values[n - 1]);
    if (*next == n) {
      result.entries.push_back({n, scaled_star_discrepancy(prefix)});
      ++next;
    }
  }
  return result;
}

/// max over entries with n >= floor_n of n D_n* / log n.
inline double max_ratio(const DiscrepancyProfile& prof, std::size_t floor_n) {
  if (floor_n < 2) throw InvalidParameter("floor-n must be >= 2");
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& e : prof.entries) {
    if (e.n < floor_n) continue;
    any = true;
    best = std::max(best, e.n_dstar / std::log(static_cast<double>(e.n)));
  }
  if (!any) throw InvalidParameter("profile has no entry with n >= " + std::to_string(floor_n));
  return best;
}

/// CSV with header `n,n_dstar,ratio`; ratio = n D_n* / log n (nan at n = 1).
inline void write_profile_csv(std::ostream& out, const DiscrepancyProfile& prof) {
  out << "n,n_dstar,ratio\n";
  for (const auto& e : prof.entries) {
    const double ratio = e.n >= 2 ? e.n_dstar / std::log(static_cast<double>(e.n))
                                  : std::numeric_limits<double>::quiet_NaN();
    out << e.n << ',' << format_real(e.n_dstar) << ',' << format_real(ratio) << '\n';
  }
}

}  // namespace disclab
