#pragma once

// Windowed envelopes x -> max / min_{n in W} D_n(x), the functions
//   f = max_{A2} D_n - max_{A0} D_n,   g = min_{A2} D_n - min_{A0} D_n,
// and the spread integral P(t) = \int_0^1 (max_A D_n - min_A D_n) dx.
//
// Between consecutive distinct point values every D_n is the line
// c_n - n x with c_n the number of the first n points at or below the left
// end, so each envelope piece is an upper (or lower) hull of |W| lines with
// distinct slopes -n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/parallel.hpp"
#include "disclab/piecewise_linear.hpp"
#include "disclab/points.hpp"

namespace disclab {

using EnvelopeFunction = PiecewiseLinear;

/// Contiguous 1-based index range {first, ..., last}.
struct IndexWindow {
  std::size_t first = 1;
  std::size_t last = 0;

  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
  bool contains(std::size_t n) const { return n >= first && n <= last; }

  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;
};

/// N = floor(a^t), m = floor(a^{t-1}); A0 = {1..m}, A2 = {N-m+1..N}, A1 the rest.
struct WindowScheme {
  double a = 0.0;
  int t = 0;
  std::size_t N = 0;
  std::size_t m = 0;

  static WindowScheme make(double a, int t) {
    if (!(a > 3.0 && a < 4.0)) throw RangeError("window base a must lie in (3,4), got " + format_real(a));
    if (t < 1) throw InvalidParameter("window level t must be >= 1, got " + std::to_string(t));
    WindowScheme s;
    s.a = a;
    s.t = t;
    s.N = static_cast<std::size_t>(std::floor(std::pow(a, t)));
    s.m = static_cast<std::size_t>(std::floor(std::pow(a, t - 1)));
    return s;
  }

  IndexWindow full() const { return {1, N}; }
  IndexWindow low() const { return {1, m}; }
  IndexWindow middle() const { return {m + 1, N - m}; }
  IndexWindow high() const { return {N - m + 1, N}; }
};

enum class EnvelopeMode { max, min };

/// Envelope together with the index n attaining it on each segment.
struct IndexedEnvelope {
  EnvelopeFunction function;
  std::vector<std::size_t> active;
};

namespace detail {

struct EnvelopePiece {
  double x_right;
  double slope;
  double value_left;
  std::size_t index;
};

// Appends the pieces of max_{n in W} s * (c_n - n x) on (l, r], expressed
// back as D_n lines. `counts[j]` is c_{first + j}.
inline void hull_pieces(const std::vector<double>& counts, const IndexWindow& w, EnvelopeMode mode,
                        double l, double r, std::vector<std::size_t>& hull,
                        std::vector<EnvelopePiece>& out) {
  const double s = mode == EnvelopeMode::max ? 1.0 : -1.0;
  const std::size_t size = w.size();
  // Lines s*c_n + (-s*n) x in ascending slope order.
  auto index_of = [&](std::size_t rank) {
    return mode == EnvelopeMode::max ? w.last - rank : w.first + rank;
  };
  auto intercept = [&](std::size_t n) { return s * counts[n - w.first]; };
  auto slope = [&](std::size_t n) { return -s * static_cast<double>(n); };

  hull.clear();
  for (std::size_t rank = 0; rank < size; ++rank) {
    const std::size_t n3 = index_of(rank);
    while (hull.size() >= 2) {
      const std::size_t n1 = hull[hull.size() - 2];
      const std::size_t n2 = hull.back();
      // Drop n2 if the n1/n3 crossing is at or left of the n1/n2 crossing.
      const double lhs = (intercept(n1) - intercept(n3)) * (slope(n2) - slope(n1));
      const double rhs = (intercept(n1) - intercept(n2)) * (slope(n3) - slope(n1));
      if (lhs <= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(n3);
  }

  double start = l;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const std::size_t n = hull[i];
    double right = r;
    if (i + 1 < hull.size()) {
      const std::size_t nn = hull[i + 1];
      right = std::min(r, (intercept(n) - intercept(nn)) / (slope(nn) - slope(n)));
    }
    if (right > start) {
      const double c = counts[n - w.first];
      const double dn = static_cast<double>(n);
      out.push_back({right, -dn, c - dn * start, n});
      start = right;
    }
    if (start >= r) break;
  }
}

}  // namespace detail

inline void check_window(const PointSet& points, const IndexWindow& w) {
  if (w.first < 1 || w.size() == 0)
    throw InvalidParameter("empty index window {" + std::to_string(w.first) + ".." + std::to_string(w.last) + "}");
  if (w.last > points.size())
    throw InvalidParameter("index window ends at " + std::to_string(w.last) + " but only " +
                           std::to_string(points.size()) + " points are available");
}

/// Exact envelope of D_n(x), n in `window`, over [0,1].
inline IndexedEnvelope window_envelope_indexed(const PointSet& points, const IndexWindow& window,
                                               EnvelopeMode mode) {
  check_window(points, window);
  const auto values = points.values().first(window.last);

  // Distinct values u_1 < ... < u_K and the sequence indices sitting at each.
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  std::vector<double> distinct;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t pos : order) {
    if (distinct.empty() || values[pos] > distinct.back()) {
      distinct.push_back(values[pos]);
      members.emplace_back();
    }
    members.back().push_back(pos + 1);
  }

  // Interval k is (u_k, u_{k+1}] with u_0 = 0 and u_{K+1} = 1.
  const std::size_t intervals = distinct.size() + 1;
  auto left_end = [&](std::size_t k) { return k == 0 ? 0.0 : distinct[k - 1]; };
  auto right_end = [&](std::size_t k) { return k < distinct.size() ? distinct[k] : 1.0; };

  const std::size_t chunks = chunk_count(intervals * window.size(), std::size_t{1} << 16);
  std::vector<std::vector<detail::EnvelopePiece>> pieces(std::max<std::size_t>(1, std::min(chunks, intervals)));
  parallel_chunks(intervals, chunks, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    std::vector<double> counts(window.size(), 0.0);
    if (begin > 0) {
      const double cut = distinct[begin - 1];
      std::size_t running = 0;
      for (std::size_t n = 1; n <= window.last; ++n) {
        if (values[n - 1] <= cut) ++running;
        if (n >= window.first) counts[n - window.first] = static_cast<double>(running);
      }
    }
    std::vector<std::size_t> hull;
    hull.reserve(window.size());
    auto& out = pieces[chunk];
    for (std::size_t k = begin; k < end; ++k) {
      detail::hull_pieces(counts, window, mode, left_end(k), right_end(k), hull, out);
      if (k < distinct.size()) {
        for (std::size_t i : members[k])
          for (std::size_t n = std::max(i, window.first); n <= window.last; ++n) counts[n - window.first] += 1.0;
      }
    }
  });

  IndexedEnvelope result;
  PiecewiseLinearBuilder builder(0.0, 0.0);
  for (const auto& chunk : pieces)
    for (const auto& p : chunk)
      if (builder.add(p.x_right, p.slope, p.value_left)) result.active.push_back(p.index);
  result.function = std::move(builder).build();
  return result;
}

inline EnvelopeFunction window_envelope(const PointSet& points, const IndexWindow& window, EnvelopeMode mode) {
  return window_envelope_indexed(points, window, mode).function;
}

/// Pointwise difference, e.g. f = max-envelope(A2) - max-envelope(A0).
inline EnvelopeFunction envelope_difference(const EnvelopeFunction& upper2, const EnvelopeFunction& upper0) {
  return upper2 - upper0;
}

inline void check_scheme(const PointSet& points, const WindowScheme& scheme) {
  if (points.size() < scheme.N)
    throw InvalidParameter("window scheme needs N = " + std::to_string(scheme.N) + " points, got " +
                           std::to_string(points.size()));
}

/// f(x) = max_{n in A2} D_n(x) - max_{n in A0} D_n(x).
inline EnvelopeFunction window_f(const PointSet& points, const WindowScheme& scheme) {
  check_scheme(points, scheme);
  return envelope_difference(window_envelope(points, scheme.high(), EnvelopeMode::max),
                             window_envelope(points, scheme.low(), EnvelopeMode::max));
}

/// g(x) = min_{n in A2} D_n(x) - min_{n in A0} D_n(x).
inline EnvelopeFunction window_g(const PointSet& points, const WindowScheme& scheme) {
  check_scheme(points, scheme);
  return envelope_difference(window_envelope(points, scheme.high(), EnvelopeMode::min),
                             window_envelope(points, scheme.low(), EnvelopeMode::min));
}

/// max_{n in W} D_n - min_{n in W} D_n as a piecewise-linear function.
inline EnvelopeFunction window_spread(const PointSet& points, const IndexWindow& window) {
  return envelope_difference(window_envelope(points, window, EnvelopeMode::max),
                             window_envelope(points, window, EnvelopeMode::min));
}

/// \int_0^1 (max_{n in W} D_n - min_{n in W} D_n) dx.
inline double spread_integral(const PointSet& points, const IndexWindow& window) {
  return integrate(window_spread(points, window));
}

/// P(t) over the full window A = {1..N}, using the first N points.
inline double p_integral(const PointSet& points, const WindowScheme& scheme) {
  check_scheme(points, scheme);
  return spread_integral(points, scheme.full());
}

}  // namespace disclab
