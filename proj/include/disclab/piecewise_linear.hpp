#pragma once

// Piecewise-linear functions with jump discontinuities.
//
// A function on [b_0, b_K] is stored as breakpoints b_0 < b_1 < ... < b_K and,
// for each segment (b_k, b_{k+1}], a slope and the limit from the right at
// b_k. Evaluation is left-continuous: at a breakpoint the function takes the
// limit from the left, and at b_0 it takes a separately stored value.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "disclab/error.hpp"
#include "disclab/format.hpp"

namespace disclab {

/// Breakpoints closer than this are treated as one.
inline constexpr double kBreakpointMergeTolerance = 1e-15;

class PiecewiseLinear {
 public:
  struct Segment {
    double x_left;
    double x_right;
    double slope;
    double value_left;  // limit from the right at x_left

    double value_right() const { return value_left + slope * (x_right - x_left); }
    double at(double x) const { return value_left + slope * (x - x_left); }
    double length() const { return x_right - x_left; }
  };

  PiecewiseLinear() = default;

  static PiecewiseLinear constant(double begin, double end, double value);
  static PiecewiseLinear zero() { return constant(0.0, 1.0, 0.0); }

  double begin() const { return breaks_.front(); }
  double end() const { return breaks_.back(); }
  double value_at_begin() const { return origin_value_; }
  std::size_t size() const { return slopes_.size(); }
  bool empty() const { return slopes_.empty(); }

  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const double> slopes() const { return slopes_; }

  Segment segment(std::size_t k) const { return {breaks_[k], breaks_[k + 1], slopes_[k], starts_[k]}; }

  /// Index of the segment (b_k, b_{k+1}] containing x; x = b_0 maps to 0.
  std::size_t locate(double x) const {
    auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), x);
    if (it == breaks_.end()) return size() - 1;
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  /// Index of the segment [b_k, b_{k+1}) whose right-limit governs x.
  std::size_t locate_right(double x) const {
    auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end(), x);
    if (it == breaks_.end()) return size() - 1;
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  /// f(x) with the left-limit convention at jumps.
  double operator()(double x) const {
    if (x <= begin()) return origin_value_;
    return segment(locate(x)).at(x);
  }

  double left_limit(double x) const {
    if (x <= begin()) return origin_value_;
    return segment(locate(x)).at(x);
  }

  double right_limit(double x) const { return segment(locate_right(x)).at(x); }

  /// Right limit minus left limit at breakpoint b_k, k < size().
  double jump(std::size_t k) const {
    const double before = k == 0 ? origin_value_ : segment(k - 1).value_right();
    return starts_[k] - before;
  }

  std::vector<double> jumps() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < size(); ++k) out[k] = jump(k);
    return out;
  }

 private:
  friend class PiecewiseLinearBuilder;

  double origin_value_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> slopes_;
  std::vector<double> starts_;
};

/// Appends segments left to right.
class PiecewiseLinearBuilder {
 public:
  PiecewiseLinearBuilder(double begin, double value_at_begin) {
    fn_.origin_value_ = value_at_begin;
    fn_.breaks_.push_back(begin);
  }

  double end() const { return fn_.breaks_.back(); }

  /// Value at the current right end (left limit there).
  double end_value() const {
    return fn_.slopes_.empty() ? fn_.origin_value_ : fn_.segment(fn_.size() - 1).value_right();
  }

  /// Adds (end(), x_right] with the given slope and right-limit at end().
  /// Returns false (and adds nothing) for a segment shorter than the merge
  /// tolerance.
  bool add(double x_right, double slope, double value_left) {
    if (x_right - end() <= kBreakpointMergeTolerance) {
      if (x_right < end() - kBreakpointMergeTolerance)
        throw ConstructionError("segment end " + format_real(x_right) + " precedes current end " +
                                format_real(end()));
      return false;
    }
    fn_.breaks_.push_back(x_right);
    fn_.slopes_.push_back(slope);
    fn_.starts_.push_back(value_left);
    return true;
  }

  /// Adds a segment that continues from end_value() without a jump.
  bool add_continuous(double x_right, double slope) { return add(x_right, slope, end_value()); }

  /// Appends every segment of `other`, which must start at end().
  void append(const PiecewiseLinear& other) {
    if (std::abs(other.begin() - end()) > 1e-12)
      throw ConstructionError("appended piece starts at " + format_real(other.begin()) +
                              ", expected " + format_real(end()));
    for (std::size_t k = 0; k < other.size(); ++k) {
      auto s = other.segment(k);
      add(s.x_right, s.slope, s.value_left);
    }
  }

  /// Sets the last breakpoint to exactly `x` (absorbs rounding in tilings).
  void snap_end(double x) {
    if (fn_.slopes_.empty()) throw ConstructionError("cannot snap an empty function");
    if (std::abs(fn_.breaks_.back() - x) > 1e-9)
      throw ConstructionError("snap distance too large: " + format_real(fn_.breaks_.back()) + " -> " +
                              format_real(x));
    fn_.breaks_.back() = x;
  }

  PiecewiseLinear build() && {
    if (fn_.slopes_.empty()) throw ConstructionError("piecewise-linear function without segments");
    return std::move(fn_);
  }

 private:
  PiecewiseLinear fn_;
};

inline PiecewiseLinear PiecewiseLinear::constant(double begin, double end, double value) {
  if (!(end > begin)) throw InvalidParameter("empty domain for constant function");
  PiecewiseLinearBuilder b(begin, value);
  b.add(end, 0.0, value);
  return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Arithmetic

/// wa * a + wb * b on the union of both breakpoint sets. Both operands must
/// share a domain; jumps combine linearly.
inline PiecewiseLinear combine(const PiecewiseLinear& a, double wa, const PiecewiseLinear& b, double wb) {
  if (std::abs(a.begin() - b.begin()) > 1e-12 || std::abs(a.end() - b.end()) > 1e-12)
    throw InvalidParameter("operands are defined on different domains");
  std::vector<double> merged;
  merged.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::merge(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
             b.breakpoints().end(), std::back_inserter(merged));
  std::vector<double> unique;
  unique.reserve(merged.size());
  for (double x : merged)
    if (unique.empty() || x - unique.back() > kBreakpointMergeTolerance) unique.push_back(x);
  unique.back() = std::max(a.end(), b.end());

  PiecewiseLinearBuilder out(unique.front(), wa * a.value_at_begin() + wb * b.value_at_begin());
  std::size_t ka = 0;
  std::size_t kb = 0;
  for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
    const double l = unique[i];
    const double r = unique[i + 1];
    const double mid = 0.5 * (l + r);
    while (ka + 1 < a.size() && a.breakpoints()[ka + 1] <= mid) ++ka;
    while (kb + 1 < b.size() && b.breakpoints()[kb + 1] <= mid) ++kb;
    const auto sa = a.segment(ka);
    const auto sb = b.segment(kb);
    out.add(r, wa * sa.slope + wb * sb.slope, wa * sa.at(l) + wb * sb.at(l));
  }
  return std::move(out).build();
}

inline PiecewiseLinear operator-(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  return combine(a, 1.0, b, -1.0);
}

inline PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  return combine(a, 1.0, b, 1.0);
}

// ---------------------------------------------------------------------------
// Integration

inline double integrate(const PiecewiseLinear& f) {
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto s = f.segment(k);
    total += 0.5 * (s.value_left + s.value_right()) * s.length();
  }
  return total;
}

/// Exact integral of |f|; segments that cross zero are split at the root.
inline double integrate_abs(const PiecewiseLinear& f) {
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto s = f.segment(k);
    const double y0 = s.value_left;
    const double y1 = s.value_right();
    if ((y0 >= 0.0 && y1 >= 0.0) || (y0 <= 0.0 && y1 <= 0.0)) {
      total += 0.5 * std::abs(y0 + y1) * s.length();
    } else {
      total += 0.5 * (y0 * y0 + y1 * y1) / std::abs(y0 - y1) * s.length();
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Jumps

struct JumpCensus {
  std::size_t total = 0;               // positive jumps
  std::size_t at_least_threshold = 0;  // positive jumps of height >= threshold

  friend bool operator==(const JumpCensus&, const JumpCensus&) = default;
};

inline constexpr double kJumpTolerance = 1e-9;

inline JumpCensus jump_census(const PiecewiseLinear& f, double threshold) {
  JumpCensus census;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double j = f.jump(k);
    if (j > kJumpTolerance) {
      ++census.total;
      if (j >= threshold - kJumpTolerance) ++census.at_least_threshold;
    }
  }
  return census;
}

/// Segment dump: `x_left,x_right,slope,value_left,jump_at_left`.
inline void write_segments_csv(std::ostream& out, const PiecewiseLinear& f) {
  out << "x_left,x_right,slope,value_left,jump_at_left\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto s = f.segment(k);
    out << format_real(s.x_left) << ',' << format_real(s.x_right) << ',' << format_real(s.slope) << ','
        << format_real(s.value_left) << ',' << format_real(f.jump(k)) << '\n';
  }
}

/// Reads the segment CSV written by write_segments_csv. The value at the
/// left end is recovered as value_left - jump_at_left of the first row.
inline PiecewiseLinear read_segments_csv(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  std::size_t line_no = 0;
  std::optional<PiecewiseLinearBuilder> builder;
  auto fail = [&](const std::string& what) {
    throw IngestionError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("x_left", 0) == 0) continue;
    double field[5];
    std::size_t pos = 0;
    for (int k = 0; k < 5; ++k) {
      const std::size_t comma = k < 4 ? line.find(',', pos) : line.size();
      if (comma == std::string::npos) fail("expected 5 comma-separated fields");
      const char* first = line.data() + pos;
      const char* last = line.data() + comma;
      auto [ptr, ec] = std::from_chars(first, last, field[k]);
      if (ec != std::errc() || ptr != last) fail("malformed number '" + std::string(first, last) + "'");
      pos = comma + 1;
    }
    try {
      if (!builder) builder.emplace(field[0], field[3] - field[4]);
      if (std::abs(field[0] - builder->end()) > 1e-12) fail("segment does not start where the previous one ended");
      builder->add(field[1], field[2], field[3]);
    } catch (const ConstructionError& e) {
      fail(e.what());
    }
  }
  if (!builder) throw IngestionError(source + ": no segments");
  try {
    return std::move(*builder).build();
  } catch (const ConstructionError& e) {
    throw IngestionError(source + ": " + e.what());
  }
}

}  // namespace disclab
