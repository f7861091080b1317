#pragma once

// One-dimensional point sequences in [0,1): generators, ingestion and export.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "disclab/error.hpp"
#include "disclab/format.hpp"

namespace disclab {

/// Ordered, immutable sequence x_1, ..., x_N of reals in [0,1).
///
/// Insertion order is the sequence order; prefix quantities (A_n, D_n) are
/// always taken over the first n values in this order.
class PointSet {
 public:
  PointSet() = default;

  explicit PointSet(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      if (!(v >= 0.0 && v < 1.0))
        throw InvalidParameter("point " + std::to_string(i + 1) + " = " + format_real(v) +
                               " is outside [0,1)");
    }
  }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// 1-based access, x_n.
  double at(std::size_t n) const {
    if (n < 1 || n > values_.size())
      throw InvalidParameter("point index " + std::to_string(n) + " outside 1.." +
                             std::to_string(values_.size()));
    return values_[n - 1];
  }

  /// The first n points.
  PointSet prefix(std::size_t n) const {
    if (n > values_.size())
      throw InvalidParameter("prefix length " + std::to_string(n) + " exceeds " +
                             std::to_string(values_.size()));
    return PointSet(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  /// Zero-based positions in ascending value order; ties keep sequence order.
  std::vector<std::size_t> sorted_order() const {
    std::vector<std::size_t> order(values_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [this](std::size_t l, std::size_t r) { return values_[l] < values_[r]; });
    return order;
  }

  std::vector<double> sorted_values() const {
    std::vector<double> sorted(values_);
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Generators

/// Digit-reversed fraction of n in the given base (van der Corput).
inline double radical_inverse(std::uint64_t n, std::uint64_t base) {
  if (base < 2) throw InvalidParameter("radical inverse base must be >= 2, got " + std::to_string(base));
  if (n < 1) throw InvalidParameter("radical inverse index must be >= 1");
  // Horner on the reversed digits, most significant reversed digit last.
  std::uint64_t digits[64];
  int count = 0;
  while (n > 0) {
    digits[count++] = n % base;
    n /= base;
  }
  const double b = static_cast<double>(base);
  double value = 0.0;
  for (int k = count - 1; k >= 0; --k) value = (static_cast<double>(digits[k]) + value) / b;
  return value;
}

/// Fractional part of n * alpha, reduced in one step from the product.
inline double kronecker_point(std::uint64_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidParameter("kronecker alpha must lie in (0,1), got " + format_real(alpha));
  if (n < 1) throw InvalidParameter("kronecker index must be >= 1");
  const double x = static_cast<double>(n) * alpha;
  double frac = x - std::floor(x);
  if (frac >= 1.0) frac = 0.0;
  return frac;
}

struct VanDerCorput {
  std::uint64_t base = 2;
};

struct Kronecker {
  double alpha = 0.0;
};

struct PointFile {
  std::string path;
};

/// Which sequence to produce; each alternative carries only its own fields.
using GeneratorSpec = std::variant<VanDerCorput, Kronecker, PointFile>;

inline constexpr double golden_alpha() { return 0.6180339887498948482; }

inline std::string_view kind_name(const GeneratorSpec& spec) {
  struct Visitor {
    std::string_view operator()(const VanDerCorput&) const { return "van-der-corput"; }
    std::string_view operator()(const Kronecker&) const { return "kronecker"; }
    std::string_view operator()(const PointFile&) const { return "file"; }
  };
  return std::visit(Visitor{}, spec);
}

inline void validate(const GeneratorSpec& spec) {
  if (auto* vdc = std::get_if<VanDerCorput>(&spec); vdc && vdc->base < 2)
    throw InvalidParameter("van der Corput base must be >= 2, got " + std::to_string(vdc->base));
  if (auto* kr = std::get_if<Kronecker>(&spec); kr && !(kr->alpha > 0.0 && kr->alpha < 1.0))
    throw InvalidParameter("kronecker alpha must lie in (0,1), got " + format_real(kr->alpha));
  if (auto* file = std::get_if<PointFile>(&spec); file && file->path.empty())
    throw InvalidParameter("point file path is empty");
}

// ---------------------------------------------------------------------------
// Point file format: one decimal literal per line, '#' comment lines allowed.

namespace detail {
inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}
}  // namespace detail

inline PointSet read_points(std::istream& in, const std::string& source = "<stream>") {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    const std::string where = source + ":" + std::to_string(line_no);
    if (ec != std::errc{} || ptr != last)
      throw IngestionError(where + ": malformed value '" + std::string(text) + "'");
    if (!(v >= 0.0 && v < 1.0))
      throw IngestionError(where + ": value " + std::string(text) + " outside [0,1)");
    values.push_back(v);
  }
  if (in.bad()) throw IngestionError(source + ": read error");
  return PointSet(std::move(values));
}

inline PointSet read_point_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path + ": cannot open point file");
  return read_points(in, path);
}

inline void write_points(std::ostream& out, const PointSet& points) {
  for (double v : points.values()) out << format_real(v) << '\n';
}

/// JSON export: {"kind", "params", "count", "values"}.
inline nlohmann::json to_json(const PointSet& points, const GeneratorSpec& spec) {
  nlohmann::json params = nlohmann::json::object();
  if (auto* vdc = std::get_if<VanDerCorput>(&spec)) params["base"] = vdc->base;
  if (auto* kr = std::get_if<Kronecker>(&spec)) params["alpha"] = kr->alpha;
  if (auto* file = std::get_if<PointFile>(&spec)) params["path"] = file->path;
  return {{"kind", kind_name(spec)},
          {"params", params},
          {"count", points.size()},
          {"values", std::vector<double>(points.values().begin(), points.values().end())}};
}

/// Points n = 1..count of the sequence described by `spec`.
inline PointSet generate(const GeneratorSpec& spec, std::size_t count) {
  if (count < 1) throw InvalidParameter("point count must be >= 1");
  validate(spec);
  std::vector<double> values;
  values.reserve(count);
  if (auto* vdc = std::get_if<VanDerCorput>(&spec)) {
    for (std::size_t n = 1; n <= count; ++n) values.push_back(radical_inverse(n, vdc->base));
  } else if (auto* kr = std::get_if<Kronecker>(&spec)) {
    for (std::size_t n = 1; n <= count; ++n) values.push_back(kronecker_point(n, kr->alpha));
  } else {
    const auto& path = std::get<PointFile>(spec).path;
    auto all = read_point_file(path);
    if (all.size() < count)
      throw IngestionError(path + ": holds " + std::to_string(all.size()) + " points, " +
                           std::to_string(count) + " requested");
    return all.prefix(count);
  }
  return PointSet(std::move(values));
}

}  // namespace disclab
