#pragma once

// Batch command-line front end. Data goes to the output stream (or --out),
// human-readable summaries and diagnostics to the error stream.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 computation or I/O
// error.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "disclab/bounds.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/envelope.hpp"
#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/parallel.hpp"
#include "disclab/piecewise_linear.hpp"
#include "disclab/points.hpp"
#include "disclab/variational.hpp"

namespace disclab::cli {

using Json = nlohmann::ordered_json;

struct PointSource {
  std::string in;
  std::string sequence;
  std::uint64_t base = 2;
  double alpha = golden_alpha();
  std::size_t count = 0;
};

struct Config {
  std::string format = "csv";
  std::size_t threads = 0;
  std::string out_path;
  PointSource points;

  // star: pointwise A_n(x) and D_n(x)
  std::optional<double> x;
  std::optional<std::size_t> n;

  // profile / verify
  std::string schedule = "standard";
  double ratio = 1.01;
  std::size_t dense_until = 4096;
  std::size_t floor_n = 2;

  // envelope / ptee / variational / verify / bound
  std::optional<double> a;
  std::optional<int> t;
  std::optional<int> t_max;
  std::string which = "f";
  std::optional<std::size_t> first;
  std::optional<std::size_t> last;
  double threshold = 1.0;

  // variational
  std::string quantity = "extremal";
  std::optional<double> chi;
  double alpha_left = 0.0;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> tau;
  double v = 0.0;
  std::optional<double> v_prime;
  std::string mode = "strong";
  std::string rounding = "admissible";
  std::string family = "structured";
  std::size_t resolution = 256;
  std::string segments_in;

  // bound
  bool optimize = false;
  bool scan = false;
  double lo = 3.0;
  double hi = 4.0;
  double tol = 1e-8;
  std::size_t samples = 1001;

  // verify --range-split
  bool range_split = false;
  std::vector<double> values;
  std::vector<std::size_t> subset0;
  std::vector<std::size_t> subset2;
};

namespace detail {

inline void add_point_source(CLI::App* sub, PointSource& s) {
  sub->add_option("--in", s.in, "Point file: one value in [0,1) per line, # comments");
  sub->add_option("--sequence", s.sequence, "Generated sequence")
      ->check(CLI::IsMember({"vdc", "van-der-corput", "kronecker"}));
  sub->add_option("--base", s.base, "van der Corput base")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32));
  sub->add_option("--alpha", s.alpha, "Kronecker alpha in (0,1), default golden ratio conjugate");
  sub->add_option("--count", s.count, "Number of points (prefix length for --in)");
}

inline GeneratorSpec spec_of(const PointSource& s) {
  if (!s.in.empty()) return PointFile{s.in};
  if (s.sequence == "kronecker") return Kronecker{s.alpha};
  return VanDerCorput{s.base};
}

inline PointSet load_points(const PointSource& s) {
  if (!s.in.empty() && !s.sequence.empty()) throw InvalidParameter("use either --in or --sequence, not both");
  if (!s.in.empty()) {
    auto pts = read_point_file(s.in);
    return s.count > 0 ? pts.prefix(s.count) : pts;
  }
  if (s.sequence.empty()) throw InvalidParameter("a point source is required: --in FILE or --sequence NAME");
  if (s.count == 0) throw InvalidParameter("--count must be >= 1 for generated sequences");
  return generate(spec_of(s), s.count);
}

template <typename Write>
void emit(const std::string& path, std::ostream& out, Write&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw IngestionError("cannot open output file " + path);
  write(file);
  if (!file) throw IngestionError("failed writing " + path);
}

// One-row CSV (header + values) or a flat JSON object.
class Record {
 public:
  Record& add(const std::string& key, double v) {
    fields_.emplace_back(key, format_real(v));
    json_[key] = v;
    return *this;
  }
  Record& add(const std::string& key, std::size_t v) {
    fields_.emplace_back(key, std::to_string(v));
    json_[key] = v;
    return *this;
  }
  Record& add(const std::string& key, bool v) {
    fields_.emplace_back(key, v ? "true" : "false");
    json_[key] = v;
    return *this;
  }
  Record& add(const std::string& key, const std::string& v) {
    fields_.emplace_back(key, v);
    json_[key] = v;
    return *this;
  }

  void write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < fields_.size(); ++i) out << (i ? "," : "") << fields_[i].first;
    out << '\n';
    for (std::size_t i = 0; i < fields_.size(); ++i) out << (i ? "," : "") << fields_[i].second;
    out << '\n';
  }
  Json& json() { return json_; }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
  Json json_ = Json::object();
};

inline Json segments_json(const PiecewiseLinear& f) {
  auto arr = Json::array();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto s = f.segment(k);
    arr.push_back({{"x_left", s.x_left},
                   {"x_right", s.x_right},
                   {"slope", s.slope},
                   {"value_left", s.value_left},
                   {"jump_at_left", f.jump(k)}});
  }
  return arr;
}

inline Json report_json(const AdmissibilityReport& r) {
  Json j;
  j["endpoints"] = r.endpoints;
  j["magnitude"] = r.magnitude;
  j["discontinuities"] = r.discontinuities;
  j["unit_jumps"] = r.unit_jumps;
  j["slope_band"] = r.slope_band;
  if (r.condition_a) j["condition_a"] = *r.condition_a;
  j["admissible"] = r.admissible();
  j["strongly_admissible"] = r.strongly_admissible();
  auto w = Json::array();
  for (const auto& x : r.witnesses)
    w.push_back({{"property", std::string(property_name(x.property))}, {"x", x.x}, {"measured", x.measured}});
  j["witnesses"] = std::move(w);
  return j;
}

inline void summarize_report(std::ostream& err, const AdmissibilityReport& r) {
  err << "admissible: " << (r.admissible() ? "yes" : "no");
  if (r.condition_a) err << ", condition A: " << (*r.condition_a ? "yes" : "no");
  err << '\n';
  for (const auto& w : r.witnesses)
    err << "  " << property_name(w.property) << " fails at x = " << format_real(w.x)
        << " (measured " << format_real(w.measured) << ")\n";
}

inline double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw InvalidParameter(std::string(flag) + " is required");
  return *v;
}

inline int require(const std::optional<int>& v, const char* flag) {
  if (!v) throw InvalidParameter(std::string(flag) + " is required");
  return *v;
}

inline ProfileSchedule schedule_of(const Config& c) {
  if (c.schedule == "all") return ProfileSchedule::all();
  if (c.schedule == "checkpointed") return ProfileSchedule::checkpointed(c.ratio, c.dense_until);
  return ProfileSchedule::standard();
}

inline void add_schedule(CLI::App* sub, Config& c) {
  sub->add_option("--schedule", c.schedule, "Prefix lengths: all, checkpointed or standard")
      ->check(CLI::IsMember({"all", "checkpointed", "standard"}));
  sub->add_option("--ratio", c.ratio, "Checkpoint growth ratio (> 1)");
  sub->add_option("--dense-until", c.dense_until, "Evaluate every n up to this value");
}

// ---------------------------------------------------------------------------
// Subcommands

inline void run_gen(const Config& c, std::ostream& out, std::ostream& err) {
  const auto pts = load_points(c.points);
  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json")
      o << to_json(pts, spec_of(c.points)).dump(2) << '\n';
    else
      write_points(o, pts);
  });
  err << "generated " << pts.size() << " points\n";
}

inline void run_star(const Config& c, std::ostream& out, std::ostream&) {
  const auto pts = load_points(c.points);
  if (c.n && !c.x) throw InvalidParameter("--n needs --x");
  if (c.x) {
    const std::size_t n = c.n.value_or(pts.size());
    const std::size_t count = count_below(pts, n, *c.x);
    const double disc = disc_function(pts, n, *c.x);
    emit(c.out_path, out, [&](std::ostream& o) {
      if (c.format == "json") {
        o << Json{{"n", n}, {"x", *c.x}, {"count_below", count}, {"disc", disc}}.dump(2) << '\n';
      } else {
        o << "n,x,count_below,disc\n"
          << n << ',' << format_real(*c.x) << ',' << count << ',' << format_real(disc) << '\n';
      }
    });
    return;
  }
  const double d = star_discrepancy(pts);
  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json") {
      Json j;
      j["count"] = pts.size();
      j["star_discrepancy"] = d;
      j["n_dstar"] = d * static_cast<double>(pts.size());
      o << j.dump(2) << '\n';
    } else {
      o << format_real(d) << '\n';
    }
  });
}

inline void run_profile(const Config& c, std::ostream& out, std::ostream& err) {
  const auto pts = load_points(c.points);
  const auto prof = profile(pts, schedule_of(c));
  std::optional<double> best;
  if (pts.size() >= c.floor_n && c.floor_n >= 2) best = max_ratio(prof, c.floor_n);
  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json") {
      Json j;
      auto entries = Json::array();
      for (const auto& e : prof.entries) {
        Json row{{"n", e.n}, {"n_dstar", e.n_dstar}};
        row["ratio"] = e.n >= 2 ? Json(e.n_dstar / std::log(static_cast<double>(e.n))) : Json(nullptr);
        entries.push_back(std::move(row));
      }
      j["entries"] = std::move(entries);
      if (best) j["max_ratio"] = *best;
      o << j.dump(2) << '\n';
    } else {
      write_profile_csv(o, prof);
    }
  });
  if (best) err << "max n D_n* / log n over n >= " << c.floor_n << ": " << format_real(*best) << '\n';
}

inline void run_envelope(const Config& c, std::ostream& out, std::ostream& err) {
  const auto pts = load_points(c.points);
  std::optional<WindowScheme> scheme;
  if (c.a || c.t) scheme = WindowScheme::make(require(c.a, "--a"), require(c.t, "--t"));

  IndexWindow window;
  if (c.first || c.last) {
    if (!c.first || !c.last) throw InvalidParameter("--first and --last go together");
    window = {*c.first, *c.last};
  } else if (scheme) {
    window = scheme->full();
  } else {
    throw InvalidParameter("envelope needs --a and --t, or an explicit --first/--last window");
  }

  PiecewiseLinear f;
  std::vector<std::size_t> active;
  if (c.which == "f" || c.which == "g") {
    if (!scheme) throw InvalidParameter("--which " + c.which + " needs --a and --t");
    f = c.which == "f" ? window_f(pts, *scheme) : window_g(pts, *scheme);
  } else if (c.which == "spread") {
    f = window_spread(pts, window);
  } else {
    auto indexed = window_envelope_indexed(pts, window, c.which == "max" ? EnvelopeMode::max : EnvelopeMode::min);
    f = std::move(indexed.function);
    active = std::move(indexed.active);
  }
  const auto census = jump_census(f, c.threshold);
  const double area = integrate_abs(f);
  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json") {
      Json j;
      j["which"] = c.which;
      if (scheme) {
        j["a"] = scheme->a;
        j["t"] = scheme->t;
        j["N"] = scheme->N;
        j["m"] = scheme->m;
      }
      if (c.which != "f" && c.which != "g") j["window"] = {window.first, window.last};
      j["integral"] = integrate(f);
      j["integral_abs"] = area;
      j["jumps"] = {{"threshold", c.threshold}, {"total", census.total}, {"at_least_threshold", census.at_least_threshold}};
      j["segments"] = segments_json(f);
      if (!active.empty()) j["active"] = active;
      o << j.dump(2) << '\n';
    } else {
      write_segments_csv(o, f);
    }
  });
  err << c.which << ": " << f.size() << " segments, integral |.| = " << format_real(area) << ", jumps "
      << census.total << " (" << census.at_least_threshold << " >= " << format_real(c.threshold) << ")\n";
}

inline void run_ptee(const Config& c, std::ostream& out, std::ostream& err) {
  const auto pts = load_points(c.points);
  const double a = require(c.a, "--a");
  std::vector<ChainStep> steps;
  if (c.t_max) {
    steps = p_chain_check(pts, a, *c.t_max);
  } else {
    const int t = require(c.t, "--t");
    const auto scheme = WindowScheme::make(a, t);
    ChainStep s;
    s.t = t;
    s.N = scheme.N;
    s.p = p_integral(pts, scheme);
    s.bound = t * chi_lower_bound(a);
    s.pass = s.p >= s.bound - 1e-9;
    steps.push_back(s);
  }
  bool all = true;
  for (const auto& s : steps) all = all && s.pass;
  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json") {
      Json j;
      j["a"] = a;
      j["chi_a"] = chi_lower_bound(a);
      auto arr = Json::array();
      for (const auto& s : steps) arr.push_back({{"t", s.t}, {"N", s.N}, {"p", s.p}, {"bound", s.bound}, {"pass", s.pass}});
      j["steps"] = std::move(arr);
      j["all_pass"] = all;
      o << j.dump(2) << '\n';
    } else {
      o << "t,N,p,bound,pass\n";
      for (const auto& s : steps)
        o << s.t << ',' << s.N << ',' << format_real(s.p) << ',' << format_real(s.bound) << ','
          << (s.pass ? "true" : "false") << '\n';
    }
  });
  err << "P(t) >= t chi_a: " << (all ? "holds" : "FAILS") << " for every requested t\n";
}

inline void write_function(const Config& c, std::ostream& out, const PiecewiseLinear& f, Json extra) {
  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json") {
      extra["integral_abs"] = integrate_abs(f);
      extra["segments"] = segments_json(f);
      o << extra.dump(2) << '\n';
    } else {
      write_segments_csv(o, f);
    }
  });
}

inline void write_record(const Config& c, std::ostream& out, Record& r) {
  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json")
      o << r.json().dump(2) << '\n';
    else
      r.write_csv(o);
  });
}

inline SegmentSpec segment_of(const Config& c, PartKind kind) {
  SegmentSpec s;
  s.kind = kind;
  s.alpha = c.alpha_left;
  s.beta = require(c.beta, "--beta");
  s.gamma = c.gamma.value_or(0.5 * (s.alpha + s.beta));
  s.delta = c.delta.value_or(0.5);
  s.tau = c.tau.value_or(1.0 - s.delta);
  s.v = c.v;
  s.v_prime = c.v_prime.value_or(c.v);
  return s;
}

inline void run_variational(const Config& c, std::ostream& out, std::ostream& err) {
  const std::string& q = c.quantity;
  const double a = require(c.a, "--a");
  if (q == "chi") {
    Record r;
    r.add("a", a).add("chi_a", chi_lower_bound(a));
    write_record(c, out, r);
    return;
  }
  const auto p = AdmissibleParams::make(a, c.t.value_or(1));
  const auto mode = c.mode == "admissible" ? ExtremalMode::admissible : ExtremalMode::strong;

  if (q == "extremal") {
    const auto rounding = c.rounding == "nearest" ? CountRounding::nearest : CountRounding::admissible;
    const auto e = assemble_extremal(p, mode, rounding);
    const auto report = check_condition_A(e.function, p);
    Json j;
    j["a"] = p.a;
    j["t"] = p.t;
    j["mode"] = c.mode;
    j["rounding"] = c.rounding;
    j["qprime_count"] = e.qprime_count;
    j["qdoubleprime_count"] = e.qdoubleprime_count;
    j["qprime_length"] = e.qprime_length;
    j["qdoubleprime_length"] = e.qdoubleprime_length;
    j["selector"] = e.selector;
    j["real_count_total"] = e.real_count_total;
    j["rounding_gap"] = e.rounding_gap;
    j["report"] = report_json(report);
    write_function(c, out, e.function, std::move(j));
    err << "extremal (" << c.mode << ", " << c.rounding << " rounding): " << e.qprime_count << " Q' + "
        << e.qdoubleprime_count << " Q'' parts, integral " << format_real(e.integral) << ", real-count optimum "
        << format_real(e.real_count_total) << '\n';
    summarize_report(err, report);
  } else if (q == "check") {
    if (c.segments_in.empty()) throw InvalidParameter("--quantity check needs --segments FILE");
    std::ifstream in(c.segments_in);
    if (!in) throw IngestionError("cannot open " + c.segments_in);
    const auto f = read_segments_csv(in, c.segments_in);
    const auto report = check_condition_A(f, p);
    emit(c.out_path, out, [&](std::ostream& o) {
      if (c.format == "json") {
        o << report_json(report).dump(2) << '\n';
      } else {
        o << "property,pass\n";
        for (auto prop : {Property::endpoints, Property::magnitude, Property::discontinuities, Property::unit_jumps,
                          Property::slope_band, Property::condition_a})
          o << property_name(prop) << ',' << (report.passed(prop) ? "true" : "false") << '\n';
      }
    });
    summarize_report(err, report);
  } else if (q == "q1" || q == "q2" || q == "strong-q") {
    const double chi = require(c.chi, "--chi");
    const double v = q == "q1" ? q1_integral(chi, p) : q == "q2" ? q2_integral(chi, p) : strong_q_integral(chi, p);
    Record r;
    r.add("a", p.a).add("t", static_cast<std::size_t>(p.t)).add("chi", chi).add(q, v);
    write_record(c, out, r);
  } else if (q == "delta") {
    const double beta = require(c.beta, "--beta");
    const double gamma = require(c.gamma, "--gamma");
    Record r;
    r.add("alpha", c.alpha_left).add("beta", beta).add("gamma", gamma).add("delta", optimal_delta(c.alpha_left, beta, gamma, p));
    write_record(c, out, r);
  } else if (q == "selector") {
    const double gamma = require(c.gamma, "--gamma");
    const double delta = require(c.delta, "--delta");
    const auto s = optimal_slope_selector(c.alpha_left, gamma, delta, p);
    Record r;
    r.add("stationary", s.stationary).add("clamped", s.clamped);
    write_record(c, out, r);
  } else if (q == "qprime-strong" || q == "qprime-admissible") {
    const auto seg = segment_of(c, PartKind::qprime);
    const auto f = q == "qprime-strong" ? build_qprime_strong(seg, p) : build_qprime_admissible(seg, p);
    write_function(c, out, f, Json::object());
    err << q << ": integral " << format_real(integrate_abs(f)) << '\n';
  } else if (q == "qdoubleprime") {
    const auto f = build_qdoubleprime(c.alpha_left, require(c.beta, "--beta"), p, c.gamma);
    write_function(c, out, f, Json::object());
    err << q << ": integral " << format_real(integrate_abs(f)) << '\n';
  } else if (q == "real-count") {
    Record r;
    r.add("a", p.a).add("t", static_cast<std::size_t>(p.t)).add("mode", c.mode).add("minimum", real_count_minimum(p, mode));
    write_record(c, out, r);
  } else if (q == "oracle") {
    const auto family = c.family == "perturbed" ? OracleFamily::perturbed : OracleFamily::structured;
    const auto res = oracle_minimize(p, family, c.resolution);
    Record r;
    r.add("family", c.family).add("minimum", res.minimum).add("chi_a", chi_lower_bound(p.a)).add("evaluations", res.evaluations);
    if (family == OracleFamily::structured) {
      r.add("chi", res.argmin[0]).add("delta", res.argmin[1]).add("gamma_offset", res.argmin[2])
          .add("v", res.argmin[3]).add("v_prime", res.argmin[4]);
    } else {
      r.add("baseline", res.baseline).add("accepted", res.accepted).add("improving", res.improving);
    }
    write_record(c, out, r);
  }
}

inline void run_bound(const Config& c, std::ostream& out, std::ostream& err) {
  if (!c.optimize && !c.a && !c.scan) throw InvalidParameter("bound needs --optimize, --a or --scan");
  BoundReport report;
  if (c.a) {
    report.a = *c.a;
    report.c_of_a = c_of_a(*c.a);
    report.chi_a = chi_lower_bound(*c.a);
  }
  if (c.optimize) report.optimum = optimize_constant(c.lo, c.hi, c.tol);
  if (c.scan) report.scan = scan_constant(c.lo, c.hi, c.samples);

  emit(c.out_path, out, [&](std::ostream& o) {
    if (c.format == "json") {
      o << to_json(report).dump(2) << '\n';
    } else if (c.scan) {
      o << "a,c\n";
      for (const auto& s : report.scan) o << format_real(s.a) << ',' << format_real(s.c) << '\n';
    } else {
      Record r;
      if (report.a) r.add("a", *report.a).add("chi_a", *report.chi_a).add("c_of_a", *report.c_of_a);
      if (report.optimum)
        r.add("a_star", report.optimum->a_star)
            .add("c_star_lower", report.optimum->c_star_lower)
            .add("chi_a_star", chi_lower_bound(report.optimum->a_star));
      r.write_csv(o);
    }
  });
  if (report.optimum) {
    err << "c* >= " << format_real(report.optimum->c_star_lower) << " at a = " << format_real(report.optimum->a_star)
        << (report.optimum->unimodal ? "" : " (pre-scan NOT unimodal)") << '\n';
  }
}

inline void run_verify(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.range_split) {
    const auto split = range_split_inequality(c.values, c.subset0, c.subset2);
    Record r;
    r.add("lhs", split.lhs).add("rhs", split.rhs).add("holds", split.lhs >= split.rhs);
    write_record(c, out, r);
    return;
  }
  const auto pts = load_points(c.points);
  const auto check = verify_bound(pts, require(c.a, "--a"), schedule_of(c));
  Record r;
  r.add("N", pts.size()).add("holds", check.holds).add("witness_n", check.witness_n).add("max_n_dstar", check.max_nd)
      .add("threshold", check.threshold).add("margin", check.margin);
  write_record(c, out, r);
  err << "max n D_n* = " << format_real(check.max_nd) << " at n = " << check.witness_n << " vs log N c(a) = "
      << format_real(check.threshold) << " (finite-N check)\n";
}

}  // namespace detail

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Star discrepancy lower-bound toolkit", "disclab"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", c.threads, "Worker thread cap (default: DISCLAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "Generate or re-export a point sequence");
  detail::add_point_source(gen, c.points);
  gen->add_option("--out", c.out_path, "Output file (default stdout)");

  auto* star = app.add_subcommand("star", "Exact star discrepancy D_N*");
  detail::add_point_source(star, c.points);
  star->add_option("--x", c.x, "Evaluate A_n(x) and D_n(x) at this x instead");
  star->add_option("--n", c.n, "Prefix length for --x (default all points)");
  star->add_option("--out", c.out_path, "Output file");

  auto* prof = app.add_subcommand("profile", "n D_n* over prefixes");
  detail::add_point_source(prof, c.points);
  detail::add_schedule(prof, c);
  prof->add_option("--floor-n", c.floor_n, "Smallest n for the max ratio summary")->check(CLI::Range(2, 1 << 30));
  prof->add_option("--out", c.out_path, "Output file");

  auto* env = app.add_subcommand("envelope", "Window envelopes and f/g difference functions as segments");
  detail::add_point_source(env, c.points);
  env->add_option("--a", c.a, "Window base in (3,4)");
  env->add_option("--t", c.t, "Window level >= 1");
  env->add_option("--which", c.which, "f, g, spread, max or min")
      ->check(CLI::IsMember({"f", "g", "spread", "max", "min"}));
  env->add_option("--first", c.first, "Window start (1-based) for max/min/spread");
  env->add_option("--last", c.last, "Window end (inclusive)");
  env->add_option("--threshold", c.threshold, "Jump height counted in the census");
  env->add_option("--out", c.out_path, "Output file");

  auto* ptee = app.add_subcommand("ptee", "Spread integral P(t) and the chain P(t) >= t chi_a");
  detail::add_point_source(ptee, c.points);
  ptee->add_option("--a", c.a, "Window base in (3,4)");
  ptee->add_option("--t", c.t, "Single level");
  ptee->add_option("--t-max", c.t_max, "Check every level 1..t-max");
  ptee->add_option("--out", c.out_path, "Output file");

  auto* var = app.add_subcommand("variational", "Extremal functions, closed forms and oracles");
  var->add_option("--quantity", c.quantity, "What to compute")
      ->check(CLI::IsMember({"extremal", "check", "q1", "q2", "strong-q", "chi", "delta", "selector", "qprime-strong",
                             "qprime-admissible", "qdoubleprime", "real-count", "oracle"}));
  var->add_option("--a", c.a, "Base a in (3,4)");
  var->add_option("--t", c.t, "Level t >= 1 (default 1)");
  var->add_option("--chi", c.chi, "Part length");
  var->add_option("--alpha", c.alpha_left, "Left end of a part (default 0)");
  var->add_option("--beta", c.beta, "Right end of a part");
  var->add_option("--gamma", c.gamma, "Jump location (default midpoint)");
  var->add_option("--delta", c.delta, "Depth -f(gamma) (default 1/2)");
  var->add_option("--tau", c.tau, "Right limit at gamma (default 1 - delta)");
  var->add_option("--v", c.v, "Left slope selector");
  var->add_option("--v-prime", c.v_prime, "Right slope selector (default --v)");
  var->add_option("--mode", c.mode, "admissible or strong")->check(CLI::IsMember({"admissible", "strong"}));
  var->add_option("--rounding", c.rounding, "Part-count rounding for extremal")
      ->check(CLI::IsMember({"admissible", "nearest"}));
  var->add_option("--family", c.family, "Oracle family")->check(CLI::IsMember({"structured", "perturbed"}));
  var->add_option("--resolution", c.resolution, "Oracle resolution (>= 8)");
  var->add_option("--segments", c.segments_in, "Segment CSV to check (quantity check)");
  var->add_option("--out", c.out_path, "Output file");

  auto* bound = app.add_subcommand("bound", "c(a) = chi_a / (2 ln a) and its maximum");
  bound->add_flag("--optimize", c.optimize, "Maximise c(a) on [lo, hi]");
  bound->add_flag("--scan", c.scan, "Tabulate c(a) on [lo, hi]");
  bound->add_option("--a", c.a, "Evaluate at this a");
  bound->add_option("--lo", c.lo, "Interval start (>= 3)");
  bound->add_option("--hi", c.hi, "Interval end (<= 4)");
  bound->add_option("--tol", c.tol, "Golden-section tolerance");
  bound->add_option("--samples", c.samples, "Scan samples")->check(CLI::Range(2, 1 << 24));
  bound->add_option("--out", c.out_path, "Output file");

  auto* verify = app.add_subcommand("verify", "Finite-N bound check, or the range-splitting inequality");
  detail::add_point_source(verify, c.points);
  detail::add_schedule(verify, c);
  verify->add_option("--a", c.a, "Base a in (3,4)");
  verify->add_flag("--range-split", c.range_split, "Evaluate the range-splitting inequality instead");
  verify->add_option("--values", c.values, "Values F(1),...,F(|A|)")->delimiter(',');
  verify->add_option("--a0", c.subset0, "1-based indices of A0")->delimiter(',');
  verify->add_option("--a2", c.subset2, "1-based indices of A2")->delimiter(',');
  verify->add_option("--out", c.out_path, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c.threads > 0) set_thread_limit(c.threads);
    if (gen->parsed()) detail::run_gen(c, out, err);
    if (star->parsed()) detail::run_star(c, out, err);
    if (prof->parsed()) detail::run_profile(c, out, err);
    if (env->parsed()) detail::run_envelope(c, out, err);
    if (ptee->parsed()) detail::run_ptee(c, out, err);
    if (var->parsed()) detail::run_variational(c, out, err);
    if (bound->parsed()) detail::run_bound(c, out, err);
    if (verify->parsed()) detail::run_verify(c, out, err);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace disclab::cli
