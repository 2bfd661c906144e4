#pragma once

// Command-line front end. Exit codes: 0 success or passing audit, 1 failing
// audit, 2 usage or file error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ballcover/covering.hpp"
#include "ballcover/io.hpp"
#include "ballcover/plot.hpp"
#include "ballcover/verify.hpp"

namespace ballcover::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

// Shortest round-trip decimal form.
inline std::string real(double v) {
  if (v == std::trunc(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return io::json(v).dump();
}

inline std::string vec(const Vector& v) { return io::to_json(v).dump(); }

inline std::string labels(const std::vector<std::size_t>& idx, int base) {
  std::string s = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(static_cast<long long>(idx[i]) + base);
  }
  return s + "]";
}

inline std::string describe(const CenterClassification& c, int base) {
  switch (c.kind) {
    case CenterClassification::Kind::in_all_interiors: return "InAllInteriors";
    case CenterClassification::Kind::in_no_interior: return "InNoInterior";
    case CenterClassification::Kind::mixed: return "Mixed " + labels(c.interior, base);
  }
  return "?";
}

inline double parse_real_arg(const std::string& s, const char* what) {
  return io::real_from_json(io::json(s), what);
}

inline void emit_json(const std::string& path, const io::json& j, std::ostream& out) {
  if (path == "-")
    out << j.dump(2) << '\n';
  else
    io::write_json(path, j);
}

}  // namespace detail

struct Options {
  // construct
  std::string kind;
  std::size_t dim = 0;
  int n = 0;
  std::string beta = "pi/4";
  std::size_t k = 0;
  std::optional<std::uint64_t> seed;
  std::string p = "2";
  std::size_t extend = 0;
  std::string out;
  // audits
  std::string file;
  std::size_t samples = 100000;
  std::size_t congruence_samples = 1000;
  double tol = kMembershipTolerance;
  double eps = kDefaultInteriorEps;
  std::string json_out;
  unsigned workers = 1;
  bool timing = false;
  std::size_t grid = 720;
  std::size_t refine = 60;
  double antipodal_tol = 1e-6;
  double radius = 1.0;
};

namespace detail {

inline double parse_beta(const std::string& s) {
  if (s == "pi") return std::numbers::pi;
  if (s.rfind("pi/", 0) == 0) return std::numbers::pi / parse_real_arg(s.substr(3), "beta");
  return parse_real_arg(s, "beta");
}

inline std::uint64_t require_seed(const Options& o, const char* cmd) {
  if (!o.seed) throw InvalidArgument(std::string(cmd) + " needs an explicit --seed");
  return *o.seed;
}

inline int construct(const Options& o, std::ostream& out) {
  Covering cov = [&]() -> Covering {
    if (o.kind == "slab") {
      if (o.n == 0) throw InvalidArgument("slab needs --n");
      return slab_covering(o.n, o.dim ? o.dim : static_cast<std::size_t>(o.n));
    }
    if (o.dim == 0) throw InvalidArgument(o.kind + " needs --dim");
    if (o.kind == "universal") {
      const double p = parse_real_arg(o.p, "p");
      const Space space(o.dim, std::isinf(p) ? NormKind::linf() : NormKind::lp(p));
      return universal_covering(space, o.k ? o.k : 64, require_seed(o, "universal"));
    }
    if (o.kind == "ommatidium")
      return ommatidium_covering(o.dim, parse_beta(o.beta), require_seed(o, "ommatidium"));
    if (o.kind == "halfball") return halfball_covering(o.dim);
    throw InvalidArgument("unknown covering kind '" + o.kind + "'");
  }();
  if (o.extend) cov = duplicate_extend(cov, o.extend);
  emit_json(o.out, io::to_json(cov), out);
  if (o.out != "-")
    out << o.kind << ": " << cov.sets.size() << " sets in " << cov.space.norm.describe() << " dim "
        << cov.space.dim << " -> " << o.out << '\n';
  return kExitOk;
}

inline int verify(const Options& o, std::ostream& out) {
  const Covering cov = io::read_covering(o.file);
  const std::uint64_t seed = require_seed(o, "verify");
  std::vector<AuditReport> reports;
  reports.push_back(check_coverage(cov, o.samples, seed, o.tol, o.workers));
  if (cov.has_witnesses())
    reports.push_back(check_congruence(cov, o.congruence_samples, seed, o.tol, o.workers));
  reports.push_back(check_containment(cov, o.congruence_samples, seed, o.tol, o.workers));

  bool ok = true;
  io::json arr = io::json::array();
  for (const auto& r : reports) {
    ok = ok && r.passed();
    arr.push_back(io::to_json(r, o.timing));
    out << r.kind << ": " << to_string(r.verdict) << " failures=" << r.failures
        << " residual_max=" << real(r.residual_max) << " samples=" << r.samples << '\n';
    for (const auto& w : r.witnesses) out << "  witness " << vec(w) << '\n';
  }
  if (!o.json_out.empty()) emit_json(o.json_out, arr, out);
  return ok ? kExitOk : kExitFail;
}

inline int classify(const Options& o, std::ostream& out) {
  const Covering cov = io::read_covering(o.file);
  const CenterClassification c = classify_center(cov, o.eps, o.tol);
  out << describe(c, cov.label_base()) << '\n';
  if (!c.boundary.empty()) out << "boundary " << labels(c.boundary, cov.label_base()) << '\n';
  if (!o.json_out.empty()) {
    io::json j = to_json(c);
    j["label_base"] = cov.label_base();
    emit_json(o.json_out, j, out);
  }
  return kExitOk;
}

inline int dichotomy(const Options& o, std::ostream& out) {
  const Covering cov = io::read_covering(o.file);
  const AuditReport r = dichotomy_audit(cov, o.eps, o.tol, o.workers);
  const CenterClassification c = classify_center(cov, o.eps, o.tol);
  const std::string cls = describe(c, cov.label_base());
  if (r.verdict == Verdict::not_applicable) {
    std::string why;
    for (const auto& s : r.detail["reasons"]) why += (why.empty() ? "" : "; ") + s.get<std::string>();
    out << "not applicable (" << why << "), observed " << cls << '\n';
  } else {
    out << to_string(r.verdict) << " (" << cls << ")\n";
  }
  if (!o.json_out.empty()) emit_json(o.json_out, io::to_json(r, o.timing), out);
  return r.verdict == Verdict::fail ? kExitFail : kExitOk;
}

inline int antipodal(const Options& o, std::ostream& out) {
  const Covering cov = io::read_covering(o.file);
  std::uint64_t seed = 0;
  if (cov.space.dim > 2) seed = require_seed(o, "antipodal search beyond the plane");
  else if (o.seed) seed = *o.seed;
  const AntipodalResult r =
      antipodal_search(cov.space, cov.sets, o.grid, o.refine, o.antipodal_tol, o.radius, seed);
  out << "set " << static_cast<long long>(r.index) + cov.label_base() << " x=" << vec(r.x)
      << " residual=" << real(r.residual) << (r.converged ? "" : " (above tolerance)") << '\n';
  if (!o.json_out.empty()) {
    io::json j = {{"index", r.index}, {"x", io::to_json(r.x)}, {"residual", r.residual},
                  {"objective", r.objective}, {"converged", r.converged}, {"probes", r.probes}};
    emit_json(o.json_out, j, out);
  }
  return r.converged ? kExitOk : kExitFail;
}

inline int ncs(const Options& o, std::ostream& out) {
  const double p = parse_real_arg(o.p, "p");
  const Space space(o.dim, std::isinf(p) ? NormKind::linf() : NormKind::lp(p));
  const auto w = ncs_violation_search(space, o.samples, require_seed(o, "ncs"));
  if (w)
    out << "witness x=" << vec(w->x) << " y=" << vec(w->y) << " lambda=" << real(w->lambda)
        << " norm=" << real(w->combination_norm) << '\n';
  else
    out << "no witness in " << o.samples << " samples\n";
  const bool expected = !space.norm.is_strictly_convex() && space.dim >= 2;
  out << space.norm.describe() << (space.norm.is_strictly_convex() ? " is" : " is not")
      << " strictly convex\n";
  return w.has_value() == expected ? kExitOk : kExitFail;
}

inline int counterexample(std::ostream& out) {
  const auto v = counterexample_r2_32();
  out << "lhs=" << real(v.lhs) << " rhs=" << real(v.rhs) << (v.lhs > v.rhs ? " lhs>rhs" : " lhs<=rhs")
      << '\n';
  return v.lhs > v.rhs ? kExitOk : kExitFail;
}

inline int plot(const Options& o, std::ostream& out) {
  const Covering cov = io::read_covering(o.file);
  const std::string svg = plot_svg(cov);
  if (o.out == "-") {
    out << svg;
    return kExitOk;
  }
  std::ofstream f(o.out);
  if (!f || !(f << svg)) throw FormatError("cannot write '" + o.out + "'");
  out << "plot: " << cov.sets.size() << " sets -> " << o.out << '\n';
  return kExitOk;
}

}  // namespace detail

/// Runs one command; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ballcover: coverings of normed balls by congruent sets"};
  app.require_subcommand(1);
  Options o;
  auto add_seed = [&](CLI::App* c) {
    c->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { o.seed = s; },
                                          "random seed");
  };
  auto add_file = [&](CLI::App* c) { c->add_option("file", o.file, "covering JSON")->required(); };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--tol", o.tol, "membership tolerance");
    c->add_option("--workers", o.workers, "worker threads (output does not depend on it)");
    c->add_option("--json", o.json_out, "write JSON here ('-' for stdout)");
  };

  auto* construct = app.add_subcommand("construct", "build a covering and write it as JSON");
  construct->add_option("--kind", o.kind, "slab|universal|ommatidium|halfball")->required();
  construct->add_option("--dim", o.dim, "space dimension");
  construct->add_option("--n", o.n, "slab count (odd, >= 3)");
  construct->add_option("--beta", o.beta, "net angle, e.g. pi/4 or 0.7");
  construct->add_option("--k", o.k, "sampled balls for the universal family");
  construct->add_option("--p", o.p, "norm exponent for the universal family (or inf)");
  construct->add_option("--extend", o.extend, "repeat the last set up to this many sets");
  construct->add_option("--out", o.out, "output file ('-' for stdout)")->required();
  add_seed(construct);

  auto* verify = app.add_subcommand("verify", "coverage, congruence and containment audits");
  add_file(verify);
  verify->add_option("--samples", o.samples, "coverage samples");
  verify->add_option("--congruence-samples", o.congruence_samples, "samples per witness and set");
  verify->add_flag("--timing", o.timing, "include wall-clock runtime in the JSON");
  add_seed(verify);
  add_common(verify);

  auto* classify = app.add_subcommand("classify-center", "interior status of the centre");
  add_file(classify);
  classify->add_option("--eps", o.eps, "interior probe radius");
  add_common(classify);

  auto* dichotomy = app.add_subcommand("dichotomy", "all-or-none interior audit of the centre");
  add_file(dichotomy);
  dichotomy->add_option("--eps", o.eps, "interior probe radius");
  dichotomy->add_flag("--timing", o.timing, "include wall-clock runtime in the JSON");
  add_common(dichotomy);

  auto* antipodal = app.add_subcommand("antipodal", "find a set holding an antipodal pair");
  add_file(antipodal);
  antipodal->add_option("--grid", o.grid, "sphere probes");
  antipodal->add_option("--refine", o.refine, "refinement sweeps");
  antipodal->add_option("--radius", o.radius, "sphere radius");
  antipodal->add_option("--tol", o.antipodal_tol, "residual tolerance");
  antipodal->add_option("--json", o.json_out, "write JSON here ('-' for stdout)");
  add_seed(antipodal);

  auto* ncs = app.add_subcommand("ncs", "search for a strict convexity violation");
  ncs->add_option("--p", o.p, "norm exponent (or inf)")->required();
  ncs->add_option("--dim", o.dim, "dimension")->required();
  ncs->add_option("--samples", o.samples, "random pairs");
  add_seed(ncs);

  auto* counter = app.add_subcommand("counterexample", "the l_{3/2} four-point values");

  auto* plot = app.add_subcommand("plot", "SVG of a planar covering");
  add_file(plot);
  plot->add_option("--out", o.out, "SVG file ('-' for stdout)")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*construct) return detail::construct(o, out);
    if (*verify) return detail::verify(o, out);
    if (*classify) return detail::classify(o, out);
    if (*dichotomy) return detail::dichotomy(o, out);
    if (*antipodal) return detail::antipodal(o, out);
    if (*ncs) return detail::ncs(o, out);
    if (*counter) return detail::counterexample(out);
    if (*plot) return detail::plot(o, out);
  } catch (const CoverageGap& e) {
    err << "audit failure: " << e.what() << '\n';
    return kExitFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace ballcover::cli
