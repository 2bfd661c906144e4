#pragma once

// JSON encoding of spaces, motions, shapes, coverings and audit reports.
// Reals are written as JSON numbers (shortest round-trip form); on input a
// real may also be a string holding a decimal or a fraction such as "3/2".

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ballcover/covering.hpp"
#include "ballcover/errors.hpp"
#include "ballcover/motion.hpp"
#include "ballcover/report.hpp"
#include "ballcover/shape.hpp"
#include "ballcover/space.hpp"

namespace ballcover::io {

using json = nlohmann::ordered_json;

namespace detail {

inline double parse_decimal(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw FormatError(std::string(what) + ": bad real '" + std::string(s) + "'");
  return v;
}

inline const json& field(const json& j, const char* key, std::string_view what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string(what) + ": missing \"" + key + "\"");
  return *it;
}

inline std::string kind_of(const json& j, const char* key, std::string_view what) {
  const json& k = field(j, key, what);
  if (!k.is_string()) throw FormatError(std::string(what) + ": \"" + key + "\" must be a string");
  return k.get<std::string>();
}

}  // namespace detail

inline double real_from_json(const json& j, std::string_view what = "real") {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw FormatError(std::string(what) + ": expected a number or string");
  const std::string s = j.get<std::string>();
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const double num = detail::parse_decimal(std::string_view(s).substr(0, slash), what);
    const double den = detail::parse_decimal(std::string_view(s).substr(slash + 1), what);
    if (den == 0.0) throw FormatError(std::string(what) + ": zero denominator");
    return num / den;
  }
  return detail::parse_decimal(s, what);
}

inline std::size_t count_from_json(const json& j, std::string_view what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw FormatError(std::string(what) + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

// ---------------------------------------------------------------------------

inline json to_json(const Vector& v) {
  json a = json::array();
  for (double c : v.coords()) a.push_back(c);
  return a;
}

inline Vector vector_from_json(const json& j, std::string_view what = "vector") {
  if (!j.is_array() || j.empty()) throw FormatError(std::string(what) + ": expected a nonempty array");
  std::vector<double> c;
  c.reserve(j.size());
  for (const auto& e : j) c.push_back(real_from_json(e, what));
  for (double x : c)
    if (!std::isfinite(x)) throw FormatError(std::string(what) + ": coordinates must be finite");
  return Vector(std::move(c));
}

inline json to_json(const Space& s) {
  json norm = s.norm.is_linf() ? json{{"kind", "linf"}} : json{{"kind", "lp"}, {"p", s.norm.p()}};
  return {{"dim", s.dim}, {"norm", std::move(norm)}};
}

inline Space space_from_json(const json& j) {
  const std::size_t dim = count_from_json(detail::field(j, "dim", "space"), "space dim");
  const json& n = detail::field(j, "norm", "space");
  const std::string kind = detail::kind_of(n, "kind", "norm");
  try {
    if (kind == "linf") return Space(dim, NormKind::linf());
    if (kind == "lp") {
      const double p = real_from_json(detail::field(n, "p", "norm"), "norm p");
      return Space(dim, std::isinf(p) ? NormKind::linf() : NormKind::lp(p));
    }
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("space: ") + e.what());
  }
  throw FormatError("norm: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

inline json to_json(const LinearIsometry& f) {
  return std::visit(
      ballcover::detail::overloaded{
          [](const Identity&) { return json{{"kind", "identity"}}; },
          [](const PlanarRotation& r) {
            return json{{"kind", "planar_rotation"}, {"e1", to_json(r.e1u)}, {"u", to_json(r.u)},
                        {"alpha", r.alpha}};
          },
          [](const SignedPermutation& p) {
            return json{{"kind", "signed_permutation"}, {"perm", p.perm}, {"signs", p.signs}};
          },
      },
      f);
}

inline LinearIsometry linear_from_json(const json& j) {
  const std::string kind = detail::kind_of(j, "kind", "linear");
  if (kind == "identity") return Identity{};
  if (kind == "planar_rotation")
    return PlanarRotation(vector_from_json(detail::field(j, "e1", "planar_rotation")),
                          vector_from_json(detail::field(j, "u", "planar_rotation")),
                          real_from_json(detail::field(j, "alpha", "planar_rotation")));
  if (kind == "signed_permutation") {
    const json& perm = detail::field(j, "perm", "signed_permutation");
    const json& signs = detail::field(j, "signs", "signed_permutation");
    if (!perm.is_array() || !signs.is_array()) throw FormatError("signed_permutation: arrays expected");
    std::vector<std::size_t> p;
    std::vector<int> s;
    for (const auto& e : perm) p.push_back(count_from_json(e, "perm entry"));
    for (const auto& e : signs) {
      if (!e.is_number_integer()) throw FormatError("signed_permutation: signs must be integers");
      s.push_back(e.get<int>());
    }
    return SignedPermutation(std::move(p), std::move(s));
  }
  throw FormatError("linear: unknown kind '" + kind + "'");
}

inline json to_json(const Motion& m) {
  json factors = json::array();
  for (const auto& f : m.factors()) factors.push_back(to_json(f));
  json j = {{"linear", std::move(factors)}, {"shift", to_json(m.shift())}};
  if (m.scale() != 1.0) j["scale"] = m.scale();
  return j;
}

inline Motion motion_from_json(const json& j) {
  try {
    const json& lin = detail::field(j, "linear", "motion");
    std::vector<LinearIsometry> factors;
    if (lin.is_array()) {
      for (const auto& f : lin) factors.push_back(linear_from_json(f));
    } else {
      factors.push_back(linear_from_json(lin));
    }
    const double scale = j.contains("scale") ? real_from_json(j["scale"], "motion scale") : 1.0;
    return Motion(std::move(factors), vector_from_json(detail::field(j, "shift", "motion"), "shift"),
                  scale);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("motion: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

inline json to_json(const Shape& shape) {
  return std::visit(
      ballcover::detail::overloaded{
          [](const ClosedBall& b) {
            return json{{"type", "closed_ball"}, {"center", to_json(b.center)}, {"radius", b.radius}};
          },
          [](const OpenBall& b) {
            return json{{"type", "open_ball"}, {"center", to_json(b.center)}, {"radius", b.radius}};
          },
          [](const Sphere& b) {
            return json{{"type", "sphere"}, {"center", to_json(b.center)}, {"radius", b.radius}};
          },
          [](const Ommatidium& o) {
            return json{{"type", "ommatidium"}, {"origin", to_json(o.origin)},
                        {"end", to_json(o.end)}, {"angle", o.angle}};
          },
          [](const SlabCap& s) {
            return json{{"type", "slab_cap"},
                        {"ball", {{"center", to_json(s.ball.center)}, {"radius", s.ball.radius}}},
                        {"axis", s.axis}, {"lo", s.lo}, {"hi", s.hi}};
          },
          [](const Image& im) {
            return json{{"type", "image"}, {"shape", to_json(*im.inner)}, {"motion", to_json(im.motion)}};
          },
          [](const FiniteUnion& u) {
            json parts = json::array();
            for (const auto& p : u.parts) parts.push_back(to_json(p));
            return json{{"type", "union"}, {"parts", std::move(parts)}};
          },
      },
      shape.variant());
}

inline Shape shape_from_json(const json& j) {
  const std::string type = detail::kind_of(j, "type", "shape");
  auto vec = [&](const char* key) { return vector_from_json(detail::field(j, key, type), key); };
  auto real = [&](const char* key) { return real_from_json(detail::field(j, key, type), key); };
  try {
    if (type == "closed_ball") return Shape::closed_ball(vec("center"), real("radius"));
    if (type == "open_ball") return Shape::open_ball(vec("center"), real("radius"));
    if (type == "sphere") return Shape::sphere(vec("center"), real("radius"));
    if (type == "ommatidium") return Shape::ommatidium(vec("origin"), vec("end"), real("angle"));
    if (type == "slab_cap") {
      const json& b = detail::field(j, "ball", "slab_cap");
      ClosedBall ball{vector_from_json(detail::field(b, "center", "slab_cap ball")),
                      real_from_json(detail::field(b, "radius", "slab_cap ball"))};
      return Shape::slab_cap(std::move(ball), count_from_json(detail::field(j, "axis", type), "axis"),
                             real("lo"), real("hi"));
    }
    if (type == "image")
      return Shape::image_of(shape_from_json(detail::field(j, "shape", type)),
                             motion_from_json(detail::field(j, "motion", type)));
    if (type == "union") {
      const json& parts = detail::field(j, "parts", type);
      if (!parts.is_array()) throw FormatError("union: parts must be an array");
      std::vector<Shape> out;
      for (const auto& p : parts) out.push_back(shape_from_json(p));
      return Shape::finite_union(std::move(out));
    }
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(type + ": " + e.what());
  }
  throw FormatError("shape: unknown type '" + type + "'");
}

// ---------------------------------------------------------------------------

inline json to_json(const Covering& cov) {
  json sets = json::array(), witnesses = json::array();
  for (const auto& s : cov.sets) sets.push_back(to_json(s));
  for (const auto& w : cov.witnesses) witnesses.push_back(to_json(w));
  return {{"space", to_json(cov.space)}, {"sets", std::move(sets)},
          {"witnesses", std::move(witnesses)}, {"meta", cov.meta}};
}

inline Covering covering_from_json(const json& j) {
  const Space space = space_from_json(detail::field(j, "space", "covering"));
  const json& sets = detail::field(j, "sets", "covering");
  if (!sets.is_array()) throw FormatError("covering: sets must be an array");
  std::vector<Shape> shapes;
  for (const auto& s : sets) shapes.push_back(shape_from_json(s));
  std::vector<Motion> witnesses;
  if (j.contains("witnesses")) {
    if (!j["witnesses"].is_array()) throw FormatError("covering: witnesses must be an array");
    for (const auto& w : j["witnesses"]) witnesses.push_back(motion_from_json(w));
  }
  json meta = j.contains("meta") ? j["meta"] : json::object();
  if (!meta.is_object()) throw FormatError("covering: meta must be an object");
  try {
    return Covering(space, std::move(shapes), std::move(witnesses), std::move(meta));
  } catch (const Error& e) {
    throw FormatError(std::string("covering: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

inline json to_json(const AuditReport& r, bool with_runtime = true) {
  json w = json::array();
  for (const auto& v : r.witnesses) w.push_back(to_json(v));
  json j = {{"kind", r.kind},
            {"verdict", to_string(r.verdict)},
            {"samples", r.samples},
            {"seed", r.seed},
            {"failures", r.failures},
            {"residual_max", r.residual_max},
            {"witnesses", std::move(w)},
            {"runtime_ms", with_runtime ? r.runtime_ms : 0.0}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

inline AuditReport report_from_json(const json& j) {
  AuditReport r;
  r.kind = detail::kind_of(j, "kind", "report");
  const std::string v = detail::kind_of(j, "verdict", "report");
  if (v == "pass") r.verdict = Verdict::pass;
  else if (v == "fail") r.verdict = Verdict::fail;
  else if (v == "not_applicable") r.verdict = Verdict::not_applicable;
  else throw FormatError("report: unknown verdict '" + v + "'");
  r.samples = count_from_json(detail::field(j, "samples", "report"), "samples");
  r.seed = detail::field(j, "seed", "report").get<std::uint64_t>();
  r.failures = count_from_json(detail::field(j, "failures", "report"), "failures");
  r.residual_max = real_from_json(detail::field(j, "residual_max", "report"));
  for (const auto& w : detail::field(j, "witnesses", "report")) r.witnesses.push_back(vector_from_json(w));
  r.runtime_ms = real_from_json(detail::field(j, "runtime_ms", "report"));
  if (j.contains("detail")) r.detail = j["detail"];
  return r;
}

// ---------------------------------------------------------------------------

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

inline Covering read_covering(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return covering_from_json(parse(ss.str()));
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw FormatError("write failed for '" + path + "'");
}

}  // namespace ballcover::io
