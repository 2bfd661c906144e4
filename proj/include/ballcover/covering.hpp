#pragma once

// Constructors for the analytically specified coverings of the closed unit
// ball, each carrying congruence witnesses, plus seeded direction nets.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "ballcover/motion.hpp"
#include "ballcover/shape.hpp"
#include "ballcover/space.hpp"

namespace ballcover {

/// A family of sets meant to cover `ball`, with witnesses[i] mapping sets[0]
/// onto sets[i] (witnesses is either empty or as long as sets).
struct Covering {
  Space space;
  ClosedBall ball;
  std::vector<Shape> sets;
  std::vector<Motion> witnesses;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  Covering(Space space_, std::vector<Shape> sets_, std::vector<Motion> witnesses_,
           nlohmann::ordered_json meta_ = nlohmann::ordered_json::object())
      : space(space_),
        ball{Vector::zero(space_.dim), 1.0},
        sets(std::move(sets_)),
        witnesses(std::move(witnesses_)),
        meta(std::move(meta_)) {
    if (sets.empty()) throw InvalidArgument("covering needs at least one set");
    for (const auto& s : sets)
      if (s.dim() != space.dim) throw DimensionMismatch(space.dim, s.dim());
    if (!witnesses.empty() && witnesses.size() != sets.size())
      throw InvalidArgument("covering needs one witness per set (or none)");
    for (const auto& w : witnesses) check_compatible(w, space);
  }

  bool has_witnesses() const { return !witnesses.empty(); }

  std::string constructor() const {
    return meta.contains("constructor") ? meta["constructor"].get<std::string>() : "";
  }

  // Coverage of a finite universal family is checked point by point against
  // the analytic witness rather than against the stored subfamily.
  bool witness_mode() const { return constructor() == "universal"; }

  // Offset added to set indices when printing (1 where sets are numbered from 1).
  int label_base() const { return meta.contains("label_base") ? meta["label_base"].get<int>() : 0; }
};

// ---------------------------------------------------------------------------
// Slabs of the max-norm ball.

/// n congruent slabs {x in B : x_1 in [-1 + 2i/n, -1 + 2(i+1)/n]} of the unit
/// ball of R^m with the max norm; witnesses shift x_1 by 2i/n.
inline Covering slab_covering(int n, std::size_t m) {
  if (n < 3 || n % 2 == 0) throw InvalidArgument("slab covering needs odd n >= 3");
  if (m < static_cast<std::size_t>(n)) throw InvalidArgument("slab covering needs dim >= n");
  const Space space(m, NormKind::linf());
  const ClosedBall unit{Vector::zero(m), 1.0};
  std::vector<Shape> sets;
  std::vector<Motion> witnesses;
  for (int i = 0; i < n; ++i) {
    sets.push_back(Shape::slab_cap(unit, 0, -1.0 + 2.0 * i / n, -1.0 + 2.0 * (i + 1) / n));
    Vector shift = Vector::zero(m);
    shift.set(0, 2.0 * i / n);
    witnesses.push_back(Motion::translation(std::move(shift)));
  }
  nlohmann::ordered_json meta = {{"constructor", "slab"}, {"n", n}, {"dim", m}, {"label_base", 1}};
  return Covering(space, std::move(sets), std::move(witnesses), std::move(meta));
}

/// 0-based index of the slab whose interval contains t = x_1 (ties go to the
/// lower slab).
inline std::size_t slab_index(int n, double t) {
  const double k = std::ceil((t + 1.0) * n / 2.0) - 1.0;
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n - 1)));
}

// ---------------------------------------------------------------------------
// Universal covering by balls of radius 1/2.

/// The center of the radius-1/2 ball of the universal family that contains x:
/// y = x / (2|x|), so |x - y| = | |x| - 1/2 |.
inline Vector universal_witness(const Space& space, const Vector& x) {
  const double n = norm(space, x);
  if (n == 0.0) throw InvalidArgument("the origin lies in the central ball; no witness needed");
  return x / (2.0 * n);
}

/// The central ball B(θ, 1/2) plus k seeded balls B(y, 1/2) with |y| = 1/2.
/// A finite subfamily; coverage is only meaningful via universal_witness.
inline Covering universal_covering(const Space& space, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw InvalidArgument("universal covering needs k >= 1");
  const Vector origin = Vector::zero(space.dim);
  std::vector<Shape> sets{Shape::closed_ball(origin, 0.5)};
  std::vector<Motion> witnesses{Motion::identity(space.dim)};
  for (std::size_t chunk = 0; chunk < chunk_count(k); ++chunk) {
    Rng rng = stream(seed, chunk);
    const std::size_t end = std::min(k, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      Vector y = sphere_point(space, origin, 0.5, rng);
      sets.push_back(Shape::closed_ball(y, 0.5));
      witnesses.push_back(Motion::translation(std::move(y)));
    }
  }
  nlohmann::ordered_json meta = {{"constructor", "universal"}, {"dim", space.dim},
                                 {"norm", space.norm.describe()}, {"k", k},
                                 {"seed", seed}, {"label_base", 0}};
  return Covering(space, std::move(sets), std::move(witnesses), std::move(meta));
}

// ---------------------------------------------------------------------------
// Direction nets.

inline constexpr std::size_t kNetProbes = 4096;
inline constexpr std::size_t kNetMaxSize = 2048;

/// Unit directions such that every probe direction lies within `certificate`
/// of one of them. `resolution` is the largest angle from a second,
/// independent probe set to the nearest certifying probe.
struct DirectionNet {
  std::vector<Vector> dirs;
  double beta = 0.0;
  double certificate = 0.0;
  double resolution = 0.0;
};

namespace detail {

inline std::vector<Vector> unit_probes(std::size_t dim, std::size_t n, std::uint64_t seed) {
  const Space space = Space::euclidean(dim);
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t chunk = 0; chunk < chunk_count(n); ++chunk) {
    Rng rng = stream(seed, chunk);
    const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i)
      out.push_back(sphere_point(space, Vector::zero(dim), 1.0, rng));
  }
  return out;
}

}  // namespace detail

/// Greedy farthest-point net on the unit sphere of R^dim, starting from e_1.
///
/// Directions are added (farthest probe first) until every one of the 4096
/// seeded probes is within beta - resolution of the net, so that points
/// between probes stay within beta as well. The greedy order does not depend
/// on beta, hence a smaller beta never yields a smaller net.
inline DirectionNet direction_net(std::size_t dim, double beta, std::uint64_t seed) {
  if (dim < 2) throw InvalidArgument("direction net needs dim >= 2");
  if (!(beta > 0.0 && beta <= std::numbers::pi)) throw InvalidArgument("net angle must lie in (0, pi]");

  const auto probes = detail::unit_probes(dim, kNetProbes, seed);
  const auto check = detail::unit_probes(dim, kNetProbes, splitmix64(seed) ^ 0x5eedULL);

  DirectionNet net;
  net.beta = beta;
  for (const auto& c : check) {
    double best = -1.0;
    for (const auto& p : probes) best = std::max(best, inner(c, p));
    net.resolution = std::max(net.resolution, std::acos(std::clamp(best, -1.0, 1.0)));
  }

  net.dirs.push_back(Vector::basis(dim, 0));
  std::vector<double> nearest(probes.size());
  std::vector<std::size_t> owner(probes.size(), 0);
  for (std::size_t i = 0; i < probes.size(); ++i) nearest[i] = inner(probes[i], net.dirs[0]);

  const double target = beta >= std::numbers::pi ? beta : beta - net.resolution;
  if (target <= 0.0)
    throw InvalidArgument("net angle is below the probe resolution for this dimension");
  for (;;) {
    const auto far = static_cast<std::size_t>(
        std::min_element(nearest.begin(), nearest.end()) - nearest.begin());
    const double gap = angle(probes[far], net.dirs[owner[far]]);
    if (gap <= target) {
      net.certificate = gap;
      break;
    }
    if (net.dirs.size() >= kNetMaxSize)
      throw InvalidArgument("direction net exceeds " + std::to_string(kNetMaxSize) +
                            " directions; angle too small for this dimension");
    net.dirs.push_back(probes[far] / euclidean_norm(probes[far]));
    const std::size_t k = net.dirs.size() - 1;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double d = inner(probes[i], net.dirs[k]);
      if (d > nearest[i]) nearest[i] = d, owner[i] = k;
    }
  }
  return net;
}

// ---------------------------------------------------------------------------
// Ommatidium covering of the Euclidean ball.

inline constexpr double kOmmatidiumAngle = std::numbers::pi / 4;

/// A_0 = C(-d_1/2, d_1/2, pi/4) followed by A_i = C(θ, d_i, pi/4) over a
/// direction net. All sets have radius 1 and angle pi/4, so they are
/// congruent; witness i rotates d_1 onto d_i after shifting A_0 by d_1/2.
inline Covering ommatidium_covering(std::size_t dim, double beta, std::uint64_t seed) {
  if (dim < 2) throw InvalidArgument("ommatidium covering needs dim >= 2");
  if (beta > kOmmatidiumAngle) throw InvalidArgument("ommatidium covering needs beta <= pi/4");
  const DirectionNet net = direction_net(dim, beta, seed);
  const Vector origin = Vector::zero(dim);
  const Vector& d1 = net.dirs.front();

  std::vector<Shape> sets{Shape::ommatidium(-0.5 * d1, 0.5 * d1, kOmmatidiumAngle)};
  std::vector<Motion> witnesses{Motion::identity(dim)};
  const Motion lift = Motion::translation(0.5 * d1);
  for (const auto& d : net.dirs) {
    sets.push_back(Shape::ommatidium(origin, d, kOmmatidiumAngle));
    witnesses.push_back(compose(planar_rotation_between(d1, d), lift));
  }
  nlohmann::ordered_json meta = {{"constructor", "ommatidium"}, {"dim", dim},
                                 {"beta", beta}, {"seed", seed},
                                 {"net_size", net.dirs.size()}, {"certificate", net.certificate},
                                 {"resolution", net.resolution}, {"label_base", 0}};
  return Covering(Space::euclidean(dim), std::move(sets), std::move(witnesses), std::move(meta));
}

// ---------------------------------------------------------------------------
// Two half balls.

/// {x in B : x_1 <= 0} and {x in B : x_1 >= 0}; the witness reflects x_1.
inline Covering halfball_covering(std::size_t dim) {
  if (dim < 2) throw InvalidArgument("half-ball covering needs dim >= 2");
  const ClosedBall unit{Vector::zero(dim), 1.0};
  std::vector<Shape> sets{Shape::slab_cap(unit, 0, -1.0, 0.0), Shape::slab_cap(unit, 0, 0.0, 1.0)};
  std::vector<Motion> witnesses{Motion::identity(dim),
                                Motion::linear(SignedPermutation::reflection(dim, 0), dim)};
  nlohmann::ordered_json meta = {{"constructor", "halfball"}, {"dim", dim}, {"label_base", 1}};
  return Covering(Space::euclidean(dim), std::move(sets), std::move(witnesses), std::move(meta));
}

// ---------------------------------------------------------------------------

/// Pads the family to n sets by repeating the last one (with its witness).
inline Covering duplicate_extend(const Covering& cov, std::size_t n) {
  if (n < cov.sets.size()) throw InvalidArgument("cannot extend a covering to fewer sets");
  Covering out = cov;
  while (out.sets.size() < n) {
    out.sets.push_back(cov.sets.back());
    if (cov.has_witnesses()) out.witnesses.push_back(cov.witnesses.back());
  }
  if (n > cov.sets.size()) out.meta["extended_from"] = cov.sets.size();
  return out;
}

}  // namespace ballcover
