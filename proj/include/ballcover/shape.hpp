#pragma once

// Membership-testable sets with analytic interior certificates.

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "ballcover/motion.hpp"
#include "ballcover/space.hpp"

namespace ballcover {

inline constexpr double kMembershipTolerance = 1e-9;
inline constexpr double kDefaultInteriorEps = 1e-6;

class Shape;

struct ClosedBall {
  Vector center;
  double radius = 1.0;
  friend bool operator==(const ClosedBall&, const ClosedBall&) = default;
};

struct OpenBall {
  Vector center;
  double radius = 1.0;
  friend bool operator==(const OpenBall&, const OpenBall&) = default;
};

struct Sphere {
  Vector center;
  double radius = 1.0;
  friend bool operator==(const Sphere&, const Sphere&) = default;
};

// {x : |x - origin| <= |end - origin|, angle(x - origin, end - origin) <= angle}
struct Ommatidium {
  Vector origin;
  Vector end;
  double angle = 0.0;

  Vector axis() const { return end - origin; }
  double radius() const { return euclidean_norm(end - origin); }
  friend bool operator==(const Ommatidium&, const Ommatidium&) = default;
};

// {x in ball : lo <= x[axis] <= hi}
struct SlabCap {
  ClosedBall ball;
  std::size_t axis = 0;
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const SlabCap&, const SlabCap&) = default;
};

struct Image {
  std::shared_ptr<const Shape> inner;
  Motion motion;
  Motion inverse;
  friend bool operator==(const Image& a, const Image& b);
};

struct FiniteUnion {
  std::vector<Shape> parts;
  friend bool operator==(const FiniteUnion& a, const FiniteUnion& b);
};

class Shape {
public:
  using Variant = std::variant<ClosedBall, OpenBall, Sphere, Ommatidium, SlabCap, Image, FiniteUnion>;

  static Shape closed_ball(Vector c, double r) {
    check_radius(r);
    return Shape(ClosedBall{std::move(c), r});
  }
  static Shape open_ball(Vector c, double r) {
    check_radius(r);
    return Shape(OpenBall{std::move(c), r});
  }
  static Shape sphere(Vector c, double r) {
    check_radius(r);
    return Shape(Sphere{std::move(c), r});
  }
  static Shape ommatidium(Vector origin, Vector end, double angle) {
    origin.check_same(end);
    if (origin == end) throw InvalidArgument("ommatidium needs origin != end");
    if (!(angle >= 0.0 && angle <= std::numbers::pi))
      throw InvalidArgument("ommatidium angle must lie in [0, pi]");
    return Shape(Ommatidium{std::move(origin), std::move(end), angle});
  }
  static Shape slab_cap(ClosedBall ball, std::size_t axis, double lo, double hi) {
    check_radius(ball.radius);
    if (axis >= ball.center.dim()) throw InvalidArgument("slab axis out of range");
    if (!(lo <= hi)) throw InvalidArgument("slab needs lo <= hi");
    return Shape(SlabCap{std::move(ball), axis, lo, hi});
  }
  static Shape image_of(Shape inner, Motion m) {
    if (m.dim() != inner.dim()) throw DimensionMismatch(inner.dim(), m.dim());
    Motion inv = ballcover::inverse(m);
    return Shape(Image{std::make_shared<const Shape>(std::move(inner)), std::move(m), std::move(inv)});
  }
  static Shape finite_union(std::vector<Shape> parts) {
    if (parts.empty()) throw InvalidArgument("union needs at least one part");
    for (const auto& p : parts)
      if (p.dim() != parts.front().dim()) throw DimensionMismatch(parts.front().dim(), p.dim());
    return Shape(FiniteUnion{std::move(parts)});
  }

  const Variant& variant() const { return v_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  std::size_t dim() const {
    return std::visit(
        [](const auto& s) -> std::size_t {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ommatidium>) {
            return s.origin.dim();
          } else if constexpr (std::is_same_v<T, SlabCap>) {
            return s.ball.center.dim();
          } else if constexpr (std::is_same_v<T, Image>) {
            return s.motion.dim();
          } else if constexpr (std::is_same_v<T, FiniteUnion>) {
            return s.parts.front().dim();
          } else {
            return s.center.dim();
          }
        },
        v_);
  }

  friend bool operator==(const Shape&, const Shape&) = default;

private:
  explicit Shape(Variant v) : v_(std::move(v)) {}
  static void check_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("radius must be positive");
  }
  Variant v_;
};

inline bool operator==(const Image& a, const Image& b) {
  return *a.inner == *b.inner && a.motion == b.motion;
}
inline bool operator==(const FiniteUnion& a, const FiniteUnion& b) { return a.parts == b.parts; }

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double slab_excess(const SlabCap& s, const Vector& x) {
  return std::max(s.lo - x[s.axis], x[s.axis] - s.hi);
}

}  // namespace detail

/// Continuous constraint violation: <= 0 exactly on the closed set (negative
/// values measure depth for balls, slabs and ommatidia). Spheres report the
/// nonnegative distance to the surface; unions take the minimum over parts.
inline double signed_defect(const Space& space, const Shape& shape, const Vector& x) {
  space.check(x);
  return std::visit(
      detail::overloaded{
          [&](const ClosedBall& b) { return distance(space, x, b.center) - b.radius; },
          [&](const OpenBall& b) { return distance(space, x, b.center) - b.radius; },
          [&](const Sphere& b) { return std::abs(distance(space, x, b.center) - b.radius); },
          [&](const Ommatidium& o) {
            space.require_euclidean("ommatidium");
            const Vector v = o.axis();
            const Vector y = x - o.origin;
            return std::max(euclidean_norm(y) - euclidean_norm(v), angle(y, v) - o.angle);
          },
          [&](const SlabCap& s) {
            return std::max(distance(space, x, s.ball.center) - s.ball.radius,
                            detail::slab_excess(s, x));
          },
          [&](const Image& im) {
            check_compatible(im.motion, space);
            return signed_defect(space, *im.inner, im.inverse(x));
          },
          [&](const FiniteUnion& u) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : u.parts) best = std::min(best, signed_defect(space, p, x));
            return best;
          },
      },
      shape.variant());
}

inline double membership_defect(const Space& space, const Shape& shape, const Vector& x) {
  return std::max(0.0, signed_defect(space, shape, x));
}

/// Closed sets accept defect <= tol; open balls need distance < r - tol.
inline bool contains(const Space& space, const Shape& shape, const Vector& x,
                     double tol = kMembershipTolerance) {
  space.check(x);
  return std::visit(
      detail::overloaded{
          [&](const OpenBall& b) { return distance(space, x, b.center) < b.radius - tol; },
          [&](const Image& im) {
            check_compatible(im.motion, space);
            return contains(space, *im.inner, im.inverse(x), tol);
          },
          [&](const FiniteUnion& u) {
            for (const auto& p : u.parts)
              if (contains(space, p, x, tol)) return true;
            return false;
          },
          [&](const auto&) { return signed_defect(space, shape, x) <= tol; },
      },
      shape.variant());
}

// ---------------------------------------------------------------------------
// Motion images.

/// Balls and spheres map to balls and spheres about the moved center; other
/// shapes are wrapped (nested images collapse into one composed motion).
inline Shape image(const Shape& shape, const Motion& m) {
  if (m.dim() != shape.dim()) throw DimensionMismatch(shape.dim(), m.dim());
  if (m.scale() == 1.0) {
    if (auto b = shape.get_if<ClosedBall>()) return Shape::closed_ball(m(b->center), b->radius);
    if (auto b = shape.get_if<OpenBall>()) return Shape::open_ball(m(b->center), b->radius);
    if (auto b = shape.get_if<Sphere>()) return Shape::sphere(m(b->center), b->radius);
  }
  if (auto im = shape.get_if<Image>()) return Shape::image_of(*im->inner, compose(m, im->motion));
  return Shape::image_of(shape, m);
}

// ---------------------------------------------------------------------------
// Interior classification.

struct InteriorStatus {
  enum class Kind { interior, not_interior, boundary };
  Kind kind = Kind::boundary;
  std::optional<Vector> witness;  // set for not_interior

  static InteriorStatus interior() { return {Kind::interior, std::nullopt}; }
  static InteriorStatus boundary() { return {Kind::boundary, std::nullopt}; }
  static InteriorStatus not_interior(Vector w) { return {Kind::not_interior, std::move(w)}; }

  bool is_interior() const { return kind == Kind::interior; }
  bool is_not_interior() const { return kind == Kind::not_interior; }
  bool is_boundary() const { return kind == Kind::boundary; }
};

inline const char* to_string(InteriorStatus::Kind k) {
  switch (k) {
    case InteriorStatus::Kind::interior: return "interior";
    case InteriorStatus::Kind::not_interior: return "not_interior";
    case InteriorStatus::Kind::boundary: return "boundary";
  }
  return "?";
}

inline constexpr std::size_t kUnionRandomProbes = 64;
inline constexpr std::uint64_t kUnionProbeSeed = 0x0b5e55edULL;

namespace detail {

inline std::optional<Vector> unit_along(const Space& space, const Vector& v) {
  const double n = norm(space, v);
  if (n == 0.0) return std::nullopt;
  return v / n;
}

// Escape directions worth trying for a primitive at x (unit in the space norm).
inline std::vector<Vector> escape_directions(const Space& space, const Shape& shape,
                                             const Vector& x) {
  std::vector<Vector> dirs;
  auto push = [&](const Vector& v) {
    if (auto u = unit_along(space, v)) dirs.push_back(*u);
  };
  const std::size_t d = space.dim;
  std::visit(overloaded{
                 [&](const ClosedBall& b) { push(x == b.center ? Vector::basis(d, 0) : x - b.center); },
                 [&](const OpenBall& b) { push(x == b.center ? Vector::basis(d, 0) : x - b.center); },
                 [&](const Sphere& b) { push(x == b.center ? Vector::basis(d, 0) : x - b.center); },
                 [&](const Ommatidium& o) {
                   const Vector v = o.axis();
                   const Vector y = x - o.origin;
                   push(-v);
                   if (!y.is_zero()) push(y);
                   Vector perp = y - (inner(y, v) / inner(v, v)) * v;
                   if (euclidean_norm(perp) <= 1e-12 * std::max(1.0, euclidean_norm(y))) {
                     for (std::size_t a = 0; a < d; ++a) {
                       perp = Vector::basis(d, a);
                       perp -= (inner(perp, v) / inner(v, v)) * v;
                       if (euclidean_norm(perp) > 1e-6) break;
                     }
                   }
                   push(perp);
                 },
                 [&](const SlabCap& s) {
                   push(Vector::basis(d, s.axis));
                   push(-Vector::basis(d, s.axis));
                   push(x == s.ball.center ? Vector::basis(d, 0) : x - s.ball.center);
                 },
                 [&](const auto&) {},
             },
             shape.variant());
  return dirs;
}

inline bool certified_interior(const Space& space, const Shape& shape, const Vector& x, double eps) {
  return std::visit(
      overloaded{
          [&](const ClosedBall& b) { return distance(space, x, b.center) + eps <= b.radius; },
          [&](const OpenBall& b) { return distance(space, x, b.center) + eps < b.radius; },
          [&](const Sphere&) { return false; },
          [&](const Ommatidium& o) {
            const Vector v = o.axis();
            const Vector y = x - o.origin;
            const double ny = euclidean_norm(y);
            if (ny + eps > euclidean_norm(v)) return false;
            if (o.angle >= std::numbers::pi) return true;
            if (ny <= eps) return false;
            // Every point of B(x, eps) sees y under an angle below asin(eps/|y|).
            return angle(y, v) + std::asin(eps / ny) <= o.angle;
          },
          [&](const SlabCap& s) {
            return distance(space, x, s.ball.center) + eps <= s.ball.radius &&
                   s.lo + eps <= x[s.axis] && x[s.axis] <= s.hi - eps;
          },
          [&](const auto&) { return false; },
      },
      shape.variant());
}

}  // namespace detail

/// Interior verdict at resolution eps.
///
/// Interior means B(x, eps) is contained in the set by an analytic margin
/// argument. NotInterior carries a point within eps of x that the set does not
/// contain. Anything else is Boundary; it is never silently upgraded.
inline InteriorStatus interior_classify(const Space& space, const Shape& shape, const Vector& x,
                                        double eps = kDefaultInteriorEps,
                                        double tol = kMembershipTolerance) {
  if (!(eps > 0.0)) throw InvalidArgument("interior eps must be positive");
  space.check(x);
  if (!contains(space, shape, x, tol)) return InteriorStatus::not_interior(x);

  if (auto im = shape.get_if<Image>()) {
    check_compatible(im->motion, space);
    if (im->motion.scale() != 1.0) return InteriorStatus::boundary();
    auto inner = interior_classify(space, *im->inner, im->inverse(x), eps, tol);
    if (inner.witness) inner.witness = im->motion(*inner.witness);
    return inner;
  }

  if (auto u = shape.get_if<FiniteUnion>()) {
    for (const auto& p : u->parts)
      if (interior_classify(space, p, x, eps, tol).is_interior()) return InteriorStatus::interior();
    std::vector<Vector> probes;
    for (std::size_t a = 0; a < space.dim; ++a) {
      probes.push_back(Vector::basis(space.dim, a));
      probes.push_back(-Vector::basis(space.dim, a));
    }
    Rng rng = stream(kUnionProbeSeed, 0);
    for (std::size_t i = 0; i < kUnionRandomProbes; ++i)
      probes.push_back(sphere_point(space, Vector::zero(space.dim), 1.0, rng));
    for (const auto& dir : probes) {
      Vector w = x + (eps / norm(space, dir)) * dir;
      if (!contains(space, shape, w, tol)) return InteriorStatus::not_interior(std::move(w));
    }
    return InteriorStatus::boundary();
  }

  if (shape.get_if<Ommatidium>()) space.require_euclidean("ommatidium");
  if (detail::certified_interior(space, shape, x, eps)) return InteriorStatus::interior();
  for (const auto& dir : detail::escape_directions(space, shape, x)) {
    Vector w = x + eps * dir;
    if (!contains(space, shape, w, tol)) return InteriorStatus::not_interior(std::move(w));
  }
  return InteriorStatus::boundary();
}

// ---------------------------------------------------------------------------
// Member sampling.
//
// Balls, spheres and ommatidia (l2) are sampled directly and uniformly.
// Slab caps draw uniformly from the slab-clipped bounding box and reject by
// the ball. Images push samples of the inner shape forward. Unions pick a
// part uniformly, so they are not uniform over the union.

namespace detail {

// Uniform direction within angle `gamma` of unit vector `axis` (l2).
inline Vector cap_direction(const Vector& axis, double gamma, Rng& rng) {
  const std::size_t d = axis.dim();
  if (gamma <= 0.0) return axis;
  Vector w = gaussian_vector(d, rng);
  w -= inner(w, axis) * axis;
  const double wn = euclidean_norm(w);
  if (d == 1 || wn == 0.0) return axis;
  w /= wn;
  // Polar angle density on S^(d-1) is proportional to sin^(d-2).
  double theta = 0.0;
  if (d == 2) {
    theta = uniform(rng, 0.0, gamma);
  } else {
    const double envelope = std::pow(std::sin(std::min(gamma, std::numbers::pi / 2)), d - 2.0);
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt >= kRejectionBudget) throw SamplingBudgetExceeded("cap direction sampling");
      theta = uniform(rng, 0.0, gamma);
      if (envelope == 0.0 || uniform01(rng) * envelope <= std::pow(std::sin(theta), d - 2.0)) break;
    }
  }
  if (d == 2 && uniform01(rng) < 0.5) w = -w;
  return std::cos(theta) * axis + std::sin(theta) * w;
}

inline Vector member_point(const Space& space, const Shape& shape, Rng& rng) {
  return std::visit(
      overloaded{
          [&](const ClosedBall& b) { return ball_point(space, b.center, b.radius, rng); },
          [&](const OpenBall& b) {
            for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
              Vector p = ball_point(space, b.center, b.radius, rng);
              if (distance(space, p, b.center) < b.radius) return p;
            }
            throw SamplingBudgetExceeded("open ball sampling");
          },
          [&](const Sphere& b) { return sphere_point(space, b.center, b.radius, rng); },
          [&](const Ommatidium& o) {
            space.require_euclidean("ommatidium");
            const Vector v = o.axis();
            const double r = euclidean_norm(v);
            const Vector dir = cap_direction(v / r, o.angle, rng);
            const double rho = r * std::pow(uniform01(rng), 1.0 / static_cast<double>(space.dim));
            return o.origin + rho * dir;
          },
          [&](const SlabCap& s) {
            const auto& c = s.ball.center;
            const double r = s.ball.radius;
            const double lo = std::max(s.lo, c[s.axis] - r), hi = std::min(s.hi, c[s.axis] + r);
            if (lo > hi) throw SamplingBudgetExceeded("slab cap is empty");
            std::vector<double> p(space.dim);
            for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
              for (std::size_t i = 0; i < space.dim; ++i)
                p[i] = i == s.axis ? uniform(rng, lo, hi) : uniform(rng, c[i] - r, c[i] + r);
              Vector x(p);
              if (distance(space, x, c) <= r) return x;
            }
            throw SamplingBudgetExceeded("slab cap rejection sampling");
          },
          [&](const Image& im) { return im.motion(member_point(space, *im.inner, rng)); },
          [&](const FiniteUnion& u) {
            const auto k = std::uniform_int_distribution<std::size_t>(0, u.parts.size() - 1)(rng);
            return member_point(space, u.parts[k], rng);
          },
      },
      shape.variant());
}

}  // namespace detail

inline std::vector<Vector> sample_members(const Space& space, const Shape& shape, std::size_t n,
                                          std::uint64_t seed) {
  if (shape.dim() != space.dim) throw DimensionMismatch(space.dim, shape.dim());
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t chunk = 0; chunk < chunk_count(n); ++chunk) {
    Rng rng = stream(seed, chunk);
    const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i)
      out.push_back(detail::member_point(space, shape, rng));
  }
  return out;
}

/// Points on the spherical part of an ommatidium's boundary:
/// origin + radius * (cos b * axis + sin b * w) with b uniform in [0, angle].
inline std::vector<Vector> sample_outer_surface(const Ommatidium& o, std::size_t n,
                                                std::uint64_t seed) {
  const std::size_t d = o.origin.dim();
  const Vector v = o.axis();
  const double r = euclidean_norm(v);
  const Vector a = v / r;
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t chunk = 0; chunk < chunk_count(n); ++chunk) {
    Rng rng = stream(seed, chunk);
    const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      const double b = uniform(rng, 0.0, o.angle);
      Vector w = gaussian_vector(d, rng);
      w -= inner(w, a) * a;
      w -= inner(w, a) * a;
      w /= euclidean_norm(w);
      out.push_back(o.origin + r * (std::cos(b) * a + std::sin(b) * w));
    }
  }
  return out;
}

}  // namespace ballcover
