#pragma once

// Motions (surjective isometries) as structured values: a chain of
// elementary linear isometries followed by a translation.

#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "ballcover/parallel.hpp"
#include "ballcover/report.hpp"
#include "ballcover/space.hpp"

namespace ballcover {

inline constexpr double kOrthonormalTolerance = 1e-12;
inline constexpr double kAuditTolerance = 1e-9;

struct Identity {
  friend bool operator==(const Identity&, const Identity&) = default;
};

/// Rotation by `alpha` in the plane spanned by the orthonormal pair
/// (e1u, u); identity on the orthogonal complement. Euclidean spaces only.
struct PlanarRotation {
  Vector e1u;
  Vector u;
  double alpha = 0.0;

  PlanarRotation() = default;
  PlanarRotation(Vector e1u_, Vector u_, double alpha_)
      : e1u(std::move(e1u_)), u(std::move(u_)), alpha(alpha_) {
    e1u.check_same(u);
    if (!std::isfinite(alpha)) throw InvalidArgument("rotation angle must be finite");
    if (std::abs(euclidean_norm(e1u) - 1.0) > kOrthonormalTolerance ||
        std::abs(euclidean_norm(u) - 1.0) > kOrthonormalTolerance)
      throw InvalidArgument("planar rotation axes must be unit vectors");
    if (std::abs(inner(e1u, u)) > kOrthonormalTolerance)
      throw InvalidArgument("planar rotation axes must be orthogonal");
  }

  std::size_t dim() const { return e1u.dim(); }

  Vector operator()(const Vector& x) const {
    const double x1 = inner(x, e1u), x2 = inner(x, u);
    const double c = std::cos(alpha), s = std::sin(alpha);
    return x + (x1 * c - x2 * s - x1) * e1u + (x1 * s + x2 * c - x2) * u;
  }

  friend bool operator==(const PlanarRotation&, const PlanarRotation&) = default;
};

/// y[i] = signs[i] * x[perm[i]]. An isometry of every l_p norm.
struct SignedPermutation {
  std::vector<std::size_t> perm;
  std::vector<int> signs;

  SignedPermutation() = default;
  SignedPermutation(std::vector<std::size_t> perm_, std::vector<int> signs_)
      : perm(std::move(perm_)), signs(std::move(signs_)) {
    if (perm.empty() || perm.size() != signs.size())
      throw InvalidArgument("signed permutation needs equal, nonzero perm/sign lengths");
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t p : perm) {
      if (p >= perm.size() || seen[p]) throw InvalidArgument("perm is not a permutation");
      seen[p] = true;
    }
    for (int s : signs)
      if (s != 1 && s != -1) throw InvalidArgument("signs must be +1 or -1");
  }

  static SignedPermutation reflection(std::size_t dim, std::size_t axis) {
    std::vector<std::size_t> p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = i;
    std::vector<int> s(dim, 1);
    s.at(axis) = -1;
    return {std::move(p), std::move(s)};
  }

  std::size_t dim() const { return perm.size(); }

  Vector operator()(const Vector& x) const {
    if (x.dim() != dim()) throw DimensionMismatch(dim(), x.dim());
    std::vector<double> y(dim());
    for (std::size_t i = 0; i < dim(); ++i) y[i] = signs[i] * x[perm[i]];
    return Vector(std::move(y));
  }

  SignedPermutation inverse() const {
    std::vector<std::size_t> p(dim());
    std::vector<int> s(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      p[perm[i]] = i;
      s[perm[i]] = signs[i];
    }
    return {std::move(p), std::move(s)};
  }

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

using LinearIsometry = std::variant<Identity, PlanarRotation, SignedPermutation>;

inline Vector apply_linear(const LinearIsometry& f, const Vector& x) {
  return std::visit(
      [&](const auto& g) -> Vector {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Identity>) {
          return x;
        } else {
          return g(x);
        }
      },
      f);
}

inline LinearIsometry invert_linear(const LinearIsometry& f) {
  return std::visit(
      [](const auto& g) -> LinearIsometry {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return g;
        } else if constexpr (std::is_same_v<T, PlanarRotation>) {
          return PlanarRotation(g.e1u, g.u, -g.alpha);
        } else {
          return g.inverse();
        }
      },
      f);
}

/// x -> scale * L(x) + shift, where L applies `factors` front to back.
///
/// `scale` is 1 for every motion this library constructs. Other values are
/// accepted only so audits can be fed deliberately corrupted maps; such a map
/// is not an isometry and the audits report it.
class Motion {
public:
  Motion() = default;

  Motion(std::vector<LinearIsometry> factors, Vector shift, double scale = 1.0)
      : shift_(std::move(shift)), scale_(scale) {
    if (shift_.empty()) throw InvalidArgument("motion shift must have a dimension");
    if (!(scale_ > 0.0) || !std::isfinite(scale_))
      throw InvalidArgument("motion scale must be positive and finite");
    for (auto& f : factors) {
      if (std::holds_alternative<Identity>(f)) continue;
      const std::size_t d = std::visit(
          [](const auto& g) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Identity>) {
              return 0;
            } else {
              return g.dim();
            }
          },
          f);
      if (d != shift_.dim()) throw DimensionMismatch(shift_.dim(), d);
      factors_.push_back(std::move(f));
    }
  }

  static Motion identity(std::size_t dim) { return Motion({}, Vector::zero(dim)); }
  static Motion translation(Vector a) { return Motion({}, std::move(a)); }
  static Motion linear(LinearIsometry f, std::size_t dim) {
    return Motion({std::move(f)}, Vector::zero(dim));
  }

  std::size_t dim() const { return shift_.dim(); }
  const std::vector<LinearIsometry>& factors() const { return factors_; }
  const Vector& shift() const { return shift_; }
  double scale() const { return scale_; }

  bool needs_euclidean() const {
    return std::any_of(factors_.begin(), factors_.end(), [](const LinearIsometry& f) {
      return std::holds_alternative<PlanarRotation>(f);
    });
  }

  /// The origin-fixing part: scale * L(x).
  Vector linear_part(const Vector& x) const {
    if (x.dim() != dim()) throw DimensionMismatch(dim(), x.dim());
    Vector y = x;
    for (const auto& f : factors_) y = apply_linear(f, y);
    if (scale_ != 1.0) y *= scale_;
    return y;
  }

  Vector operator()(const Vector& x) const { return linear_part(x) + shift_; }

  friend bool operator==(const Motion&, const Motion&) = default;

private:
  std::vector<LinearIsometry> factors_;
  Vector shift_;
  double scale_ = 1.0;
};

inline void check_compatible(const Motion& m, const Space& space) {
  if (m.dim() != space.dim) throw DimensionMismatch(space.dim, m.dim());
  if (m.needs_euclidean() && !space.norm.is_euclidean())
    throw NormIncompatible("planar rotations are isometries only of the l2 norm");
}

/// Applies `m` after checking it is valid in `space`.
inline Vector apply(const Space& space, const Motion& m, const Vector& x) {
  check_compatible(m, space);
  space.check(x);
  return m(x);
}

/// compose(m2, m1)(x) == m2(m1(x)).
inline Motion compose(const Motion& m2, const Motion& m1) {
  if (m1.dim() != m2.dim()) throw DimensionMismatch(m2.dim(), m1.dim());
  std::vector<LinearIsometry> factors = m1.factors();
  factors.insert(factors.end(), m2.factors().begin(), m2.factors().end());
  return Motion(std::move(factors), m2.linear_part(m1.shift()) + m2.shift(),
                m1.scale() * m2.scale());
}

inline Motion inverse(const Motion& m) {
  std::vector<LinearIsometry> factors;
  factors.reserve(m.factors().size());
  for (auto it = m.factors().rbegin(); it != m.factors().rend(); ++it)
    factors.push_back(invert_linear(*it));
  Motion linear_inverse(std::move(factors), Vector::zero(m.dim()), 1.0 / m.scale());
  return Motion(linear_inverse.factors(), -linear_inverse.linear_part(m.shift()),
                linear_inverse.scale());
}

/// m == shift ∘ non_shift with non_shift(θ) = θ and shift a pure translation.
struct Decomposition {
  Motion non_shift;
  Motion shift;
};

inline Decomposition decompose(const Motion& m) {
  return {Motion(m.factors(), Vector::zero(m.dim()), m.scale()), Motion::translation(m.shift())};
}

/// Zero-shift rotation taking e1 to e2 in the plane they span; identity on
/// the orthogonal complement. For e2 = -e1 the rotation plane uses the first
/// canonical axis that is not (nearly) parallel to e1.
inline Motion planar_rotation_between(const Vector& e1, const Vector& e2) {
  e1.check_same(e2);
  const std::size_t d = e1.dim();
  const double r = euclidean_norm(e1);
  if (r == 0.0 || euclidean_norm(e2) == 0.0) throw InvalidArgument("rotation needs nonzero vectors");
  if (std::abs(euclidean_norm(e2) - r) > 1e-9 * std::max(1.0, r))
    throw InvalidArgument("rotation needs vectors of equal norm");
  if (e1 == e2) return Motion::identity(d);

  const Vector a = e1 / r;
  const Vector b = e2 / euclidean_norm(e2);
  auto orthonormalize = [&](Vector w) {
    for (int pass = 0; pass < 2; ++pass) w -= inner(w, a) * a;
    return w;
  };

  Vector w = orthonormalize(b);
  double wn = euclidean_norm(w);
  if (wn < 1e-12) {
    if (inner(a, b) > 0.0) return Motion::identity(d);
    for (std::size_t axis = 0; axis < d; ++axis) {
      w = orthonormalize(Vector::basis(d, axis));
      wn = euclidean_norm(w);
      if (wn >= 1e-6) break;
    }
    if (wn < 1e-6) throw InvalidArgument("antipodal rotation needs dimension >= 2");
    w /= wn;
    w = orthonormalize(w);
    w /= euclidean_norm(w);
    return Motion::linear(PlanarRotation(a, w, std::numbers::pi), d);
  }
  w /= wn;
  w = orthonormalize(w);
  w /= euclidean_norm(w);
  const double alpha = std::atan2(inner(b, w), inner(b, a));
  return Motion::linear(PlanarRotation(a, w, alpha), d);
}

/// True when m moves neither x nor -x outside the sphere through x. In a
/// strictly convex space this forces the translation part of m to vanish.
inline bool trivial_shift_premise(const Space& space, const Motion& m, const Vector& x,
                                  double tol = kAuditTolerance) {
  const double r = norm(space, x);
  return norm(space, apply(space, m, x)) <= r + tol && norm(space, apply(space, m, -x)) <= r + tol;
}

/// Samples isometry, sphere-image, linearity of the zero-shift part, and
/// (in l2) inner-product preservation residuals. A sample fails when any of
/// its residuals exceeds 1e-9.
inline AuditReport motion_audit(const Motion& m, const Space& space, std::size_t samples,
                                std::uint64_t seed, unsigned workers = 1) {
  if (samples == 0) throw InvalidArgument("motion audit needs at least one sample");
  check_compatible(m, space);
  Stopwatch clock;
  const Motion g = decompose(m).non_shift;
  const Vector origin = Vector::zero(space.dim);
  const bool euclid = space.norm.is_euclidean();

  struct ChunkResult {
    Tally tally;
    double parts[4] = {0, 0, 0, 0};
  };
  auto results = map_indexed(chunk_count(samples), workers, [&](std::size_t chunk) {
    ChunkResult out;
    Rng rng = stream(seed, chunk);
    const std::size_t end = std::min(samples, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      const Vector x = ball_point(space, origin, 1.0, rng);
      const Vector y = ball_point(space, origin, 1.0, rng);
      const Vector c = ball_point(space, origin, 1.0, rng);
      const double r = uniform(rng, 1e-3, 1.0);
      const Vector s = sphere_point(space, c, r, rng);
      const double lambda = uniform(rng, -2.0, 2.0), mu = uniform(rng, -2.0, 2.0);

      double res[4];
      res[0] = std::abs(distance(space, m(x), m(y)) - distance(space, x, y));
      res[1] = std::abs(distance(space, m(s), m(c)) - r);
      res[2] = norm(space, g(lambda * x + mu * y) - lambda * g(x) - mu * g(y));
      res[3] = euclid ? std::abs(inner(g(x), g(y)) - inner(x, y)) : 0.0;
      double worst = 0.0;
      for (int k = 0; k < 4; ++k) {
        out.parts[k] = std::max(out.parts[k], res[k]);
        worst = std::max(worst, res[k]);
      }
      out.tally.record(worst, worst > kAuditTolerance, x);
    }
    return out;
  });

  Tally total;
  double parts[4] = {0, 0, 0, 0};
  for (const auto& r : results) {
    total.merge(r.tally);
    for (int k = 0; k < 4; ++k) parts[k] = std::max(parts[k], r.parts[k]);
  }
  AuditReport report;
  report.kind = "motion";
  report.samples = samples;
  report.seed = seed;
  apply_tally(report, total);
  report.detail["isometry"] = parts[0];
  report.detail["sphere_image"] = parts[1];
  report.detail["linearity"] = parts[2];
  if (euclid) report.detail["inner_product"] = parts[3];
  report.runtime_ms = clock.elapsed_ms();
  return report;
}

}  // namespace ballcover
