#pragma once

// Finite-dimensional l_p spaces: vectors, norms, inner product, angles,
// seeded ball/sphere sampling and a search for strict-convexity violations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ballcover/errors.hpp"
#include "ballcover/random.hpp"

namespace ballcover {

/// A point or direction with finite real coordinates.
///
/// A default-constructed Vector is empty and only serves as a placeholder in
/// containers; every Vector built from coordinates has dim() >= 1.
class Vector {
public:
  Vector() = default;

  explicit Vector(std::vector<double> coords) : c_(std::move(coords)) {
    if (c_.empty()) throw InvalidArgument("vector must have at least one coordinate");
    for (double v : c_)
      if (!std::isfinite(v)) throw InvalidArgument("vector coordinates must be finite");
  }

  Vector(std::initializer_list<double> coords) : Vector(std::vector<double>(coords)) {}

  static Vector zero(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

  static Vector basis(std::size_t dim, std::size_t axis) {
    std::vector<double> c(dim, 0.0);
    c.at(axis) = 1.0;
    return Vector(std::move(c));
  }

  std::size_t dim() const { return c_.size(); }
  bool empty() const { return c_.empty(); }
  double operator[](std::size_t i) const { return c_[i]; }
  std::span<const double> coords() const { return c_; }

  void set(std::size_t i, double value) {
    if (!std::isfinite(value)) throw InvalidArgument("vector coordinates must be finite");
    c_.at(i) = value;
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
  }

  Vector& operator+=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vector& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Vector& operator/=(double s) {
    for (double& v : c_) v /= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator/(Vector a, double s) { return a /= s; }
  friend Vector operator-(Vector a) { return a *= -1.0; }
  friend bool operator==(const Vector&, const Vector&) = default;

  void check_same(const Vector& o) const {
    if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  }

private:
  std::vector<double> c_;
};

/// l_p norm selector; p = +infinity is the max norm.
class NormKind {
public:
  static NormKind lp(double p) {
    if (!(p >= 1.0)) throw InvalidArgument("l_p norm needs p >= 1");
    return NormKind(p);
  }
  static NormKind linf() { return NormKind(std::numeric_limits<double>::infinity()); }
  static NormKind euclidean() { return NormKind(2.0); }

  double p() const { return p_; }
  bool is_linf() const { return std::isinf(p_); }
  bool is_euclidean() const { return p_ == 2.0; }
  // Strict convexity holds exactly for 1 < p < infinity.
  bool is_strictly_convex() const { return p_ > 1.0 && !is_linf(); }

  std::string describe() const {
    if (is_linf()) return "linf";
    std::ostringstream s;
    s << 'l' << std::setprecision(10) << p_;
    return s.str();
  }

  friend bool operator==(const NormKind&, const NormKind&) = default;

private:
  explicit NormKind(double p) : p_(p) {}
  double p_;
};

struct Space {
  std::size_t dim;
  NormKind norm;

  Space(std::size_t dim_, NormKind norm_) : dim(dim_), norm(norm_) {
    if (dim == 0) throw InvalidArgument("space dimension must be positive");
  }

  static Space euclidean(std::size_t dim) { return Space(dim, NormKind::euclidean()); }

  void check(const Vector& v) const {
    if (v.dim() != dim) throw DimensionMismatch(dim, v.dim());
  }
  void require_euclidean(const char* what) const {
    if (!norm.is_euclidean()) throw NormIncompatible(std::string(what) + " requires the l2 norm");
  }

  friend bool operator==(const Space&, const Space&) = default;
};

inline double lp_norm(std::span<const double> c, double p) {
  if (p == 1.0) {
    double s = 0.0;
    for (double v : c) s += std::abs(v);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : c) s += v * v;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  for (double v : c) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

inline double norm(const Space& space, const Vector& v) {
  space.check(v);
  return lp_norm(v.coords(), space.norm.p());
}

inline double distance(const Space& space, const Vector& a, const Vector& b) {
  return norm(space, a - b);
}

inline double inner(const Vector& x, const Vector& y) {
  x.check_same(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

inline double euclidean_norm(const Vector& v) { return lp_norm(v.coords(), 2.0); }

/// Euclidean angle in [0, pi]; 0 when either argument is the zero vector.
///
/// Evaluated as 2*atan2(|a - b|, |a + b|) on the normalized arguments, which is
/// equal to the arccos of the cosine but keeps full precision for nearly
/// parallel and nearly antipodal pairs.
inline double angle(const Vector& x, const Vector& y) {
  x.check_same(y);
  const double nx = euclidean_norm(x);
  const double ny = euclidean_norm(y);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double a = x[i] / nx, b = y[i] / ny;
    diff += (a - b) * (a - b);
    sum += (a + b) * (a + b);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

// ---------------------------------------------------------------------------
// Sampling.
//
// Euclidean balls are sampled exactly uniformly (Gaussian direction, radius
// r * U^(1/dim)). Other norms use rejection from the bounding cube with at
// most kRejectionBudget attempts per point; beyond that the call throws
// SamplingBudgetExceeded. Sphere points are Gaussian vectors normalized in the
// space norm, which is uniform only for l2.

inline constexpr std::size_t kRejectionBudget = std::size_t{1} << 16;

inline Vector gaussian_vector(std::size_t dim, Rng& rng) {
  std::vector<double> c(dim);
  for (;;) {
    for (double& v : c) v = gaussian(rng);
    if (std::any_of(c.begin(), c.end(), [](double v) { return v != 0.0; })) break;
  }
  return Vector(std::move(c));
}

inline Vector sphere_point(const Space& space, const Vector& center, double r, Rng& rng) {
  Vector g = gaussian_vector(space.dim, rng);
  g *= r / norm(space, g);
  return g += center;
}

inline Vector ball_point(const Space& space, const Vector& center, double r, Rng& rng) {
  if (space.norm.is_euclidean()) {
    Vector g = gaussian_vector(space.dim, rng);
    const double radius = r * std::pow(uniform01(rng), 1.0 / static_cast<double>(space.dim));
    g *= radius / euclidean_norm(g);
    return g += center;
  }
  std::vector<double> c(space.dim);
  for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
    for (double& v : c) v = uniform(rng, -1.0, 1.0);
    if (lp_norm(c, space.norm.p()) <= 1.0) {
      Vector u(c);
      u *= r;
      return u += center;
    }
  }
  throw SamplingBudgetExceeded("ball rejection sampling exceeded " +
                               std::to_string(kRejectionBudget) + " attempts in " +
                               space.norm.describe() + " dim " + std::to_string(space.dim));
}

/// Points [first, first + count) of the seeded ball sequence, where `first`
/// is a multiple of kChunkSize.
inline std::vector<Vector> sample_ball_range(const Space& space, const Vector& center, double r,
                                             std::size_t first, std::size_t count,
                                             std::uint64_t seed) {
  std::vector<Vector> out;
  out.reserve(count);
  std::size_t i = first;
  while (i < first + count) {
    Rng rng = stream(seed, i / kChunkSize);
    const std::size_t end = std::min(first + count, (i / kChunkSize + 1) * kChunkSize);
    for (; i < end; ++i) out.push_back(ball_point(space, center, r, rng));
  }
  return out;
}

inline std::vector<Vector> sample_ball(const Space& space, const Vector& center, double r,
                                       std::size_t n, std::uint64_t seed) {
  space.check(center);
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  return sample_ball_range(space, center, r, 0, n, seed);
}

// ---------------------------------------------------------------------------
// Strict convexity.

struct NcsWitness {
  Vector x;
  Vector y;
  double lambda;
  double combination_norm;
};

inline constexpr double kNcsTolerance = 1e-9;
// Unit vectors closer than this are treated as the same point; very flat
// stretches of l_p spheres otherwise pass the 1 - tol test on rounding alone.
inline constexpr double kNcsMinSeparation = 1e-2;
// Sampled lambda stays in [margin, 1 - margin]: near the ends the combination
// is within rounding of x or y whatever the norm.
inline constexpr double kNcsLambdaMargin = 0.1;

inline std::optional<NcsWitness> ncs_violation_search(const Space& space, std::size_t samples,
                                                      std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("ncs search needs at least one sample");
  if (space.dim < 2) return std::nullopt;
  const std::size_t d = space.dim;

  if (space.norm.p() == 1.0) {
    Vector x = Vector::basis(d, 0), y = Vector::basis(d, 1);
    return NcsWitness{x, y, 0.5, norm(space, 0.5 * x + 0.5 * y)};
  }
  if (space.norm.is_linf()) {
    Vector x = Vector::zero(d), y = Vector::zero(d);
    x.set(0, 1.0), x.set(1, 1.0);
    y.set(0, 1.0), y.set(1, -1.0);
    return NcsWitness{x, y, 0.5, norm(space, 0.5 * x + 0.5 * y)};
  }

  const Vector origin = Vector::zero(d);
  for (std::size_t chunk = 0; chunk < chunk_count(samples); ++chunk) {
    Rng rng = stream(seed, chunk);
    const std::size_t end = std::min(samples, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      Vector x = sphere_point(space, origin, 1.0, rng);
      Vector y = sphere_point(space, origin, 1.0, rng);
      const double lambda = uniform(rng, kNcsLambdaMargin, 1.0 - kNcsLambdaMargin);
      if (distance(space, x, y) < kNcsMinSeparation) continue;
      for (double l : {lambda, 0.5}) {
        const double n = norm(space, l * x + (1.0 - l) * y);
        if (n >= 1.0 - kNcsTolerance) return NcsWitness{x, y, l, n};
      }
    }
  }
  return std::nullopt;
}

}  // namespace ballcover
