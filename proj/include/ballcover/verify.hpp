#pragma once

// Audit engines: coverage, congruence, containment, convexity, the centre
// interior dichotomy, antipodal search on spheres, and the l_{3/2}
// counterexample to the Euclidean four-point inequality.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ballcover/covering.hpp"
#include "ballcover/motion.hpp"
#include "ballcover/parallel.hpp"
#include "ballcover/report.hpp"
#include "ballcover/shape.hpp"

namespace ballcover {

inline constexpr std::size_t kDichotomyCongruenceSamples = 1000;
inline constexpr std::size_t kDichotomyCoverageSamples = 10000;

namespace detail {

inline AuditReport make_report(std::string kind, std::size_t samples, std::uint64_t seed) {
  AuditReport r;
  r.kind = std::move(kind);
  r.samples = samples;
  r.seed = seed;
  return r;
}

}  // namespace detail

/// Samples the covering's ball; a point fails when no set contains it within
/// tol. Universal coverings are checked against universal_witness instead of
/// the stored finite subfamily.
inline AuditReport check_coverage(const Covering& cov, std::size_t n_samples, std::uint64_t seed,
                                  double tol = kMembershipTolerance, unsigned workers = 1) {
  if (n_samples == 0) throw InvalidArgument("coverage audit needs at least one sample");
  Stopwatch clock;
  const Space& space = cov.space;
  const bool witness_mode = cov.witness_mode();

  auto tallies = map_indexed(chunk_count(n_samples), workers, [&](std::size_t chunk) {
    Tally t;
    const std::size_t first = chunk * kChunkSize;
    const std::size_t count = std::min(kChunkSize, n_samples - first);
    for (const auto& x : sample_ball_range(space, cov.ball.center, cov.ball.radius, first, count, seed)) {
      double residual;
      if (witness_mode) {
        residual = x.is_zero()
                       ? 0.0
                       : std::max(0.0, distance(space, x, universal_witness(space, x)) - 0.5);
        t.record(residual, residual > tol, x);
        continue;
      }
      bool covered = false;
      residual = std::numeric_limits<double>::infinity();
      for (const auto& s : cov.sets) {
        if (contains(space, s, x, tol)) {
          covered = true;
          residual = 0.0;
          break;
        }
        residual = std::min(residual, membership_defect(space, s, x));
      }
      t.record(residual, !covered, x);
    }
    return t;
  });

  Tally total;
  for (const auto& t : tallies) total.merge(t);
  AuditReport report = detail::make_report("coverage", n_samples, seed);
  apply_tally(report, total);
  report.detail["sets"] = cov.sets.size();
  report.detail["mode"] = witness_mode ? "witness" : "members";
  report.runtime_ms = clock.elapsed_ms();
  return report;
}

/// For every witness f_i: samples of sets[0] pushed forward must land in
/// sets[i], samples of sets[i] pulled back must land in sets[0], and f_i must
/// pass motion_audit.
inline AuditReport check_congruence(const Covering& cov, std::size_t n_samples, std::uint64_t seed,
                                    double tol = kMembershipTolerance, unsigned workers = 1) {
  if (!cov.has_witnesses()) throw InvalidArgument("congruence audit needs witness motions");
  if (n_samples == 0) throw InvalidArgument("congruence audit needs at least one sample");
  Stopwatch clock;
  const Space& space = cov.space;

  struct PerWitness {
    Tally tally;
    double forward = 0.0, backward = 0.0, motion = 0.0;
  };
  auto results = map_indexed(cov.sets.size(), workers, [&](std::size_t i) {
    PerWitness out;
    const Motion& f = cov.witnesses[i];
    const Motion f_inv = inverse(f);
    const std::uint64_t s = splitmix64(seed) + i;
    for (const auto& x : sample_members(space, cov.sets[0], n_samples, s)) {
      const Vector y = f(x);
      const double d = membership_defect(space, cov.sets[i], y);
      out.forward = std::max(out.forward, d);
      out.tally.record(d, !contains(space, cov.sets[i], y, tol), x);
    }
    for (const auto& y : sample_members(space, cov.sets[i], n_samples, s ^ 0xb00cULL)) {
      const Vector x = f_inv(y);
      const double d = membership_defect(space, cov.sets[0], x);
      out.backward = std::max(out.backward, d);
      out.tally.record(d, !contains(space, cov.sets[0], x, tol), y);
    }
    const AuditReport m = motion_audit(f, space, n_samples, s);
    out.motion = m.residual_max;
    Tally motion_tally;
    motion_tally.failures = m.failures;
    motion_tally.residual_max = m.residual_max;
    motion_tally.witnesses = m.witnesses;
    out.tally.merge(motion_tally);
    return out;
  });

  Tally total;
  auto per = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    total.merge(results[i].tally);
    per.push_back({{"index", i}, {"forward", results[i].forward},
                   {"inverse", results[i].backward}, {"motion", results[i].motion}});
  }
  AuditReport report = detail::make_report("congruence", n_samples, seed);
  apply_tally(report, total);
  report.detail["witnesses"] = std::move(per);
  report.runtime_ms = clock.elapsed_ms();
  return report;
}

/// Sampled members of every set must lie in the covering's ball.
inline AuditReport check_containment(const Covering& cov, std::size_t n_samples, std::uint64_t seed,
                                     double tol = kMembershipTolerance, unsigned workers = 1) {
  if (n_samples == 0) throw InvalidArgument("containment audit needs at least one sample");
  Stopwatch clock;
  const Space& space = cov.space;
  const Shape ball = Shape::closed_ball(cov.ball.center, cov.ball.radius);
  auto tallies = map_indexed(cov.sets.size(), workers, [&](std::size_t i) {
    Tally t;
    for (const auto& x : sample_members(space, cov.sets[i], n_samples, splitmix64(seed) + i)) {
      const double d = membership_defect(space, ball, x);
      t.record(d, d > tol, x);
    }
    return t;
  });
  Tally total;
  for (const auto& t : tallies) total.merge(t);
  AuditReport report = detail::make_report("containment", n_samples, seed);
  apply_tally(report, total);
  report.runtime_ms = clock.elapsed_ms();
  return report;
}

/// Random convex combinations (and midpoints) of sampled member pairs must be
/// members.
inline AuditReport check_convexity(const Space& space, const Shape& shape, std::size_t pairs,
                                   std::uint64_t seed, double tol = kMembershipTolerance) {
  if (pairs == 0) throw InvalidArgument("convexity audit needs at least one pair");
  Stopwatch clock;
  const auto xs = sample_members(space, shape, pairs, seed);
  const auto ys = sample_members(space, shape, pairs, splitmix64(seed));
  Tally t;
  Rng rng = stream(seed, 0xc0ffeeULL);
  for (std::size_t i = 0; i < pairs; ++i) {
    const double lambda = uniform01(rng);
    for (double l : {lambda, 0.5}) {
      const Vector z = l * xs[i] + (1.0 - l) * ys[i];
      const double d = membership_defect(space, shape, z);
      t.record(d, !contains(space, shape, z, tol), z);
    }
  }
  AuditReport report = detail::make_report("convexity", pairs, seed);
  apply_tally(report, t);
  report.runtime_ms = clock.elapsed_ms();
  return report;
}

// ---------------------------------------------------------------------------
// Centre classification and the dichotomy.

struct CenterClassification {
  enum class Kind { in_all_interiors, in_no_interior, mixed };
  Kind kind = Kind::in_no_interior;
  std::vector<std::size_t> interior;  // sets certified to contain θ in their interior
  std::vector<std::size_t> boundary;  // sets with an undecided verdict
  std::vector<InteriorStatus> statuses;
};

inline const char* to_string(CenterClassification::Kind k) {
  switch (k) {
    case CenterClassification::Kind::in_all_interiors: return "in_all_interiors";
    case CenterClassification::Kind::in_no_interior: return "in_no_interior";
    case CenterClassification::Kind::mixed: return "mixed";
  }
  return "?";
}

/// Boundary verdicts count as "not interior" but are listed separately.
inline CenterClassification classify_center(const Covering& cov, double eps = kDefaultInteriorEps,
                                            double tol = kMembershipTolerance) {
  if (!(eps > 0.0)) throw InvalidArgument("interior eps must be positive");
  CenterClassification out;
  const Vector origin = Vector::zero(cov.space.dim);
  for (std::size_t i = 0; i < cov.sets.size(); ++i) {
    auto st = interior_classify(cov.space, cov.sets[i], origin, eps, tol);
    if (st.is_interior()) out.interior.push_back(i);
    if (st.is_boundary()) out.boundary.push_back(i);
    out.statuses.push_back(std::move(st));
  }
  if (out.interior.size() == cov.sets.size())
    out.kind = CenterClassification::Kind::in_all_interiors;
  else if (out.interior.empty())
    out.kind = CenterClassification::Kind::in_no_interior;
  else
    out.kind = CenterClassification::Kind::mixed;
  return out;
}

inline nlohmann::ordered_json to_json(const CenterClassification& c) {
  nlohmann::ordered_json j;
  j["class"] = to_string(c.kind);
  j["interior"] = c.interior;
  j["boundary"] = c.boundary;
  return j;
}

/// Checks that the centre is interior to all sets or to none. The check
/// applies only when the norm is strictly convex, the family has at most dim
/// sets, it is not a witness-mode family, its witnesses verify, and it covers
/// the ball; otherwise the verdict is not_applicable and the observed
/// classification is still reported.
inline AuditReport dichotomy_audit(const Covering& cov, double eps = kDefaultInteriorEps,
                                   double tol = kMembershipTolerance, unsigned workers = 1) {
  Stopwatch clock;
  const CenterClassification cls = classify_center(cov, eps, tol);
  std::vector<std::string> reasons;
  if (!cov.space.norm.is_strictly_convex()) reasons.push_back("non-NCS");
  if (cov.sets.size() > cov.space.dim) reasons.push_back("set count exceeds dimension");
  if (cov.witness_mode()) reasons.push_back("finite subfamily of an uncountable family");
  if (!cov.has_witnesses()) {
    reasons.push_back("no congruence witnesses");
  } else if (reasons.empty() &&
             !check_congruence(cov, kDichotomyCongruenceSamples, 0, tol, workers).passed()) {
    reasons.push_back("congruence witnesses fail");
  }
  if (reasons.empty() && !check_coverage(cov, kDichotomyCoverageSamples, 0, tol, workers).passed())
    reasons.push_back("family does not cover the ball");

  AuditReport report = detail::make_report("dichotomy", cov.sets.size(), 0);
  report.detail["applicable"] = reasons.empty();
  report.detail["reasons"] = reasons;
  report.detail["classification"] = to_json(cls);
  if (!reasons.empty()) {
    report.verdict = Verdict::not_applicable;
  } else if (cls.kind == CenterClassification::Kind::mixed) {
    report.verdict = Verdict::fail;
    report.failures = 1;
    report.witnesses.push_back(Vector::zero(cov.space.dim));
  }
  report.runtime_ms = clock.elapsed_ms();
  return report;
}

// ---------------------------------------------------------------------------
// Antipodal search.

struct AntipodalResult {
  std::size_t index = 0;
  Vector x;
  double residual = 0.0;  // max(0, objective at the returned pair)
  double objective = 0.0; // max of the two signed defects; negative means depth
  bool converged = false; // residual <= tol
  std::size_t probes = 0;
};

namespace detail {

inline Vector to_sphere(const Space& space, Vector x, double r) {
  const double n = norm(space, x);
  return x * (r / n);
}

inline double pair_objective(const Space& space, const Shape& s, const Vector& x) {
  return std::max(signed_defect(space, s, x), signed_defect(space, s, -x));
}

}  // namespace detail

/// Searches for a set containing an antipodal pair {x, -x} of S(θ, r).
///
/// Probes are a uniform angle grid on circles (dim 2) and `grid` seeded sphere
/// points otherwise; every probe must be covered by some set (else
/// CoverageGap). For each set the best few probes are refined by coordinate
/// moves projected back to the sphere, minimising the larger of the two signed
/// defects. Signed rather than clamped defects make the search prefer pairs
/// deep inside a set over pairs on its boundary.
inline AntipodalResult antipodal_search(const Space& space, const std::vector<Shape>& sets,
                                        std::size_t grid, std::size_t refine_iters,
                                        double tol = 1e-6, double radius = 1.0,
                                        std::uint64_t seed = 0) {
  if (sets.empty()) throw InvalidArgument("antipodal search needs sets");
  if (space.dim < sets.size())
    throw InvalidArgument("antipodal search needs dim >= number of sets");
  if (grid == 0) throw InvalidArgument("antipodal search needs a nonempty grid");
  for (const auto& s : sets)
    if (s.dim() != space.dim) throw DimensionMismatch(space.dim, s.dim());

  const Vector origin = Vector::zero(space.dim);
  std::vector<Vector> probes;
  probes.reserve(grid);
  if (space.dim == 2) {
    for (std::size_t k = 0; k < grid; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid);
      probes.push_back(detail::to_sphere(space, Vector{std::cos(t), std::sin(t)}, radius));
    }
  } else {
    for (std::size_t chunk = 0; chunk < chunk_count(grid); ++chunk) {
      Rng rng = stream(seed, chunk);
      const std::size_t end = std::min(grid, (chunk + 1) * kChunkSize);
      for (std::size_t i = chunk * kChunkSize; i < end; ++i)
        probes.push_back(sphere_point(space, origin, radius, rng));
    }
  }

  const std::size_t m = sets.size();
  std::vector<std::vector<double>> score(m, std::vector<double>(probes.size()));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    double covered = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double here = signed_defect(space, sets[i], probes[p]);
      covered = std::min(covered, here);
      score[i][p] = std::max(here, signed_defect(space, sets[i], -probes[p]));
    }
    if (covered > kMembershipTolerance)
      throw CoverageGap("sphere probe " + std::to_string(p) + " is not covered by any set");
  }

  // Initial step: the typical probe spacing on the sphere.
  const double spacing =
      radius * std::min(1.0, 2.0 * std::pow(1.0 / static_cast<double>(grid),
                                             1.0 / static_cast<double>(space.dim - 1)) *
                                 std::numbers::pi);
  constexpr std::size_t kStarts = 4;

  AntipodalResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.probes = probes.size();
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> order(probes.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    const std::size_t starts = std::min(kStarts, order.size());
    std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return score[i][a] < score[i][b] || (score[i][a] == score[i][b] && a < b);
                      });
    for (std::size_t s = 0; s < starts; ++s) {
      Vector x = probes[order[s]];
      double f = score[i][order[s]];
      double step = spacing;
      for (std::size_t it = 0; it < refine_iters; ++it) {
        bool improved = false;
        for (std::size_t c = 0; c < space.dim; ++c) {
          for (double sign : {1.0, -1.0}) {
            Vector y = x;
            y.set(c, y[c] + sign * step);
            if (y.is_zero()) continue;
            y = detail::to_sphere(space, std::move(y), radius);
            const double g = detail::pair_objective(space, sets[i], y);
            if (g < f) {
              f = g;
              x = std::move(y);
              improved = true;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
      if (f < best.objective) {
        best.objective = f;
        best.index = i;
        best.x = x;
      }
    }
  }
  best.residual = std::max(0.0, best.objective);
  best.converged = best.residual <= tol;
  return best;
}

// ---------------------------------------------------------------------------

struct CounterexampleValues {
  double lhs;
  double rhs;
};

/// In R^2 with the l_{3/2} norm, x = (1,0), y = (0,1), z = (1,1):
/// |x - y|^2 + |z|^2 against |x|^2 + |y|^2 + |x - z|^2 + |y - z|^2.
inline CounterexampleValues counterexample_r2_32() {
  const Space s(2, NormKind::lp(1.5));
  const Vector x{1.0, 0.0}, y{0.0, 1.0}, z{1.0, 1.0};
  auto sq = [&](const Vector& v) {
    const double n = norm(s, v);
    return n * n;
  };
  return {sq(x - y) + sq(z), sq(x) + sq(y) + sq(x - z) + sq(y - z)};
}

}  // namespace ballcover
