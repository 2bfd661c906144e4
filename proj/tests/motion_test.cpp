#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ballcover/motion.hpp"

using namespace ballcover;

namespace {

constexpr double pi = std::numbers::pi;

double max_gap(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Vector unit(Vector v) { return v / euclidean_norm(v); }

// A few motions of each structural kind in R^d (l2).
std::vector<Motion> sample_motions(std::size_t d, std::uint64_t seed) {
  Rng rng = stream(seed, 0);
  std::vector<Motion> out;
  out.push_back(Motion::identity(d));
  out.push_back(Motion::translation(gaussian_vector(d, rng)));
  for (int i = 0; i < 6; ++i) {
    Vector a = unit(gaussian_vector(d, rng));
    Vector b = unit(gaussian_vector(d, rng));
    Motion r = planar_rotation_between(a, b);
    out.push_back(r);
    out.push_back(compose(Motion::translation(gaussian_vector(d, rng) * 0.3), r));
  }
  out.push_back(Motion::linear(SignedPermutation::reflection(d, d - 1), d));
  out.push_back(compose(out[3], out.back()));
  return out;
}

}  // namespace

TEST(Apply, IdentityAndAxisShift) {
  const Space s = Space::euclidean(4);
  const Vector x{0.1, -0.2, 0.3, 0.4};
  EXPECT_EQ(apply(s, Motion::identity(4), x), x);

  // f_ij shifts the first coordinate by 2(j - i)/n.
  const int n = 5, i = 1, j = 4;
  Vector a = Vector::zero(4);
  a.set(0, 2.0 * (j - i) / n);
  const Vector y = apply(Space(4, NormKind::linf()), Motion::translation(a), x);
  EXPECT_EQ(y, (Vector{0.1 + 2.0 * (j - i) / n, -0.2, 0.3, 0.4}));
}

TEST(Apply, RightAngleRotationTakesE1ToU) {
  const Vector e1 = unit({1.0, 2.0, -1.0});
  Vector u{2.0, -1.0, 0.0};
  u = unit(u - inner(u, e1) * e1);
  const Motion r = Motion::linear(PlanarRotation(e1, u, pi / 2), 3);
  EXPECT_LT(max_gap(r(e1), u), 1e-15);
}

TEST(Apply, RotationRequiresEuclideanNorm) {
  const Motion r = planar_rotation_between({1.0, 0.0}, {0.0, 1.0});
  EXPECT_THROW(apply(Space(2, NormKind::lp(3)), r, Vector{1.0, 0.0}), NormIncompatible);
  EXPECT_THROW(apply(Space::euclidean(3), r, Vector{1.0, 0.0, 0.0}), DimensionMismatch);
  // Signed permutations are isometries of every l_p.
  const Motion p = Motion::linear(SignedPermutation({1, 0}, {1, -1}), 2);
  EXPECT_EQ(apply(Space(2, NormKind::lp(3)), p, Vector{1.0, 2.0}), (Vector{2.0, -1.0}));
}

TEST(Construction, ValidatesInvariants) {
  EXPECT_THROW(PlanarRotation({1.0, 0.0}, {1.0, 0.0}, 0.3), InvalidArgument);
  EXPECT_THROW(PlanarRotation({2.0, 0.0}, {0.0, 1.0}, 0.3), InvalidArgument);
  EXPECT_THROW(SignedPermutation({0, 0}, {1, 1}), InvalidArgument);
  EXPECT_THROW(SignedPermutation({0, 1}, {1, 2}), InvalidArgument);
  EXPECT_THROW(Motion({SignedPermutation({0, 1}, {1, 1})}, Vector::zero(3)), DimensionMismatch);
  EXPECT_THROW(Motion({}, Vector::zero(2), 0.0), InvalidArgument);
}

TEST(Inverse, OfTranslationAndRotation) {
  const Vector a{0.5, -2.0};
  EXPECT_EQ(inverse(Motion::translation(a)).shift(), -a);

  const Motion r = Motion::linear(PlanarRotation({1.0, 0.0}, {0.0, 1.0}, 0.7), 2);
  const Motion inv = inverse(r);
  ASSERT_EQ(inv.factors().size(), 1u);
  EXPECT_EQ(std::get<PlanarRotation>(inv.factors()[0]).alpha, -0.7);
  Rng rng = stream(3, 0);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = gaussian_vector(2, rng);
    ASSERT_LT(max_gap(inv(r(x)), x), 1e-12);
  }
}

TEST(Compose, MatchesSequentialApplicationAndInverts) {
  const auto motions = sample_motions(5, 8);
  Rng rng = stream(4, 0);
  for (const auto& m2 : motions) {
    for (const auto& m1 : motions) {
      const Motion c = compose(m2, m1);
      for (int i = 0; i < 20; ++i) {
        const Vector x = gaussian_vector(5, rng);
        ASSERT_LT(max_gap(c(x), m2(m1(x))), 1e-12);
      }
    }
    const Motion round = compose(m2, inverse(m2));
    for (int i = 0; i < 1000; ++i) {
      const Vector x = gaussian_vector(5, rng);
      ASSERT_LT(max_gap(round(x), x), 1e-12);
      ASSERT_LT(max_gap(inverse(m2)(m2(x)), x), 1e-12);
    }
  }
}

TEST(Decompose, TranslationRotationAndBoth) {
  const Vector a{0.3, 0.4, -0.5};
  auto t = decompose(Motion::translation(a));
  EXPECT_TRUE(t.non_shift.factors().empty());
  EXPECT_EQ(t.shift.shift(), a);

  const Motion r = planar_rotation_between({1.0, 0.0, 0.0}, unit({1.0, 1.0, 1.0}));
  auto g = decompose(r);
  EXPECT_EQ(g.non_shift, r);
  EXPECT_TRUE(g.shift.shift().is_zero());

  const Motion m = compose(Motion::translation(a), r);
  auto d = decompose(m);
  EXPECT_EQ(d.non_shift.factors(), r.factors());
  EXPECT_EQ(d.shift.shift(), a);
  Rng rng = stream(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = gaussian_vector(3, rng);
    ASSERT_LT(max_gap(d.shift(d.non_shift(x)), m(x)), 1e-12);
  }
}

TEST(Decompose, ReconstructsEveryMotion) {
  for (const auto& m : sample_motions(4, 12)) {
    const auto d = decompose(m);
    EXPECT_TRUE(d.non_shift(Vector::zero(4)).is_zero());
    EXPECT_EQ(d.shift(Vector::zero(4)), m(Vector::zero(4)));
    Rng rng = stream(6, 0);
    for (int i = 0; i < 200; ++i) {
      const Vector x = gaussian_vector(4, rng);
      ASSERT_LT(max_gap(compose(d.shift, d.non_shift)(x), m(x)), 1e-12);
    }
  }
}

TEST(PlanarRotationBetween, EqualVectorsGiveIdentity) {
  const Vector e{0.6, 0.8};
  EXPECT_TRUE(planar_rotation_between(e, e).factors().empty());
}

TEST(PlanarRotationBetween, QuarterTurn) {
  const Motion r = planar_rotation_between({1.0, 0.0}, {0.0, 1.0});
  ASSERT_EQ(r.factors().size(), 1u);
  EXPECT_NEAR(std::get<PlanarRotation>(r.factors()[0]).alpha, pi / 2, 1e-15);
  EXPECT_LT(max_gap(r({1.0, 0.0}), {0.0, 1.0}), 1e-15);
}

TEST(PlanarRotationBetween, AntipodalUsesFirstUsableAxis) {
  const Vector e1{1.0, 0.0, 0.0};
  const Motion r = planar_rotation_between(e1, -e1);
  const auto& rot = std::get<PlanarRotation>(r.factors()[0]);
  EXPECT_EQ(rot.alpha, pi);
  EXPECT_EQ(rot.u, (Vector{0.0, 1.0, 0.0}));
  const Space s = Space::euclidean(3);
  EXPECT_LT(max_gap(r(e1), -e1), 1e-15);
  const auto report = motion_audit(r, s, 1000, 2);
  EXPECT_TRUE(report.passed()) << report.residual_max;

  // Second axis is used when e1 is the first axis' direction.
  const Vector tilted = unit({1.0, 1e-9, 0.0});
  const Motion r2 = planar_rotation_between(tilted, -tilted);
  const auto& rot2 = std::get<PlanarRotation>(r2.factors()[0]);
  EXPECT_EQ(rot2.u[2], 0.0);
  EXPECT_LT(std::abs(inner(rot2.u, tilted)), 1e-15);
}

TEST(PlanarRotationBetween, RandomPairsHitTargetAndFixComplement) {
  Rng rng = stream(7, 0);
  for (std::size_t d : {2u, 3u, 6u}) {
    for (int i = 0; i < 200; ++i) {
      const double r = uniform(rng, 0.1, 3.0);
      const Vector e1 = unit(gaussian_vector(d, rng)) * r;
      const Vector e2 = unit(gaussian_vector(d, rng)) * r;
      const Motion g = planar_rotation_between(e1, e2);
      ASSERT_LT(max_gap(g(e1), e2), 1e-9);
      ASSERT_TRUE(g(Vector::zero(d)).is_zero());
      // Vectors orthogonal to both e1 and e2 are fixed.
      Vector w = gaussian_vector(d, rng);
      const Vector a = unit(e1);
      Vector b = e2 - inner(e2, a) * a;
      w -= inner(w, a) * a;
      if (euclidean_norm(b) > 1e-6) {
        b = unit(b);
        w -= inner(w, b) * b;
      }
      ASSERT_LT(max_gap(g(w), w), 1e-12);
    }
  }
}

TEST(PlanarRotationBetween, Errors) {
  EXPECT_THROW(planar_rotation_between({1.0, 0.0}, {0.0, 2.0}), InvalidArgument);
  EXPECT_THROW(planar_rotation_between({0.0, 0.0}, {0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(planar_rotation_between({1.0, 0.0}, {1.0, 0.0, 0.0}), DimensionMismatch);
}

TEST(MotionAudit, IdentityHasZeroResiduals) {
  const auto rep = motion_audit(Motion::identity(3), Space::euclidean(3), 1000, 1);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.detail["isometry"].get<double>(), 0.0);
  // lambda*x + mu*y - lambda*x - mu*y only vanishes up to rounding.
  EXPECT_LE(rep.residual_max, 1e-15);
  EXPECT_EQ(rep.failures, 0u);
  EXPECT_TRUE(rep.witnesses.empty());
}

TEST(MotionAudit, EveryConstructedMotionPasses) {
  for (std::size_t d : {2u, 3u, 5u}) {
    for (const auto& m : sample_motions(d, 100 + d)) {
      const auto rep = motion_audit(m, Space::euclidean(d), 10000, 9);
      ASSERT_TRUE(rep.passed()) << rep.residual_max;
      ASSERT_LE(rep.residual_max, 1e-9);
      ASSERT_TRUE(rep.detail.contains("inner_product"));
    }
  }
  // Permutations and translations in non-Euclidean norms.
  for (const Space& s : {Space(4, NormKind::linf()), Space(4, NormKind::lp(1.5))}) {
    const Motion m = compose(Motion::translation({0.1, 0.2, 0.3, 0.4}),
                             Motion::linear(SignedPermutation({3, 1, 0, 2}, {-1, 1, 1, -1}), 4));
    const auto rep = motion_audit(m, s, 10000, 3);
    EXPECT_TRUE(rep.passed()) << rep.residual_max;
    EXPECT_FALSE(rep.detail.contains("inner_product"));
  }
}

TEST(MotionAudit, ScaledMapIsCaught) {
  const Motion r = planar_rotation_between({1.0, 0.0, 0.0}, unit({0.0, 1.0, 1.0}));
  const Motion bad(r.factors(), Vector{0.1, 0.0, 0.0}, 1.01);
  const auto rep = motion_audit(bad, Space::euclidean(3), 1000, 4);
  EXPECT_FALSE(rep.passed());
  EXPECT_GE(rep.detail["isometry"].get<double>(), 1e-3);
  EXPECT_EQ(rep.witnesses.size(), kMaxWitnesses);
  EXPECT_GT(rep.failures, 0u);
}

TEST(MotionAudit, DeterministicAcrossWorkers) {
  const Motion m = sample_motions(3, 5)[5];
  const auto a = motion_audit(m, Space::euclidean(3), 5000, 77, 1);
  const auto b = motion_audit(m, Space::euclidean(3), 5000, 77, 4);
  EXPECT_EQ(a.residual_max, b.residual_max);
  EXPECT_EQ(a.detail, b.detail);
}

TEST(MotionAudit, BallImageLandsInMovedBall) {
  const Space s = Space::euclidean(3);
  for (const auto& m : sample_motions(3, 31)) {
    const Vector c{0.2, -0.1, 0.4};
    const double r = 0.7;
    for (const auto& x : sample_ball(s, c, r, 2000, 5))
      ASSERT_LE(distance(s, m(x), m(c)), r + 1e-9);
  }
}

TEST(TrivialShift, RotationSatisfiesPremiseWithZeroShift) {
  const Space s = Space::euclidean(3);
  const Motion r = planar_rotation_between({1.0, 0.0, 0.0}, unit({1.0, 2.0, 2.0}));
  EXPECT_TRUE(trivial_shift_premise(s, r, {0.3, -0.4, 0.5}));
  EXPECT_TRUE(decompose(r).shift.shift().is_zero());
}

TEST(TrivialShift, TranslationFailsAtOrigin) {
  const Space s = Space::euclidean(2);
  EXPECT_FALSE(trivial_shift_premise(s, Motion::translation({0.0, 0.1}), Vector::zero(2)));
}

TEST(TrivialShift, SmallShiftNeverPassesPremise) {
  const Space s = Space::euclidean(3);
  const Motion r = planar_rotation_between({1.0, 0.0, 0.0}, unit({0.0, 1.0, 1.0}));
  const Motion m = compose(Motion::translation({1e-3, 0.0, 0.0}), r);
  std::size_t premise_true = 0;
  for (const auto& x : sample_ball(s, Vector::zero(3), 1.0, 1000, 6)) {
    Vector on_sphere = x / euclidean_norm(x);
    if (trivial_shift_premise(s, m, on_sphere)) {
      ++premise_true;
      EXPECT_GT(euclidean_norm(decompose(m).shift.shift()), 1e-9);  // shift flagged
    }
  }
  EXPECT_EQ(premise_true, 0u);
}

TEST(TrivialShift, PremiseForcesZeroShiftInStrictlyConvexSpaces) {
  // Shifts are either exactly zero or at least 1e-2 so the premise is decisive.
  for (double p : {1.5, 2.0, 3.0}) {
    const Space s(3, NormKind::lp(p));
    Rng rng = stream(40, 0);
    for (int i = 0; i < 300; ++i) {
      Vector a = Vector::zero(3);
      if (i % 2) a = unit(gaussian_vector(3, rng)) * uniform(rng, 1e-2, 1.0);
      std::vector<std::size_t> perm{0, 1, 2};
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> signs{1, -1, 1};
      const Motion m({SignedPermutation(perm, signs)}, a);
      const Vector x = sphere_point(s, Vector::zero(3), uniform(rng, 0.1, 1.0), rng);
      if (trivial_shift_premise(s, m, x)) {
        ASSERT_LE(norm(s, decompose(m).shift.shift()), 1e-9);
      }
    }
  }
}
