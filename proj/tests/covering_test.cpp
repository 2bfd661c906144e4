#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ballcover/covering.hpp"
#include "ballcover/verify.hpp"

using namespace ballcover;

namespace {

constexpr double pi = std::numbers::pi;

// Largest gap between consecutive polar angles, wrapping around.
double largest_arc_gap(std::vector<double> t) {
  std::sort(t.begin(), t.end());
  double gap = t.front() + 2 * pi - t.back();
  for (std::size_t i = 1; i < t.size(); ++i) gap = std::max(gap, t[i] - t[i - 1]);
  return gap;
}

}  // namespace

TEST(Slab, Structure) {
  for (int n : {3, 5, 7}) {
    const Covering cov = slab_covering(n, n);
    EXPECT_EQ(cov.sets.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(cov.witnesses.size(), cov.sets.size());
    EXPECT_TRUE(cov.space.norm.is_linf());
    EXPECT_EQ(cov.label_base(), 1);
    for (int i = 0; i < n; ++i) {
      const auto& s = *cov.sets[i].get_if<SlabCap>();
      EXPECT_NEAR(s.hi - s.lo, 2.0 / n, 1e-15);
      EXPECT_EQ(cov.witnesses[i](Vector::zero(n))[0], 2.0 * i / n);
    }
  }
  EXPECT_THROW(slab_covering(4, 4), InvalidArgument);
  EXPECT_THROW(slab_covering(1, 4), InvalidArgument);
  EXPECT_THROW(slab_covering(5, 3), InvalidArgument);
}

TEST(Slab, DistanceFromCentreToOuterSlabs) {
  // Non-middle slabs keep x_1 outside (-1/n, 1/n); for n = 3 that is 1/3.
  const Covering cov = slab_covering(3, 3);
  const Vector origin = Vector::zero(3);
  EXPECT_TRUE(contains(cov.space, cov.sets[1], origin));
  for (std::size_t i : {0u, 2u}) {
    EXPECT_FALSE(contains(cov.space, cov.sets[i], origin));
    EXPECT_NEAR(signed_defect(cov.space, cov.sets[i], origin), 1.0 / 3, 1e-15);
  }
}

TEST(Slab, IndexAgreesWithMembership) {
  for (int n : {3, 5, 7}) {
    const Covering cov = slab_covering(n, n);
    for (const auto& x : sample_ball(cov.space, Vector::zero(n), 1.0, 5000, n)) {
      const std::size_t k = slab_index(n, x[0]);
      ASSERT_TRUE(contains(cov.space, cov.sets[k], x, 0.0));
      for (std::size_t j = 0; j < cov.sets.size(); ++j)
        if (j + 1 < k || j > k + 1) {
          ASSERT_FALSE(contains(cov.space, cov.sets[j], x));
        }
    }
    EXPECT_EQ(slab_index(n, -1.0), 0u);
    EXPECT_EQ(slab_index(n, 1.0), static_cast<std::size_t>(n - 1));
    EXPECT_EQ(slab_index(n, 0.0), static_cast<std::size_t>(n / 2));
  }
}

TEST(Universal, WitnessExamples) {
  const Space s = Space::euclidean(3);
  const Vector u{0.0, 0.6, 0.8};
  EXPECT_NEAR(distance(s, u, universal_witness(s, u)), 0.5, 1e-15);
  EXPECT_EQ(universal_witness(s, 0.5 * u), 0.5 * u);
  EXPECT_NEAR(distance(s, 0.25 * u, universal_witness(s, 0.25 * u)), 0.25, 1e-15);
  EXPECT_THROW(universal_witness(s, Vector::zero(3)), InvalidArgument);
}

TEST(Universal, Covering) {
  const Space s(3, NormKind::lp(1.5));
  EXPECT_THROW(universal_covering(s, 0, 1), InvalidArgument);
  const Covering one = universal_covering(s, 1, 1);
  ASSERT_EQ(one.sets.size(), 2u);
  EXPECT_TRUE(one.witness_mode());
  const auto cls = classify_center(one);
  EXPECT_EQ(cls.interior, std::vector<std::size_t>{0});
  EXPECT_TRUE(cls.statuses[1].is_not_interior());

  const Covering many = universal_covering(s, 64, 2);
  for (std::size_t i = 1; i < many.sets.size(); ++i)
    EXPECT_NEAR(norm(s, many.sets[i].get_if<ClosedBall>()->center), 0.5, 1e-15);
  EXPECT_TRUE(check_congruence(many, 200, 3).passed());
}

TEST(DirectionNet, PlanarQuarterTurn) {
  // On a circle, n directions leave arcs of at least 2 pi / n, so beta = pi/4
  // needs 4; the greedy choice on probes needs at most 8.
  const DirectionNet net = direction_net(2, pi / 4, 0);
  EXPECT_LE(net.dirs.size(), 8u);
  EXPECT_GE(net.dirs.size(), 4u);
  std::vector<double> t;
  for (const auto& d : net.dirs) t.push_back(std::atan2(d[1], d[0]));
  EXPECT_LE(largest_arc_gap(t) / 2, pi / 4);
  EXPECT_LE(net.certificate, pi / 4);
}

TEST(DirectionNet, HalfTurnIsASingleDirection) {
  const DirectionNet net = direction_net(2, pi, 0);
  ASSERT_EQ(net.dirs.size(), 1u);
  EXPECT_EQ(net.dirs[0], Vector::basis(2, 0));
}

TEST(DirectionNet, FourDimensionalCertificate) {
  const DirectionNet net = direction_net(4, pi / 4, 0);
  const auto probes = sample_ball(Space::euclidean(4), Vector::zero(4), 1.0, 4096, 1234);
  double worst = 0.0;
  for (const auto& p : probes) {
    double best = pi;
    for (const auto& d : net.dirs) best = std::min(best, angle(p, d));
    worst = std::max(worst, best);
  }
  EXPECT_LE(net.certificate, pi / 4);
  EXPECT_LE(worst, pi / 4);
  for (const auto& d : net.dirs) EXPECT_NEAR(euclidean_norm(d), 1.0, 1e-12);
}

TEST(DirectionNet, MonotoneInBeta) {
  std::size_t last = 0;
  for (double b : {pi, pi / 2, pi / 3, pi / 4, pi / 5}) {
    const std::size_t size = direction_net(3, b, 7).dirs.size();
    EXPECT_GE(size, last) << b;
    last = size;
  }
  EXPECT_THROW(direction_net(1, 0.5, 0), InvalidArgument);
  EXPECT_THROW(direction_net(3, 0.0, 0), InvalidArgument);
  EXPECT_THROW(direction_net(8, 0.05, 0), InvalidArgument);
}

TEST(Ommatidium, CoveringStructure) {
  const Covering cov = ommatidium_covering(2, pi / 4, 0);
  const auto& a0 = *cov.sets[0].get_if<Ommatidium>();
  EXPECT_NEAR(a0.radius(), 1.0, 1e-15);
  EXPECT_EQ(a0.origin, -1.0 * a0.end);
  for (std::size_t i = 1; i < cov.sets.size(); ++i) {
    const auto& o = *cov.sets[i].get_if<Ommatidium>();
    EXPECT_TRUE(o.origin.is_zero());
    EXPECT_NEAR(o.radius(), 1.0, 1e-12);
    EXPECT_EQ(o.angle, pi / 4);
  }
  EXPECT_THROW(ommatidium_covering(2, pi / 3, 0), InvalidArgument);
}

TEST(Ommatidium, CentreInteriorToTheShiftedSectorOnly) {
  for (std::size_t dim : {2u, 3u}) {
    const auto cls = classify_center(ommatidium_covering(dim, pi / 4, 0));
    EXPECT_EQ(cls.kind, CenterClassification::Kind::mixed);
    EXPECT_EQ(cls.interior, std::vector<std::size_t>{0});
    EXPECT_TRUE(cls.boundary.empty());
  }
}

TEST(Ommatidium, SetsAreConvexAndInsideTheBall) {
  const Covering cov = ommatidium_covering(3, pi / 4, 0);
  EXPECT_TRUE(check_containment(cov, 2000, 1).passed());
  for (std::size_t i = 0; i < cov.sets.size(); i += 3)
    EXPECT_TRUE(check_convexity(cov.space, cov.sets[i], 2000, i).passed()) << i;
}

TEST(Ommatidium, WitnessesTransportMembers) {
  const Covering cov = ommatidium_covering(3, pi / 4, 0);
  const auto rep = check_congruence(cov, 300, 4);
  EXPECT_TRUE(rep.passed()) << rep.residual_max;
  EXPECT_LE(rep.residual_max, 1e-9);
}

TEST(Ommatidium, CoversTheDisk) {
  const Covering cov = ommatidium_covering(2, pi / 4, 0);
  const auto rep = check_coverage(cov, 20000, 5);
  EXPECT_EQ(rep.failures, 0u);
}

TEST(HalfBall, Covering) {
  const Covering cov = halfball_covering(3);
  EXPECT_EQ(cov.sets.size(), 2u);
  EXPECT_TRUE(check_coverage(cov, 20000, 1).passed());
  EXPECT_TRUE(check_congruence(cov, 1000, 1).passed());
  const auto cls = classify_center(cov);
  EXPECT_EQ(cls.kind, CenterClassification::Kind::in_no_interior);
  EXPECT_THROW(halfball_covering(1), InvalidArgument);
}

TEST(DuplicateExtend, Slab) {
  const Covering cov = slab_covering(3, 3);
  const Covering ext = duplicate_extend(cov, 6);
  ASSERT_EQ(ext.sets.size(), 6u);
  for (std::size_t i = 3; i < 6; ++i) EXPECT_EQ(ext.sets[i], cov.sets[2]);
  EXPECT_EQ(classify_center(ext).interior, classify_center(cov).interior);
  EXPECT_EQ(check_coverage(ext, 5000, 9).failures, check_coverage(cov, 5000, 9).failures);
  EXPECT_TRUE(check_congruence(ext, 200, 9).passed());
  EXPECT_THROW(duplicate_extend(cov, 2), InvalidArgument);
  EXPECT_EQ(duplicate_extend(cov, 3).sets, cov.sets);
}

TEST(CoveringType, Validation) {
  const Space s = Space::euclidean(2);
  EXPECT_THROW(Covering(s, {}, {}), InvalidArgument);
  EXPECT_THROW(Covering(s, {Shape::closed_ball(Vector::zero(3), 1.0)}, {}), DimensionMismatch);
  EXPECT_THROW(Covering(s, {Shape::closed_ball(Vector::zero(2), 1.0)},
                        {Motion::identity(2), Motion::identity(2)}),
               InvalidArgument);
}
