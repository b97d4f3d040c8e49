#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "crosscap/error.hpp"
#include "crosscap/singular.hpp"
#include "support/generators.hpp"

namespace crosscap {
namespace {

const double kPi = std::numbers::pi;

MapDefinition f0() { return MapDefinition::parse({"u", "u*v", "v^2"}); }

// f0 evaluated at (cos a * u - sin a * v, sin a * u + cos a * v) + shift.
MapDefinition rotated_f0(double angle, double su = 0.0, double sv = 0.0) {
  char u[160], v[160];
  std::snprintf(u, sizeof u, "(%.17g*u - %.17g*v + %.17g)", std::cos(angle), std::sin(angle), su);
  std::snprintf(v, sizeof v, "(%.17g*u + %.17g*v + %.17g)", std::sin(angle), std::cos(angle), sv);
  const std::string U = u, V = v;
  return MapDefinition::parse({U, U + "*" + V, V + "^2"});
}

TEST(FindSingularPoints, StandardCrossCapAtOrigin) {
  const auto found = find_singular_points(f0(), {}, 20);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_LE(found[0].point.norm(), 1e-10);
  EXPECT_LE(found[0].residual, 1e-10);
  EXPECT_NEAR(found[0].kernel_angle, kPi / 2, 1e-12);
}

TEST(FindSingularPoints, ImmersionHasNone) {
  EXPECT_TRUE(find_singular_points(MapDefinition::parse({"u", "v", "u^2 + v^2"}), {}, 20).empty());
}

TEST(FindSingularPoints, TranslatedCrossCap) {
  const auto found = find_singular_points(MapDefinition::parse({"u - 0.3", "(u - 0.3)*(v + 0.1)", "(v + 0.1)^2"}), {}, 20);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_LE((found[0].point - Eigen::Vector2d(0.3, -0.1)).norm(), 1e-9);
}

TEST(FindSingularPoints, SourceRotationMovesCandidates) {
  gen::Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const double a = gen::uniform(rng, -kPi, kPi);
    const Eigen::Vector2d c(gen::uniform(rng, -0.4, 0.4), gen::uniform(rng, -0.4, 0.4));
    // Singular where R q + c = 0.
    const auto found = find_singular_points(rotated_f0(a, c.x(), c.y()), {}, 20);
    ASSERT_EQ(found.size(), 1u);
    const Eigen::Matrix2d r = Eigen::Rotation2Dd(a).toRotationMatrix();
    EXPECT_LE((found[0].point - r.transpose() * (-c)).norm(), 1e-6);
  }
}

TEST(FindSingularPoints, RejectsBadArguments) {
  EXPECT_THROW(find_singular_points(f0(), {}, 1), ContractViolation);
  EXPECT_THROW(find_singular_points(f0(), {1, 1, -1, 1}, 10), ContractViolation);
}

TEST(AlignKernel, StandardCrossCap) {
  const CrossCapCertificate c = align_kernel(f0(), {0, 0}, 6);
  EXPECT_NEAR(c.whitney_det, 2.0, 1e-12);
  EXPECT_LE((c.kernel_rotation - Eigen::Matrix2d::Identity()).norm(), 1e-15);
  EXPECT_EQ(c.aligned_jet.f_v(), Eigen::Vector3d::Zero());
}

TEST(AlignKernel, RotatedSourceReportsRotation) {
  const double a = kPi / 6;
  const CrossCapCertificate c = align_kernel(rotated_f0(a), {0, 0}, 6);
  EXPECT_NEAR(c.rotation_angle, -a, 1e-12);
  EXPECT_NEAR(c.kernel_angle, kPi / 2 - a, 1e-12);
  EXPECT_NEAR(std::abs(c.whitney_det), 2.0, 1e-12);
  EXPECT_LE(c.aligned_jet.f_v().norm(), 1e-12);
}

TEST(AlignKernel, WhitneyFailureForNonCrossCap) {
  try {
    align_kernel(MapDefinition::parse({"u", "v^2", "v^3"}), {0, 0}, 6);
    FAIL() << "expected WhitneyFail";
  } catch (const WhitneyFail& e) {
    EXPECT_EQ(error_code_name(e.code()), "E_WHITNEY");
  }
}

TEST(AlignKernel, RankZeroAndRegularPoints) {
  EXPECT_THROW(align_kernel(MapDefinition::parse({"u^2", "v^2", "u*v"}), {0, 0}, 4), RankZero);
  EXPECT_THROW(align_kernel(f0(), {0.5, 0.5}, 4), NotSingular);
}

TEST(AlignKernel, WhitneySignUnderTargetMotions) {
  gen::Rng rng(32);
  const MapJet3 base = eval_map_jet(f0(), {0, 0}, 6);
  for (int t = 0; t < 30; ++t) {
    const CrossCapCertificate c = certify_jet(apply_motion(gen::rotation(rng), gen::translation(rng), base));
    EXPECT_NEAR(c.whitney_det, 2.0, 1e-12);
  }
}

// The triple product flips under (u, v) -> (-u, -v), so its sign follows the kernel
// orientation convention (angle in [0, pi)) rather than being a congruence invariant.
TEST(AlignKernel, WhitneySignFollowsKernelConvention) {
  gen::Rng rng(33);
  const MapJet3 base = eval_map_jet(f0(), {0, 0}, 6);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Matrix2d r = Eigen::Rotation2Dd(gen::uniform(rng, -kPi, kPi)).toRotationMatrix();
    const CrossCapCertificate c = certify_jet(compose(base, linear_plane_jet(6, r)));
    const Eigen::Vector2d original_kernel = r.transpose() * Eigen::Vector2d(0, 1);
    const Eigen::Vector2d chosen(std::cos(c.kernel_angle), std::sin(c.kernel_angle));
    EXPECT_NEAR(c.whitney_det, 2.0 * (chosen.dot(original_kernel) > 0 ? 1 : -1), 1e-12);
    EXPECT_LE(c.aligned_jet.f_v().norm(), 1e-12);
  }
}

TEST(KernelDirection, AngleInHalfOpenRange) {
  Eigen::Matrix<double, 3, 2> j;
  j << 1, -1, 2, -2, 0, 0;  // kernel along (1, 1)
  const Eigen::Vector2d k = kernel_direction(j);
  EXPECT_NEAR(std::atan2(k.y(), k.x()), kPi / 4, 1e-14);
  j << 1, 1, 2, 2, 0, 0;  // kernel along (1, -1), reported as (-1, 1)
  const Eigen::Vector2d k2 = kernel_direction(j);
  EXPECT_NEAR(std::atan2(k2.y(), k2.x()), 3 * kPi / 4, 1e-14);
}

}  // namespace
}  // namespace crosscap
