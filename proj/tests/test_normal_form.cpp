#include <gtest/gtest.h>

#include <cmath>

#include "crosscap/error.hpp"
#include "crosscap/normal_form.hpp"
#include "support/examples.hpp"
#include "support/generators.hpp"

namespace crosscap {
namespace {

using fixtures::coefficient_distance;
using fixtures::example_jet;
using fixtures::reduce_jet;

Jet2 expected_a(double c, int order) { return c * Jet2::monomial(order, 2, 0) + Jet2::monomial(order, 0, 2); }

Jet1 expected_b(int family, int order) {
  Jet1 b(order);
  if (family == 1) b[3] = 1.0;
  if (family == 2) b[4] = 1.0;
  return b;
}

void expect_right_handed(const CrossCapFrame& f) {
  const Eigen::Matrix3d m = f.to_frame();
  EXPECT_LE((m * m.transpose() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
}

TEST(BuildFrame, StandardCrossCap) {
  const CrossCapFrame f = build_frame(certify_jet(example_jet(3, 0.0)));
  EXPECT_EQ(f.e1, Eigen::Vector3d(1, 0, 0));
  EXPECT_EQ(f.e2, Eigen::Vector3d(0, 1, 0));
  EXPECT_EQ(f.e3, Eigen::Vector3d(0, 0, 1));
  EXPECT_EQ(f.normal_line().direction, f.e3);
  EXPECT_EQ(f.principal_plane().normal, f.e2);
  EXPECT_EQ(f.normal_plane().normal, f.e1);
}

TEST(BuildFrame, HalfTurnInSourceLeavesFrame) {
  const MapJet3 flipped = compose(example_jet(3, 0.0), linear_plane_jet(6, -Eigen::Matrix2d::Identity()));
  const CrossCapFrame f = build_frame(certify_jet(flipped));
  EXPECT_LE((f.e1 - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
  EXPECT_LE((f.e2 - Eigen::Vector3d(0, 1, 0)).norm(), 1e-15);
  EXPECT_LE((f.e3 - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
}

TEST(BuildFrame, FollowsTargetRotation) {
  gen::Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Matrix3d r = gen::rotation(rng);
    const Eigen::Vector3d shift = gen::translation(rng);
    const CrossCapFrame f = build_frame(certify_jet(apply_motion(r, shift, example_jet(1, 1.0))));
    EXPECT_LE((f.e1 - r.col(0)).norm(), 1e-12);
    EXPECT_LE((f.e2 - r.col(1)).norm(), 1e-12);
    EXPECT_LE((f.e3 - r.col(2)).norm(), 1e-12);
    EXPECT_LE((f.origin - shift).norm(), 1e-15);
    expect_right_handed(f);
  }
}

TEST(ReduceToNormalForm, ExampleFamilies) {
  for (int family = 1; family <= 3; ++family) {
    for (double c : fixtures::kParameterValues) {
      const NormalForm nf = reduce_jet(example_jet(family, c));
      EXPECT_LE(max_abs_difference(nf.a, expected_a(c, 6)), 1e-10) << family << " c=" << c;
      EXPECT_LE(max_abs_difference(nf.b, expected_b(family, 6)), 1e-10) << family << " c=" << c;
      EXPECT_LE(max_abs_difference(nf.source_change, identity_plane_jet(6)), 1e-12);
      EXPECT_LE(nf.reconstruction_residual, 1e-12);
    }
  }
}

TEST(ReduceToNormalForm, RejectsOrders) {
  const CrossCapCertificate cert = certify_jet(example_jet(1, 1.0, 6));
  EXPECT_THROW(reduce_to_normal_form(cert, 2), ContractViolation);
  EXPECT_THROW(reduce_to_normal_form(cert, 7), ContractViolation);
  EXPECT_NO_THROW(reduce_to_normal_form(cert, 3));
}

TEST(ReduceToNormalForm, LowerOrderIsTruncation) {
  const MapJet3 jet = apply_motion(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(),
                                   compose(example_jet(2, 0.5, 8), PlaneJet{Jet2::variable_u(8) + Jet2::monomial(8, 0, 2),
                                                                             Jet2::variable_v(8) + Jet2::monomial(8, 1, 1, 0.3)}));
  const NormalForm hi = reduce_jet(jet, 8);
  for (int n = 3; n < 8; ++n) {
    const NormalForm lo = reduce_jet(jet, n);
    EXPECT_LE(max_abs_difference(lo.a, truncate(hi.a, n)), 1e-12);
    Jet1 b(n);
    for (int k = 0; k <= n; ++k) b[k] = hi.b[k];
    EXPECT_LE(max_abs_difference(lo.b, b), 1e-12);
  }
}

// Uniqueness: positive congruences leave the characteristic coefficients unchanged.
TEST(ReduceToNormalForm, RigidUnderPositiveCongruence) {
  gen::Rng rng(42);
  for (int family = 1; family <= 3; ++family) {
    const MapJet3 base = example_jet(family, 1.5);
    const NormalForm ref = reduce_jet(base);
    for (int t = 0; t < 20; ++t) {
      const MapJet3 moved = apply_motion(gen::rotation(rng), gen::translation(rng), compose(base, gen::diffeo(rng, 6)));
      const NormalForm nf = reduce_jet(moved);
      EXPECT_LE(coefficient_distance(nf, ref), 1e-7);
      EXPECT_LE(nf.reconstruction_residual, 1e-9);
    }
  }
}

TEST(ReduceToNormalForm, StructuralInvariantsOnRandomCrossCaps) {
  gen::Rng rng(43);
  for (int t = 0; t < 50; ++t) {
    const MapJet3 model = gen::normal_form_jet(rng, 6);
    const MapJet3 moved = apply_motion(gen::rotation(rng), gen::translation(rng), compose(model, gen::diffeo(rng, 6)));
    const NormalForm nf = reduce_jet(moved);
    EXPECT_EQ(nf.a(0, 0), 0.0);
    EXPECT_EQ(nf.a(1, 0), 0.0);
    EXPECT_EQ(nf.a(0, 1), 0.0);
    EXPECT_GT(nf.a(0, 2), 0.0);
    EXPECT_EQ(nf.b[0], 0.0);
    EXPECT_EQ(nf.b[1], 0.0);
    EXPECT_EQ(nf.b[2], 0.0);
    EXPECT_GT(nf.source_change.linear_part().determinant(), 0.0);
    EXPECT_LE(nf.reconstruction_residual, 1e-9);
    expect_right_handed(nf.frame);
    const NormalForm direct = reduce_jet(model);
    EXPECT_LE(coefficient_distance(nf, direct), 1e-7);
  }
}

TEST(CharacteristicInvariants, Tables) {
  const auto table = characteristic_invariants(reduce_jet(example_jet(1, 2.0)));
  ASSERT_EQ(table.size(), 28u + 4u);
  for (const auto& e : table) {
    double want = 0.0;
    if (e.label == "a(2,0)") want = 2.0;
    if (e.label == "a(0,2)") want = 1.0;
    if (e.label == "b(3)") want = 1.0;
    EXPECT_NEAR(e.value, want, 1e-12) << e.label;
  }
  for (const auto& e : characteristic_invariants(reduce_jet(example_jet(2, -1.0)))) {
    double want = 0.0;
    if (e.label == "a(2,0)") want = -1.0;
    if (e.label == "a(0,2)") want = 1.0;
    if (e.label == "b(4)") want = 1.0;
    EXPECT_NEAR(e.value, want, 1e-12) << e.label;
  }
}

TEST(TransportNormalForm, ExampleOne) {
  const NormalForm nf = reduce_jet(example_jet(1, 1.0));
  EXPECT_LE(coefficient_distance(transport_normal_form(nf, {MotionTag::T0}), nf), 0.0);
  EXPECT_LE(coefficient_distance(transport_normal_form(nf, {MotionTag::T1}), nf), 1e-12);
  const NormalForm t3 = transport_normal_form(nf, {MotionTag::T3});
  EXPECT_NEAR(t3.b[3], -1.0, 1e-12);
}

TEST(TransportNormalForm, InvolutionsSquareToIdentity) {
  gen::Rng rng(44);
  for (int t = 0; t < 20; ++t) {
    const NormalForm nf = reduce_jet(gen::normal_form_jet(rng, 6));
    for (MotionTag tag : {MotionTag::T1, MotionTag::T2, MotionTag::T3}) {
      const NormalForm twice = transport_normal_form(transport_normal_form(nf, {tag}), {tag});
      EXPECT_EQ(twice.a, nf.a);
      EXPECT_EQ(twice.b, nf.b);
    }
  }
}

// T_j o f o phi_j, built by jet composition, reduces to the transported normal form.
TEST(TransportNormalForm, MatchesExplicitTransformation) {
  gen::Rng rng(45);
  for (int family = 1; family <= 3; ++family) {
    for (double c : fixtures::kParameterValues) {
      const MapJet3 f = example_jet(family, c);
      const NormalForm nf = reduce_jet(f);
      for (MotionTag tag : {MotionTag::T0, MotionTag::T1, MotionTag::T2, MotionTag::T3}) {
        const CongruenceMotion m{tag};
        const MapJet3 g = apply_motion(m.matrix(), Eigen::Vector3d::Zero(), compose(f, linear_plane_jet(6, m.source_signs())));
        EXPECT_LE(coefficient_distance(reduce_jet(g), transport_normal_form(nf, m)), 1e-8) << to_string(tag);
      }
    }
  }
  // Same check on random normal-form models.
  for (int t = 0; t < 20; ++t) {
    const MapJet3 f = gen::normal_form_jet(rng, 6);
    const NormalForm nf = reduce_jet(f);
    for (MotionTag tag : {MotionTag::T1, MotionTag::T2, MotionTag::T3}) {
      const CongruenceMotion m{tag};
      const MapJet3 g = apply_motion(m.matrix(), Eigen::Vector3d::Zero(), compose(f, linear_plane_jet(6, m.source_signs())));
      EXPECT_LE(coefficient_distance(reduce_jet(g), transport_normal_form(nf, m)), 1e-8);
    }
  }
}

TEST(CongruenceMotion, Matrices) {
  EXPECT_EQ(CongruenceMotion{MotionTag::T1}.matrix(), Eigen::Vector3d(1, -1, 1).asDiagonal().toDenseMatrix());
  EXPECT_EQ(CongruenceMotion{MotionTag::T2}.matrix(), Eigen::Vector3d(-1, 1, 1).asDiagonal().toDenseMatrix());
  EXPECT_EQ(CongruenceMotion{MotionTag::T3}.matrix(), Eigen::Vector3d(-1, -1, 1).asDiagonal().toDenseMatrix());
  EXPECT_EQ(motion_from_string("T2"), MotionTag::T2);
  EXPECT_THROW(motion_from_string("T4"), ContractViolation);
}

}  // namespace
}  // namespace crosscap
