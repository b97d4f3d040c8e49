#include <gtest/gtest.h>

#include <set>

#include "crosscap/error.hpp"
#include "crosscap/symmetry.hpp"
#include "support/examples.hpp"
#include "support/generators.hpp"

namespace crosscap {
namespace {

using fixtures::example_jet;
using fixtures::reduce_jet;

// Random diffeos with det > 0.1 can have inverse jets with coefficients near 1e9, which puts
// reduction noise at the 1e-8 symmetry tolerance; these stay well conditioned.
PlaneJet mild_diffeo(gen::Rng& rng) { return gen::near_identity_diffeo(rng, 6, 0.25); }

std::set<MotionTag> holding(const SymmetryReport& r) {
  std::set<MotionTag> out;
  for (const auto& v : r.verdicts)
    if (v.holds) out.insert(v.motion);
  return out;
}

TEST(ClassifySymmetries, ExampleFamilies) {
  const std::set<MotionTag> expected[] = {
      {MotionTag::T1}, {MotionTag::T2}, {MotionTag::T1, MotionTag::T2, MotionTag::T3}};
  for (int family = 1; family <= 3; ++family) {
    for (double c : fixtures::kParameterValues) {
      const SymmetryReport r = classify_symmetries(reduce_jet(example_jet(family, c)));
      EXPECT_EQ(holding(r), expected[family - 1]) << "family " << family << " c=" << c;
      EXPECT_EQ(r.order, 6);
      EXPECT_EQ(r.tolerance, kDefaultSymmetryTolerance);
    }
  }
}

TEST(ClassifySymmetries, ResidualsOfExampleOne) {
  const SymmetryReport r = classify_symmetries(reduce_jet(example_jet(1, 0.5)));
  EXPECT_LE(r.verdict(MotionTag::T1).residual, 1e-12);
  EXPECT_NEAR(r.verdict(MotionTag::T2).residual, 1.0, 1e-12);
  EXPECT_NEAR(r.verdict(MotionTag::T3).residual, 1.0, 1e-12);
  EXPECT_EQ(r.verdict(MotionTag::T3).condition, "a(-u,v) = a(u,v) and b(v) = 0");
  EXPECT_THROW(r.verdict(MotionTag::T0), ContractViolation);
}

TEST(ClassifySymmetries, RejectsNonPositiveTolerance) {
  EXPECT_THROW(classify_symmetries(reduce_jet(example_jet(1, 0.5)), 0.0), ContractViolation);
}

// Random normal-form models, with parity constraints imposed for a random subset of motions.
NormalForm random_symmetric(gen::Rng& rng) {
  MapJet3 model = gen::normal_form_jet(rng, 6);
  Jet2 a = model[2];
  Jet1 b = restrict_to_v_axis(model[1]);
  const int pick = std::uniform_int_distribution<int>(0, 4)(rng);
  if (pick >= 1 && pick <= 3) {
    const CongruenceMotion m{static_cast<MotionTag>(pick)};
    const Jet2 a2 = scale_variables(a, m.source_signs()(0, 0), m.source_signs()(1, 1));
    const Jet1 b2 = m.eps2() * scale_variable(b, m.source_signs()(1, 1));
    a = 0.5 * (a + a2);
    b = 0.5 * (b + b2);
  }
  if (pick == 4) b = Jet1(6);
  return reduce_jet(apply_motion(gen::rotation(rng), gen::translation(rng),
                                 compose(normal_form_map(a, b), gen::diffeo(rng, 6))));
}

TEST(ClassifySymmetries, AgreesWithTransportFixedPoints) {
  gen::Rng rng(51);
  int symmetric = 0;
  for (int t = 0; t < 50; ++t) {
    const NormalForm nf = random_symmetric(rng);
    const SymmetryReport r = classify_symmetries(nf);
    for (const auto& v : r.verdicts) {
      const double defect = transport_defect(nf, {v.motion});
      EXPECT_EQ(v.holds, defect <= r.tolerance);
      EXPECT_NEAR(defect, v.residual, 1e-15);
      symmetric += v.holds;
    }
  }
  EXPECT_GT(symmetric, 10);
}

TEST(ClassifySymmetries, GroupClosure) {
  gen::Rng rng(52);
  for (int t = 0; t < 50; ++t) {
    const SymmetryReport r = classify_symmetries(random_symmetric(rng));
    if (r.verdict(MotionTag::T1).holds && r.verdict(MotionTag::T2).holds) EXPECT_TRUE(r.verdict(MotionTag::T3).holds);
  }
}

TEST(ClassifySymmetries, InvariantUnderPositiveCongruence) {
  gen::Rng rng(53);
  for (int family = 1; family <= 3; ++family) {
    const MapJet3 f = example_jet(family, 1.0);
    const auto want = holding(classify_symmetries(reduce_jet(f)));
    for (int t = 0; t < 10; ++t) {
      const MapJet3 g = apply_motion(gen::rotation(rng), gen::translation(rng), compose(f, mild_diffeo(rng)));
      EXPECT_EQ(holding(classify_symmetries(reduce_jet(g))), want);
    }
  }
}

TEST(SymmetryWitness, Involutions) {
  const NormalForm ex3 = reduce_jet(example_jet(3, 1.0));
  const SymmetryWitness w2 = symmetry_witness(ex3, MotionTag::T2);
  EXPECT_EQ(w2.description, "(-u,-v)");
  EXPECT_TRUE(w2.orientation_preserving);
  EXPECT_GT(w2.involution.linear_part().determinant(), 0.0);

  const NormalForm ex1 = reduce_jet(example_jet(1, 1.0));
  const SymmetryWitness w1 = symmetry_witness(ex1, MotionTag::T1);
  EXPECT_EQ(w1.description, "(u,-v)");
  EXPECT_FALSE(w1.orientation_preserving);
  EXPECT_LT(w1.involution.linear_part().determinant(), 0.0);
  EXPECT_THROW(symmetry_witness(ex1, MotionTag::T3), SymmetryAbsent);
  EXPECT_THROW(symmetry_witness(ex1, MotionTag::T0), ContractViolation);
}

TEST(SymmetryWitness, ConjugatedInvolutionSquaresToIdentity) {
  gen::Rng rng(54);
  const MapJet3 f = example_jet(3, 0.7);
  for (int t = 0; t < 10; ++t) {
    const NormalForm nf = reduce_jet(apply_motion(gen::rotation(rng), gen::translation(rng), compose(f, mild_diffeo(rng))));
    for (MotionTag tag : {MotionTag::T1, MotionTag::T2, MotionTag::T3}) {
      const SymmetryWitness w = symmetry_witness(nf, tag);
      EXPECT_EQ(compose(w.involution, w.involution).u, Jet2::variable_u(6));
      EXPECT_LE(max_abs_difference(compose(w.conjugated, w.conjugated), identity_plane_jet(6)), 1e-9);
      EXPECT_EQ(w.conjugated.linear_part().determinant() > 0, tag == MotionTag::T2);
      EXPECT_LE((w.world_matrix * w.world_matrix - Eigen::Matrix3d::Identity()).norm(), 1e-12);
    }
  }
}

// The witness is an actual symmetry of the germ: world_matrix o (f - f(p)) = (f - f(p)) o conjugated.
TEST(SymmetryWitness, ActsOnTheGerm) {
  gen::Rng rng(55);
  const MapJet3 f = example_jet(3, 0.7);
  const MapJet3 g = apply_motion(gen::rotation(rng), gen::translation(rng), compose(f, mild_diffeo(rng)));
  const NormalForm nf = reduce_jet(g);
  const MapJet3 centered = apply_motion(Eigen::Matrix3d::Identity(), -g.base_value(), g);
  const MapJet3 aligned = certify_jet(g).aligned_jet;
  const MapJet3 aligned_centered = apply_motion(Eigen::Matrix3d::Identity(), -aligned.base_value(), aligned);
  for (MotionTag tag : {MotionTag::T1, MotionTag::T2, MotionTag::T3}) {
    const SymmetryWitness w = symmetry_witness(nf, tag);
    const double scale = std::max(1.0, centered.max_abs());
    EXPECT_LE(max_abs_difference(apply_motion(w.world_matrix, Eigen::Vector3d::Zero(), centered),
                                 compose(centered, w.in_source)) / scale, 1e-9) << to_string(tag);
    EXPECT_LE(max_abs_difference(apply_motion(w.world_matrix, Eigen::Vector3d::Zero(), aligned_centered),
                                 compose(aligned_centered, w.conjugated)) / scale, 1e-9) << to_string(tag);
  }
}

}  // namespace
}  // namespace crosscap
