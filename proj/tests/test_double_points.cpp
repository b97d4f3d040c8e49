#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "crosscap/double_points.hpp"
#include "crosscap/error.hpp"
#include "support/examples.hpp"
#include "support/generators.hpp"

namespace crosscap {
namespace {

MapDefinition f0() { return MapDefinition::parse({"u", "u*v", "v^2"}); }

Eigen::Vector3d nu0(double u, double v) {
  return Eigen::Vector3d(2 * v * v, -2 * v, u) / std::sqrt(u * u + 4 * v * v + 4 * v * v * v * v);
}

TEST(NormalField, MatchesClosedFormForStandardCrossCap) {
  const NormalField nu(f0());
  gen::Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    Eigen::Vector2d q(gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1));
    if (q.norm() < 1e-3) continue;
    const Eigen::Vector3d n = nu(q), want = nu0(q.x(), q.y());
    EXPECT_LE(std::min((n - want).norm(), (n + want).norm()), 1e-12);
    EXPECT_NEAR(n.norm(), 1.0, 1e-15);
  }
}

TEST(NormalField, ValuesOnTheUAxis) {
  const NormalField nu(f0());
  EXPECT_LE((nu({1, 0}) - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
  EXPECT_LE((nu({-1, 0}) - Eigen::Vector3d(0, 0, -1)).norm(), 1e-15);
  EXPECT_LE((nu({0.3, 0}) - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
  EXPECT_LE((nu({1, 1}) - Eigen::Vector3d(2, -2, 1) / 3.0).norm(), 1e-15);
  EXPECT_LE((NormalField(f0(), -1)({1, 0}) - Eigen::Vector3d(0, 0, -1)).norm(), 1e-15);
}

TEST(NormalField, OrthogonalToTangentPlane) {
  gen::Rng rng(62);
  const MapDefinition m = fixtures::example(1, 0.7);
  const NormalField nu(m);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Vector2d q(gen::uniform(rng, -1, 1), gen::uniform(rng, 0.05, 1));
    const MapFirstOrder d = eval_map_first_order(m, q);
    const Eigen::Vector3d n = nu(q);
    EXPECT_LE(std::abs(n.dot(d.jacobian.col(0))), 1e-10 * d.jacobian.col(0).norm());
    EXPECT_LE(std::abs(n.dot(d.jacobian.col(1))), 1e-10 * d.jacobian.col(1).norm());
  }
}

TEST(NormalField, SingularPointThrows) {
  const NormalField nu{f0()};
  EXPECT_THROW(nu({0, 0}), SingularPoint);
  EXPECT_THROW(NormalField(f0(), 0), ContractViolation);
}

TEST(TraceDoublePoints, StandardCrossCapLiesOnVAxis) {
  const DoublePointCurve c = trace_double_points_at(f0(), {0, 0});
  ASSERT_GE(c.samples.size(), 190u);
  for (const auto& s : c.samples) {
    EXPECT_LE(std::abs(s.q.x()), 1e-8);
    EXPECT_LE(std::abs(s.q_prime.x()), 1e-8);
    EXPECT_NEAR(s.q_prime.y(), -s.q.y(), 1e-8);
    EXPECT_LE(s.residual, 1e-8);
    EXPECT_NEAR(s.image.z(), s.q.y() * s.q.y(), 1e-8);
    EXPECT_GE((s.q - s.q_prime).norm(), c.step / 4);
  }
  EXPECT_NEAR(c.samples.front().arc, -1.0, 1e-9);
  EXPECT_NEAR(c.samples.back().arc, 1.0, 1e-9);
  EXPECT_EQ(c.orientation_sign, 1);
}

TEST(TraceDoublePoints, ExampleOneSatisfiesRelation) {
  const MapDefinition m = fixtures::example(1, 1.0);
  const DoublePointCurve c = trace_double_points_at(m, {0, 0});
  ASSERT_GT(c.samples.size(), 100u);
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto& s = c.samples[i];
    // Direct substitution, independent of the tracer's own residual.
    EXPECT_LE((eval_map_point(m, s.q) - eval_map_point(m, s.q_prime)).norm(), 1e-8);
    EXPECT_GE((s.q - s.q_prime).norm(), c.step / 4);
    // b-relation: u (v - v') = b(v') - b(v) with b = v^3.
    const double v = s.q.y(), w = s.q_prime.y();
    EXPECT_NEAR(s.q.x() * (v - w), w * w * w - v * v * v, 1e-8);
    if (i > 0) {
      EXPECT_GT(s.arc, c.samples[i - 1].arc);
      const auto& prev = c.samples[i - 1];
      if (prev.arc < 0 && s.arc > 0) {
        // The singular point completes the curve between the two branches.
        EXPECT_LE((prev.q - c.singular_point).norm(), 1.5 * c.step);
        EXPECT_LE((s.q - c.singular_point).norm(), 1.5 * c.step);
      } else {
        EXPECT_LE((s.q - prev.q).norm(), 1.5 * c.step);
      }
    }
  }
}

TEST(TraceDoublePoints, SwappedPairsShareImages) {
  const MapDefinition m = fixtures::example(2, -1.0);
  const DoublePointCurve c = trace_double_points_at(m, {0, 0}, {0.5, 0.02, 6, std::nullopt});
  for (const auto& s : c.samples) {
    EXPECT_LE((eval_map_point(m, s.q_prime) - s.image).norm(), 1e-8);
  }
}

TEST(TraceDoublePoints, StopsAtDomainBoundary) {
  TraceOptions opts;
  opts.arc_span = 5.0;
  opts.domain = SearchBox{-0.5, 0.5, -0.5, 0.5};
  const DoublePointCurve c = trace_double_points_at(f0(), {0, 0}, opts);
  for (const auto& s : c.samples) EXPECT_TRUE(opts.domain->contains(s.q) && opts.domain->contains(s.q_prime));
  EXPECT_GT(c.samples.back().arc, 0.45);
}

TEST(TraceDoublePoints, ImmersionGivesSeedFailure) {
  try {
    trace_double_points_at(MapDefinition::parse({"u", "v", "0"}), {0, 0});
    FAIL() << "expected SeedFailure";
  } catch (const SeedFailure& e) {
    EXPECT_EQ(error_code_name(e.code()), "E_SEED");
  }
}

TEST(TraceDoublePoints, RejectsBadOptions) {
  const CrossCapCertificate cert = align_kernel(f0(), {0, 0}, 6);
  EXPECT_THROW(trace_double_points(f0(), cert, {1.0, 0.0, 6, std::nullopt}), ContractViolation);
  EXPECT_THROW(trace_double_points(f0(), cert, {-1.0, 0.01, 6, std::nullopt}), ContractViolation);
}

TEST(TraceDoublePoints, RotatedAndShiftedCrossCap) {
  // f0 composed with a source rotation by 1 rad and shifted to (0.2, -0.1); also moved in space.
  const std::string U = "(0.54030230586813977*(u - 0.2) - 0.8414709848078965*(v + 0.1))";
  const std::string V = "(0.8414709848078965*(u - 0.2) + 0.54030230586813977*(v + 0.1))";
  const MapDefinition m = MapDefinition::parse({U + " + " + V + "^2", U + "*" + V + " - 2*" + U, V + "^2 + 1"});
  const auto found = find_singular_points(m, {}, 20);
  ASSERT_FALSE(found.empty());
  const DoublePointCurve c = trace_double_points_at(m, found.front().point, {0.4, 0.01, 6, std::nullopt});
  ASSERT_GT(c.samples.size(), 50u);
  for (const auto& s : c.samples) {
    EXPECT_LE((eval_map_point(m, s.q) - eval_map_point(m, s.q_prime)).norm(), 1e-8);
  }
}

TEST(Transversality, StandardCrossCap) {
  const DoublePointCurve c = trace_double_points_at(f0(), {0, 0});
  const TransversalityReport r = transversality_check(f0(), c);
  ASSERT_EQ(r.angles.size(), c.samples.size());
  EXPECT_TRUE(r.flagged.empty());
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    // Normals (2v^2, -2v, 0) and (2v^2, 2v, 0) up to scale.
    const double v = c.samples[i].q.y();
    const Eigen::Vector3d a(2 * v * v, -2 * v, 0), b(2 * v * v, 2 * v, 0);
    EXPECT_NEAR(r.angles[i], std::acos(a.normalized().dot(b.normalized())), 1e-9);
    EXPECT_GT(r.angles[i], 0.0);
  }
  // Near the cross cap the two sheets open to an angle close to pi.
  EXPECT_GT(r.angles[c.samples.size() / 2], std::numbers::pi - 0.1);
}

TEST(Transversality, ThresholdFlagsSamples) {
  const DoublePointCurve c = trace_double_points_at(f0(), {0, 0});
  const TransversalityReport r = transversality_check(f0(), c, 4.0);
  EXPECT_EQ(r.flagged.size(), c.samples.size());
}

TEST(CurveCsv, HeaderAndRows) {
  const DoublePointCurve c = trace_double_points_at(f0(), {0, 0}, {0.1, 0.01, 6, std::nullopt});
  std::istringstream in(curve_to_csv(c));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,u,v,u',v',x,y,z,residual");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
  }
  EXPECT_EQ(rows, c.samples.size());
}

}  // namespace
}  // namespace crosscap
