#include "crosscap/double_points.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "crosscap/error.hpp"
#include "crosscap/normal_form.hpp"

namespace crosscap {

NormalField::NormalField(MapDefinition defn, int orientation_sign) : defn_(std::move(defn)), sign_(orientation_sign) {
  if (sign_ != 1 && sign_ != -1) throw ContractViolation("orientation sign must be +1 or -1");
}

Eigen::Vector3d NormalField::operator()(const Eigen::Vector2d& q) const {
  const MapFirstOrder d = eval_map_first_order(defn_, q);
  const Eigen::Vector3d fu = d.jacobian.col(0), fv = d.jacobian.col(1);
  const Eigen::Vector3d n = fu.cross(fv);
  if (!(n.norm() > 1e-12 * fu.norm() * fv.norm())) {
    throw SingularPoint("unit normal undefined at singular point (" + std::to_string(q.x()) + ", " +
                        std::to_string(q.y()) + ")");
  }
  return sign_ * n.normalized();
}

Eigen::Vector3d unit_normal(const NormalField& field, const Eigen::Vector2d& q) { return field(q); }

namespace {

using Vec4 = Eigen::Vector4d;
using Jac34 = Eigen::Matrix<double, 3, 4>;

constexpr double kAcceptResidual = 1e-10;
constexpr double kConvergedResidual = 1e-13;
constexpr int kCorrectorIterations = 12;

Eigen::Vector2d first(const Vec4& x) { return x.head<2>(); }
Eigen::Vector2d second(const Vec4& x) { return x.tail<2>(); }
Vec4 swapped(const Vec4& x) { return Vec4(x[2], x[3], x[0], x[1]); }

struct System {
  Eigen::Vector3d value;
  Jac34 jacobian;
};

System double_point_system(const MapDefinition& defn, const Vec4& x) {
  const MapFirstOrder a = eval_map_first_order(defn, first(x));
  const MapFirstOrder b = eval_map_first_order(defn, second(x));
  System s;
  s.value = a.value - b.value;
  s.jacobian.leftCols<2>() = a.jacobian;
  s.jacobian.rightCols<2>() = -b.jacobian;
  return s;
}

Vec4 null_vector(const Jac34& j) {
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd((Eigen::Matrix4d() << j, Eigen::RowVector4d::Zero()).finished(),
                                              Eigen::ComputeFullV);
  return svd.matrixV().col(3).normalized();
}

struct Correction {
  Vec4 x;
  double residual;
};

// Minimum-norm Gauss-Newton onto the solution set.
Correction project(const MapDefinition& defn, Vec4 x) {
  System s = double_point_system(defn, x);
  Correction best{x, s.value.norm()};
  for (int it = 0; it < 30 && best.residual > kConvergedResidual; ++it) {
    const Vec4 dx = -s.jacobian.completeOrthogonalDecomposition().solve(s.value);
    if (!dx.allFinite()) break;
    x += dx;
    s = double_point_system(defn, x);
    const double r = s.value.norm();
    if (!std::isfinite(r)) break;
    if (r < best.residual) best = {x, r};
    if (dx.norm() < 1e-15) break;
  }
  return best;
}

// Pseudo-arclength corrector: F(x) = 0 and t . (x - predicted) = 0.
std::optional<Vec4> correct(const MapDefinition& defn, const Vec4& predicted, const Vec4& tangent) {
  Vec4 x = predicted;
  for (int it = 0; it < kCorrectorIterations; ++it) {
    const System s = double_point_system(defn, x);
    const double r = s.value.norm();
    Eigen::Matrix4d a;
    a.topRows<3>() = s.jacobian;
    a.row(3) = tangent.transpose();
    Vec4 rhs;
    rhs.head<3>() = -s.value;
    rhs[3] = -tangent.dot(x - predicted);
    const Vec4 dx = a.fullPivLu().solve(rhs);
    if (!dx.allFinite()) return std::nullopt;
    x += dx;
    if (r <= kConvergedResidual && dx.norm() <= 1e-14) break;
  }
  if (double_point_system(defn, x).value.norm() > kAcceptResidual) return std::nullopt;
  return x;
}

DoublePointSample make_sample(const MapDefinition& defn, const Vec4& x, double arc) {
  const Eigen::Vector3d fq = eval_map_point(defn, first(x));
  const Eigen::Vector3d fq2 = eval_map_point(defn, second(x));
  return {arc, first(x), second(x), fq, (fq - fq2).norm()};
}

std::vector<DoublePointSample> trace_branch(const MapDefinition& defn, Vec4 x, const Eigen::Vector2d& p,
                                            const TraceOptions& opts) {
  const double step = opts.step;
  const double min_step = step / 64.0;
  double arc = (first(x) - p).norm();
  std::vector<DoublePointSample> out{make_sample(defn, x, arc)};
  std::optional<Vec4> previous_tangent;
  double h = step;

  const auto inside = [&](const Vec4& y) {
    return !opts.domain || (opts.domain->contains(first(y)) && opts.domain->contains(second(y)));
  };

  while (opts.arc_span - arc > 1e-12) {
    Vec4 t = null_vector(double_point_system(defn, x).jacobian);
    if (previous_tangent) {
      if (t.dot(*previous_tangent) < 0.0) t = -t;
    } else {
      const Eigen::Vector2d sep = first(x) - second(x);
      if (sep.dot(first(t) - second(t)) < 0.0) t = -t;
    }
    const double tq = first(t).norm();

    bool accepted = false;
    bool domain_exit = false;
    while (!accepted) {
      const double h_arc = std::min(h, opts.arc_span - arc);
      const double h4 = tq > 1e-12 ? std::min(h_arc / tq, 4.0 * h_arc) : h_arc;
      const Vec4 predicted = x + h4 * t;
      std::optional<Vec4> next;
      try {
        if (inside(predicted)) {
          next = correct(defn, predicted, t);
        } else {
          domain_exit = true;
        }
      } catch (const DomainError&) {
        domain_exit = true;
      }
      const bool ok = next && inside(*next) && (first(*next) - second(*next)).norm() >= step / 4.0 &&
                      (*next - predicted).norm() <= h4;
      if (ok) {
        arc += (first(*next) - first(x)).norm();
        x = *next;
        out.push_back(make_sample(defn, x, arc));
        accepted = true;
        h = std::min(step, 2.0 * h);
        break;
      }
      h *= 0.5;
      if (h < min_step) {
        if (domain_exit) return out;
        throw StepCollapse("continuation step fell below step/64 at arc " + std::to_string(arc));
      }
    }
    previous_tangent = t;
  }
  return out;
}

}  // namespace

DoublePointCurve trace_double_points(const MapDefinition& defn, const CrossCapCertificate& cert,
                                     const TraceOptions& opts) {
  if (!(opts.step > 0.0)) throw ContractViolation("trace_double_points: step must be positive");
  if (!(opts.arc_span > 0.0)) throw ContractViolation("trace_double_points: arc span must be positive");
  const int order = std::min(opts.order, cert.aligned_jet.order());
  const NormalForm nf = reduce_to_normal_form(cert, order);
  const Eigen::Vector2d p = cert.point;

  // Quadratic model: v' = -v, and the b-relation u (v - v') = b(v') - b(v).
  const auto seed_at = [&](double s) {
    const double u_nf = -(nf.b.evaluate(s) - nf.b.evaluate(-s)) / (2.0 * s);
    const Eigen::Vector2d qa = nf.inverse_source_change.evaluate(u_nf, s);
    const Eigen::Vector2d qb = nf.inverse_source_change.evaluate(u_nf, -s);
    Vec4 x;
    x << p + cert.kernel_rotation * qa, p + cert.kernel_rotation * qb;
    return x;
  };

  double s = opts.step;
  Vec4 guess = seed_at(s);
  for (int tries = 0; tries < 5; ++tries) {
    const double sep = (first(guess) - second(guess)).norm();
    if (sep >= opts.step || sep == 0.0) break;
    s *= opts.step / sep;
    guess = seed_at(s);
  }

  Correction seed{guess, 0.0};
  try {
    seed = project(defn, guess);
  } catch (const DomainError& err) {
    throw SeedFailure(std::string("seed evaluation failed: ") + err.what(), INFINITY);
  }
  if (!(seed.residual <= kAcceptResidual)) {
    throw SeedFailure("corrector did not converge at the seed", seed.residual);
  }
  if ((first(seed.x) - second(seed.x)).norm() < opts.step / 4.0) {
    throw SeedFailure("seed collapsed onto the diagonal", seed.residual);
  }

  DoublePointCurve curve;
  curve.singular_point = p;
  curve.singular_image = cert.aligned_jet.base_value();
  curve.step = opts.step;
  const NormalField probe(defn, 1);
  curve.orientation_sign = probe(first(seed.x)).dot(nf.frame.e3) >= 0.0 ? 1 : -1;

  std::vector<DoublePointSample> forward = trace_branch(defn, seed.x, p, opts);
  std::vector<DoublePointSample> backward = trace_branch(defn, swapped(seed.x), p, opts);
  curve.samples.reserve(forward.size() + backward.size());
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
    DoublePointSample sm = *it;
    sm.arc = -sm.arc;
    curve.samples.push_back(sm);
  }
  curve.samples.insert(curve.samples.end(), forward.begin(), forward.end());
  return curve;
}

DoublePointCurve trace_double_points_at(const MapDefinition& defn, const Eigen::Vector2d& p,
                                        const TraceOptions& opts) {
  std::optional<CrossCapCertificate> cert;
  try {
    cert.emplace(align_kernel(defn, p, std::max(opts.order, kMinReductionOrder)));
  } catch (const Error& err) {
    if (err.code() == ErrorCode::contract) throw;
    throw SeedFailure(std::string("no cross cap to seed from: ") + err.what(), INFINITY);
  }
  return trace_double_points(defn, *cert, opts);
}

TransversalityReport transversality_check(const MapDefinition& defn, const DoublePointCurve& curve,
                                          double flag_threshold) {
  const NormalField nu(defn, curve.orientation_sign);
  TransversalityReport report{{}, std::numbers::pi, {}, flag_threshold};
  report.angles.reserve(curve.samples.size());
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& sm = curve.samples[i];
    const double c = std::clamp(nu(sm.q).dot(nu(sm.q_prime)), -1.0, 1.0);
    const double angle = std::acos(c);
    report.angles.push_back(angle);
    report.min_angle = std::min(report.min_angle, angle);
    if (angle < flag_threshold) report.flagged.push_back(i);
  }
  return report;
}

std::string curve_to_csv(const DoublePointCurve& curve) {
  std::string out = "s,u,v,u',v',x,y,z,residual\n";
  char buf[512];
  for (const auto& sm : curve.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sm.arc, sm.q.x(),
                  sm.q.y(), sm.q_prime.x(), sm.q_prime.y(), sm.image.x(), sm.image.y(), sm.image.z(),
                  sm.residual);
    out += buf;
  }
  return out;
}

}  // namespace crosscap
