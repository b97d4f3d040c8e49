#include "crosscap/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "crosscap/error.hpp"

namespace crosscap {
namespace {

constexpr double kMergeRadius = 1e-6;
constexpr int kMaxIterations = 200;

struct CrossResidual {
  Eigen::Vector3d r;
  Eigen::Matrix<double, 3, 2> jacobian;
};

CrossResidual cross_residual(const MapDefinition& defn, const Eigen::Vector2d& q) {
  const MapJet3 jet = eval_map_jet(defn, q, 2);
  const Eigen::Vector3d fu = jet.f_u(), fv = jet.f_v();
  const Eigen::Vector3d fuu = jet.f_uu(), fuv = jet.f_uv(), fvv = jet.f_vv();
  CrossResidual out;
  out.r = fu.cross(fv);
  out.jacobian.col(0) = fuu.cross(fv) + fu.cross(fuv);
  out.jacobian.col(1) = fuv.cross(fv) + fu.cross(fvv);
  return out;
}

// Damped Gauss-Newton; nullopt when the seed leaves the evaluable domain or wanders off.
std::optional<Eigen::Vector2d> refine(const MapDefinition& defn, Eigen::Vector2d x, const SearchBox& box,
                                      double tol) {
  const double extent = std::max(box.u_max - box.u_min, box.v_max - box.v_min);
  double lambda = 0.0;
  try {
    CrossResidual cur = cross_residual(defn, x);
    for (int it = 0; it < kMaxIterations; ++it) {
      const double norm = cur.r.norm();
      if (norm <= 1e-3 * tol) break;
      const Eigen::Matrix2d a = cur.jacobian.transpose() * cur.jacobian;
      const Eigen::Vector2d g = cur.jacobian.transpose() * cur.r;
      bool improved = false;
      for (int tries = 0; tries < 30; ++tries) {
        Eigen::Matrix2d damped = a;
        damped.diagonal().array() += lambda * (a.diagonal().array() + 1e-12);
        const Eigen::Vector2d step = -damped.completeOrthogonalDecomposition().solve(g);
        if (!step.allFinite()) break;
        const Eigen::Vector2d trial = x + step;
        if (!box.contains(trial, extent)) {
          lambda = std::max(1e-6, lambda * 10.0);
          continue;
        }
        CrossResidual next;
        try {
          next = cross_residual(defn, trial);
        } catch (const DomainError&) {
          lambda = std::max(1e-6, lambda * 10.0);
          continue;
        }
        if (next.r.norm() < norm) {
          x = trial;
          cur = next;
          lambda = lambda < 1e-6 ? 0.0 : lambda * 0.1;
          improved = true;
          break;
        }
        lambda = std::max(1e-6, lambda * 10.0);
      }
      if (!improved) break;
    }
    if (cur.r.norm() > tol) return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return x;
}

}  // namespace

Eigen::Vector2d kernel_direction(const Eigen::Matrix<double, 3, 2>& jacobian) {
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(jacobian, Eigen::ComputeFullV);
  Eigen::Vector2d k = svd.matrixV().col(1);
  if (k.y() < 0.0 || (k.y() == 0.0 && k.x() < 0.0)) k = -k;
  return k.normalized();
}

std::vector<SingularCandidate> find_singular_points(const MapDefinition& defn, const SearchBox& box, int grid,
                                                    const LocatorTolerances& tol) {
  if (grid < 2) throw ContractViolation("find_singular_points: grid must be >= 2");
  if (!(box.u_max > box.u_min) || !(box.v_max > box.v_min)) {
    throw ContractViolation("find_singular_points: degenerate search box");
  }
  std::vector<SingularCandidate> found;
  const double slack = 1e-9 * std::max(box.u_max - box.u_min, box.v_max - box.v_min);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Eigen::Vector2d seed(box.u_min + (box.u_max - box.u_min) * i / (grid - 1),
                                 box.v_min + (box.v_max - box.v_min) * j / (grid - 1));
      const auto x = refine(defn, seed, box, tol.singular);
      if (!x || !box.contains(*x, slack)) continue;
      const MapFirstOrder d = eval_map_first_order(defn, *x);
      const double residual = d.jacobian.col(0).cross(d.jacobian.col(1)).norm();
      const Eigen::Vector2d k = kernel_direction(d.jacobian);
      SingularCandidate cand{*x, residual, std::atan2(k.y(), k.x())};
      auto dup = std::find_if(found.begin(), found.end(), [&](const SingularCandidate& c) {
        return (c.point - cand.point).norm() <= kMergeRadius;
      });
      if (dup == found.end()) {
        found.push_back(cand);
      } else if (cand.residual < dup->residual) {
        *dup = cand;
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const SingularCandidate& a, const SingularCandidate& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    if (a.point.x() != b.point.x()) return a.point.x() < b.point.x();
    return a.point.y() < b.point.y();
  });
  return found;
}

CrossCapCertificate certify_jet(const MapJet3& jet, const LocatorTolerances& tol) {
  if (jet.order() < 2) throw ContractViolation("certify_jet: order must be >= 2");
  Eigen::Matrix<double, 3, 2> jac;
  jac.col(0) = jet.f_u();
  jac.col(1) = jet.f_v();
  const double residual = jac.col(0).cross(jac.col(1)).norm();
  if (residual > tol.singular) {
    throw NotSingular("point is regular: |f_u x f_v| = " + std::to_string(residual));
  }
  const double largest = jac.jacobiSvd().singularValues()(0);
  if (largest <= 1e-10) throw RankZero("differential vanishes: rank zero singular point");

  const Eigen::Vector2d k = kernel_direction(jac);
  Eigen::Matrix2d rot;
  rot << k.y(), k.x(), -k.x(), k.y();  // sends (0,1) to k
  const MapJet3 rotated = compose(jet, linear_plane_jet(jet.order(), rot));
  std::array<Jet2, 3> comps = rotated.components();
  for (Jet2& c : comps) c(0, 1) = 0.0;
  MapJet3 aligned(std::move(comps), jet.base_point(), jet.base_value());

  Eigen::Matrix3d w;
  w.col(0) = aligned.f_u();
  w.col(1) = aligned.f_uv();
  w.col(2) = aligned.f_vv();
  const double det = w.determinant();
  const double scale = std::max({w.col(0).norm(), w.col(1).norm(), w.col(2).norm()});
  const double threshold = tol.whitney_relative * scale * scale * scale;
  if (!(std::abs(det) > threshold)) {
    throw WhitneyFail("Whitney criterion fails: det[f_u, f_uv, f_vv] = " + std::to_string(det));
  }
  const double theta = std::atan2(k.y(), k.x());
  return CrossCapCertificate{jet.base_point(), std::move(aligned), det, threshold, rot, theta,
                             theta - std::numbers::pi / 2.0, residual};
}

CrossCapCertificate align_kernel(const MapDefinition& defn, const Eigen::Vector2d& p, int order,
                                 const LocatorTolerances& tol) {
  return certify_jet(eval_map_jet(defn, p, order), tol);
}

}  // namespace crosscap
