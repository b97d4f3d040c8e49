#pragma once

#include <vector>

#include <Eigen/Core>

#include "crosscap/expr.hpp"
#include "crosscap/jet.hpp"

namespace crosscap {

struct SearchBox {
  double u_min = -1.0;
  double u_max = 1.0;
  double v_min = -1.0;
  double v_max = 1.0;

  bool contains(const Eigen::Vector2d& q, double slack = 0.0) const noexcept {
    return q.x() >= u_min - slack && q.x() <= u_max + slack && q.y() >= v_min - slack &&
           q.y() <= v_max + slack;
  }
};

struct LocatorTolerances {
  /// Absolute bound on |f_u x f_v| at an accepted singular point.
  double singular = 1e-9;
  /// Whitney threshold is whitney_relative * scale^3, scale = max(|f_u|, |f_uv|, |f_vv|).
  double whitney_relative = 1e-8;
};

/// Rank-one point of the differential.
struct SingularCandidate {
  Eigen::Vector2d point;
  double residual;      ///< |f_u x f_v| at the point
  double kernel_angle;  ///< theta in [0, pi) with df(cos theta, sin theta) = 0
};

/// Levenberg-damped Gauss-Newton on |f_u x f_v|^2 from a grid x grid lattice of seeds.
/// Converged points are merged within 1e-6 and sorted by residual.
std::vector<SingularCandidate> find_singular_points(const MapDefinition& defn, const SearchBox& box,
                                                    int grid, const LocatorTolerances& tol = {});

/// A certified cross cap in kernel-aligned source coordinates (s, t): the original
/// coordinates are point + kernel_rotation * (s, t), and f_t = 0 at the point.
struct CrossCapCertificate {
  Eigen::Vector2d point;
  MapJet3 aligned_jet;
  double whitney_det;        ///< det[f_u, f_uv, f_vv] in aligned coordinates
  double whitney_threshold;  ///< |whitney_det| must exceed this
  Eigen::Matrix2d kernel_rotation;
  double kernel_angle;    ///< theta in [0, pi)
  double rotation_angle;  ///< angle of kernel_rotation, theta - pi/2
  double singular_residual;
};

/// Certify an already expanded germ (e.g. built by jet composition).
CrossCapCertificate certify_jet(const MapJet3& jet, const LocatorTolerances& tol = {});

/// Expand defn at p to `order` and certify. Throws NotSingular, RankZero, WhitneyFail.
CrossCapCertificate align_kernel(const MapDefinition& defn, const Eigen::Vector2d& p, int order,
                                 const LocatorTolerances& tol = {});

/// Unit kernel direction of a 3x2 Jacobian, normalized to angle in [0, pi).
Eigen::Vector2d kernel_direction(const Eigen::Matrix<double, 3, 2>& jacobian);

}  // namespace crosscap
