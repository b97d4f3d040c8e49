#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "crosscap/expr.hpp"
#include "crosscap/singular.hpp"

namespace crosscap {

/// Unit normal field nu = sign * (f_u x f_v) / |f_u x f_v| on the regular part of a map.
class NormalField {
 public:
  explicit NormalField(MapDefinition defn, int orientation_sign = 1);

  const MapDefinition& definition() const noexcept { return defn_; }
  int orientation_sign() const noexcept { return sign_; }

  /// Throws SingularPoint when |f_u x f_v| <= 1e-12 |f_u| |f_v|.
  Eigen::Vector3d operator()(const Eigen::Vector2d& q) const;

 private:
  MapDefinition defn_;
  int sign_;
};

Eigen::Vector3d unit_normal(const NormalField& field, const Eigen::Vector2d& q);

struct DoublePointSample {
  double arc;  ///< signed arc length of q from the singular point
  Eigen::Vector2d q;
  Eigen::Vector2d q_prime;
  Eigen::Vector3d image;
  double residual;  ///< |f(q) - f(q')|
};

/// Self-intersection curve through a cross cap. Samples are ordered by arc; the singular
/// point itself sits between the last negative-arc and first positive-arc sample.
struct DoublePointCurve {
  std::vector<DoublePointSample> samples;
  Eigen::Vector2d singular_point;
  Eigen::Vector3d singular_image;
  double step;
  int orientation_sign;  ///< sign making nu . e3 >= 0 at the first seed
};

struct TraceOptions {
  double arc_span = 1.0;  ///< per branch, in source arc length
  double step = 0.01;
  int order = kDefaultOrder;  ///< jet order of the normal-form seed model
  /// Stop a branch when q or q' leaves this box; evaluation failures also end a branch.
  std::optional<SearchBox> domain;
};

/// Predictor-corrector continuation of f(q) = f(q') in (q, q') space, seeded from the
/// normal-form model. Throws SeedFailure or StepCollapse.
DoublePointCurve trace_double_points(const MapDefinition& defn, const CrossCapCertificate& cert,
                                     const TraceOptions& opts = {});

/// Certify the point first; any certification failure is reported as SeedFailure.
DoublePointCurve trace_double_points_at(const MapDefinition& defn, const Eigen::Vector2d& p,
                                        const TraceOptions& opts = {});

struct TransversalityReport {
  std::vector<double> angles;  ///< angle between nu(q) and nu(q') per sample, in [0, pi]
  double min_angle;
  std::vector<std::size_t> flagged;  ///< samples with angle below the threshold
  double threshold;
};

TransversalityReport transversality_check(const MapDefinition& defn, const DoublePointCurve& curve,
                                          double flag_threshold = 1e-3);

/// Columns: s,u,v,u',v',x,y,z,residual.
std::string curve_to_csv(const DoublePointCurve& curve);

}  // namespace crosscap
