#pragma once

// Reduction of a certified cross cap to the form (u, uv + b(v), a(u,v)) with
//   b(0) = b'(0) = b''(0) = 0,  a(0,0) = a_u(0,0) = a_v(0,0) = 0,  a_vv(0,0) > 0,
// reached by a target rotation and a positive source coordinate change.
// All outputs are N-jets: terms beyond the working order are not represented.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "crosscap/jet.hpp"
#include "crosscap/singular.hpp"

namespace crosscap {

/// Adapted orthonormal frame at a cross cap. e1 spans the tangent line, {e1, e3} the
/// principal plane, {e2, e3} the normal plane, and e3 the normal line.
struct CrossCapFrame {
  Eigen::Vector3d origin;
  Eigen::Vector3d e1;
  Eigen::Vector3d e2;
  Eigen::Vector3d e3;

  struct Line {
    Eigen::Vector3d origin;
    Eigen::Vector3d direction;
  };
  struct Plane {
    Eigen::Vector3d origin;
    std::array<Eigen::Vector3d, 2> span;
    Eigen::Vector3d normal;
  };

  Line tangent_line() const { return {origin, e1}; }
  Line normal_line() const { return {origin, e3}; }
  Plane principal_plane() const { return {origin, {e1, e3}, e2}; }
  Plane normal_plane() const { return {origin, {e2, e3}, e1}; }

  /// Matrix with rows e1, e2, e3: world directions to frame coordinates.
  Eigen::Matrix3d to_frame() const;
};

/// Throws DegenerateFrame when f_vv is (numerically) parallel to f_u.
CrossCapFrame build_frame(const CrossCapCertificate& cert);

enum class MotionTag { T0 = 0, T1 = 1, T2 = 2, T3 = 3 };

/// diag(eps1, eps2, 1) in frame coordinates: identity, reflection in the principal plane,
/// reflection in the normal plane, half turn about the normal line.
struct CongruenceMotion {
  MotionTag tag;

  static CongruenceMotion of(MotionTag tag) { return {tag}; }
  double eps1() const noexcept { return (tag == MotionTag::T2 || tag == MotionTag::T3) ? -1.0 : 1.0; }
  double eps2() const noexcept { return (tag == MotionTag::T1 || tag == MotionTag::T3) ? -1.0 : 1.0; }
  Eigen::Matrix3d matrix() const;
  /// Sign change of source coordinates pairing with the motion: T1 (u,-v), T2 (-u,-v), T3 (-u,v).
  Eigen::Matrix2d source_signs() const;
};

std::string to_string(MotionTag tag);
MotionTag motion_from_string(const std::string& name);

struct NormalForm {
  Jet2 a;  ///< first characteristic function
  Jet1 b;  ///< second characteristic function
  CrossCapFrame frame;
  /// (u~, v~) as jets in the certificate's aligned coordinates.
  PlaneJet source_change;
  PlaneJet inverse_source_change;
  /// Original source offsets q - p are kernel_rotation * (aligned coordinates).
  Eigen::Matrix2d kernel_rotation;
  int working_order;
  double reconstruction_residual;
};

struct ReductionOptions {
  /// Relative per-coefficient bound for the solve and reconstruction residuals; the
  /// scale is max(1, largest input coefficient).
  double residual_tolerance = 1e-9;
};

inline constexpr int kMinReductionOrder = 3;

/// Throws DegenerateFrame, SolveInconsistent, ContractViolation (order outside [3, 12]
/// or above the certificate's jet order).
NormalForm reduce_to_normal_form(const CrossCapCertificate& cert, int order, const ReductionOptions& opts = {});

/// Jet of (u, uv + b(v), a(u,v)) at the origin.
MapJet3 normal_form_map(const Jet2& a, const Jet1& b);

/// Max relative coefficient error of origin + frame^T (N o source_change) against `input`.
double reconstruction_error(const NormalForm& nf, const MapJet3& input);

struct InvariantEntry {
  std::string label;  ///< "a(j,k)" or "b(k)"
  int j;              ///< u-degree for a entries, -1 for b entries
  int k;
  double value;
};

/// a_{jk} for j + k <= order, then b_k for 3 <= k <= order.
std::vector<InvariantEntry> characteristic_invariants(const NormalForm& nf);

/// Normal form of T o f o phi with phi = source_change^{-1} o iota o source_change, where T is
/// the motion in the frame of f and iota the matching sign change. Frame and source change
/// are unchanged; a and b pick up the parity signs.
NormalForm transport_normal_form(const NormalForm& nf, CongruenceMotion motion);

}  // namespace crosscap
