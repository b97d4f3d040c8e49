#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "crosscap/normal_form.hpp"

namespace crosscap {

inline constexpr double kDefaultSymmetryTolerance = 1e-8;

struct SymmetryVerdict {
  MotionTag motion;
  bool holds;
  double residual;  ///< normalized violation of the parity condition
  std::string_view condition;
};

/// Verdicts are valid to jet order `order` only.
struct SymmetryReport {
  int order;
  double tolerance;
  std::array<SymmetryVerdict, 3> verdicts;  // T1, T2, T3

  const SymmetryVerdict& verdict(MotionTag tag) const;
};

/// Condition on (a, b) equivalent to symmetry under the motion.
std::string_view symmetry_condition(MotionTag tag);

/// Largest coefficient violating the parity condition, divided by max(1, max |a|, |b|).
double symmetry_residual(const NormalForm& nf, MotionTag tag);

SymmetryReport classify_symmetries(const NormalForm& nf, double tol = kDefaultSymmetryTolerance);

/// max |transport(nf, T) - nf| / (2 * scale) over a and b; equals symmetry_residual.
double transport_defect(const NormalForm& nf, CongruenceMotion motion);

struct SymmetryWitness {
  CongruenceMotion motion;
  /// Involution in normal-form coordinates.
  PlaneJet involution;
  /// The same involution in the certificate's aligned coordinates.
  PlaneJet conjugated;
  /// The same involution in the original source coordinates, centered at the cross cap point.
  PlaneJet in_source;
  bool orientation_preserving;
  std::string_view description;  ///< "(u,-v)", "(-u,-v)" or "(-u,v)"
  /// Motion of R^3 fixing the cross cap image: x -> world_matrix * (x - origin) + origin.
  Eigen::Matrix3d world_matrix;
};

/// Throws SymmetryAbsent when the symmetry does not hold at tolerance `tol`.
SymmetryWitness symmetry_witness(const NormalForm& nf, MotionTag tag, double tol = kDefaultSymmetryTolerance);

}  // namespace crosscap
