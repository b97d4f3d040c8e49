#include "crosscap/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "crosscap/error.hpp"

namespace crosscap {
namespace {

double coefficient_scale(const NormalForm& nf) { return std::max({1.0, nf.a.max_abs(), nf.b.max_abs()}); }

// Largest |c| among coefficients whose sign the motion flips.
double flipped_magnitude(const NormalForm& nf, CongruenceMotion motion) {
  const Eigen::Matrix2d s = motion.source_signs();
  const double su = s(0, 0), sv = s(1, 1);
  double worst = 0.0;
  const int n = nf.working_order;
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; j + k <= n; ++k) {
      if (std::pow(su, j) * std::pow(sv, k) < 0.0) worst = std::max(worst, std::abs(nf.a(j, k)));
    }
  }
  for (int k = 0; k <= nf.b.order(); ++k) {
    if (motion.eps2() * std::pow(sv, k) < 0.0) worst = std::max(worst, std::abs(nf.b[k]));
  }
  return worst;
}

void require_symmetry_tag(MotionTag tag) {
  if (tag == MotionTag::T0) throw ContractViolation("symmetry index must be T1, T2 or T3");
}

}  // namespace

const SymmetryVerdict& SymmetryReport::verdict(MotionTag tag) const {
  require_symmetry_tag(tag);
  return verdicts[static_cast<std::size_t>(tag) - 1];
}

std::string_view symmetry_condition(MotionTag tag) {
  switch (tag) {
    case MotionTag::T1: return "a(u,-v) = a(u,v) and b(v) = -b(-v)";
    case MotionTag::T2: return "a(-u,-v) = a(u,v) and b(-v) = b(v)";
    case MotionTag::T3: return "a(-u,v) = a(u,v) and b(v) = 0";
    case MotionTag::T0: break;
  }
  return "always";
}

double symmetry_residual(const NormalForm& nf, MotionTag tag) {
  return flipped_magnitude(nf, CongruenceMotion::of(tag)) / coefficient_scale(nf);
}

SymmetryReport classify_symmetries(const NormalForm& nf, double tol) {
  if (!(tol > 0.0)) throw ContractViolation("symmetry tolerance must be positive");
  SymmetryReport report{nf.working_order, tol, {}};
  for (MotionTag tag : {MotionTag::T1, MotionTag::T2, MotionTag::T3}) {
    const double r = symmetry_residual(nf, tag);
    report.verdicts[static_cast<std::size_t>(tag) - 1] = {tag, r <= tol, r, symmetry_condition(tag)};
  }
  return report;
}

double transport_defect(const NormalForm& nf, CongruenceMotion motion) {
  const NormalForm moved = transport_normal_form(nf, motion);
  const double diff = std::max(max_abs_difference(moved.a, nf.a), max_abs_difference(moved.b, nf.b));
  return diff / (2.0 * coefficient_scale(nf));
}

SymmetryWitness symmetry_witness(const NormalForm& nf, MotionTag tag, double tol) {
  require_symmetry_tag(tag);
  const double r = symmetry_residual(nf, tag);
  if (!(r <= tol)) {
    throw SymmetryAbsent(to_string(tag) + " symmetry absent: residual " + std::to_string(r));
  }
  const CongruenceMotion motion = CongruenceMotion::of(tag);
  const Eigen::Matrix2d signs = motion.source_signs();
  SymmetryWitness w{motion,
                    linear_plane_jet(nf.working_order, signs),
                    PlaneJet{},
                    PlaneJet{},
                    signs.determinant() > 0.0,
                    tag == MotionTag::T1   ? "(u,-v)"
                    : tag == MotionTag::T2 ? "(-u,-v)"
                                           : "(-u,v)",
                    Eigen::Matrix3d::Identity()};
  w.conjugated = compose(nf.inverse_source_change, compose(w.involution, nf.source_change));
  const int n = nf.working_order;
  w.in_source = compose(linear_plane_jet(n, nf.kernel_rotation),
                        compose(w.conjugated, linear_plane_jet(n, nf.kernel_rotation.transpose())));
  const Eigen::Matrix3d frame_cols = nf.frame.to_frame().transpose();
  w.world_matrix = frame_cols * motion.matrix() * frame_cols.transpose();
  return w;
}

}  // namespace crosscap
