#include "crosscap/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "crosscap/error.hpp"

namespace crosscap {

Eigen::Matrix3d CrossCapFrame::to_frame() const {
  Eigen::Matrix3d m;
  m.row(0) = e1.transpose();
  m.row(1) = e2.transpose();
  m.row(2) = e3.transpose();
  return m;
}

Eigen::Matrix3d CongruenceMotion::matrix() const {
  return Eigen::Vector3d(eps1(), eps2(), 1.0).asDiagonal();
}

Eigen::Matrix2d CongruenceMotion::source_signs() const {
  switch (tag) {
    case MotionTag::T0: return Eigen::Vector2d(1.0, 1.0).asDiagonal();
    case MotionTag::T1: return Eigen::Vector2d(1.0, -1.0).asDiagonal();
    case MotionTag::T2: return Eigen::Vector2d(-1.0, -1.0).asDiagonal();
    case MotionTag::T3: return Eigen::Vector2d(-1.0, 1.0).asDiagonal();
  }
  return Eigen::Matrix2d::Identity();
}

std::string to_string(MotionTag tag) { return "T" + std::to_string(static_cast<int>(tag)); }

MotionTag motion_from_string(const std::string& name) {
  if (name == "T0") return MotionTag::T0;
  if (name == "T1") return MotionTag::T1;
  if (name == "T2") return MotionTag::T2;
  if (name == "T3") return MotionTag::T3;
  throw ContractViolation("unknown congruence motion '" + name + "' (expected T0..T3)");
}

CrossCapFrame build_frame(const CrossCapCertificate& cert) {
  const MapJet3& jet = cert.aligned_jet;
  const Eigen::Vector3d fu = jet.f_u(), fuv = jet.f_uv(), fvv = jet.f_vv();
  const Eigen::Vector3d e1_hat = fu.normalized();
  const Eigen::Vector3d off_axis = fvv - fvv.dot(e1_hat) * e1_hat;
  if (!(off_axis.norm() > 1e-12 * std::max(1.0, fvv.norm()))) {
    throw DegenerateFrame("f_vv is parallel to f_u; principal plane undefined");
  }
  CrossCapFrame frame;
  frame.origin = jet.base_value();
  frame.e3 = off_axis.normalized();
  frame.e2 = frame.e3.cross(e1_hat);
  frame.e1 = e1_hat;
  if (fuv.dot(frame.e2) < 0.0) {
    frame.e1 = -e1_hat;
    frame.e2 = -frame.e2;
  }
  return frame;
}

MapJet3 normal_form_map(const Jet2& a, const Jet1& b) {
  const int n = a.order();
  const Jet2 u = Jet2::variable_u(n), v = Jet2::variable_v(n);
  return MapJet3({u, u * v + embed_v(b), a}, Eigen::Vector2d::Zero(), Eigen::Vector3d::Zero());
}

double reconstruction_error(const NormalForm& nf, const MapJet3& input) {
  const MapJet3 nf_map = compose(normal_form_map(nf.a, nf.b), nf.source_change);
  const MapJet3 rebuilt = apply_motion(nf.frame.to_frame().transpose(), nf.frame.origin, nf_map);
  const double scale = std::max(1.0, input.max_abs());
  double err = (rebuilt.base_value() - input.base_value()).cwiseAbs().maxCoeff() / scale;
  for (int i = 0; i < 3; ++i) err = std::max(err, max_abs_difference(rebuilt[i], truncate(input[i], nf.working_order)) / scale);
  return err;
}

NormalForm reduce_to_normal_form(const CrossCapCertificate& cert, int order, const ReductionOptions& opts) {
  if (order < kMinReductionOrder || order > kMaxOrder) {
    throw ContractViolation("reduce_to_normal_form: order must lie in [3, 12], got " + std::to_string(order));
  }
  if (order > cert.aligned_jet.order()) {
    throw ContractViolation("reduce_to_normal_form: certificate jet order " +
                            std::to_string(cert.aligned_jet.order()) + " is below requested order " +
                            std::to_string(order));
  }
  const CrossCapFrame frame = build_frame(cert);
  const MapJet3 jet = truncate(cert.aligned_jet, order);
  const double scale = std::max(1.0, jet.max_abs());
  const double tol = opts.residual_tolerance * scale;

  // g = R (f - f(p)); the jet is already centered.
  const Eigen::Matrix3d rot = frame.to_frame();
  std::array<Jet2, 3> g{Jet2(order), Jet2(order), Jet2(order)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[static_cast<std::size_t>(i)] += rot(i, j) * jet[j];

  const Jet2& u_new = g[0];
  const double alpha = u_new(1, 0);
  if (alpha == 0.0) throw SolveInconsistent("tangent component vanishes");

  // Degree 2: g2 = (alpha u)(p u + q v); the v^2 term vanishes by the frame choice.
  Jet2 v_new(order);
  Jet1 b(order);
  const double p = g[1](2, 0) / alpha;
  const double q = g[1](1, 1) / alpha;
  v_new(1, 0) = p;
  v_new(0, 1) = q;

  // Degree k >= 3: the v^k coefficient fixes b_k through q^k, then the k monomials
  // containing u fix the degree-(k-1) part of v~ through alpha.
  std::vector<double> binom(static_cast<std::size_t>(order + 1));
  for (int k = 3; k <= order; ++k) {
    const Jet2 known = u_new * v_new + compose(b, v_new);
    const double bk = (g[1](0, k) - known(0, k)) / std::pow(q, k);
    b[k] = bk;
    binom[0] = 1.0;
    for (int j = 1; j <= k; ++j) binom[static_cast<std::size_t>(j)] = binom[static_cast<std::size_t>(j - 1)] * (k - j + 1) / j;
    for (int j = 1; j <= k; ++j) {
      const double lin_power = binom[static_cast<std::size_t>(j)] * std::pow(p, j) * std::pow(q, k - j);
      v_new(j - 1, k - j) = (g[1](j, k - j) - known(j, k - j) - bk * lin_power) / alpha;
    }
  }

  const Jet2 residual = g[1] - (u_new * v_new + compose(b, v_new));
  for (int d = 0; d <= order; ++d) {
    for (int j = 0; j <= d; ++j) {
      if (std::abs(residual(j, d - j)) > tol) {
        throw SolveInconsistent("normal-form solve residual " + std::to_string(residual(j, d - j)) +
                                " at degree " + std::to_string(d));
      }
    }
  }

  PlaneJet phi{u_new, v_new};
  const double jac = phi.linear_part().determinant();
  if (!(jac > 0.0)) throw SolveInconsistent("source change is not orientation preserving");
  PlaneJet psi = invert(phi);
  Jet2 a = compose(g[2], psi.u, psi.v);
  for (auto [j, k] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}}) {
    if (std::abs(a(j, k)) > tol) {
      throw SolveInconsistent("first characteristic function has a nonzero linear part");
    }
    a(j, k) = 0.0;
  }
  if (!(a(0, 2) > 0.0)) throw SolveInconsistent("a_02 is not positive");

  NormalForm nf{std::move(a), std::move(b), frame, std::move(phi), std::move(psi), cert.kernel_rotation, order, 0.0};
  nf.reconstruction_residual = reconstruction_error(nf, jet);
  if (nf.reconstruction_residual > opts.residual_tolerance) {
    throw SolveInconsistent("reconstruction residual " + std::to_string(nf.reconstruction_residual) +
                            " exceeds tolerance");
  }
  return nf;
}

std::vector<InvariantEntry> characteristic_invariants(const NormalForm& nf) {
  std::vector<InvariantEntry> out;
  const int n = nf.working_order;
  for (int d = 0; d <= n; ++d) {
    for (int j = d; j >= 0; --j) {
      const int k = d - j;
      out.push_back({"a(" + std::to_string(j) + "," + std::to_string(k) + ")", j, k, nf.a(j, k)});
    }
  }
  for (int k = 3; k <= n; ++k) out.push_back({"b(" + std::to_string(k) + ")", -1, k, nf.b[k]});
  return out;
}

NormalForm transport_normal_form(const NormalForm& nf, CongruenceMotion motion) {
  // a(su u, sv v) and eps2 * b(sv v), with (su, sv) the source signs of the motion.
  const Eigen::Matrix2d s = motion.source_signs();
  NormalForm out = nf;
  out.a = scale_variables(nf.a, s(0, 0), s(1, 1));
  out.b = motion.eps2() * scale_variable(nf.b, s(1, 1));
  return out;
}

}  // namespace crosscap
