#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "lsl/signature.hpp"

namespace lsl {

enum class SpaceKind { R41, S41, H41 };

/// The three Lorentzian model spaces of constant curvature: flat
/// Minkowski 4-space, and the curvature +-1 quadrics <x,x> = +-1 inside
/// flat 5-space with one respectively two timelike slots.
struct SpaceForm {
  SpaceKind kind;
  Signature<double> sig;  // ambient signature
  double curvature;       // 0, +1 or -1

  static SpaceForm r41() { return {SpaceKind::R41, Signature<double>::r41(), 0.0}; }
  static SpaceForm s41() { return {SpaceKind::S41, Signature<double>::r51(), 1.0}; }
  static SpaceForm h41() { return {SpaceKind::H41, Signature<double>::r52(), -1.0}; }

  static SpaceForm fromName(const std::string& name) {
    if (name == "r41") return r41();
    if (name == "s41") return s41();
    if (name == "h41") return h41();
    throw std::invalid_argument("unknown space form name: " + name);
  }

  std::string name() const {
    switch (kind) {
      case SpaceKind::R41: return "r41";
      case SpaceKind::S41: return "s41";
      default: return "h41";
    }
  }

  Eigen::Index ambientDims() const { return sig.dims(); }
  bool flat() const { return kind == SpaceKind::R41; }

  /// <x,x> minus its required value; identically zero in the flat model.
  double quadricResidual(const Eigen::VectorXd& x) const {
    if (flat()) return 0.0;
    return inner(sig, x, x) - curvature;
  }

  Eigen::VectorXd basePoint() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ambientDims());
    if (kind == SpaceKind::S41) x(2) = -1.0;
    if (kind == SpaceKind::H41) x(0) = 1.0;
    return x;
  }

  /// Orthogonal projection of an ambient vector onto the tangent space of
  /// the quadric at x. The position vector has squared length equal to the
  /// curvature, so the projector is v - curvature * <v,x> x.
  Eigen::VectorXd projectTangent(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    if (flat()) return v;
    return v - curvature * inner(sig, v, x) * x;
  }

  /// Future unit timelike reference field fixing the time orientation.
  /// Flat: the first coordinate direction. Curvature +1: tangential part
  /// of that direction (never vanishes, the projection stays timelike).
  /// Curvature -1: the rotation flow in the two timelike slots.
  Eigen::VectorXd timeOrientation(const Eigen::VectorXd& x) const {
    switch (kind) {
      case SpaceKind::R41: {
        Eigen::VectorXd t = Eigen::VectorXd::Zero(4);
        t(0) = 1.0;
        return t;
      }
      case SpaceKind::S41: {
        Eigen::VectorXd u0 = Eigen::VectorXd::Zero(5);
        u0(0) = 1.0;
        const double c = inner(sig, u0, x);
        Eigen::VectorXd t = u0 - c * x;  // squared length -(1 + c^2)
        return t / std::sqrt(1.0 + c * c);
      }
      default: {
        Eigen::VectorXd t = Eigen::VectorXd::Zero(5);
        const double r = std::hypot(x(0), x(1));
        t(0) = -x(1) / r;
        t(1) = x(0) / r;
        return t;
      }
    }
  }
};

/// Levi-Civita derivative on the quadric: project the ambient derivative of
/// the field back into the tangent space.
inline Eigen::VectorXd covariantDerivative(const SpaceForm& form, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& ambientDeriv) {
  return form.projectTangent(x, ambientDeriv);
}

/// Geodesic through x with initial velocity v, at parameter t. On the
/// quadrics the ambient equation is x'' = -curvature <v,v> x, so the flow is
/// trigonometric, hyperbolic or affine depending on sign(curvature <v,v>).
inline Eigen::VectorXd geodesic(const SpaceForm& form, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& v, double t) {
  if (form.flat()) return x + t * v;
  if (std::abs(form.quadricResidual(x)) > 1e-8) {
    throw std::invalid_argument("geodesic: base point is not on the quadric");
  }
  if (std::abs(inner(form.sig, x, v)) > 1e-8 * (1.0 + v.norm())) {
    throw std::invalid_argument("geodesic: velocity is not tangent");
  }
  const double c = inner(form.sig, v, v);
  const double k = form.curvature * c;
  if (k > 1e-14) {
    const double w = std::sqrt(k);
    return std::cos(w * t) * x + (std::sin(w * t) / w) * v;
  }
  if (k < -1e-14) {
    const double w = std::sqrt(-k);
    return std::cosh(w * t) * x + (std::sinh(w * t) / w) * v;
  }
  return x + t * v;  // null rays are ambient straight lines
}

/// Constant curvature tensor in the first/third slot pairing:
/// R(X,Y,Z,W) = curvature (<X,Z><Y,W> - <X,W><Y,Z>).
inline double riemannConstant(const SpaceForm& form, const Eigen::VectorXd& x1,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                              const Eigen::VectorXd& w) {
  const auto& s = form.sig;
  return form.curvature * (inner(s, x1, z) * inner(s, y, w) - inner(s, x1, w) * inner(s, y, z));
}

/// Stereographic chart of the curvature +1 quadric from the pole x_2 = 1,
/// dropping the second spacelike slot. The image is the region 1 + q > 0 of
/// Minkowski 4-space, q the Lorentzian squared length, and the pullback
/// metric is conformal with factor e^{2 rho}, rho = log(2/(1+q)).
inline Eigen::Vector4d stereoProject(const Eigen::VectorXd& x) {
  if (x.size() != 5) throw std::invalid_argument("stereoProject: need a 5-vector");
  const double d = 1.0 - x(2);
  if (std::abs(d) < 1e-12) throw std::domain_error("stereoProject: point at the pole");
  Eigen::Vector4d y;
  y << x(0), x(1), x(3), x(4);
  return y / d;
}

inline double stereoQ(const Eigen::Vector4d& y) {
  return -y(0) * y(0) + y(1) * y(1) + y(2) * y(2) + y(3) * y(3);
}

inline Eigen::VectorXd stereoUnproject(const Eigen::Vector4d& y) {
  const double q = stereoQ(y);
  if (1.0 + q <= 1e-12) {
    throw std::domain_error("stereoUnproject: outside the chart, 1 + q must be positive");
  }
  Eigen::VectorXd x(5);
  x << y(0), y(1), (q - 1.0) / 2.0, y(2), y(3);
  return (2.0 / (1.0 + q)) * x;
}

inline double stereoConformalExponent(const Eigen::Vector4d& y) {
  const double q = stereoQ(y);
  if (1.0 + q <= 1e-12) {
    throw std::domain_error("stereoConformalExponent: outside the chart");
  }
  return std::log(2.0 / (1.0 + q));
}

/// Scale relating support-type data on the quadric to the flat chart:
/// multiplication by e^{-rho} = (1+q)/2.
inline double stereoScale(const Eigen::Vector4d& y) {
  return (1.0 + stereoQ(y)) / 2.0;
}

}  // namespace lsl
