#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <utility>

namespace lsl {

/// Diagonal metric signature: a list of +-1 weights. Timelike slots carry -1
/// and are always listed first.
template <typename Scalar = double>
class Signature {
public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Signature() = default;

  explicit Signature(Array eps) : eps_(std::move(eps)) {
    for (Eigen::Index i = 0; i < eps_.size(); ++i) {
      if (eps_(i) != Scalar(1) && eps_(i) != Scalar(-1)) {
        throw std::invalid_argument("Signature entries must be +1 or -1");
      }
    }
  }

  static Signature fromSigns(std::initializer_list<int> signs) {
    Array eps(static_cast<Eigen::Index>(signs.size()));
    Eigen::Index i = 0;
    for (int s : signs) eps(i++) = static_cast<Scalar>(s);
    return Signature(std::move(eps));
  }

  /// (-,+,+,+): flat Lorentzian 4-space.
  static Signature r41() { return fromSigns({-1, 1, 1, 1}); }
  /// (-,+,+,+,+): ambient space of the curvature +1 quadric.
  static Signature r51() { return fromSigns({-1, 1, 1, 1, 1}); }
  /// (-,-,+,+,+): ambient space of the curvature -1 quadric.
  static Signature r52() { return fromSigns({-1, -1, 1, 1, 1}); }

  Eigen::Index dims() const { return eps_.size(); }
  Scalar eps(Eigen::Index i) const { return eps_(i); }
  const Array& epsArray() const { return eps_; }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eta() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = eps_.matrix().asDiagonal();
    return m;
  }

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.eps_.size() == b.eps_.size() && (a.eps_ == b.eps_).all();
  }
  friend bool operator!=(const Signature& a, const Signature& b) { return !(a == b); }

private:
  Array eps_;
};

/// Signature-weighted inner product  <u,v> = sum_i eps_i u_i v_i.
template <typename Scalar, typename D1, typename D2>
Scalar inner(const Signature<Scalar>& sig, const Eigen::MatrixBase<D1>& u,
             const Eigen::MatrixBase<D2>& v) {
  if (u.size() != sig.dims() || v.size() != sig.dims()) {
    throw std::invalid_argument("inner: dimension mismatch with signature");
  }
  return (sig.epsArray() * u.derived().array() * v.derived().array()).sum();
}

template <typename Scalar, typename D>
Scalar normSq(const Signature<Scalar>& sig, const Eigen::MatrixBase<D>& u) {
  return inner(sig, u, u);
}

/// Causal character tests, with a tolerance relative to the Euclidean size.
template <typename Scalar, typename D>
bool isNull(const Signature<Scalar>& sig, const Eigen::MatrixBase<D>& u,
            Scalar tol = Scalar(1e-10)) {
  const Scalar scale = std::max(Scalar(1), Scalar(u.derived().squaredNorm()));
  return std::abs(normSq(sig, u)) <= tol * scale;
}

template <typename Scalar, typename D>
bool isTimelike(const Signature<Scalar>& sig, const Eigen::MatrixBase<D>& u) {
  return normSq(sig, u) < Scalar(0);
}

template <typename Scalar, typename D>
bool isSpacelike(const Signature<Scalar>& sig, const Eigen::MatrixBase<D>& u) {
  return normSq(sig, u) > Scalar(0);
}

}  // namespace lsl
