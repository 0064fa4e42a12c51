#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>

#include "lsl/signature.hpp"

namespace lsl {

/// A null line, stored through one representative vector. The representative
/// is never unit length (null vectors have none); scale is fixed only when a
/// normalising observer is supplied.
template <typename Scalar = double>
struct NullDir {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rep;
  Signature<Scalar> sig;
};

template <typename Scalar, typename D>
NullDir<Scalar> makeNullDir(const Signature<Scalar>& sig, const Eigen::MatrixBase<D>& v,
                            Scalar tol = Scalar(1e-10)) {
  if (v.derived().norm() == Scalar(0)) {
    throw std::invalid_argument("makeNullDir: zero vector");
  }
  if (!isNull(sig, v, tol)) {
    throw std::invalid_argument("makeNullDir: vector is not null");
  }
  return {v.derived().eval(), sig};
}

/// Rescale so that <rep, T> = -1 for the given (future timelike) observer T.
/// This keeps future null directions future.
template <typename Scalar, typename D>
NullDir<Scalar> normalizeNullDir(const NullDir<Scalar>& d, const Eigen::MatrixBase<D>& t) {
  const Scalar p = inner(d.sig, d.rep, t);
  if (std::abs(p) < Scalar(1e-14) * std::max(Scalar(1), Scalar(d.rep.norm() * t.derived().norm()))) {
    throw std::invalid_argument("normalizeNullDir: representative orthogonal to observer");
  }
  NullDir<Scalar> out = d;
  out.rep /= -p;
  return out;
}

/// Whether two null lines agree including orientation, i.e. the
/// representatives are positive multiples of each other.
template <typename Scalar>
bool sameDirection(const NullDir<Scalar>& a, const NullDir<Scalar>& b,
                   Scalar tol = Scalar(1e-8)) {
  if (a.sig != b.sig) return false;
  const Scalar na = a.rep.norm();
  const Scalar nb = b.rep.norm();
  const Scalar c = a.rep.dot(b.rep) / (na * na);
  return c > Scalar(0) && (b.rep - c * a.rep).norm() <= tol * nb;
}

/// With d normalised against the unit observer T, write rep = T + S and
/// return the unit spacelike part S.
template <typename Scalar, typename D>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> extractSpacePart(const NullDir<Scalar>& d,
                                                          const Eigen::MatrixBase<D>& t) {
  const NullDir<Scalar> n = normalizeNullDir(d, t);
  return n.rep - t.derived();
}

/// Inverse of extractSpacePart: the null direction T + S determined by a
/// unit timelike T and a unit spacelike S orthogonal to it.
template <typename Scalar, typename D1, typename D2>
NullDir<Scalar> fibreIdent(const Signature<Scalar>& sig, const Eigen::MatrixBase<D1>& t,
                           const Eigen::MatrixBase<D2>& s, Scalar tol = Scalar(1e-8)) {
  if (std::abs(normSq(sig, t) + Scalar(1)) > tol) {
    throw std::invalid_argument("fibreIdent: T must be unit timelike");
  }
  if (std::abs(normSq(sig, s) - Scalar(1)) > tol) {
    throw std::invalid_argument("fibreIdent: S must be unit spacelike");
  }
  if (std::abs(inner(sig, t, s)) > tol) {
    throw std::invalid_argument("fibreIdent: T and S must be orthogonal");
  }
  return {(t.derived() + s.derived()).eval(), sig};
}

/// Column frame in an ambient signature space. frameSig records the causal
/// type expected of each column; adapted frames in this project are always
/// (-,+,+,+) even when the ambient space has five slots.
template <typename Scalar = double>
struct Frame {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> E;  // columns e_1..e_k
  Signature<Scalar> sig;
  Signature<Scalar> frameSig;

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram() const {
    return E.transpose() * sig.eta() * E;
  }

  /// Distance of the Gram matrix from the expected diagonal.
  Scalar gramResidual() const {
    return (gram() - frameSig.eta()).norm();
  }
};

template <typename Scalar>
Frame<Scalar> makeFrame(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> e,
                        const Signature<Scalar>& sig, const Signature<Scalar>& frameSig) {
  if (e.rows() != sig.dims() || e.cols() != frameSig.dims()) {
    throw std::invalid_argument("makeFrame: shape mismatch with signatures");
  }
  return {std::move(e), sig, frameSig};
}

/// The two null normal lines spanned by the timelike/spacelike pair in the
/// leading frame slots: rep_+ = e_1 + e_2 and rep_- = e_1 - e_2.
template <typename Scalar>
std::pair<NullDir<Scalar>, NullDir<Scalar>> nullSplit(const Frame<Scalar>& fr) {
  if (fr.E.cols() < 2 || fr.frameSig.eps(0) != Scalar(-1) || fr.frameSig.eps(1) != Scalar(1)) {
    throw std::invalid_argument("nullSplit: frame must start with a timelike/spacelike pair");
  }
  NullDir<Scalar> plus{(fr.E.col(0) + fr.E.col(1)).eval(), fr.sig};
  NullDir<Scalar> minus{(fr.E.col(0) - fr.E.col(1)).eval(), fr.sig};
  return {plus, minus};
}

}  // namespace lsl
