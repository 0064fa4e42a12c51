#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lsl/signature.hpp"

namespace lsl {

/// Element of the isometry Lie algebra so(eta): matrices X with
/// X^T eta + eta X = 0 for the diagonal eta of the given signature.
template <typename Scalar = double>
struct LieElem {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> mat;
  Signature<Scalar> sig;

  Scalar antisymmetryResidual() const {
    const auto eta = sig.eta();
    return (mat.transpose() * eta + eta * mat).norm();
  }
};

/// Standard basis element E_ij (i < j, zero based): the rotation/boost
/// generator with E_ij u_i = eps_i u_j where u_k is the k-th coordinate
/// vector. Concretely entry (i,j) = -eps_j and entry (j,i) = eps_i.
template <typename Scalar>
LieElem<Scalar> lieBasis(const Signature<Scalar>& sig, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index n = sig.dims();
  if (i < 0 || j <= i || j >= n) {
    throw std::invalid_argument("lieBasis: need 0 <= i < j < dims");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  m(i, j) = -sig.eps(j);
  m(j, i) = sig.eps(i);
  return {m, sig};
}

template <typename Scalar>
LieElem<Scalar> commutator(const LieElem<Scalar>& a, const LieElem<Scalar>& b) {
  if (a.sig != b.sig) throw std::invalid_argument("commutator: signature mismatch");
  return {a.mat * b.mat - b.mat * a.mat, a.sig};
}

/// Coefficients of X in the E_ij basis, listed in lexicographic (i,j) order.
/// Because E_ij has the single upper entry (i,j) = -eps_j, the coefficient is
/// read off as c_ij = -X(i,j) eps_j.
template <typename Scalar>
std::vector<Scalar> expandCoefficients(const LieElem<Scalar>& x) {
  const Eigen::Index n = x.sig.dims();
  std::vector<Scalar> c;
  c.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      c.push_back(-x.mat(i, j) * x.sig.eps(j));
    }
  }
  return c;
}

/// Reassemble an algebra element from lexicographic E_ij coefficients.
template <typename Scalar>
LieElem<Scalar> assembleFromCoefficients(const Signature<Scalar>& sig,
                                         const std::vector<Scalar>& c) {
  const Eigen::Index n = sig.dims();
  if (static_cast<Eigen::Index>(c.size()) != n * (n - 1) / 2) {
    throw std::invalid_argument("assembleFromCoefficients: wrong coefficient count");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) -= c[k] * sig.eps(j);
      m(j, i) += c[k] * sig.eps(i);
      ++k;
    }
  }
  return {m, sig};
}

/// Basis {m1, m2} of the tangent space to either connected fibre component
/// of the bundle of compatible complex structures, at the reference point.
/// Requires a four slot signature (-,+,+,+) in the first four positions of
/// the frame indexing. The positive component pairs the timelike plane
/// (0,1) against (2,3) with one relative sign, the negative one with the
/// other:
///   positive:  m1 = E_02 - E_12,  m2 = E_03 - E_13
///   negative:  m1 = E_02 + E_12,  m2 = E_03 + E_13
template <typename Scalar>
std::array<LieElem<Scalar>, 2> fibreTangentBasis(const Signature<Scalar>& sig,
                                                 bool positive) {
  if (sig.dims() < 4) throw std::invalid_argument("fibreTangentBasis: need dims >= 4");
  const Scalar s = positive ? Scalar(-1) : Scalar(1);
  LieElem<Scalar> m1 = lieBasis(sig, 0, 2);
  m1.mat += s * lieBasis(sig, 1, 2).mat;
  LieElem<Scalar> m2 = lieBasis(sig, 0, 3);
  m2.mat += s * lieBasis(sig, 1, 3).mat;
  return {m1, m2};
}

/// Basis of the isotropy complement h: the stabiliser directions of the
/// reference complex structure inside so(eta) restricted to the 4 slots.
template <typename Scalar>
std::array<LieElem<Scalar>, 4> fibreIsotropyBasis(const Signature<Scalar>& sig,
                                                  bool positive) {
  if (sig.dims() < 4) throw std::invalid_argument("fibreIsotropyBasis: need dims >= 4");
  const Scalar s = positive ? Scalar(1) : Scalar(-1);
  LieElem<Scalar> h1 = lieBasis(sig, 0, 1);
  LieElem<Scalar> h2 = lieBasis(sig, 0, 2);
  h2.mat += s * lieBasis(sig, 1, 2).mat;
  LieElem<Scalar> h3 = lieBasis(sig, 0, 3);
  h3.mat += s * lieBasis(sig, 1, 3).mat;
  LieElem<Scalar> h4 = lieBasis(sig, 2, 3);
  return {h1, h2, h3, h4};
}

/// Complex structure of the fibre applied to a fibre tangent vector:
/// with X = a m1 + b m2 the image is J X = b m1 - a m2. Throws if X has a
/// component outside span{m1, m2}.
template <typename Scalar>
LieElem<Scalar> fibreComplexStructure(const LieElem<Scalar>& x, bool positive,
                                      Scalar tol = Scalar(1e-10)) {
  const auto m = fibreTangentBasis(x.sig, positive);
  // m1 has its only nonzero upper entries at (0,2) and (1,2); read the
  // coefficients there, then verify the span condition by reassembly.
  const Scalar a = -x.mat(0, 2) * x.sig.eps(2);
  const Scalar b = -x.mat(0, 3) * x.sig.eps(3);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> recon =
      a * m[0].mat + b * m[1].mat;
  if ((x.mat - recon).norm() > tol * std::max(Scalar(1), x.mat.norm())) {
    throw std::domain_error("fibreComplexStructure: vector is not fibre tangent");
  }
  return {b * m[0].mat - a * m[1].mat, x.sig};
}

}  // namespace lsl
