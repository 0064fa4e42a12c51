#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "lsl/metric.hpp"
#include "lsl/space_form.hpp"

namespace lsl {

struct GridSpec {
  double u0 = -0.5, u1 = 0.5, v0 = -0.5, v1 = 0.5;
  int nu = 16, nv = 16;
};

inline std::pair<double, double> gridPoint(const GridSpec& g, int i, int j) {
  if (g.nu < 2 || g.nv < 2) throw std::invalid_argument("gridPoint: need at least 2x2 nodes");
  if (i < 0 || i >= g.nu || j < 0 || j >= g.nv) {
    throw std::invalid_argument("gridPoint: index outside the grid");
  }
  const double u = g.u0 + (g.u1 - g.u0) * static_cast<double>(i) / (g.nu - 1);
  const double v = g.v0 + (g.v1 - g.v0) * static_cast<double>(j) / (g.nv - 1);
  return {u, v};
}

using ChartFn = std::function<Eigen::VectorXd(double, double)>;

/// Spacelike surface handed to the engine as a chart into the ambient model
/// space, together with the window and resolution to sample.
struct Immersion {
  SpaceForm form;
  ChartFn chart;
  GridSpec grid;
  double fdStep = 1e-3;
  std::string name;
};

/// Everything the pointwise pipeline produces: the adapted frame
/// [e1 e2 e3 e4] (timelike normal, spacelike normal, two tangents), the
/// normalised null normals, and the second fundamental form split into its
/// two normal components on the tangent frame.
struct SurfaceData {
  Eigen::VectorXd point;
  Eigen::MatrixXd frame;     // ambient x 4
  Eigen::VectorXd tObserver; // unit future timelike reference at the point
  Eigen::VectorXd kPlus, kMinus;  // null normals, <k,T> = -1
  Eigen::MatrixXd dTangent;  // ambient x 2 chart velocities (manifold tangent)
  Eigen::Matrix2d gsCoeff;   // lower triangular: t_i = sum_a C(i,a) e_{3+a}
  double conformalFactor = 0.0;   // <t1,t1>
  double conformality = 0.0;      // |<t2,t2>-<t1,t1>| + |<t1,t2>|
  double quadricResidual = 0.0;
  Eigen::Matrix2d h1, h2;    // II = h1 e1 + h2 e2 on (e3,e4)
};

namespace detail {

/// The frame construction shared by the flat/quadric backends and the
/// conformally rescaled ambient backend. Works with callables so the two
/// can differ only in the inner product, the tangent projection and the
/// orientation determinant.
struct DarbouxInput {
  Eigen::VectorXd x;
  Eigen::VectorXd t1, t2;  // manifold-tangent chart velocities
  Eigen::VectorXd tObserver;
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> ip;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> projectTangent;
  std::function<double(const Eigen::MatrixXd&)> orientationDet;  // of [e1 e2 e3 e4]
  double orientationSign = 1.0;
};

struct DarbouxOutput {
  Eigen::VectorXd e1, e2, e3, e4;
  Eigen::VectorXd kPlus, kMinus;
  Eigen::Matrix2d gsCoeff;
  double conformalFactor = 0.0;
  double conformality = 0.0;
};

inline DarbouxOutput buildDarboux(const DarbouxInput& in) {
  DarbouxOutput out;
  const auto& ip = in.ip;

  // Tangent frame by Gram-Schmidt on the chart velocities.
  const double f11 = ip(in.t1, in.t1);
  if (f11 <= 0.0) throw std::domain_error("buildDarboux: chart velocity is not spacelike");
  out.e3 = in.t1 / std::sqrt(f11);
  const double c21 = ip(in.t2, out.e3);
  const Eigen::VectorXd w = in.t2 - c21 * out.e3;
  const double w2 = ip(w, w);
  if (w2 <= 1e-12 * f11) throw std::domain_error("buildDarboux: chart velocities are parallel");
  out.e4 = w / std::sqrt(w2);
  out.gsCoeff << std::sqrt(f11), 0.0, c21, std::sqrt(w2);
  out.conformalFactor = f11;
  out.conformality = std::abs(ip(in.t2, in.t2) - f11) + std::abs(ip(in.t1, in.t2));

  // Timelike unit normal: normal projection of the reference observer. The
  // tangential part of a timelike vector on a spacelike surface is
  // spacelike, so the projection is again timelike and never vanishes.
  Eigen::VectorXd nt =
      in.tObserver - ip(in.tObserver, out.e3) * out.e3 - ip(in.tObserver, out.e4) * out.e4;
  nt /= std::sqrt(-ip(nt, nt));

  // Spacelike unit normal: most transverse coordinate direction, projected.
  Eigen::VectorXd best;
  double bestNorm = -1.0;
  for (Eigen::Index i = 0; i < in.x.size(); ++i) {
    Eigen::VectorXd v = in.projectTangent(Eigen::VectorXd::Unit(in.x.size(), i));
    v -= ip(v, out.e3) * out.e3 + ip(v, out.e4) * out.e4;
    v += ip(v, nt) * nt;  // remove the timelike normal component
    if (v.norm() > bestNorm) {
      bestNorm = v.norm();
      best = v;
    }
  }
  const Eigen::VectorXd ns = best / std::sqrt(ip(best, best));

  // The two future null normals, each normalised against the observer.
  auto normalise = [&](const Eigen::VectorXd& k) -> Eigen::VectorXd {
    return k / (-ip(k, in.tObserver));
  };
  const Eigen::VectorXd ka = normalise(nt + ns);
  const Eigen::VectorXd kb = normalise(nt - ns);

  // Split a null pair back into a timelike/spacelike pair with e1 + e2
  // equal to the first null vector exactly.
  auto assemble = [&](const Eigen::VectorXd& kp, const Eigen::VectorXd& km) {
    const double s = -2.0 / ip(kp, km);
    return std::make_pair(((kp + s * km) / 2.0).eval(), ((kp - s * km) / 2.0).eval());
  };

  auto [e1, e2] = assemble(ka, kb);
  Eigen::MatrixXd frame(in.x.size(), 4);
  frame << e1, e2, out.e3, out.e4;
  if (in.orientationSign * in.orientationDet(frame) > 0.0) {
    out.e1 = e1;
    out.e2 = e2;
    out.kPlus = ka;
    out.kMinus = kb;
  } else {
    std::tie(out.e1, out.e2) = assemble(kb, ka);
    out.kPlus = kb;
    out.kMinus = ka;
  }
  return out;
}

/// Pinned frame handedness per model, fixed once so the catalogued families
/// carry the labels their deformation fields expect.
inline double modelOrientationSign(const SpaceForm& form) {
  switch (form.kind) {
    case SpaceKind::R41: return 1.0;
    case SpaceKind::S41: return -1.0;
    default: return 1.0;
  }
}

}  // namespace detail

/// Chart derivatives by central differences.
struct ChartJet {
  Eigen::VectorXd f, fu, fv, fuu, fuv, fvv;
};

inline ChartJet chartJet(const ChartFn& chart, double u, double v, double h) {
  ChartJet j;
  j.f = chart(u, v);
  const Eigen::VectorXd fpu = chart(u + h, v), fmu = chart(u - h, v);
  const Eigen::VectorXd fpv = chart(u, v + h), fmv = chart(u, v - h);
  j.fu = (fpu - fmu) / (2.0 * h);
  j.fv = (fpv - fmv) / (2.0 * h);
  j.fuu = (fpu - 2.0 * j.f + fmu) / (h * h);
  j.fvv = (fpv - 2.0 * j.f + fmv) / (h * h);
  j.fuv = (chart(u + h, v + h) - chart(u + h, v - h) - chart(u - h, v + h) +
           chart(u - h, v - h)) /
          (4.0 * h * h);
  return j;
}

/// Full pointwise pipeline on one of the three model spaces.
inline SurfaceData surfaceData(const Immersion& im, double u, double v) {
  const ChartJet jet = chartJet(im.chart, u, v, im.fdStep);
  const Eigen::VectorXd x = jet.f;
  if (x.size() != im.form.ambientDims()) {
    throw std::invalid_argument("surfaceData: chart dimension does not match the model");
  }

  detail::DarbouxInput in;
  in.x = x;
  in.t1 = im.form.projectTangent(x, jet.fu);
  in.t2 = im.form.projectTangent(x, jet.fv);
  in.tObserver = im.form.timeOrientation(x);
  const SpaceForm form = im.form;
  in.ip = [form, x](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return inner(form.sig, a, b);
  };
  in.projectTangent = [form, x](const Eigen::VectorXd& v_) { return form.projectTangent(x, v_); };
  if (form.flat()) {
    in.orientationDet = [](const Eigen::MatrixXd& fr) {
      return Eigen::Matrix4d(fr).determinant();
    };
  } else {
    in.orientationDet = [x](const Eigen::MatrixXd& fr) {
      Eigen::Matrix<double, 5, 5> m;
      m << x, fr;
      return m.determinant();
    };
  }
  in.orientationSign = detail::modelOrientationSign(form);

  const detail::DarbouxOutput d = detail::buildDarboux(in);

  SurfaceData out;
  out.point = x;
  out.frame.resize(x.size(), 4);
  out.frame << d.e1, d.e2, d.e3, d.e4;
  out.tObserver = in.tObserver;
  out.kPlus = d.kPlus;
  out.kMinus = d.kMinus;
  out.dTangent.resize(x.size(), 2);
  out.dTangent << in.t1, in.t2;
  out.gsCoeff = d.gsCoeff;
  out.conformalFactor = d.conformalFactor;
  out.conformality = d.conformality;
  out.quadricResidual = form.quadricResidual(x);

  // Second fundamental form: normal part of the chart second derivatives,
  // expressed first on the chart velocities, then moved to (e3, e4).
  auto normalPart = [&](const Eigen::VectorXd& vec) -> Eigen::VectorXd {
    Eigen::VectorXd n = form.projectTangent(x, vec);
    n -= in.ip(n, d.e3) * d.e3 + in.ip(n, d.e4) * d.e4;
    return n;
  };
  Eigen::Matrix2d h1c, h2c;
  const Eigen::VectorXd ii[3] = {normalPart(jet.fuu), normalPart(jet.fuv), normalPart(jet.fvv)};
  auto fill = [&](const Eigen::VectorXd& iiV, int a, int b) {
    h1c(a, b) = -in.ip(iiV, d.e1);
    h2c(a, b) = in.ip(iiV, d.e2);
  };
  fill(ii[0], 0, 0);
  fill(ii[1], 0, 1);
  fill(ii[2], 1, 1);
  h1c(1, 0) = h1c(0, 1);
  h2c(1, 0) = h2c(0, 1);

  const Eigen::Matrix2d cInv = d.gsCoeff.inverse();
  out.h1 = cInv * h1c * cInv.transpose();
  out.h2 = cInv * h2c * cInv.transpose();
  return out;
}

/// The same pipeline with the flat ambient metric replaced by a conformal
/// rescaling e^{2 rho} eta of Minkowski 4-space. The connection correction
/// is taken from the differenced Christoffel symbols of the rescaled
/// metric, keeping this backend independent of the closed-form one.
inline SurfaceData surfaceDataConformal(const ChartFn& chart,
                                        const std::function<double(const Eigen::Vector4d&)>& rho,
                                        double u, double v, double h) {
  const ChartJet jet = chartJet(chart, u, v, h);
  if (jet.f.size() != 4) {
    throw std::invalid_argument("surfaceDataConformal: chart must land in 4 coordinates");
  }
  const Eigen::Vector4d x = jet.f;

  MetricChart ambient;
  ambient.fdStep = h;
  ambient.g = [rho](const Eigen::Vector4d& p) -> Eigen::Matrix4d {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = -1.0;
    m *= std::exp(2.0 * rho(p));
    return m;
  };
  const Eigen::Matrix4d g = ambient.g(x);
  const auto gamma = christoffel(ambient, x);

  detail::DarbouxInput in;
  in.x = x;
  in.t1 = jet.fu;
  in.t2 = jet.fv;
  in.tObserver = std::exp(-rho(x)) * Eigen::Vector4d::Unit(0);
  in.ip = [g](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return double(a.transpose() * g * b);
  };
  in.projectTangent = [](const Eigen::VectorXd& v_) { return v_; };
  in.orientationDet = [](const Eigen::MatrixXd& fr) {
    return Eigen::Matrix4d(fr).determinant();
  };
  in.orientationSign = 1.0;

  const detail::DarbouxOutput d = detail::buildDarboux(in);

  SurfaceData out;
  out.point = x;
  out.frame.resize(4, 4);
  out.frame << d.e1, d.e2, d.e3, d.e4;
  out.tObserver = in.tObserver;
  out.kPlus = d.kPlus;
  out.kMinus = d.kMinus;
  out.dTangent.resize(4, 2);
  out.dTangent << in.t1, in.t2;
  out.gsCoeff = d.gsCoeff;
  out.conformalFactor = d.conformalFactor;
  out.conformality = d.conformality;
  out.quadricResidual = 0.0;

  auto connection = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::Vector4d c = Eigen::Vector4d::Zero();
    for (int m = 0; m < 4; ++m) c(m) = a.transpose() * gamma[m] * b;
    return c;
  };
  auto normalPart = [&](const Eigen::VectorXd& vec) -> Eigen::VectorXd {
    Eigen::VectorXd n = vec;
    n -= in.ip(n, d.e3) * d.e3 + in.ip(n, d.e4) * d.e4;
    return n;
  };
  Eigen::Matrix2d h1c, h2c;
  const Eigen::VectorXd ii[3] = {
      normalPart(jet.fuu + connection(jet.fu, jet.fu)),
      normalPart(jet.fuv + connection(jet.fu, jet.fv)),
      normalPart(jet.fvv + connection(jet.fv, jet.fv))};
  auto fill = [&](const Eigen::VectorXd& iiV, int a, int b) {
    h1c(a, b) = -in.ip(iiV, d.e1);
    h2c(a, b) = in.ip(iiV, d.e2);
  };
  fill(ii[0], 0, 0);
  fill(ii[1], 0, 1);
  fill(ii[2], 1, 1);
  h1c(1, 0) = h1c(0, 1);
  h2c(1, 0) = h2c(0, 1);

  const Eigen::Matrix2d cInv = d.gsCoeff.inverse();
  out.h1 = cInv * h1c * cInv.transpose();
  out.h2 = cInv * h2c * cInv.transpose();
  return out;
}

/// Residual of the transformation law of the second fundamental form under
/// the ambient rescaling e^{2 rho} eta of the flat model: the rescaled form
/// must differ from the flat one by the induced metric times the normal
/// part of the gradient of rho. Both sides are assembled as ambient vectors
/// from independently built frames, so the residual also covers the frame
/// alignment of the two backends.
inline double conformalChangeResidual(const Immersion& im,
                                      const std::function<double(const Eigen::Vector4d&)>& rho,
                                      double u, double v) {
  if (!im.form.flat()) {
    throw std::domain_error("conformalChangeResidual: needs the flat ambient model");
  }
  const SurfaceData flat = surfaceData(im, u, v);
  const SurfaceData scaled = surfaceDataConformal(im.chart, rho, u, v, im.fdStep);
  const Eigen::Vector4d x = flat.point;

  const double h = im.fdStep;
  Eigen::Vector4d grad;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    grad(k) = im.form.sig.eps(k) * (rho(xp) - rho(xm)) / (2.0 * h);
  }
  const Eigen::Vector4d e1 = flat.frame.col(0);
  const Eigen::Vector4d e2 = flat.frame.col(1);
  const Eigen::Vector4d nGrad =
      -inner(im.form.sig, grad, e1) * e1 + inner(im.form.sig, grad, e2) * e2;

  const double shrink = std::exp(-2.0 * rho(x));
  double worst = 0.0;
  for (const auto [a, b] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
    const Eigen::Vector4d lhs =
        scaled.h1(a, b) * scaled.frame.col(0) + scaled.h2(a, b) * scaled.frame.col(1);
    const Eigen::Vector4d iiFlat = flat.h1(a, b) * e1 + flat.h2(a, b) * e2;
    const Eigen::Vector4d rhs = shrink * (iiFlat - (a == b ? nGrad : Eigen::Vector4d::Zero().eval()));
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Null decomposition of the second fundamental form.

/// Trace and traceless data of the two null components. With
/// phi+ = (h1 + h2)/2 and phi- = (h2 - h1)/2:
///   mean curvature = hPlus (e1 + e2) + hMinus (e2 - e1),
/// and the traceless parts are encoded as the pairs (A, B) with matrix
/// [-A/2, B/2; B/2, A/2], so their moduli rotate like |A + iB|.
struct Decomposition {
  double hPlus = 0.0, hMinus = 0.0;
  double lPlusA = 0.0, lPlusB = 0.0;
  double lMinusA = 0.0, lMinusB = 0.0;

  double lPlusAbs() const { return std::hypot(lPlusA, lPlusB); }
  double lMinusAbs() const { return std::hypot(lMinusA, lMinusB); }
};

inline Decomposition decompose(const SurfaceData& s) {
  const Eigen::Matrix2d phiP = (s.h1 + s.h2) / 2.0;
  const Eigen::Matrix2d phiM = (s.h2 - s.h1) / 2.0;
  Decomposition d;
  d.hPlus = phiP.trace() / 2.0;
  d.hMinus = phiM.trace() / 2.0;
  d.lPlusA = phiP(1, 1) - phiP(0, 0);
  d.lPlusB = 2.0 * phiP(0, 1);
  d.lMinusA = phiM(1, 1) - phiM(0, 0);
  d.lMinusB = 2.0 * phiM(0, 1);
  return d;
}

/// Inverse of decompose, for exactness round trips.
inline std::pair<Eigen::Matrix2d, Eigen::Matrix2d> reconstructH(const Decomposition& d) {
  Eigen::Matrix2d h1, h2;
  h1 << d.hPlus - d.hMinus - d.lPlusA / 2.0 + d.lMinusA / 2.0, (d.lPlusB - d.lMinusB) / 2.0,
      (d.lPlusB - d.lMinusB) / 2.0, d.hPlus - d.hMinus + d.lPlusA / 2.0 - d.lMinusA / 2.0;
  h2 << d.hPlus + d.hMinus - d.lPlusA / 2.0 - d.lMinusA / 2.0, (d.lPlusB + d.lMinusB) / 2.0,
      (d.lPlusB + d.lMinusB) / 2.0, d.hPlus + d.hMinus + d.lPlusA / 2.0 + d.lMinusA / 2.0;
  return {h1, h2};
}

/// Pointwise zero tests of the four invariants.
struct SurfaceClass {
  Decomposition dec;
  double tol = 1e-8;

  bool hPlusZero() const { return std::abs(dec.hPlus) < tol; }
  bool hMinusZero() const { return std::abs(dec.hMinus) < tol; }
  bool lPlusZero() const { return dec.lPlusAbs() < tol; }
  bool lMinusZero() const { return dec.lMinusAbs() < tol; }
  bool totallyUmbilic() const { return lPlusZero() && lMinusZero(); }
  bool stationary() const { return hPlusZero() && hMinusZero(); }
};

inline SurfaceClass classify(const SurfaceData& s, double tol = 1e-8) {
  return {decompose(s), tol};
}

/// Mean curvature vector reassembled from the decomposition; lives in the
/// normal plane spanned by the frame normals.
inline Eigen::VectorXd meanCurvature(const SurfaceData& s) {
  const Decomposition d = decompose(s);
  return d.hPlus * (s.frame.col(0) + s.frame.col(1)) +
         d.hMinus * (s.frame.col(1) - s.frame.col(0));
}

}  // namespace lsl
