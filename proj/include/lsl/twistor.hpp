#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "lsl/immersion.hpp"
#include "lsl/metric.hpp"
#include "lsl/space_form.hpp"

namespace lsl {

/// The six lift targets: four null-direction bundles distinguished by which
/// null normal is tracked and by the fibre complex structure sign, and the
/// two oriented tangent plane bundles.
enum class Structure { OPP, OPM, OMP, OMM, OGP, OGM };

inline const char* structureName(Structure s) {
  switch (s) {
    case Structure::OPP: return "o++";
    case Structure::OPM: return "o+-";
    case Structure::OMP: return "o-+";
    case Structure::OMM: return "o--";
    case Structure::OGP: return "og+";
    default: return "og-";
  }
}

inline Structure structureFromName(const std::string& name) {
  for (Structure s : {Structure::OPP, Structure::OPM, Structure::OMP, Structure::OMM,
                      Structure::OGP, Structure::OGM}) {
    if (name == structureName(s)) return s;
  }
  throw std::invalid_argument("unknown structure name: " + name);
}

constexpr std::array<Structure, 6> kAllStructures = {Structure::OPP, Structure::OPM,
                                                     Structure::OMP, Structure::OMM,
                                                     Structure::OGP, Structure::OGM};

// ---------------------------------------------------------------------------
// Vertical components of the lifts, from the second fundamental form.

/// Null-direction lift verticals on X in {e3, e4} (column index): the
/// positive lift differentiates k+ and sees (h2 - h1)/2, the negative one
/// differentiates k- and sees -(h1 + h2)/2.
inline Eigen::Matrix2d twistorVertical(const SurfaceData& s, bool positive) {
  const Eigen::Matrix2d phi = positive ? ((s.h2 - s.h1) / 2.0).eval()
                                       : ((-(s.h1 + s.h2)) / 2.0).eval();
  Eigen::Matrix2d v;
  v.col(0) = phi.col(0);  // (phi(X,e3), phi(X,e4)) for X = e3
  v.col(1) = phi.col(1);
  return v;
}

/// Tangent-plane lift verticals: rotation coefficients of the normal frame
/// along the tangents, stacked as (e1 toward e3, e2 toward e3, e1 toward
/// e4, e2 toward e4) per column X in {e3, e4}.
inline Eigen::Matrix<double, 4, 2> grassVertical(const SurfaceData& s) {
  Eigen::Matrix<double, 4, 2> w;
  for (int xi = 0; xi < 2; ++xi) {
    w(0, xi) = -s.h1(xi, 0);
    w(1, xi) = -s.h2(xi, 0);
    w(2, xi) = -s.h1(xi, 1);
    w(3, xi) = -s.h2(xi, 1);
  }
  return w;
}

/// Fibre complex structures in the vertical coordinates used above.
inline Eigen::Vector2d fibreAction(Structure st, const Eigen::Vector2d& v) {
  switch (st) {
    case Structure::OPP:
    case Structure::OMP:
      return {-v(1), v(0)};
    case Structure::OPM:
    case Structure::OMM:
      return {v(1), -v(0)};
    default:
      throw std::invalid_argument("fibreAction: two component form is for the null lifts");
  }
}

inline Eigen::Vector4d fibreAction4(Structure st, const Eigen::Vector4d& w) {
  if (st == Structure::OGP) return {-w(2), -w(3), w(0), w(1)};
  if (st == Structure::OGM) return {w(2), w(3), -w(0), -w(1)};
  throw std::invalid_argument("fibreAction4: four component form is for the plane lifts");
}

// ---------------------------------------------------------------------------
// Pointwise holomorphy report.

struct HolomorphyReport {
  Structure structure;
  double residualL = 0.0;  // lift tautology: tangents must annihilate the tracked normals
  double residualK = 0.0;  // smallest singular value of the lift differential
  double residualJ = 0.0;  // defect of complex linearity of the vertical part
  double tol = 1e-8;

  bool verdict() const { return residualL < tol && residualK > tol && residualJ < tol; }
};

inline HolomorphyReport holomorphyCheck(const SpaceForm& form, const SurfaceData& s,
                                        Structure st, double tol = 1e-8) {
  HolomorphyReport rep;
  rep.structure = st;
  rep.tol = tol;

  const bool grass = (st == Structure::OGP || st == Structure::OGM);
  const bool positive = (st == Structure::OPP || st == Structure::OPM);

  // Tautology residual: the tracked normal data must stay orthogonal to the
  // tangent directions.
  auto pairAbs = [&](const Eigen::VectorXd& n) {
    return std::max(std::abs(inner(form.sig, n, Eigen::VectorXd(s.frame.col(2)))),
                    std::abs(inner(form.sig, n, Eigen::VectorXd(s.frame.col(3)))));
  };
  if (grass) {
    rep.residualL = std::max(pairAbs(s.frame.col(0)), pairAbs(s.frame.col(1)));
  } else if (st == Structure::OPP || st == Structure::OPM) {
    rep.residualL = pairAbs(s.kPlus);
  } else {
    rep.residualL = pairAbs(s.kMinus);
  }

  // Complex linearity of the vertical part on (e3, e4); the horizontal
  // screen parts of the two defect vectors cancel identically, so only the
  // fibre components appear.
  if (!grass) {
    const Eigen::Matrix2d v = twistorVertical(s, positive);
    const Eigen::Vector2d d1 = v.col(1) - fibreAction(st, v.col(0));
    const Eigen::Vector2d d2 = v.col(0) + fibreAction(st, v.col(1));
    rep.residualJ = d1.norm() + d2.norm();

    Eigen::Matrix<double, 4, 2> lift;
    lift.topRows<2>() = Eigen::Matrix2d::Identity();  // screen part of the differential
    lift.bottomRows<2>() = v;
    rep.residualK = lift.jacobiSvd().singularValues().minCoeff();
  } else {
    const Eigen::Matrix<double, 4, 2> w = grassVertical(s);
    const Eigen::Vector4d d1 = w.col(1) - fibreAction4(st, w.col(0));
    const Eigen::Vector4d d2 = w.col(0) + fibreAction4(st, w.col(1));
    rep.residualJ = d1.norm() + d2.norm();

    Eigen::Matrix<double, 6, 2> lift;
    lift.topRows<2>() = Eigen::Matrix2d::Identity();
    lift.bottomRows<4>() = w;
    rep.residualK = lift.jacobiSvd().singularValues().minCoeff();
  }
  return rep;
}

/// The invariant that must vanish for each lift to be holomorphic, together
/// with the exact factor relating it to residualJ above.
inline double structureInvariant(const Decomposition& d, Structure st) {
  switch (st) {
    case Structure::OPP: return d.lMinusAbs();
    case Structure::OPM: return std::abs(d.hMinus);
    case Structure::OMP: return d.lPlusAbs();
    case Structure::OMM: return std::abs(d.hPlus);
    case Structure::OGP:
      return std::hypot(d.lPlusAbs(), d.lMinusAbs());
    default:
      return std::hypot(d.hPlus, d.hMinus);
  }
}

inline double structureResidualFactor(Structure st) {
  switch (st) {
    case Structure::OPP:
    case Structure::OMP: return 2.0;
    case Structure::OPM:
    case Structure::OMM: return 4.0;
    case Structure::OGP: return 2.0 * std::sqrt(2.0);
    default: return 4.0 * std::sqrt(2.0);
  }
}

// ---------------------------------------------------------------------------
// Independent verticals by differencing the normal fields over the chart.

namespace detail {

/// Directional derivative operators along (e3, e4) in chart coordinates,
/// from the Gram-Schmidt coefficients: e3 = t1 / C00 and
/// e4 = (t2 - (C10/C00) t1) / C11.
template <typename Field>
std::pair<Eigen::VectorXd, Eigen::VectorXd> frameDerivs(const Field& field,
                                                        const SurfaceData& centre, double u,
                                                        double v, double h) {
  const Eigen::VectorXd du = (field(u + h, v) - field(u - h, v)) / (2.0 * h);
  const Eigen::VectorXd dv = (field(u, v + h) - field(u, v - h)) / (2.0 * h);
  const double c00 = centre.gsCoeff(0, 0);
  const double c10 = centre.gsCoeff(1, 0);
  const double c11 = centre.gsCoeff(1, 1);
  Eigen::VectorXd d3 = du / c00;
  Eigen::VectorXd d4 = (dv - (c10 / c00) * du) / c11;
  return {d3, d4};
}

}  // namespace detail

/// Vertical components recovered from the differentiated null normal field:
/// the tangential components of the derivative of the frame-normalised
/// representatives e1 + e2 and e1 - e2, halved and negated. Differencing
/// the observer-normalised sections instead would drag in the derivative
/// of their relative scale. Agrees with twistorVertical up to stencil
/// error.
inline Eigen::Matrix2d twistorVerticalByDifferencing(const Immersion& im, double u, double v,
                                                     bool positive) {
  const SurfaceData centre = surfaceData(im, u, v);
  const double sign = positive ? 1.0 : -1.0;
  auto field = [&](double uu, double vv) -> Eigen::VectorXd {
    const SurfaceData s = surfaceData(im, uu, vv);
    return s.frame.col(0) + sign * s.frame.col(1);
  };
  const auto [d3, d4] = detail::frameDerivs(field, centre, u, v, im.fdStep);
  const Eigen::VectorXd e3 = centre.frame.col(2);
  const Eigen::VectorXd e4 = centre.frame.col(3);
  Eigen::Matrix2d vMat;
  vMat(0, 0) = -0.5 * inner(im.form.sig, d3, e3);
  vMat(1, 0) = -0.5 * inner(im.form.sig, d3, e4);
  vMat(0, 1) = -0.5 * inner(im.form.sig, d4, e3);
  vMat(1, 1) = -0.5 * inner(im.form.sig, d4, e4);
  return vMat;
}

/// Same cross-check for the plane lift: rotation coefficients of the
/// differentiated normal frame fields.
inline Eigen::Matrix<double, 4, 2> grassVerticalByDifferencing(const Immersion& im, double u,
                                                               double v) {
  const SurfaceData centre = surfaceData(im, u, v);
  auto fieldE1 = [&](double uu, double vv) -> Eigen::VectorXd {
    return surfaceData(im, uu, vv).frame.col(0);
  };
  auto fieldE2 = [&](double uu, double vv) -> Eigen::VectorXd {
    return surfaceData(im, uu, vv).frame.col(1);
  };
  const auto [d3e1, d4e1] = detail::frameDerivs(fieldE1, centre, u, v, im.fdStep);
  const auto [d3e2, d4e2] = detail::frameDerivs(fieldE2, centre, u, v, im.fdStep);
  const Eigen::VectorXd e3 = centre.frame.col(2);
  const Eigen::VectorXd e4 = centre.frame.col(3);
  const auto& sig = im.form.sig;
  Eigen::Matrix<double, 4, 2> w;
  w(0, 0) = -inner(sig, d3e1, e3);
  w(1, 0) = inner(sig, d3e2, e3);
  w(2, 0) = -inner(sig, d3e1, e4);
  w(3, 0) = inner(sig, d3e2, e4);
  w(0, 1) = -inner(sig, d4e1, e3);
  w(1, 1) = inner(sig, d4e2, e3);
  w(2, 1) = -inner(sig, d4e1, e4);
  w(3, 1) = inner(sig, d4e2, e4);
  return w;
}

// ---------------------------------------------------------------------------
// Curvature obstructions to integrability of the bundle structures.

/// Curvature in an adapted frame, component access by frame index,
/// timelike slot first.
using FrameTensor = std::function<double(int, int, int, int)>;

inline FrameTensor frameComponents(const Riem4& r, const Eigen::Matrix4d& f) {
  return [r, f](int a, int b, int c, int d) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
          for (int l = 0; l < 4; ++l) {
            s += r[i][j][k][l] * f(i, a) * f(j, b) * f(k, c) * f(l, d);
          }
        }
      }
    }
    return s;
  };
}

/// Exact frame components of a constant curvature space: no differencing,
/// so the integrability combinations cancel to literal zero.
inline FrameTensor constantCurvatureFrame(double curv) {
  return [curv](int a, int b, int c, int d) {
    const double eps[4] = {-1.0, 1.0, 1.0, 1.0};
    const double gac = (a == c) ? eps[a] : 0.0;
    const double gbd = (b == d) ? eps[b] : 0.0;
    const double gad = (a == d) ? eps[a] : 0.0;
    const double gbc = (b == c) ? eps[b] : 0.0;
    return curv * (gac * gbd - gad * gbc);
  };
}

struct TwistorIntegrability {
  double c1 = 0.0, c2 = 0.0;
  double maxAbs() const { return std::max(std::abs(c1), std::abs(c2)); }
};

struct GrassIntegrability {
  double g1 = 0.0, g2 = 0.0, g3 = 0.0, g4 = 0.0;
  double maxAbs() const {
    return std::max(std::max(std::abs(g1), std::abs(g2)), std::max(std::abs(g3), std::abs(g4)));
  }
};

/// Frame combinations that obstruct the null-direction bundle structures;
/// both vanish for every adapted frame exactly when the space admits them.
inline TwistorIntegrability twistorIntegrability(const FrameTensor& r) {
  TwistorIntegrability out;
  out.c1 = r(0, 3, 0, 2) + r(1, 3, 0, 2) + r(0, 3, 1, 2) + r(1, 3, 1, 2);
  out.c2 = r(0, 3, 0, 3) + r(1, 3, 0, 3) + r(0, 3, 1, 3) + r(1, 3, 1, 3) -
           r(0, 2, 0, 2) - r(1, 2, 0, 2) - r(0, 2, 1, 2) - r(1, 2, 1, 2);
  return out;
}

/// The finer combinations obstructing the plane bundle structures; their
/// simultaneous vanishing is strictly stronger, c2 = g1 + g2.
inline GrassIntegrability grassIntegrability(const FrameTensor& r) {
  GrassIntegrability out;
  out.g1 = r(0, 3, 0, 3) + r(1, 3, 0, 3) - r(0, 2, 0, 2) - r(1, 2, 0, 2);
  out.g2 = r(0, 3, 1, 3) + r(1, 3, 1, 3) - r(0, 2, 1, 2) - r(1, 2, 1, 2);
  out.g3 = 2.0 * r(0, 2, 0, 3) + r(1, 2, 0, 3) + r(1, 3, 0, 2);
  out.g4 = 2.0 * r(1, 2, 1, 3) + r(0, 3, 1, 2) + r(0, 2, 1, 3);
  return out;
}

// ---------------------------------------------------------------------------
// Tension of the plane lift and comparison against the reference slicing.

/// Residual of the harmonic map equation for the plane lift, with the fibre
/// metric scaled by lambdaG. The horizontal part is proportional to the
/// mean curvature, suppressed entirely at lambdaG = 12/curvature; the
/// vertical parts are the tangential derivatives of the two mean curvature
/// components.
struct TensionReport {
  double horizontal = 0.0;
  std::array<double, 4> vertical{};  // e3(m1), e4(m1), e3(m2), e4(m2)

  double maxResidual() const {
    double m = horizontal;
    for (double v : vertical) m = std::max(m, std::abs(v));
    return m;
  }
};

inline TensionReport gaussTension(const Immersion& im, double u, double v, double lambdaG) {
  const SurfaceData centre = surfaceData(im, u, v);
  const Decomposition dec = decompose(centre);

  TensionReport rep;
  rep.horizontal = std::abs(1.0 - lambdaG * im.form.curvature / 12.0) *
                   std::hypot(dec.hPlus - dec.hMinus, dec.hPlus + dec.hMinus);

  for (int alpha = 0; alpha < 2; ++alpha) {
    auto field = [&](double uu, double vv) -> Eigen::VectorXd {
      const SurfaceData s = surfaceData(im, uu, vv);
      Eigen::VectorXd m(1);
      m(0) = (alpha == 0) ? s.h1.trace() : s.h2.trace();
      return m;
    };
    const auto [d3, d4] = detail::frameDerivs(field, centre, u, v, im.fdStep);
    rep.vertical[2 * alpha] = d3(0);
    rep.vertical[2 * alpha + 1] = d4(0);
  }
  return rep;
}

/// Defects of the canonical timelike normal (the normal projection of the
/// reference observer) against the surface: the traceless part of its shape
/// operator. Zero exactly on the catalogued aligned spheres, where the
/// field is constant along the surface.
struct CrReport {
  double d1 = 0.0;  // difference of the two diagonal rotation coefficients
  double d2 = 0.0;  // mixed rotation coefficient

  double maxAbs() const { return std::max(std::abs(d1), std::abs(d2)); }
};

inline CrReport crCompare(const Immersion& im, double u, double v) {
  const SurfaceData centre = surfaceData(im, u, v);
  const auto& sig = im.form.sig;
  auto s1Field = [&](double uu, double vv) -> Eigen::VectorXd {
    const SurfaceData s = surfaceData(im, uu, vv);
    Eigen::VectorXd n = s.tObserver -
                        inner(sig, s.tObserver, Eigen::VectorXd(s.frame.col(2))) * s.frame.col(2) -
                        inner(sig, s.tObserver, Eigen::VectorXd(s.frame.col(3))) * s.frame.col(3);
    return n / std::sqrt(-inner(sig, n, n));
  };
  const auto [d3, d4] = detail::frameDerivs(s1Field, centre, u, v, im.fdStep);
  const Eigen::VectorXd e3 = centre.frame.col(2);
  const Eigen::VectorXd e4 = centre.frame.col(3);
  CrReport rep;
  rep.d1 = inner(sig, d3, e3) - inner(sig, d4, e4);
  rep.d2 = inner(sig, d3, e4);
  return rep;
}

}  // namespace lsl
