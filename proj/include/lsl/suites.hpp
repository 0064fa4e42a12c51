#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsl/families.hpp"
#include "lsl/immersion.hpp"
#include "lsl/metric.hpp"
#include "lsl/parallel.hpp"
#include "lsl/rng.hpp"
#include "lsl/space_form.hpp"
#include "lsl/twistor.hpp"

namespace lsl {

/// Outcome of one verification suite: a name, the worst residual it saw,
/// the tolerance it was judged against and suite specific detail numbers.
struct SuiteResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double tol = 0.0;
  nlohmann::ordered_json details;
};

inline nlohmann::ordered_json suiteToJson(const SuiteResult& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.name;
  j["pass"] = r.pass;
  j["worst"] = r.worst;
  j["tol"] = r.tol;
  j["details"] = r.details;
  return j;
}

namespace detail {

/// Evenly strided subgrid with at most maxSide nodes per direction.
inline std::vector<std::pair<double, double>> sampleNodes(const GridSpec& g, int maxSide) {
  std::vector<std::pair<double, double>> pts;
  const int si = std::max(1, g.nu / maxSide);
  const int sj = std::max(1, g.nv / maxSide);
  for (int i = 0; i < g.nu; i += si) {
    for (int j = 0; j < g.nv; j += sj) pts.push_back(gridPoint(g, i, j));
  }
  return pts;
}

}  // namespace detail

/// Grid sweep of the invariants that must vanish on a family. Every
/// catalogued family kills the negative traceless part L- (its positive
/// lift is holomorphic for the parallel fibre structure); the i type
/// families with zero slicing constant lose the negative trace H- as
/// well. Set tracelessOnly for the weaker check.
inline SuiteResult isotropySuite(const Immersion& im, double tol = 1e-6,
                                 bool tracelessOnly = false) {
  const std::size_t n = static_cast<std::size_t>(im.grid.nu) * im.grid.nv;
  std::vector<double> hm(n), lm(n), hp(n), lp(n);
  parallelFor(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / im.grid.nv;
    const int j = static_cast<int>(idx) % im.grid.nv;
    const auto [u, v] = gridPoint(im.grid, i, j);
    const Decomposition d = decompose(surfaceData(im, u, v));
    hm[idx] = std::abs(d.hMinus);
    lm[idx] = d.lMinusAbs();
    hp[idx] = std::abs(d.hPlus);
    lp[idx] = d.lPlusAbs();
  });
  SuiteResult r;
  r.name = tracelessOnly ? "isotropy:traceless" : "isotropy";
  r.tol = tol;
  const double worstHM = *std::max_element(hm.begin(), hm.end());
  const double worstLM = *std::max_element(lm.begin(), lm.end());
  r.worst = tracelessOnly ? worstLM : std::max(worstHM, worstLM);
  r.pass = r.worst < tol;
  r.details["max_abs_H_minus"] = worstHM;
  r.details["max_L_minus"] = worstLM;
  r.details["max_abs_H_plus"] = *std::max_element(hp.begin(), hp.end());
  r.details["max_L_plus"] = *std::max_element(lp.begin(), lp.end());
  return r;
}

/// Holomorphicity of a chosen lift over a strided subgrid. The worst J
/// residual decides; immersion and nondegeneracy margins are reported.
inline SuiteResult holomorphySuite(const Immersion& im, Structure structure, double tol = 1e-5,
                                   int maxSide = 8) {
  const auto pts = detail::sampleNodes(im.grid, maxSide);
  std::vector<HolomorphyReport> reps(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) {
    const SurfaceData s = surfaceData(im, pts[k].first, pts[k].second);
    reps[k] = holomorphyCheck(im.form, s, structure, tol);
  });
  SuiteResult r;
  r.name = std::string("holomorphy:") + structureName(structure);
  r.tol = tol;
  double worstJ = 0.0, worstL = 0.0, minK = std::numeric_limits<double>::max();
  bool all = true;
  for (const auto& rep : reps) {
    worstJ = std::max(worstJ, rep.residualJ);
    worstL = std::max(worstL, rep.residualL);
    minK = std::min(minK, rep.residualK);
    all = all && rep.verdict();
  }
  r.worst = worstJ;
  r.pass = all && worstJ < tol;
  r.details["max_residual_J"] = worstJ;
  r.details["max_residual_L"] = worstL;
  r.details["min_residual_K"] = minK;
  r.details["points"] = pts.size();
  return r;
}

/// Agreement table between the classification of a surface and the
/// holomorphicity of its lifts: for each of the six fibre structures, the
/// structure's invariant vanishes over the grid exactly when the matching
/// lift passes the pointwise holomorphy check everywhere. The two sides
/// come from different code paths (trace decomposition versus lift
/// differential), so agreement is the content, not a tautology.
inline SuiteResult equivalenceSuite(const Immersion& im, double tol = 1e-4, int maxSide = 8) {
  const auto pts = detail::sampleNodes(im.grid, maxSide);
  std::vector<SurfaceData> data(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) {
    data[k] = surfaceData(im, pts[k].first, pts[k].second);
  });

  SuiteResult r;
  r.name = "equivalence";
  r.tol = tol;
  r.pass = true;
  r.worst = 0.0;
  r.details["surface"] = im.name;
  r.details["points"] = pts.size();
  r.details["rows"] = nlohmann::ordered_json::array();
  for (Structure st : kAllStructures) {
    double supInv = 0.0, supJ = 0.0;
    bool holo = true;
    for (const auto& s : data) {
      supInv = std::max(supInv, structureInvariant(decompose(s), st));
      const HolomorphyReport rep = holomorphyCheck(im.form, s, st, tol);
      supJ = std::max(supJ, rep.residualJ);
      holo = holo && rep.verdict();
    }
    const bool vanishes = supInv < tol;
    const bool agree = (vanishes == holo);
    if (vanishes) r.worst = std::max(r.worst, supJ);
    r.pass = r.pass && agree;
    r.details["rows"].push_back({{"structure", structureName(st)},
                                 {"invariant_sup", supInv},
                                 {"residual_J_sup", supJ},
                                 {"invariant_vanishes", vanishes},
                                 {"lift_holomorphic", holo},
                                 {"agree", agree}});
  }
  return r;
}

/// Conformal rescaling audit on a flat model surface: the second
/// fundamental form must follow the transformation law, while the negative
/// traceless flag and the parallel structure holomorphy verdict must come
/// out the same for both metrics. The skew structure verdict is allowed to
/// change and is only reported.
inline SuiteResult conformalChangeSuite(const Immersion& im,
                                        const std::function<double(const Eigen::Vector4d&)>& rho,
                                        double tol = 1e-5, double flagTol = 1e-4,
                                        int maxSide = 4) {
  const auto pts = detail::sampleNodes(im.grid, maxSide);
  std::vector<double> identity(pts.size());
  std::vector<int> flagsAgree(pts.size()), verdictsAgree(pts.size()), skewAgree(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) {
    const auto [u, v] = pts[k];
    identity[k] = conformalChangeResidual(im, rho, u, v);
    const SurfaceData flat = surfaceData(im, u, v);
    const SurfaceData scaled = surfaceDataConformal(im.chart, rho, u, v, im.fdStep);
    const Decomposition df = decompose(flat);
    const Decomposition ds = decompose(scaled);
    flagsAgree[k] = (df.lMinusAbs() < flagTol) == (ds.lMinusAbs() < flagTol);
    const auto verdict = [&](const SurfaceData& s, Structure st) {
      return holomorphyCheck(im.form, s, st, flagTol).verdict();
    };
    verdictsAgree[k] = verdict(flat, Structure::OPP) == verdict(scaled, Structure::OPP);
    skewAgree[k] = verdict(flat, Structure::OPM) == verdict(scaled, Structure::OPM);
  });
  SuiteResult r;
  r.name = "conformal-change";
  r.tol = tol;
  r.worst = *std::max_element(identity.begin(), identity.end());
  const bool flags = std::all_of(flagsAgree.begin(), flagsAgree.end(), [](int b) { return b; });
  const bool verdicts =
      std::all_of(verdictsAgree.begin(), verdictsAgree.end(), [](int b) { return b; });
  r.pass = r.worst < tol && flags && verdicts;
  r.details["max_identity_residual"] = r.worst;
  r.details["traceless_flags_stable"] = flags;
  r.details["parallel_verdicts_stable"] = verdicts;
  r.details["skew_verdicts_stable"] =
      std::all_of(skewAgree.begin(), skewAgree.end(), [](int b) { return b; });
  r.details["points"] = pts.size();
  return r;
}

/// Rebuilds a family as a null graph over its umbilic base and compares the
/// two charts node by node. The catalogued families are affine in the
/// support function, so agreement is limited only by the frame residuals.
inline SuiteResult deformationSuite(const FamilySpec& spec, double tol = 1e-5) {
  const Immersion family = buildFamily(spec);
  const Immersion graph = deformNull(familyBase(spec), spec.lambda);
  const std::size_t n = static_cast<std::size_t>(spec.grid.nu) * spec.grid.nv;
  std::vector<double> diff(n);
  parallelFor(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / spec.grid.nv;
    const int j = static_cast<int>(idx) % spec.grid.nv;
    const auto [u, v] = gridPoint(spec.grid, i, j);
    diff[idx] = (family.chart(u, v) - graph.chart(u, v)).norm();
  });
  SuiteResult r;
  r.name = "deformation";
  r.tol = tol;
  r.worst = *std::max_element(diff.begin(), diff.end());
  r.pass = r.worst < tol;
  r.details["nodes"] = n;
  r.details["family"] = family.name;
  r.details["base"] = familyBase(spec).name;
  return r;
}

/// First variation of the positive mean curvature along an i type family
/// against the production coefficient of its support function. Uses a
/// symmetric difference in the family scale, so the check is second order
/// accurate in the probe scale.
inline SuiteResult coefficientSuite(const FamilySpec& spec, double probe = 1e-2,
                                    double tol = 1e-3, int maxSide = 4) {
  if (!isIType(spec)) {
    throw std::domain_error("coefficientSuite: defined for the i type families only");
  }
  FamilySpec plus = spec;
  FamilySpec minus = spec;
  const LambdaFn lam = spec.lambda;
  plus.lambda = [lam, probe](double u, double v) { return probe * lam(u, v); };
  minus.lambda = [lam, probe](double u, double v) { return -probe * lam(u, v); };
  const Immersion imP = buildFamily(plus);
  const Immersion imM = buildFamily(minus);

  const auto pts = detail::sampleNodes(spec.grid, maxSide);
  std::vector<double> err(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) {
    const auto [u, v] = pts[k];
    const double hp = decompose(surfaceData(imP, u, v)).hPlus;
    const double hm = decompose(surfaceData(imM, u, v)).hPlus;
    const double variation = (hp - hm) / (2.0 * probe);
    err[k] = std::abs(variation - 0.5 * isotropyCoefficient(spec, u, v));
  });
  SuiteResult r;
  r.name = "coefficient";
  r.tol = tol;
  r.worst = *std::max_element(err.begin(), err.end());
  r.pass = r.worst < tol;
  r.details["probe"] = probe;
  r.details["points"] = pts.size();
  return r;
}

/// Curvature obstructions of the two lift bundles for an ambient metric
/// chart, sampled over random points and random adapted frames.
inline SuiteResult integrabilityAudit(const MetricChart& chart, int nPoints, int nFrames,
                                      std::uint64_t seed, double tol = 1e-4) {
  Rng rng(seed);
  double twistorWorst = 0.0, grassWorst = 0.0;
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (int p = 0; p < nPoints; ++p) {
    Eigen::Vector4d x;
    for (int k = 0; k < 4; ++k) x(k) = rng.uniform(-0.2, 0.2);
    const auto riem = riemannNumeric(chart, x);
    const Eigen::Matrix4d g = chart.g(x);
    double tw = 0.0, gw = 0.0;
    for (int f = 0; f < nFrames; ++f) {
      const Eigen::Matrix4d frame = randomAdaptedFrame(g, rng);
      const FrameTensor ft = frameComponents(riem, frame);
      const TwistorIntegrability ti = twistorIntegrability(ft);
      const GrassIntegrability gi = grassIntegrability(ft);
      tw = std::max(tw, ti.maxAbs());
      gw = std::max(gw, gi.maxAbs());
    }
    twistorWorst = std::max(twistorWorst, tw);
    grassWorst = std::max(grassWorst, gw);
    samples.push_back({{"twistor", tw}, {"grass", gw}});
  }
  SuiteResult r;
  r.name = "integrability:" + chart.name;
  r.tol = tol;
  r.worst = twistorWorst;
  r.pass = twistorWorst < tol;
  r.details["twistor_worst"] = twistorWorst;
  r.details["grass_worst"] = grassWorst;
  r.details["grass_obstructed"] = grassWorst >= tol;
  r.details["samples"] = samples;
  return r;
}

/// Vanishing of the deformation tensor of the observer field along a
/// surface, the hallmark of the catalogued ambients.
inline SuiteResult observerShearSuite(const Immersion& im, double tol = 1e-6, int maxSide = 4) {
  const auto pts = detail::sampleNodes(im.grid, maxSide);
  std::vector<double> worst(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) {
    worst[k] = crCompare(im, pts[k].first, pts[k].second).maxAbs();
  });
  SuiteResult r;
  r.name = "observer-shear";
  r.tol = tol;
  r.worst = *std::max_element(worst.begin(), worst.end());
  r.pass = r.worst < tol;
  r.details["points"] = pts.size();
  return r;
}

/// Harmonicity of the Gauss lift for a prescribed coupling constant.
inline SuiteResult tensionSuite(const Immersion& im, double lambdaG, double tol = 1e-5,
                                int maxSide = 4) {
  const auto pts = detail::sampleNodes(im.grid, maxSide);
  std::vector<TensionReport> reps(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) {
    reps[k] = gaussTension(im, pts[k].first, pts[k].second, lambdaG);
  });
  SuiteResult r;
  r.name = "tension";
  r.tol = tol;
  double h = 0.0, v = 0.0;
  for (const auto& rep : reps) {
    h = std::max(h, rep.horizontal);
    for (double c : rep.vertical) v = std::max(v, std::abs(c));
  }
  r.worst = std::max(h, v);
  r.pass = r.worst < tol;
  r.details["lambda_g"] = lambdaG;
  r.details["max_horizontal"] = h;
  r.details["max_vertical"] = v;
  return r;
}

/// Stereographic transport of the curvature +1 family with slicing
/// constant zero into the flat model: the image chart must coincide with
/// the flat family whose support is rescaled by the conformal factor, and
/// the conformal backend must see the same isotropy on the image.
inline SuiteResult transportSuite(const LambdaFn& lambda, const GridSpec& grid,
                                  double fdStep = 1e-3, double chartTol = 1e-12,
                                  double isoTol = 1e-5) {
  FamilySpec spec;
  spec.form = SpaceForm::s41();
  spec.tag = FamilyTag::ICLambda;
  spec.c = 0.0;
  spec.lambda = lambda;
  spec.grid = grid;
  spec.fdStep = fdStep;
  const Immersion sphereFam = buildFamily(spec);

  const LambdaFn lam = lambda;
  Immersion flatFam;
  flatFam.form = SpaceForm::r41();
  flatFam.grid = grid;
  flatFam.fdStep = fdStep;
  flatFam.name = "r41:i:transported";
  flatFam.chart = [lam](double u, double v) -> Eigen::VectorXd {
    Eigen::VectorXd x(4);
    const double scale = (1.0 + u * u + v * v) / 2.0;
    const double l = scale * lam(u, v);
    x << l, l, u, v;
    return x;
  };

  const std::size_t n = static_cast<std::size_t>(grid.nu) * grid.nv;
  std::vector<double> chartDiff(n);
  parallelFor(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / grid.nv;
    const int j = static_cast<int>(idx) % grid.nv;
    const auto [u, v] = gridPoint(grid, i, j);
    const Eigen::Vector4d img = stereoProject(sphereFam.chart(u, v));
    chartDiff[idx] = (img - flatFam.chart(u, v)).norm();
  });

  const auto rho = [](const Eigen::Vector4d& p) { return stereoConformalExponent(p); };
  const auto pts = detail::sampleNodes(grid, 4);
  std::vector<double> iso(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) {
    const SurfaceData s =
        surfaceDataConformal(flatFam.chart, rho, pts[k].first, pts[k].second, fdStep);
    const Decomposition d = decompose(s);
    iso[k] = std::max(std::abs(d.hMinus), d.lMinusAbs());
  });

  SuiteResult r;
  r.name = "transport";
  r.tol = chartTol;
  r.worst = *std::max_element(chartDiff.begin(), chartDiff.end());
  const double isoWorst = *std::max_element(iso.begin(), iso.end());
  r.pass = r.worst < chartTol && isoWorst < isoTol;
  r.details["max_chart_difference"] = r.worst;
  r.details["max_image_isotropy_residual"] = isoWorst;
  r.details["isotropy_tol"] = isoTol;
  return r;
}

/// Step halving on the flat family residual |H+ - laplacian/2| with an
/// analytically differentiated support function; second order differencing
/// should shrink the residual by about a factor of four.
inline SuiteResult convergenceSuite(double h0 = 1e-3, double lo = 3.0, double hi = 5.0) {
  const auto errAt = [&](double h) {
    FamilySpec spec;
    spec.form = SpaceForm::r41();
    spec.tag = FamilyTag::ILambda;
    spec.lambda = lambdaLibrary("gauss");
    spec.fdStep = h;
    const Immersion im = buildFamily(spec);
    const double u = 0.21, v = -0.13;
    const double q = u * u + v * v;
    const double exact = 0.5 * (4.0 * q - 4.0) * std::exp(-q);
    return std::abs(decompose(surfaceData(im, u, v)).hPlus - exact);
  };
  const double e1 = errAt(h0);
  const double e2 = errAt(h0 / 2.0);
  SuiteResult r;
  r.name = "convergence";
  r.tol = hi;
  const double ratio = e1 / e2;
  r.worst = ratio;
  r.pass = ratio > lo && ratio < hi;
  r.details["step"] = h0;
  r.details["error_full"] = e1;
  r.details["error_half"] = e2;
  r.details["ratio"] = ratio;
  r.details["window"] = {lo, hi};
  return r;
}

/// The standard verification battery for a family specification. Every
/// family is isotropic in the traceless sense, so its positive lift is
/// holomorphic for the parallel fibre structure; the i type ones are in
/// addition free of negative mean curvature, picking up the skew
/// structure and the variation coefficient identity.
inline std::vector<SuiteResult> verifyFamily(const FamilySpec& spec, double tol = 1e-5) {
  std::vector<SuiteResult> out;
  const Immersion im = buildFamily(spec);
  out.push_back(isotropySuite(im, tol, !isIType(spec)));
  out.push_back(holomorphySuite(im, Structure::OPP, 1e-5));
  if (isIType(spec)) {
    out.push_back(holomorphySuite(im, Structure::OPM, 1e-5));
    out.push_back(coefficientSuite(spec));
  }
  out.push_back(deformationSuite(spec));
  out.push_back(observerShearSuite(familyBase(spec)));
  return out;
}

}  // namespace lsl
