#include <catch2/catch.hpp>

#include <cmath>

#include "lsl/families.hpp"
#include "lsl/lie.hpp"
#include "lsl/metric.hpp"
#include "lsl/rng.hpp"
#include "lsl/suites.hpp"
#include "lsl/twistor.hpp"

using namespace lsl;

namespace {

/// Synthetic pointwise data on the flat model with the standard frame, so
/// the holomorphy report depends on the prescribed forms alone.
SurfaceData syntheticData(const Decomposition& d) {
  SurfaceData s;
  s.point = Eigen::VectorXd::Zero(4);
  s.frame = Eigen::MatrixXd::Identity(4, 4);
  s.tObserver = Eigen::VectorXd::Unit(4, 0);
  s.kPlus = Eigen::VectorXd::Zero(4);
  s.kPlus(0) = 1.0;
  s.kPlus(1) = 1.0;
  s.kMinus = Eigen::VectorXd::Zero(4);
  s.kMinus(0) = 1.0;
  s.kMinus(1) = -1.0;
  const auto [h1, h2] = reconstructH(d);
  s.h1 = h1;
  s.h2 = h2;
  return s;
}

Immersion sliceFamily(std::uint64_t seed) {
  FamilySpec spec;
  spec.form = SpaceForm::s41();
  spec.tag = FamilyTag::ICLambda;
  spec.c = 0.4;
  spec.lambda = lambdaLibrary("randsmooth", seed);
  return buildFamily(spec);
}

}  // namespace

TEST_CASE("holomorphy residual equals the vanishing invariant times the exact factor") {
  Rng rng(2024);
  const SpaceForm form = SpaceForm::r41();
  for (int trial = 0; trial < 24; ++trial) {
    Decomposition d;
    d.hPlus = rng.uniform(-1.5, 1.5);
    d.hMinus = rng.uniform(-1.5, 1.5);
    d.lPlusA = rng.uniform(-1.5, 1.5);
    d.lPlusB = rng.uniform(-1.5, 1.5);
    d.lMinusA = rng.uniform(-1.5, 1.5);
    d.lMinusB = rng.uniform(-1.5, 1.5);
    const SurfaceData s = syntheticData(d);
    for (Structure st : kAllStructures) {
      const HolomorphyReport rep = holomorphyCheck(form, s, st, 1e-8);
      const double expect = structureResidualFactor(st) * structureInvariant(d, st);
      CHECK(rep.residualJ == Approx(expect).margin(1e-12));
      CHECK(rep.residualL < 1e-14);
      CHECK(rep.residualK >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("the verdict isolates exactly the invariant that vanishes") {
  Rng rng(5);
  Decomposition d;
  d.hPlus = rng.uniform(0.5, 1.0);
  d.hMinus = rng.uniform(0.5, 1.0);
  d.lPlusA = rng.uniform(0.5, 1.0);
  d.lPlusB = rng.uniform(0.5, 1.0);
  d.lMinusA = rng.uniform(0.5, 1.0);
  d.lMinusB = rng.uniform(0.5, 1.0);

  auto verdicts = [&](const Decomposition& dd) {
    std::array<bool, 6> out{};
    const SurfaceData s = syntheticData(dd);
    for (std::size_t i = 0; i < 6; ++i) {
      out[i] = holomorphyCheck(SpaceForm::r41(), s, kAllStructures[i], 1e-8).verdict();
    }
    return out;
  };

  CHECK(verdicts(d) == std::array<bool, 6>{false, false, false, false, false, false});

  Decomposition dm = d;
  dm.lMinusA = 0.0;
  dm.lMinusB = 0.0;
  CHECK(verdicts(dm) == std::array<bool, 6>{true, false, false, false, false, false});

  dm = d;
  dm.hMinus = 0.0;
  CHECK(verdicts(dm) == std::array<bool, 6>{false, true, false, false, false, false});

  dm = d;
  dm.lPlusA = 0.0;
  dm.lPlusB = 0.0;
  CHECK(verdicts(dm) == std::array<bool, 6>{false, false, true, false, false, false});

  dm = d;
  dm.hPlus = 0.0;
  CHECK(verdicts(dm) == std::array<bool, 6>{false, false, false, true, false, false});

  dm = d;
  dm.lPlusA = dm.lPlusB = dm.lMinusA = dm.lMinusB = 0.0;
  CHECK(verdicts(dm)[4]);

  dm = d;
  dm.hPlus = dm.hMinus = 0.0;
  CHECK(verdicts(dm)[5]);
}

TEST_CASE("lift verticals agree with the differenced normal frame fields") {
  const Immersion im = sliceFamily(7);
  for (double u : {-0.2, 0.2}) {
    for (double v : {-0.1, 0.25}) {
      const SurfaceData s = surfaceData(im, u, v);
      const Eigen::Matrix2d vp = twistorVertical(s, true);
      const Eigen::Matrix2d vpd = twistorVerticalByDifferencing(im, u, v, true);
      CHECK((vp - vpd).cwiseAbs().maxCoeff() < 1e-5);

      const Eigen::Matrix2d vm = twistorVertical(s, false);
      const Eigen::Matrix2d vmd = twistorVerticalByDifferencing(im, u, v, false);
      CHECK((vm - vmd).cwiseAbs().maxCoeff() < 1e-5);

      const Eigen::Matrix<double, 4, 2> w = grassVertical(s);
      const Eigen::Matrix<double, 4, 2> wd = grassVerticalByDifferencing(im, u, v);
      CHECK((w - wd).cwiseAbs().maxCoeff() < 1e-5);

      // The verticals carry real curvature, not noise.
      CHECK(w.norm() > 1e-2);
    }
  }
}

TEST_CASE("fibre action squares to minus one and matches the Lie picture") {
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Vector2d v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const Eigen::Vector4d w(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    for (Structure st : {Structure::OPP, Structure::OPM, Structure::OMP, Structure::OMM}) {
      CHECK((fibreAction(st, fibreAction(st, v)) + v).norm() < 1e-14);
    }
    for (Structure st : {Structure::OGP, Structure::OGM}) {
      CHECK((fibreAction4(st, fibreAction4(st, w)) + w).norm() < 1e-14);
    }
  }

  // The structure on the positive fibre reproduces the bracket-built one.
  const auto sig = Signature<double>::r41();
  const auto ms = fibreTangentBasis(sig, true);
  Rng rng2(13);
  for (int trial = 0; trial < 8; ++trial) {
    const double a = rng2.uniform(-1.0, 1.0);
    const double b = rng2.uniform(-1.0, 1.0);
    const LieElem<double> x{a * ms[0].mat + b * ms[1].mat, sig};
    const LieElem<double> jx = fibreComplexStructure(x, true);
    const Eigen::Vector2d image = fibreAction(Structure::OPM, Eigen::Vector2d(a, b));
    CHECK((jx.mat - (image(0) * ms[0].mat + image(1) * ms[1].mat)).norm() < 1e-12);
  }
}

TEST_CASE("integrability combinations cancel exactly in constant curvature") {
  for (double curv : {0.0, 1.0, -1.0}) {
    const FrameTensor r = constantCurvatureFrame(curv);
    const TwistorIntegrability ti = twistorIntegrability(r);
    const GrassIntegrability gi = grassIntegrability(r);
    CHECK(ti.maxAbs() == 0.0);
    CHECK(gi.maxAbs() == 0.0);
    CHECK(std::abs(ti.c2 - (gi.g1 + gi.g2)) == 0.0);
  }
}

TEST_CASE("conformally flat metrics pass the null lift obstruction but not the plane one") {
  const MetricChart conf = conformalFlatChart(0.3);
  Rng rng(21);
  double twistorWorst = 0.0, grassWorst = 0.0;
  for (int p = 0; p < 3; ++p) {
    Eigen::Vector4d x;
    for (int k = 0; k < 4; ++k) x(k) = rng.uniform(-0.2, 0.2);
    const Riem4 riem = riemannNumeric(conf, x);
    const Eigen::Matrix4d g = conf.g(x);
    for (int f = 0; f < 3; ++f) {
      const FrameTensor ft = frameComponents(riem, randomAdaptedFrame(g, rng));
      const TwistorIntegrability ti = twistorIntegrability(ft);
      const GrassIntegrability gi = grassIntegrability(ft);
      twistorWorst = std::max(twistorWorst, ti.maxAbs());
      grassWorst = std::max(grassWorst, gi.maxAbs());
      CHECK(ti.c2 == Approx(gi.g1 + gi.g2).margin(1e-10));
    }
  }
  CHECK(twistorWorst < 1e-4);
  CHECK(grassWorst > 1e-2);
}

TEST_CASE("a warped product obstructs both lift structures") {
  const MetricChart warped = warpedChart(0.3);
  Rng rng(23);
  Eigen::Vector4d x;
  for (int k = 0; k < 4; ++k) x(k) = rng.uniform(-0.2, 0.2);
  const Riem4 riem = riemannNumeric(warped, x);
  const FrameTensor ft = frameComponents(riem, randomAdaptedFrame(warped.g(x), rng));
  CHECK(twistorIntegrability(ft).maxAbs() > 1e-2);
  CHECK(grassIntegrability(ft).maxAbs() > 1e-2);
}

TEST_CASE("graph charts of the quadrics admit every lift structure") {
  for (const MetricChart& chart : {sphereGraphChart(), hyperbolicGraphChart()}) {
    Rng rng(31);
    Eigen::Vector4d x;
    for (int k = 0; k < 4; ++k) x(k) = rng.uniform(-0.15, 0.15);
    const Riem4 riem = riemannNumeric(chart, x);
    for (int f = 0; f < 2; ++f) {
      const FrameTensor ft = frameComponents(riem, randomAdaptedFrame(chart.g(x), rng));
      CHECK(twistorIntegrability(ft).maxAbs() < 1e-4);
      CHECK(grassIntegrability(ft).maxAbs() < 1e-4);
    }
  }
}

TEST_CASE("tension of the plane lift vanishes at the matched coupling") {
  GridSpec g;
  const double c = 0.4;
  const Immersion slice = catalogSliceSphere(c, g);

  const TensionReport matched = gaussTension(slice, 0.2, -0.1, 12.0);
  CHECK(matched.maxResidual() < 1e-5);

  const TensionReport unmatched = gaussTension(slice, 0.2, -0.1, 0.0);
  CHECK(unmatched.horizontal == Approx(c / std::sqrt(1.0 - c * c)).margin(1e-4));

  // The flat plane is stationary, so any coupling works.
  const TensionReport flat = gaussTension(catalogPlane(g), 0.2, -0.1, 5.0);
  CHECK(flat.maxResidual() < 1e-10);

  // The negative quadric needs the opposite sign.
  const Immersion hyp = catalogHyperbolicSphere(1.3, g);
  CHECK(gaussTension(hyp, 0.2, -0.1, -12.0).maxResidual() < 1e-5);
  CHECK(gaussTension(hyp, 0.2, -0.1, 12.0).horizontal > 1e-1);
}

TEST_CASE("observer shear detects the aligned spheres") {
  GridSpec g;
  CHECK(crCompare(catalogSphere(0.7, g), 0.2, -0.1).maxAbs() < 1e-10);
  CHECK(crCompare(catalogSliceSphere(0.4, g), 0.2, -0.1).maxAbs() < 1e-10);
  CHECK(crCompare(catalogHyperbolicSphere(1.3, g), 0.2, -0.1).maxAbs() < 1e-10);

  FamilySpec spec;
  spec.form = SpaceForm::r41();
  spec.tag = FamilyTag::ILambda;
  spec.lambda = lambdaLibrary("gauss");
  CHECK(crCompare(buildFamily(spec), 0.2, -0.1).maxAbs() > 1e-3);
}

TEST_CASE("holomorphy on family data singles out the parallel structure") {
  FamilySpec spec;
  spec.form = SpaceForm::h41();
  spec.tag = FamilyTag::JCLambda;
  spec.c = 1.3;
  spec.lambda = lambdaLibrary("randsmooth", 7);
  const Immersion im = buildFamily(spec);
  const SurfaceData s = surfaceData(im, 0.2, -0.1);
  const Decomposition d = decompose(s);

  for (Structure st : kAllStructures) {
    const HolomorphyReport rep = holomorphyCheck(im.form, s, st, 1e-5);
    const double expect = structureResidualFactor(st) * structureInvariant(d, st);
    CHECK(rep.residualJ == Approx(expect).margin(1e-9));
    CHECK(rep.verdict() == (st == Structure::OPP));
  }
}
