#include <catch2/catch.hpp>

#include <cmath>

#include "lsl/families.hpp"
#include "lsl/immersion.hpp"
#include "lsl/rng.hpp"

using namespace lsl;

namespace {

FamilySpec randsmoothSpec(SpaceForm form, FamilyTag tag, double c = 0.0, double theta = 1.0) {
  FamilySpec spec;
  spec.form = form;
  spec.tag = tag;
  spec.lambda = lambdaLibrary("randsmooth", 7);
  spec.lambdaName = "randsmooth";
  spec.c = c;
  spec.theta = theta;
  return spec;
}

void checkFrameRelations(const Immersion& im, double u, double v) {
  const SurfaceData s = surfaceData(im, u, v);
  const auto& sig = im.form.sig;

  Eigen::Matrix4d gram;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      gram(a, b) = inner(sig, Eigen::VectorXd(s.frame.col(a)), Eigen::VectorXd(s.frame.col(b)));
    }
  }
  Eigen::Matrix4d eta = Eigen::Matrix4d::Identity();
  eta(0, 0) = -1.0;
  CHECK((gram - eta).cwiseAbs().maxCoeff() < 1e-9);

  // The null normals are the frame sums, normalised against the observer.
  CHECK((s.frame.col(0) + s.frame.col(1) - s.kPlus).norm() < 1e-12);
  CHECK(std::abs(inner(sig, s.kPlus, s.kPlus)) < 1e-10);
  CHECK(std::abs(inner(sig, s.kMinus, s.kMinus)) < 1e-10);
  CHECK(inner(sig, s.kPlus, s.tObserver) == Approx(-1.0).margin(1e-10));
  CHECK(inner(sig, s.kMinus, s.tObserver) == Approx(-1.0).margin(1e-10));

  // e1 - e2 points along the other null normal.
  const Eigen::VectorXd diff = s.frame.col(0) - s.frame.col(1);
  const double scale = diff.norm() / s.kMinus.norm();
  CHECK((diff - scale * s.kMinus).norm() < 1e-9);

  // Chart velocities span the same plane as the tangent frame columns.
  for (int t = 0; t < 2; ++t) {
    const Eigen::VectorXd vel = s.dTangent.col(t);
    CHECK(std::abs(inner(sig, vel, Eigen::VectorXd(s.frame.col(0)))) < 1e-9);
    CHECK(std::abs(inner(sig, vel, Eigen::VectorXd(s.frame.col(1)))) < 1e-9);
  }

  CHECK(s.quadricResidual < 1e-10);
  CHECK(s.conformalFactor > 0.0);
}

}  // namespace

TEST_CASE("adapted frames satisfy the frame relations on all models") {
  const auto specs = {
      randsmoothSpec(SpaceForm::r41(), FamilyTag::ILambda),
      randsmoothSpec(SpaceForm::r41(), FamilyTag::JLambda, 0.0, 0.7),
      randsmoothSpec(SpaceForm::s41(), FamilyTag::ICLambda, 0.4),
      randsmoothSpec(SpaceForm::h41(), FamilyTag::ILambda),
      randsmoothSpec(SpaceForm::h41(), FamilyTag::JCLambda, 1.3),
  };
  for (const auto& spec : specs) {
    const Immersion im = buildFamily(spec);
    for (double u : {-0.35, 0.0, 0.2}) {
      for (double v : {-0.1, 0.3}) checkFrameRelations(im, u, v);
    }
  }
}

TEST_CASE("flat graph family reproduces the support laplacian as mean curvature") {
  FamilySpec spec;
  spec.form = SpaceForm::r41();
  spec.tag = FamilyTag::ILambda;
  spec.lambda = lambdaLibrary("gauss");
  const Immersion im = buildFamily(spec);

  for (double u : {-0.3, 0.05, 0.25}) {
    for (double v : {-0.2, 0.15}) {
      const Decomposition d = decompose(surfaceData(im, u, v));
      const double q = u * u + v * v;
      const double laplacian = (4.0 * q - 4.0) * std::exp(-q);
      CHECK(d.hPlus == Approx(0.5 * laplacian).margin(1e-5));
      // The graph construction keeps the negative component identically
      // zero, differencing included.
      CHECK(std::abs(d.hMinus) < 1e-13);
      CHECK(d.lMinusAbs() < 1e-13);
    }
  }
}

TEST_CASE("decomposition of the second fundamental form round trips") {
  Rng rng(99);
  for (int trial = 0; trial < 32; ++trial) {
    Decomposition d;
    d.hPlus = rng.uniform(-2.0, 2.0);
    d.hMinus = rng.uniform(-2.0, 2.0);
    d.lPlusA = rng.uniform(-2.0, 2.0);
    d.lPlusB = rng.uniform(-2.0, 2.0);
    d.lMinusA = rng.uniform(-2.0, 2.0);
    d.lMinusB = rng.uniform(-2.0, 2.0);
    const auto [h1, h2] = reconstructH(d);

    SurfaceData s;
    s.h1 = h1;
    s.h2 = h2;
    const Decomposition back = decompose(s);
    CHECK(back.hPlus == Approx(d.hPlus).margin(1e-14));
    CHECK(back.hMinus == Approx(d.hMinus).margin(1e-14));
    CHECK(back.lPlusA == Approx(d.lPlusA).margin(1e-14));
    CHECK(back.lPlusB == Approx(d.lPlusB).margin(1e-14));
    CHECK(back.lMinusA == Approx(d.lMinusA).margin(1e-14));
    CHECK(back.lMinusB == Approx(d.lMinusB).margin(1e-14));

    // The traces feed the mean curvature reassembly.
    CHECK(h1.trace() / 2.0 == Approx(d.hPlus - d.hMinus).margin(1e-14));
    CHECK(h2.trace() / 2.0 == Approx(d.hPlus + d.hMinus).margin(1e-14));
  }
}

TEST_CASE("traceless moduli are invariant under chart rotation and rescaling") {
  FamilySpec spec;
  spec.form = SpaceForm::r41();
  spec.tag = FamilyTag::ILambda;
  spec.lambda = lambdaLibrary("randsmooth", 5);
  const Immersion im = buildFamily(spec);

  const double phi = 0.37;
  Immersion rotated = im;
  const ChartFn chart = im.chart;
  rotated.chart = [chart, phi](double u, double v) {
    return chart(u * std::cos(phi) - v * std::sin(phi), u * std::sin(phi) + v * std::cos(phi));
  };
  Immersion scaled = im;
  scaled.chart = [chart](double u, double v) { return chart(2.0 * u, 2.0 * v); };

  for (double u : {-0.15, 0.1}) {
    for (double v : {-0.05, 0.12}) {
      const Decomposition d0 = decompose(
          surfaceData(im, u * std::cos(phi) - v * std::sin(phi),
                      u * std::sin(phi) + v * std::cos(phi)));
      const Decomposition dr = decompose(surfaceData(rotated, u, v));
      CHECK(dr.hPlus == Approx(d0.hPlus).margin(1e-6));
      CHECK(dr.hMinus == Approx(d0.hMinus).margin(1e-6));
      CHECK(dr.lPlusAbs() == Approx(d0.lPlusAbs()).margin(1e-6));
      CHECK(dr.lMinusAbs() == Approx(d0.lMinusAbs()).margin(1e-6));

      // The traceless pairs rotate at twice the frame angle.
      const std::complex<double> lp0(d0.lPlusA, d0.lPlusB);
      const std::complex<double> lpr(dr.lPlusA, dr.lPlusB);
      const std::complex<double> twist = std::polar(1.0, 2.0 * phi);
      CHECK(std::abs(lpr - twist * lp0) < 1e-6);

      const Decomposition ds = decompose(surfaceData(scaled, u, v));
      const Decomposition d2 = decompose(surfaceData(im, 2.0 * u, 2.0 * v));
      CHECK(ds.hPlus == Approx(d2.hPlus).margin(1e-6));
      CHECK(ds.hMinus == Approx(d2.hMinus).margin(1e-6));
      CHECK(ds.lPlusAbs() == Approx(d2.lPlusAbs()).margin(1e-6));
      CHECK(ds.lMinusAbs() == Approx(d2.lMinusAbs()).margin(1e-6));
    }
  }
}

TEST_CASE("catalog bases carry their umbilic curvature values") {
  GridSpec g;
  const double u = 0.2, v = -0.1;

  SECTION("flat plane is totally geodesic") {
    const Decomposition d = decompose(surfaceData(catalogPlane(g), u, v));
    CHECK(std::abs(d.hPlus) < 1e-12);
    CHECK(std::abs(d.hMinus) < 1e-12);
    CHECK(d.lPlusAbs() < 1e-12);
    CHECK(d.lMinusAbs() < 1e-12);
  }
  SECTION("flat sphere") {
    const double theta = 0.7;
    const Decomposition d = decompose(surfaceData(catalogSphere(theta, g), u, v));
    CHECK(d.hPlus == Approx(-1.0 / (2.0 * theta)).margin(1e-5));
    CHECK(d.hMinus == Approx(-1.0 / (2.0 * theta)).margin(1e-5));
    CHECK(d.lPlusAbs() < 1e-5);
    CHECK(d.lMinusAbs() < 1e-5);
  }
  SECTION("slice sphere of the positive quadric") {
    const double c = 0.4;
    const double expect = c / (2.0 * std::sqrt(1.0 - c * c));
    const Decomposition d = decompose(surfaceData(catalogSliceSphere(c, g), u, v));
    CHECK(d.hPlus == Approx(expect).margin(1e-5));
    CHECK(d.hMinus == Approx(expect).margin(1e-5));
    CHECK(d.lPlusAbs() < 1e-5);
    CHECK(d.lMinusAbs() < 1e-5);
  }
  SECTION("equator slice is minimal") {
    const Decomposition d = decompose(surfaceData(catalogSliceSphere(0.0, g), u, v));
    CHECK(std::abs(d.hPlus) < 1e-10);
    CHECK(std::abs(d.hMinus) < 1e-10);
  }
  SECTION("hyperbolic plane is totally geodesic") {
    const Decomposition d = decompose(surfaceData(catalogHyperbolicPlane(g), u, v));
    CHECK(std::abs(d.hPlus) < 1e-9);
    CHECK(std::abs(d.hMinus) < 1e-9);
    CHECK(d.lPlusAbs() < 1e-9);
    CHECK(d.lMinusAbs() < 1e-9);
  }
  SECTION("distance sphere of the negative quadric") {
    const double c = 1.3;
    const double expect = -c / (2.0 * std::sqrt(c * c - 1.0));
    const Decomposition d = decompose(surfaceData(catalogHyperbolicSphere(c, g), u, v));
    CHECK(d.hPlus == Approx(expect).margin(1e-5));
    CHECK(d.hMinus == Approx(expect).margin(1e-5));
    CHECK(d.lPlusAbs() < 1e-5);
    CHECK(d.lMinusAbs() < 1e-5);
  }
}

TEST_CASE("classification flags match the decomposition") {
  GridSpec g;
  const SurfaceClass plane = classify(surfaceData(catalogPlane(g), 0.1, 0.1), 1e-8);
  CHECK(plane.totallyUmbilic());
  CHECK(plane.stationary());

  const SurfaceClass sphere = classify(surfaceData(catalogSphere(0.7, g), 0.1, 0.1), 1e-5);
  CHECK(sphere.totallyUmbilic());
  CHECK_FALSE(sphere.stationary());

  FamilySpec spec;
  spec.form = SpaceForm::r41();
  spec.tag = FamilyTag::ILambda;
  spec.lambda = lambdaLibrary("gauss");
  const SurfaceClass graph = classify(surfaceData(buildFamily(spec), 0.3, 0.1), 1e-5);
  CHECK_FALSE(graph.totallyUmbilic());
  CHECK(graph.lMinusZero());
  CHECK(graph.hMinusZero());

  const Eigen::VectorXd h = meanCurvature(surfaceData(buildFamily(spec), 0.3, 0.1));
  const SurfaceData s = surfaceData(buildFamily(spec), 0.3, 0.1);
  const Decomposition d = decompose(s);
  // Null mean curvature: the vector sits on the positive null normal.
  CHECK((h - d.hPlus * s.kPlus).norm() < 1e-10);
}

TEST_CASE("conformal backend matches the flat one for a vanishing factor") {
  FamilySpec spec;
  spec.form = SpaceForm::r41();
  spec.tag = FamilyTag::ILambda;
  spec.lambda = lambdaLibrary("randsmooth", 3);
  const Immersion im = buildFamily(spec);

  const auto zeroRho = [](const Eigen::Vector4d&) { return 0.0; };
  for (double u : {-0.2, 0.15}) {
    const SurfaceData flat = surfaceData(im, u, 0.1);
    const SurfaceData conf = surfaceDataConformal(im.chart, zeroRho, u, 0.1, im.fdStep);
    CHECK((flat.frame - conf.frame).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((flat.h1 - conf.h1).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((flat.h2 - conf.h2).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("halving the step shrinks the mean curvature error quadratically") {
  FamilySpec spec;
  spec.form = SpaceForm::r41();
  spec.tag = FamilyTag::ILambda;
  spec.lambda = lambdaLibrary("gauss");

  auto errAt = [&](double h) {
    spec.fdStep = h;
    const Immersion im = buildFamily(spec);
    const double u = 0.21, v = -0.13;
    const double q = u * u + v * v;
    const double exact = 0.5 * (4.0 * q - 4.0) * std::exp(-q);
    return std::abs(decompose(surfaceData(im, u, v)).hPlus - exact);
  };
  const double ratio = errAt(1e-3) / errAt(5e-4);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("surface pipeline rejects invalid charts") {
  GridSpec g;
  CHECK_THROWS_AS(gridPoint(g, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(gridPoint(g, 0, 16), std::invalid_argument);

  Immersion bad;
  bad.form = SpaceForm::r41();
  bad.chart = [](double u, double v) -> Eigen::VectorXd {
    Eigen::VectorXd x(5);
    x << 0, 0, u, v, 0;
    return x;
  };
  CHECK_THROWS_AS(surfaceData(bad, 0.0, 0.0), std::invalid_argument);

  Immersion timelike;
  timelike.form = SpaceForm::r41();
  timelike.chart = [](double u, double v) -> Eigen::VectorXd {
    Eigen::VectorXd x(4);
    x << u, 0.0, 0.0, v;
    return x;
  };
  CHECK_THROWS_AS(surfaceData(timelike, 0.0, 0.0), std::domain_error);

  Immersion degenerate;
  degenerate.form = SpaceForm::r41();
  degenerate.chart = [](double u, double v) -> Eigen::VectorXd {
    Eigen::VectorXd x(4);
    x << 0.0, 0.0, u + v, u + v;
    return x;
  };
  CHECK_THROWS_AS(surfaceData(degenerate, 0.0, 0.0), std::domain_error);
}
