#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsl/rng.hpp"
#include "lsl/signature.hpp"

namespace lsl {

/// Metric field on a coordinate patch of a Lorentzian 4-manifold. The first
/// coordinate is expected to be the timelike one at every queried point.
/// Lattice-backed charts snap queries to their nodes and force the finite
/// difference step to the node spacing so stencils land on data.
struct MetricChart {
  std::function<Eigen::Matrix4d(const Eigen::Vector4d&)> g;
  double fdStep = 1e-3;
  std::string name;
  std::function<Eigen::Vector4d(const Eigen::Vector4d&)> snap;  // unset: identity
};

inline Eigen::Vector4d chartPoint(const MetricChart& chart, const Eigen::Vector4d& x) {
  return chart.snap ? chart.snap(x) : x;
}

inline Eigen::Matrix4d metricValue(const MetricChart& chart, const Eigen::Vector4d& x) {
  return chart.g(chartPoint(chart, x));
}

// ---------------------------------------------------------------------------
// Built-in charts.

inline MetricChart flatChart() {
  MetricChart c;
  c.g = [](const Eigen::Vector4d&) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = -1.0;
    return m;
  };
  c.name = "flat";
  return c;
}

/// Conformally flat: e^{2 rho} eta with rho = a x_2^2.
inline MetricChart conformalFlatChart(double a) {
  MetricChart c;
  c.g = [a](const Eigen::Vector4d& x) -> Eigen::Matrix4d {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = -1.0;
    m *= std::exp(2.0 * a * x(2) * x(2));
    return m;
  };
  c.name = "conformal";
  return c;
}

/// Product of a flat Lorentzian plane (slots 0, 2) and a curved Riemannian
/// plane (slots 1, 3) with line element du^2 + f(u)^2 dv^2, f = 1 + a u^2.
/// Not conformally flat for a != 0.
inline MetricChart warpedChart(double a) {
  MetricChart c;
  c.g = [a](const Eigen::Vector4d& x) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = -1.0;
    const double f = 1.0 + a * x(1) * x(1);
    m(3, 3) = f * f;
    return m;
  };
  c.name = "warped";
  return c;
}

namespace detail {

/// Pullback metric of a graph embedding into flat 5-space, with the
/// Jacobian supplied in closed form (differencing it would pollute the
/// curvature stencils).
inline Eigen::Matrix4d graphPullback(const Eigen::Matrix<double, 5, 4>& jac,
                                     const Signature<double>& amb) {
  return jac.transpose() * amb.eta() * jac;
}

}  // namespace detail

/// Chart of the curvature +1 quadric around (0,0,1,0,0): solve the quadric
/// for the middle slot, x = (u0, u1, w, u2, u3) with
/// w = sqrt(1 + u0^2 - u1^2 - u2^2 - u3^2).
inline MetricChart sphereGraphChart() {
  MetricChart c;
  c.g = [](const Eigen::Vector4d& u) {
    const double w2 = 1.0 + u(0) * u(0) - u(1) * u(1) - u(2) * u(2) - u(3) * u(3);
    if (w2 <= 1e-12) throw std::domain_error("sphereGraphChart: outside the chart");
    const double w = std::sqrt(w2);
    Eigen::Matrix<double, 5, 4> jac = Eigen::Matrix<double, 5, 4>::Zero();
    jac(0, 0) = 1.0;
    jac(1, 1) = 1.0;
    jac(3, 2) = 1.0;
    jac(4, 3) = 1.0;
    jac(2, 0) = u(0) / w;
    jac(2, 1) = -u(1) / w;
    jac(2, 2) = -u(2) / w;
    jac(2, 3) = -u(3) / w;
    return detail::graphPullback(jac, Signature<double>::r51());
  };
  c.name = "sphere-graph";
  return c;
}

/// Chart of the curvature -1 quadric around (1,0,0,0,0): solve for the
/// leading slot, x = (w, u0, u1, u2, u3) with
/// w = sqrt(1 - u0^2 + u1^2 + u2^2 + u3^2).
inline MetricChart hyperbolicGraphChart() {
  MetricChart c;
  c.g = [](const Eigen::Vector4d& u) {
    const double w2 = 1.0 - u(0) * u(0) + u(1) * u(1) + u(2) * u(2) + u(3) * u(3);
    if (w2 <= 1e-12) throw std::domain_error("hyperbolicGraphChart: outside the chart");
    const double w = std::sqrt(w2);
    Eigen::Matrix<double, 5, 4> jac = Eigen::Matrix<double, 5, 4>::Zero();
    jac(1, 0) = 1.0;
    jac(2, 1) = 1.0;
    jac(3, 2) = 1.0;
    jac(4, 3) = 1.0;
    jac(0, 0) = -u(0) / w;
    jac(0, 1) = u(1) / w;
    jac(0, 2) = u(2) / w;
    jac(0, 3) = u(3) / w;
    return detail::graphPullback(jac, Signature<double>::r52());
  };
  c.name = "hyperbolic-graph";
  return c;
}

/// Metric sampled on a regular lattice, loaded from JSON. Queries snap to
/// the nearest node; points whose stencil would leave the lattice throw.
/// Expected shape:
///   { "spacing": h, "origin": [4 numbers], "dims": [n0,n1,n2,n3],
///     "values": [...] }
/// where values is indexed [i0][i1][i2][i3] and each entry is a 4 x 4
/// row-major matrix.
inline MetricChart latticeChart(const nlohmann::json& spec) {
  const double spacing = spec.at("spacing").get<double>();
  if (!(spacing > 0.0)) throw std::invalid_argument("latticeChart: spacing must be positive");
  const auto originVec = spec.at("origin").get<std::vector<double>>();
  const auto dimsVec = spec.at("dims").get<std::vector<int>>();
  if (originVec.size() != 4 || dimsVec.size() != 4) {
    throw std::invalid_argument("latticeChart: origin and dims must have 4 entries");
  }
  Eigen::Vector4d origin(originVec[0], originVec[1], originVec[2], originVec[3]);
  std::array<int, 4> dims{dimsVec[0], dimsVec[1], dimsVec[2], dimsVec[3]};
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("latticeChart: dims entries must be positive");
  }

  auto data = std::make_shared<std::vector<Eigen::Matrix4d>>();
  data->reserve(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3]);
  const auto& values = spec.at("values");
  for (int i0 = 0; i0 < dims[0]; ++i0) {
    for (int i1 = 0; i1 < dims[1]; ++i1) {
      for (int i2 = 0; i2 < dims[2]; ++i2) {
        for (int i3 = 0; i3 < dims[3]; ++i3) {
          const auto& cell = values.at(i0).at(i1).at(i2).at(i3);
          Eigen::Matrix4d m;
          for (int r = 0; r < 4; ++r) {
            for (int cIdx = 0; cIdx < 4; ++cIdx) m(r, cIdx) = cell.at(r).at(cIdx).get<double>();
          }
          data->push_back(m);
        }
      }
    }
  }

  auto nodeIndex = [origin, spacing, dims](const Eigen::Vector4d& x) {
    std::array<long, 4> idx{};
    for (int c = 0; c < 4; ++c) {
      idx[c] = std::lround((x(c) - origin(c)) / spacing);
      if (idx[c] < 0 || idx[c] >= dims[c]) {
        throw std::domain_error("latticeChart: query outside the lattice");
      }
    }
    return idx;
  };

  MetricChart chart;
  chart.fdStep = spacing;
  chart.name = "lattice";
  chart.snap = [origin, spacing, nodeIndex](const Eigen::Vector4d& x) {
    const auto idx = nodeIndex(x);
    Eigen::Vector4d snapped;
    for (int c = 0; c < 4; ++c) snapped(c) = origin(c) + spacing * static_cast<double>(idx[c]);
    return snapped;
  };
  chart.g = [data, dims, nodeIndex](const Eigen::Vector4d& x) {
    const auto idx = nodeIndex(x);
    const std::size_t flat = static_cast<std::size_t>(
        ((idx[0] * dims[1] + idx[1]) * dims[2] + idx[2]) * dims[3] + idx[3]);
    return (*data)[flat];
  };
  return chart;
}

/// Sample a smooth chart onto lattice JSON (round-trip aid for tests and
/// for producing example input files).
inline nlohmann::json sampleToLattice(const MetricChart& chart, const Eigen::Vector4d& origin,
                                      double spacing, const std::array<int, 4>& dims) {
  nlohmann::json values = nlohmann::json::array();
  for (int i0 = 0; i0 < dims[0]; ++i0) {
    nlohmann::json l1 = nlohmann::json::array();
    for (int i1 = 0; i1 < dims[1]; ++i1) {
      nlohmann::json l2 = nlohmann::json::array();
      for (int i2 = 0; i2 < dims[2]; ++i2) {
        nlohmann::json l3 = nlohmann::json::array();
        for (int i3 = 0; i3 < dims[3]; ++i3) {
          Eigen::Vector4d x = origin + spacing * Eigen::Vector4d(i0, i1, i2, i3);
          const Eigen::Matrix4d m = chart.g(x);
          nlohmann::json cell = nlohmann::json::array();
          for (int r = 0; r < 4; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
            cell.push_back(row);
          }
          l3.push_back(cell);
        }
        l2.push_back(l3);
      }
      l1.push_back(l2);
    }
    values.push_back(l1);
  }
  return nlohmann::json{{"spacing", spacing},
                        {"origin", {origin(0), origin(1), origin(2), origin(3)}},
                        {"dims", {dims[0], dims[1], dims[2], dims[3]}},
                        {"values", values}};
}

// ---------------------------------------------------------------------------
// Curvature by central differences.

using Riem4 = std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4>;

inline std::array<Eigen::Matrix4d, 4> christoffel(const MetricChart& chart,
                                                  const Eigen::Vector4d& x0) {
  const Eigen::Vector4d x = chartPoint(chart, x0);
  const double h = chart.fdStep;
  std::array<Eigen::Matrix4d, 4> dg;  // dg[k] = d g / d x_k
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    dg[k] = (chart.g(xp) - chart.g(xm)) / (2.0 * h);
  }
  const Eigen::Matrix4d ginv = chart.g(x).inverse();
  std::array<Eigen::Matrix4d, 4> gamma;
  for (int m = 0; m < 4; ++m) gamma[m].setZero();
  for (int m = 0; m < 4; ++m) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) {
          s += ginv(m, k) * (dg[i](k, j) + dg[j](k, i) - dg[k](i, j));
        }
        gamma[m](i, j) = 0.5 * s;
      }
    }
  }
  return gamma;
}

/// Lowered curvature tensor with the pairing R(X,Y,Z,W): slots (1,3) and
/// (2,4) pair so that a constant curvature space gives
/// R = curv (g_ik g_jl - g_il g_jk).
inline Riem4 riemannNumeric(const MetricChart& chart, const Eigen::Vector4d& x0) {
  const Eigen::Vector4d x = chartPoint(chart, x0);
  const double h = chart.fdStep;
  const auto gamma = christoffel(chart, x);
  // dGamma[i][l](j,k) = d Gamma^l_{jk} / d x_i
  std::array<std::array<Eigen::Matrix4d, 4>, 4> dGamma;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const auto gp = christoffel(chart, xp);
    const auto gm = christoffel(chart, xm);
    for (int l = 0; l < 4; ++l) dGamma[i][l] = (gp[l] - gm[l]) / (2.0 * h);
  }
  const Eigen::Matrix4d g = chart.g(x);

  // Vector-valued tensor first, then lower the last slot.
  Riem4 r{};
  std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4> rUp{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          double v = dGamma[i][l](j, k) - dGamma[j][l](i, k);
          for (int m = 0; m < 4; ++m) {
            v += gamma[l](i, m) * gamma[m](j, k) - gamma[l](j, m) * gamma[m](i, k);
          }
          rUp[i][j][k][l] = v;
        }
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          double v = 0.0;
          for (int m = 0; m < 4; ++m) v += g(l, m) * rUp[i][j][k][m];
          r[i][j][k][l] = -v;
        }
      }
    }
  }
  return r;
}

inline Eigen::Matrix4d ricciFromRiemann(const Riem4& r, const Eigen::Matrix4d& g) {
  const Eigen::Matrix4d ginv = g.inverse();
  Eigen::Matrix4d ric = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 4; ++j) {
    for (int l = 0; l < 4; ++l) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) s += ginv(i, k) * r[i][j][k][l];
      }
      ric(j, l) = s;
    }
  }
  return ric;
}

inline double scalarFromRicci(const Eigen::Matrix4d& ric, const Eigen::Matrix4d& g) {
  return (g.inverse() * ric).trace();
}

/// Conformal curvature: subtract the Kulkarni-Nomizu product of the metric
/// with the Schouten tensor. Vanishes exactly on conformally flat charts.
inline Riem4 weylFromRiemann(const Riem4& r, const Eigen::Matrix4d& g) {
  const Eigen::Matrix4d ric = ricciFromRiemann(r, g);
  const double scal = scalarFromRicci(ric, g);
  const Eigen::Matrix4d p = 0.5 * (ric - scal / 6.0 * g);
  Riem4 w{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          w[i][j][k][l] = r[i][j][k][l] - (g(i, k) * p(j, l) - g(i, l) * p(j, k) +
                                           g(j, l) * p(i, k) - g(j, k) * p(i, l));
        }
      }
    }
  }
  return w;
}

inline double tensorFrobenius(const Riem4& t) {
  double s = 0.0;
  for (const auto& a : t) {
    for (const auto& b : a) {
      for (const auto& c : b) {
        for (double v : c) s += v * v;
      }
    }
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Pointwise adapted frames.

/// Orthonormalise the coordinate basis against a Lorentzian Gram matrix,
/// timelike direction first: columns F with F^T g F = diag(-1,1,1,1).
inline Eigen::Matrix4d gramSchmidtFrame(const Eigen::Matrix4d& g) {
  Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
  const double eps[4] = {-1.0, 1.0, 1.0, 1.0};
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d v = Eigen::Vector4d::Unit(i);
    for (int j = 0; j < i; ++j) {
      const double proj = eps[j] * (f.col(j).transpose() * g * v)(0);
      v -= proj * f.col(j);
    }
    const double q = (v.transpose() * g * v)(0);
    if (q * eps[i] <= 0.0) {
      throw std::domain_error("gramSchmidtFrame: metric is not time-first Lorentzian here");
    }
    f.col(i) = v / std::sqrt(std::abs(q));
  }
  return f;
}

/// Proper orthochronous transformation built from a random spatial rotation
/// followed by a random boost; preserves diag(-1,1,1,1).
inline Eigen::Matrix4d randomLorentz(Rng& rng) {
  Eigen::Vector3d axis;
  do {
    axis = Eigen::Vector3d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  } while (axis.norm() < 1e-3);
  axis.normalize();
  const double angle = rng.uniform(0.0, 2.0 * M_PI);
  Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
  rot.block<3, 3>(1, 1) = Eigen::AngleAxisd(angle, axis).toRotationMatrix();

  Eigen::Vector3d bdir;
  do {
    bdir = Eigen::Vector3d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  } while (bdir.norm() < 1e-3);
  bdir.normalize();
  const double phi = rng.uniform(-1.0, 1.0);
  Eigen::Matrix4d boost = Eigen::Matrix4d::Identity();
  boost(0, 0) = std::cosh(phi);
  boost.block<3, 1>(1, 0) = std::sinh(phi) * bdir;
  boost.block<1, 3>(0, 1) = std::sinh(phi) * bdir.transpose();
  boost.block<3, 3>(1, 1) =
      Eigen::Matrix3d::Identity() + (std::cosh(phi) - 1.0) * bdir * bdir.transpose();
  return boost * rot;
}

inline Eigen::Matrix4d randomAdaptedFrame(const Eigen::Matrix4d& g, Rng& rng) {
  return gramSchmidtFrame(g) * randomLorentz(rng);
}

}  // namespace lsl
