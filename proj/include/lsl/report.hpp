#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsl/immersion.hpp"
#include "lsl/parallel.hpp"

namespace lsl {

using ordered_json = nlohmann::ordered_json;

/// Shortest exact decimal form of a double (17 significant digits).
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Pointwise rows over the grid: position (padded to five slots), conformal
/// factor and the four invariants of the null decomposition.
inline void writeSurfaceCsv(std::ostream& os, const Immersion& im) {
  const std::size_t n = static_cast<std::size_t>(im.grid.nu) * im.grid.nv;
  std::vector<std::string> rows(n);
  parallelFor(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / im.grid.nv;
    const int j = static_cast<int>(idx) % im.grid.nv;
    const auto [u, v] = gridPoint(im.grid, i, j);
    const SurfaceData s = surfaceData(im, u, v);
    const Decomposition d = decompose(s);
    std::string row;
    for (int k = 0; k < 5; ++k) {
      row += fmt17(k < s.point.size() ? s.point(k) : 0.0);
      row += ',';
    }
    row += fmt17(s.conformalFactor) + ',';
    row += fmt17(d.hPlus) + ',';
    row += fmt17(d.hMinus) + ',';
    row += fmt17(d.lPlusAbs()) + ',';
    row += fmt17(d.lMinusAbs());
    rows[idx] = std::move(row);
  });
  os << "x1,x2,x3,x4,x5,F,H_plus,H_minus,L_plus_abs,L_minus_abs\n";
  for (const auto& row : rows) os << row << '\n';
}

/// Grid sweep summary: extrema of the invariants, worst residuals of the
/// frame construction, and how many nodes pass each pointwise zero test.
inline ordered_json surfaceReport(const Immersion& im, double tol) {
  const std::size_t n = static_cast<std::size_t>(im.grid.nu) * im.grid.nv;
  std::vector<Decomposition> decs(n);
  std::vector<double> conf(n), quad(n);
  parallelFor(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / im.grid.nv;
    const int j = static_cast<int>(idx) % im.grid.nv;
    const auto [u, v] = gridPoint(im.grid, i, j);
    const SurfaceData s = surfaceData(im, u, v);
    decs[idx] = decompose(s);
    conf[idx] = s.conformality;
    quad[idx] = s.quadricResidual;
  });

  double maxHP = 0.0, maxHM = 0.0, maxLP = 0.0, maxLM = 0.0;
  std::size_t umbilic = 0, stationary = 0;
  for (const auto& d : decs) {
    maxHP = std::max(maxHP, std::abs(d.hPlus));
    maxHM = std::max(maxHM, std::abs(d.hMinus));
    maxLP = std::max(maxLP, d.lPlusAbs());
    maxLM = std::max(maxLM, d.lMinusAbs());
    const SurfaceClass cl{d, tol};
    if (cl.totallyUmbilic()) ++umbilic;
    if (cl.stationary()) ++stationary;
  }

  ordered_json rep;
  rep["name"] = im.name;
  rep["space"] = im.form.name();
  rep["grid"] = {{"nu", im.grid.nu}, {"nv", im.grid.nv},
                 {"u", {im.grid.u0, im.grid.u1}}, {"v", {im.grid.v0, im.grid.v1}}};
  rep["fd_step"] = im.fdStep;
  rep["tol"] = tol;
  rep["max_abs_H_plus"] = maxHP;
  rep["max_abs_H_minus"] = maxHM;
  rep["max_L_plus"] = maxLP;
  rep["max_L_minus"] = maxLM;
  rep["nodes"] = n;
  rep["nodes_totally_umbilic"] = umbilic;
  rep["nodes_stationary"] = stationary;
  rep["traceless_isotropic"] = (maxLM < tol);
  rep["plus_isotropic"] = (maxHM < tol && maxLM < tol);
  rep["minus_isotropic"] = (maxHP < tol && maxLP < tol);
  rep["worst_conformality"] = *std::max_element(conf.begin(), conf.end());
  rep["worst_quadric_residual"] = *std::max_element(quad.begin(), quad.end());
  return rep;
}

}  // namespace lsl
