#pragma once

#include <random>
#include <string>
#include <vector>

#include "jetham/scenario.hpp"

namespace jetham::testsupport {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Symmetric, diagonally dominant analytic metric entries on one block.
inline std::vector<std::string> random_metric(std::mt19937_64& rng, int side, const char* var) {
  std::uniform_real_distribution<double> base(1.3, 1.9);
  std::uniform_real_distribution<double> wig(0.15, 0.35);
  std::uniform_real_distribution<double> off(-0.12, 0.12);
  std::vector<std::string> entries(static_cast<size_t>(side) * side, "0");
  for (int a = 0; a < side; ++a) {
    std::string u = std::string(var) + "[" + std::to_string(a + 1) + "]";
    std::string v = std::string(var) + "[" + std::to_string((a + 1) % side + 1) + "]";
    entries[static_cast<size_t>(a) * side + a] =
        num(base(rng)) + " + " + num(wig(rng)) + "*sin(" + u + (side > 1 ? " + " + v : "") + ")";
  }
  for (int a = 0; a < side; ++a)
    for (int b = a + 1; b < side; ++b) {
      std::string e = num(off(rng)) + "*cos(" + var + "[" + std::to_string(a + 1) + "] - " + var +
                      "[" + std::to_string(b + 1) + "])";
      entries[static_cast<size_t>(a) * side + b] = e;
      entries[static_cast<size_t>(b) * side + a] = e;
    }
  return entries;
}

inline Point random_point(Dims dims, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Point pt(dims);
  for (double& v : pt.c) v = u(rng);
  return pt;
}

/// Canonical-Berwald scenario over a random analytic metric pair.
inline Scenario random_metric_scenario(Dims dims, std::uint64_t seed, int npoints = 3) {
  std::mt19937_64 rng(seed);
  Scenario s;
  s.dims = dims;
  s.seed = seed;
  s.temporal_metric = random_metric(rng, dims.m, "t");
  s.spatial_metric = random_metric(rng, dims.n, "x");
  s.hamiltonian = "p[1][1]^2 + 0.3*p[1][1]*sin(x[1]) + 0.1*p[1][1]^3";
  for (int k = 0; k < npoints; ++k) s.eval_points.push_back(random_point(dims, rng, -0.9, 0.9));
  return s;
}

/// Small random expression in (t, x, p), bounded on the probe box.
inline std::string random_coeff_expr(Dims dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-0.4, 0.4);
  std::uniform_int_distribution<int> pick(0, 5);
  auto coord = [&]() -> std::string {
    std::uniform_int_distribution<int> which(0, 2);
    switch (which(rng)) {
      case 0:
        return "t[" + std::to_string(1 + static_cast<int>(rng() % dims.m)) + "]";
      case 1:
        return "x[" + std::to_string(1 + static_cast<int>(rng() % dims.n)) + "]";
      default:
        return "p[" + std::to_string(1 + static_cast<int>(rng() % dims.n)) + "][" +
               std::to_string(1 + static_cast<int>(rng() % dims.m)) + "]";
    }
  };
  switch (pick(rng)) {
    case 0:
      return num(c(rng));
    case 1:
      return num(c(rng)) + "*" + coord();
    case 2:
      return num(c(rng)) + "*sin(" + coord() + ")";
    case 3:
      return num(c(rng)) + "*cos(" + coord() + " + " + coord() + ")";
    case 4:
      return num(c(rng)) + "*" + coord() + "*" + coord();
    default:
      return num(c(rng)) + "*exp(0.3*" + coord() + ")";
  }
}

/// Fully custom connection scenario with every family populated (nonzero C).
inline Scenario random_custom_scenario(Dims dims, std::uint64_t seed, int npoints = 2) {
  std::mt19937_64 rng(seed ^ 0xa5a5a5a5ull);
  Scenario s;
  s.dims = dims;
  s.seed = seed;
  s.mode = Scenario::Mode::Custom;
  const size_t m = dims.m, n = dims.n;
  auto fam = [&](size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (size_t k = 0; k < count; ++k) out.push_back(random_coeff_expr(dims, rng));
    return out;
  };
  s.temporal_metric = random_metric(rng, dims.m, "t");
  s.spatial_metric = random_metric(rng, dims.n, "x");
  s.n1 = fam(m * n * m);
  s.n2 = fam(m * n * n);
  s.a_tt = fam(m * m * m);
  s.a_ss = fam(n * n * m);
  s.a_pp = fam(m * n * n * m * m);
  s.h_tt = fam(m * m * n);
  s.h_ss = fam(n * n * n);
  s.h_pp = fam(m * n * n * m * n);
  s.c_tt = fam(m * m * n * m);
  s.c_ss = fam(n * n * n * m);
  s.c_pp = fam(m * n * n * m * n * m);
  for (int k = 0; k < npoints; ++k) s.eval_points.push_back(random_point(dims, rng, -0.8, 0.8));
  return s;
}

/// The unit-sphere spatial metric scenario at x1 = pi/3 used across tests.
inline Scenario sphere_scenario(double p_value = 0.5) {
  Scenario s;
  s.dims = {1, 2};
  s.seed = 11;
  s.temporal_metric = {"1"};
  s.spatial_metric = {"1", "0", "0", "sin(x[1])^2"};
  Point pt(s.dims);
  pt.t(0) = 0.2;
  pt.x(0) = 1.0471975511965976;  // pi/3
  pt.x(1) = 0.4;
  pt.p(0, 0) = p_value;
  pt.p(1, 0) = p_value;
  s.eval_points.push_back(pt);
  return s;
}

inline Scenario flat_scenario(Dims dims) {
  Scenario s;
  s.dims = dims;
  s.seed = 3;
  for (int a = 0; a < dims.m; ++a)
    for (int b = 0; b < dims.m; ++b) s.temporal_metric.push_back(a == b ? "1" : "0");
  for (int i = 0; i < dims.n; ++i)
    for (int j = 0; j < dims.n; ++j) s.spatial_metric.push_back(i == j ? "1" : "0");
  std::mt19937_64 rng(99);
  s.eval_points.push_back(random_point(dims, rng));
  s.eval_points.push_back(random_point(dims, rng));
  return s;
}

}  // namespace jetham::testsupport
