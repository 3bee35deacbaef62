#pragma once

#include <span>
#include <string>
#include <vector>

#include "jetham/bundle.hpp"
#include "jetham/field.hpp"
#include "jetham/linalg.hpp"

namespace jetham {

/// Semi-Riemannian metric h_ab(t) on the temporal manifold; fields are stored
/// row-major (m x m) and must depend only on the t block.
struct TemporalMetric {
  Dims dims;
  std::vector<Field> h;
};

/// Semi-Riemannian metric phi_ij(x) on the spatial manifold (n x n, x block only).
struct SpatialMetric {
  Dims dims;
  std::vector<Field> phi;
};

/// Arbitrary linear-connection coefficients chi^a_bc(t) [a][b][c] and
/// Gamma^i_jk(x) [i][j][k]; no symmetry assumed.
struct LinearConnectionCoeffs {
  Dims dims;
  std::vector<Field> chi;
  std::vector<Field> gamma;
};

TemporalMetric make_temporal_metric(Dims dims, const std::vector<std::string>& entries);
SpatialMetric make_spatial_metric(Dims dims, const std::vector<std::string>& entries);

/// Identifies which base block a metric lives on.
struct Block {
  int offset;  // first flat coordinate of the block
  int len;     // number of coordinates
};

inline Block temporal_block(const Dims& d) { return {0, d.m}; }
inline Block spatial_block(const Dims& d) { return {d.m, d.n}; }

/// Levi-Civita coefficients of a metric block at `coords`:
/// G^a_bc = (1/2) g^{ad} (d_b g_dc + d_c g_db - d_d g_bc), returned [a][b][c].
/// Evaluates the metric one dual level above T for the derivatives.
template <class T>
std::vector<T> christoffel_block(std::span<const Field> g, Block blk, std::span<const T> coords) {
  const int n = blk.len;
  Mat<T> gm(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) gm(r, c) = g[static_cast<size_t>(r) * n + c](coords);
  T detv(0.0);
  auto ginv = inverse(gm, 1e-10, &detv);
  if (!ginv) throw SingularMetricError(std::abs(leading(detv)));

  // dg[d][r][c] = d g_rc / d u^d over the block coordinates
  std::vector<T> dg(static_cast<size_t>(n) * n * n);
  std::vector<Dual<T>> dc(coords.begin(), coords.end());
  for (int dcoord = 0; dcoord < n; ++dcoord) {
    dc[blk.offset + dcoord].d = T(1.0);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        dg[(static_cast<size_t>(dcoord) * n + r) * n + c] =
            g[static_cast<size_t>(r) * n + c](std::span<const Dual<T>>(dc.data(), dc.size())).d;
    dc[blk.offset + dcoord].d = T(0.0);
  }

  std::vector<T> out(static_cast<size_t>(n) * n * n, T(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        T acc(0.0);
        for (int e = 0; e < n; ++e) {
          T term = dg[(static_cast<size_t>(b) * n + e) * n + c] +
                   dg[(static_cast<size_t>(c) * n + e) * n + b] -
                   dg[(static_cast<size_t>(e) * n + b) * n + c];
          acc += (*ginv)(a, e) * term;
        }
        out[(static_cast<size_t>(a) * n + b) * n + c] = T(0.5) * acc;
      }
  return out;
}

/// Curvature of the block connection, returned [d][a][b][c]:
/// R^d_abc = d_c G^d_ab - d_b G^d_ac + G^f_ab G^d_fc - G^f_ac G^d_fb.
/// The sign/slot layout is the one that makes the Berwald torsion and
/// curvature tables reproduce exactly; it is antisymmetric in (b, c).
template <class T>
std::vector<T> riemann_block(std::span<const Field> g, Block blk, std::span<const T> coords) {
  const int n = blk.len;
  std::vector<T> gamma = christoffel_block(g, blk, coords);

  // dgam[e][d][a][b] = d G^d_ab / d u^e
  std::vector<T> dgam(static_cast<size_t>(n) * n * n * n);
  std::vector<Dual<T>> dc(coords.begin(), coords.end());
  for (int e = 0; e < n; ++e) {
    dc[blk.offset + e].d = T(1.0);
    std::vector<Dual<T>> gd =
        christoffel_block(g, blk, std::span<const Dual<T>>(dc.data(), dc.size()));
    for (size_t k = 0; k < gd.size(); ++k) dgam[static_cast<size_t>(e) * n * n * n + k] = gd[k].d;
    dc[blk.offset + e].d = T(0.0);
  }

  auto gm = [&](int d_, int a, int b) -> const T& {
    return gamma[(static_cast<size_t>(d_) * n + a) * n + b];
  };
  auto dgm = [&](int e, int d_, int a, int b) -> const T& {
    return dgam[((static_cast<size_t>(e) * n + d_) * n + a) * n + b];
  };

  std::vector<T> out(static_cast<size_t>(n) * n * n * n, T(0.0));
  for (int d_ = 0; d_ < n; ++d_)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          T acc = dgm(c, d_, a, b) - dgm(b, d_, a, c);
          for (int f = 0; f < n; ++f) acc += gm(f, a, b) * gm(d_, f, c) - gm(f, a, c) * gm(d_, f, b);
          out[((static_cast<size_t>(d_) * n + a) * n + b) * n + c] = acc;
        }
  return out;
}

/// Christoffel symbols as differentiable fields, [a][b][c] flat.
std::vector<Field> christoffel_fields(std::span<const Field> g, Block blk);

/// Point evaluations used by the oracles and the Berwald reproduction tests.
std::vector<double> christoffel_at(std::span<const Field> g, Block blk, const Point& pt);
std::vector<double> riemann_at(std::span<const Field> g, Block blk, const Point& pt);

LinearConnectionCoeffs christoffel(const TemporalMetric& h, const SpatialMetric& phi);

}  // namespace jetham
