#pragma once

#include "jetham/bundle.hpp"

namespace jetham::detail {

/// Jacobian blocks of a change phi (source -> target) evaluated at a source
/// point, plus the second-derivative blocks the transformation rules use.
template <class T>
struct RuleFactors {
  std::vector<T> target;  // phi(source)
  Mat<T> jt, jx;          // d(target)/d(source) per block, at the source point
  Mat<T> jt_inv, jx_inv;  // d(source)/d(target)
  std::vector<T> htt;     // d2 tau_t^a / d sigma_t^b d sigma_t^c  [a][b][c]
  std::vector<T> hxx;     // d2 tau_x^i / d sigma_x^j d sigma_x^k  [i][j][k]
  std::vector<T> hx_inv;  // d2 sigma_x^j / d tau_x^r d tau_x^s    [j][r][s], at the target point
};

template <class T>
Mat<T> block_jacobian(std::span<const Field> maps, std::span<const T> at, int offset, int len) {
  Mat<T> out(len);
  std::vector<Dual<T>> c(at.begin(), at.end());
  for (int col = 0; col < len; ++col) {
    c[offset + col].d = T(1.0);
    for (int row = 0; row < len; ++row)
      out(row, col) = maps[row](std::span<const Dual<T>>(c.data(), c.size())).d;
    c[offset + col].d = T(0.0);
  }
  return out;
}

template <class T>
std::vector<T> block_second(std::span<const Field> maps, std::span<const T> at, int offset,
                            int len) {
  std::vector<T> out(static_cast<size_t>(len) * len * len);
  std::vector<Dual<Dual<T>>> c(at.size());
  for (size_t k = 0; k < at.size(); ++k) c[k] = Dual<Dual<T>>(Dual<T>(at[k]));
  for (int b = 0; b < len; ++b)
    for (int cc = 0; cc < len; ++cc) {
      c[offset + b].v.d = T(1.0);
      c[offset + cc].d.v = T(1.0);
      for (int a = 0; a < len; ++a)
        out[(static_cast<size_t>(a) * len + b) * len + cc] =
            maps[a](std::span<const Dual<Dual<T>>>(c.data(), c.size())).d.d;
      c[offset + b].v.d = T(0.0);
      c[offset + cc].d.v = T(0.0);
    }
  return out;
}

template <class T>
RuleFactors<T> rule_factors(const CoordinateChange& phi, std::span<const T> src,
                            bool need_second) {
  const Dims& d = phi.dims;
  RuleFactors<T> out;
  out.target = push_coords<T>(phi, src);
  out.jt = block_jacobian<T>(phi.tmap, src, 0, d.m);
  out.jx = block_jacobian<T>(phi.xmap, src, d.m, d.n);
  T dt(0.0), dx(0.0);
  auto it = inverse(out.jt, 1e-10, &dt);
  if (!it) throw SingularJacobianError(std::abs(leading(dt)));
  auto ix = inverse(out.jx, 1e-10, &dx);
  if (!ix) throw SingularJacobianError(std::abs(leading(dx)));
  out.jt_inv = *it;
  out.jx_inv = *ix;
  if (need_second) {
    out.htt = block_second<T>(phi.tmap, src, 0, d.m);
    out.hxx = block_second<T>(phi.xmap, src, d.m, d.n);
    out.hx_inv = block_second<T>(
        phi.xinv, std::span<const T>(out.target.data(), out.target.size()), d.m, d.n);
  }
  return out;
}

/// d(pushed p-coordinates)/d(source t and x coordinates): out[pair][c] for c
/// in the first m+n source coordinates.
template <class T>
std::vector<T> pushed_p_derivs(const CoordinateChange& phi, std::span<const T> src) {
  const Dims& d = phi.dims;
  std::vector<T> out(static_cast<size_t>(d.pairs()) * (d.m + d.n));
  std::vector<Dual<T>> c(src.begin(), src.end());
  for (int cc = 0; cc < d.m + d.n; ++cc) {
    c[cc].d = T(1.0);
    std::vector<Dual<T>> pushed = push_coords<Dual<T>>(phi, std::span<const Dual<T>>(c));
    for (int q = 0; q < d.pairs(); ++q)
      out[static_cast<size_t>(q) * (d.m + d.n) + cc] = pushed[d.m + d.n + q].d;
    c[cc].d = T(0.0);
  }
  return out;
}

}  // namespace jetham::detail
