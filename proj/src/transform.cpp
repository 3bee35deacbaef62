#include "jetham/transform.hpp"

#include "jetham/rule_factors.hpp"

namespace jetham {

using detail::RuleFactors;
using detail::block_jacobian;
using detail::block_second;
using detail::pushed_p_derivs;
using detail::rule_factors;

Field pullback_scalar(const Field& f, const CoordinateChange& chg) {
  CoordinateChange inv = inverse_change(chg);
  return Field::wrap<1>([f, inv](auto coords) {
    using T = std::remove_cv_t<typename decltype(coords)::element_type>;
    std::vector<T> old = push_coords<T>(inv, coords);
    return f(std::span<const T>(old.data(), old.size()));
  });
}

TemporalMetric transform_temporal_metric(const TemporalMetric& h, const CoordinateChange& chg) {
  const Dims d = h.dims;
  CoordinateChange inv = inverse_change(chg);
  auto fields = std::make_shared<std::vector<Field>>(h.h);
  TemporalMetric out;
  out.dims = d;
  for (int a = 0; a < d.m; ++a)
    for (int b = 0; b < d.m; ++b) {
      out.h.push_back(Field::wrap<1>([fields, chg, inv, d, a, b](auto coords) {
        using T = std::remove_cv_t<typename decltype(coords)::element_type>;
        std::vector<T> old = push_coords<T>(inv, coords);
        Mat<T> jti = block_jacobian<T>(chg.tinv, coords, 0, d.m);  // dt^c/dt~^a at the new point
        T acc(0.0);
        for (int c = 0; c < d.m; ++c)
          for (int e = 0; e < d.m; ++e)
            acc += (*fields)[static_cast<size_t>(c) * d.m + e](
                       std::span<const T>(old.data(), old.size())) *
                   jti(c, a) * jti(e, b);
        return acc;
      }));
    }
  return out;
}

SpatialMetric transform_spatial_metric(const SpatialMetric& phi, const CoordinateChange& chg) {
  const Dims d = phi.dims;
  CoordinateChange inv = inverse_change(chg);
  auto fields = std::make_shared<std::vector<Field>>(phi.phi);
  SpatialMetric out;
  out.dims = d;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      out.phi.push_back(Field::wrap<1>([fields, chg, inv, d, i, j](auto coords) {
        using T = std::remove_cv_t<typename decltype(coords)::element_type>;
        std::vector<T> old = push_coords<T>(inv, coords);
        Mat<T> jxi = block_jacobian<T>(chg.xinv, coords, d.m, d.n);
        T acc(0.0);
        for (int k = 0; k < d.n; ++k)
          for (int l = 0; l < d.n; ++l)
            acc += (*fields)[static_cast<size_t>(k) * d.n + l](
                       std::span<const T>(old.data(), old.size())) *
                   jxi(k, i) * jxi(l, j);
        return acc;
      }));
    }
  return out;
}

LinearConnectionCoeffs transform_linear_coeffs(const LinearConnectionCoeffs& lc,
                                               const CoordinateChange& chg) {
  const Dims d = lc.dims;
  CoordinateChange phi = inverse_change(chg);  // source = new coords, target = old
  auto chi = std::make_shared<std::vector<Field>>(lc.chi);
  auto gam = std::make_shared<std::vector<Field>>(lc.gamma);
  LinearConnectionCoeffs out;
  out.dims = d;
  for (int a = 0; a < d.m; ++a)
    for (int b = 0; b < d.m; ++b)
      for (int c = 0; c < d.m; ++c) {
        out.chi.push_back(Field::wrap<2>([chi, phi, d, a, b, c](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          RuleFactors<T> rf = rule_factors<T>(phi, coords, true);
          std::span<const T> tgt(rf.target.data(), rf.target.size());
          T acc(0.0);
          for (int dd = 0; dd < d.m; ++dd) {
            T inner(0.0);
            for (int e = 0; e < d.m; ++e)
              for (int f = 0; f < d.m; ++f)
                inner += (*chi)[(static_cast<size_t>(dd) * d.m + e) * d.m + f](tgt) * rf.jt(e, b) *
                         rf.jt(f, c);
            inner += rf.htt[(static_cast<size_t>(dd) * d.m + b) * d.m + c];
            acc += rf.jt_inv(a, dd) * inner;
          }
          return acc;
        }));
      }
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      for (int k = 0; k < d.n; ++k) {
        out.gamma.push_back(Field::wrap<2>([gam, phi, d, i, j, k](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          RuleFactors<T> rf = rule_factors<T>(phi, coords, true);
          std::span<const T> tgt(rf.target.data(), rf.target.size());
          T acc(0.0);
          for (int r = 0; r < d.n; ++r) {
            T inner(0.0);
            for (int s = 0; s < d.n; ++s)
              for (int u = 0; u < d.n; ++u)
                inner += (*gam)[(static_cast<size_t>(r) * d.n + s) * d.n + u](tgt) * rf.jx(s, j) *
                         rf.jx(u, k);
            inner += rf.hxx[(static_cast<size_t>(r) * d.n + j) * d.n + k];
            acc += rf.jx_inv(i, r) * inner;
          }
          return acc;
        }));
      }
  return out;
}

NonlinearConnection transform_nlc_by_rule(const NonlinearConnection& N,
                                          const CoordinateChange& chg) {
  const Dims d = N.dims;
  CoordinateChange inv = inverse_change(chg);
  auto n1 = std::make_shared<std::vector<Field>>(N.n1);
  auto n2 = std::make_shared<std::vector<Field>>(N.n2);
  NonlinearConnection out;
  out.dims = d;

  // The rule reads, at an old point q with image q~:
  //   N~1^(b)_(j)c = sum_a [ N1^(e)_(k)a jt(b,e) jx_inv(k,j) - dp~(j,b)/dt^a ] jt_inv(a,c)
  // and the spatial analogue contracts with jx_inv(i,k) instead.
  for (int b = 0; b < d.m; ++b)
    for (int j = 0; j < d.n; ++j) {
      for (int c = 0; c < d.m; ++c) {
        out.n1.push_back(Field::wrap<2>([n1, chg, inv, d, b, j, c](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          std::vector<T> oldv = push_coords<T>(inv, coords);
          std::span<const T> old(oldv.data(), oldv.size());
          RuleFactors<T> rf = rule_factors<T>(chg, old, false);
          std::vector<T> dp = pushed_p_derivs<T>(chg, old);
          T acc(0.0);
          for (int a = 0; a < d.m; ++a) {
            T rhs(0.0);
            for (int e = 0; e < d.m; ++e)
              for (int k = 0; k < d.n; ++k)
                rhs += (*n1)[(static_cast<size_t>(e) * d.n + k) * d.m + a](old) * rf.jt(b, e) *
                       rf.jx_inv(k, j);
            rhs = rhs - dp[static_cast<size_t>(d.pair_index(j, b)) * (d.m + d.n) + a];
            acc += rhs * rf.jt_inv(a, c);
          }
          return acc;
        }));
      }
      for (int k = 0; k < d.n; ++k) {
        out.n2.push_back(Field::wrap<2>([n2, chg, inv, d, b, j, k](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          std::vector<T> oldv = push_coords<T>(inv, coords);
          std::span<const T> old(oldv.data(), oldv.size());
          RuleFactors<T> rf = rule_factors<T>(chg, old, false);
          std::vector<T> dp = pushed_p_derivs<T>(chg, old);
          T acc(0.0);
          for (int i = 0; i < d.n; ++i) {
            T rhs(0.0);
            for (int e = 0; e < d.m; ++e)
              for (int r = 0; r < d.n; ++r)
                rhs += (*n2)[(static_cast<size_t>(e) * d.n + r) * d.n + i](old) * rf.jt(b, e) *
                       rf.jx_inv(r, j);
            rhs = rhs - dp[static_cast<size_t>(d.pair_index(j, b)) * (d.m + d.n) + d.m + i];
            acc += rhs * rf.jx_inv(i, k);
          }
          return acc;
        }));
      }
    }
  return out;
}

NLinearConnection transform_connection_by_rules(const NLinearConnection& D,
                                                const CoordinateChange& chg) {
  const Dims d = D.dims;
  CoordinateChange phi = inverse_change(chg);  // source = new coords, target = old
  NLinearConnection out = zero_connection(d);
  out.dims = d;
  out.nlc = transform_nlc_by_rule(D.nlc, chg);

  auto att = std::make_shared<std::vector<Field>>(D.a_tt);
  auto ass = std::make_shared<std::vector<Field>>(D.a_ss);
  auto app = std::make_shared<std::vector<Field>>(D.a_pp);
  auto htt = std::make_shared<std::vector<Field>>(D.h_tt);
  auto hss = std::make_shared<std::vector<Field>>(D.h_ss);
  auto hpp = std::make_shared<std::vector<Field>>(D.h_pp);
  auto ctt = std::make_shared<std::vector<Field>>(D.c_tt);
  auto css = std::make_shared<std::vector<Field>>(D.c_ss);
  auto cpp = std::make_shared<std::vector<Field>>(D.c_pp);
  NLinearConnection idx;  // dims-only copy, used for its index helpers
  idx.dims = d;

  for (int a = 0; a < d.m; ++a)
    for (int b = 0; b < d.m; ++b)
      for (int c = 0; c < d.m; ++c)
        out.a_tt[idx.tt(a, b, c)] = Field::wrap<2>([att, phi, d, idx, a, b, c](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          RuleFactors<T> rf = rule_factors<T>(phi, coords, true);
          std::span<const T> tgt(rf.target.data(), rf.target.size());
          T acc(0.0);
          for (int e = 0; e < d.m; ++e) {
            T inner(0.0);
            for (int f = 0; f < d.m; ++f)
              for (int g = 0; g < d.m; ++g)
                inner += (*att)[idx.tt(e, f, g)](tgt) * rf.jt(f, b) * rf.jt(g, c);
            inner += rf.htt[(static_cast<size_t>(e) * d.m + b) * d.m + c];
            acc += rf.jt_inv(a, e) * inner;
          }
          return acc;
        });
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      for (int c = 0; c < d.m; ++c)
        out.a_ss[idx.ss(i, j, c)] = Field::wrap<2>([ass, phi, d, idx, i, j, c](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          RuleFactors<T> rf = rule_factors<T>(phi, coords, false);
          std::span<const T> tgt(rf.target.data(), rf.target.size());
          T acc(0.0);
          for (int k = 0; k < d.n; ++k)
            for (int l = 0; l < d.n; ++l)
              for (int e = 0; e < d.m; ++e)
                acc += (*ass)[idx.ss(k, l, e)](tgt) * rf.jx_inv(i, k) * rf.jx(l, j) * rf.jt(e, c);
          return acc;
        });
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int b = 0; b < d.m; ++b)
          for (int c = 0; c < d.m; ++c)
            out.a_pp[idx.pt_(a, i, j, b, c)] =
                Field::wrap<2>([app, phi, d, idx, a, i, j, b, c](auto coords) {
                  using T = std::remove_cv_t<typename decltype(coords)::element_type>;
                  RuleFactors<T> rf = rule_factors<T>(phi, coords, true);
                  std::span<const T> tgt(rf.target.data(), rf.target.size());
                  T acc(0.0);
                  for (int dd = 0; dd < d.m; ++dd)
                    for (int k = 0; k < d.n; ++k)
                      for (int l = 0; l < d.n; ++l)
                        for (int f = 0; f < d.m; ++f)
                          for (int g = 0; g < d.m; ++g)
                            acc += (*app)[idx.pt_(dd, k, l, f, g)](tgt) * rf.jt_inv(a, dd) *
                                   rf.jx(k, i) * rf.jx_inv(j, l) * rf.jt(f, b) * rf.jt(g, c);
                  if (i == j) {
                    for (int dd = 0; dd < d.m; ++dd)
                      acc = acc - rf.jt_inv(a, dd) *
                                      rf.htt[(static_cast<size_t>(dd) * d.m + b) * d.m + c];
                  }
                  return acc;
                });
  for (int a = 0; a < d.m; ++a)
    for (int b = 0; b < d.m; ++b)
      for (int k = 0; k < d.n; ++k)
        out.h_tt[idx.ts(a, b, k)] = Field::wrap<2>([htt, phi, d, idx, a, b, k](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          RuleFactors<T> rf = rule_factors<T>(phi, coords, false);
          std::span<const T> tgt(rf.target.data(), rf.target.size());
          T acc(0.0);
          for (int c = 0; c < d.m; ++c)
            for (int e = 0; e < d.m; ++e)
              for (int l = 0; l < d.n; ++l)
                acc += (*htt)[idx.ts(c, e, l)](tgt) * rf.jt_inv(a, c) * rf.jt(e, b) * rf.jx(l, k);
          return acc;
        });
  for (int l = 0; l < d.n; ++l)
    for (int j = 0; j < d.n; ++j)
      for (int k = 0; k < d.n; ++k)
        out.h_ss[idx.sx(l, j, k)] = Field::wrap<2>([hss, phi, d, idx, l, j, k](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          RuleFactors<T> rf = rule_factors<T>(phi, coords, true);
          std::span<const T> tgt(rf.target.data(), rf.target.size());
          T acc(0.0);
          for (int i = 0; i < d.n; ++i) {
            T inner(0.0);
            for (int r = 0; r < d.n; ++r)
              for (int s = 0; s < d.n; ++s)
                inner += (*hss)[idx.sx(i, r, s)](tgt) * rf.jx(r, j) * rf.jx(s, k);
            inner += rf.hxx[(static_cast<size_t>(i) * d.n + j) * d.n + k];
            acc += rf.jx_inv(l, i) * inner;
          }
          return acc;
        });
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int b = 0; b < d.m; ++b)
          for (int k = 0; k < d.n; ++k)
            out.h_pp[idx.px(a, i, j, b, k)] =
                Field::wrap<2>([hpp, phi, d, idx, a, i, j, b, k](auto coords) {
                  using T = std::remove_cv_t<typename decltype(coords)::element_type>;
                  RuleFactors<T> rf = rule_factors<T>(phi, coords, true);
                  std::span<const T> tgt(rf.target.data(), rf.target.size());
                  T acc(0.0);
                  for (int f = 0; f < d.m; ++f)
                    for (int r = 0; r < d.n; ++r)
                      for (int l = 0; l < d.n; ++l)
                        for (int g = 0; g < d.m; ++g)
                          for (int s = 0; s < d.n; ++s)
                            acc += (*hpp)[idx.px(f, r, l, g, s)](tgt) * rf.jt_inv(a, f) *
                                   rf.jx(r, i) * rf.jx_inv(j, l) * rf.jt(g, b) * rf.jx(s, k);
                  if (a == b) {
                    for (int r = 0; r < d.n; ++r)
                      for (int s = 0; s < d.n; ++s)
                        acc = acc - rf.jx(r, i) * rf.jx(s, k) *
                                        rf.hx_inv[(static_cast<size_t>(j) * d.n + r) * d.n + s];
                  }
                  return acc;
                });
  for (int a = 0; a < d.m; ++a)
    for (int b = 0; b < d.m; ++b)
      for (int k = 0; k < d.n; ++k)
        for (int c = 0; c < d.m; ++c)
          out.c_tt[idx.tp(a, b, k, c)] =
              Field::wrap<2>([ctt, phi, d, idx, a, b, k, c](auto coords) {
                using T = std::remove_cv_t<typename decltype(coords)::element_type>;
                RuleFactors<T> rf = rule_factors<T>(phi, coords, false);
                std::span<const T> tgt(rf.target.data(), rf.target.size());
                T acc(0.0);
                for (int dd = 0; dd < d.m; ++dd)
                  for (int f = 0; f < d.m; ++f)
                    for (int r = 0; r < d.n; ++r)
                      for (int g = 0; g < d.m; ++g)
                        acc += (*ctt)[idx.tp(dd, f, r, g)](tgt) * rf.jt_inv(a, dd) * rf.jt(f, b) *
                               rf.jx_inv(k, r) * rf.jt(g, c);
                return acc;
              });
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      for (int k = 0; k < d.n; ++k)
        for (int c = 0; c < d.m; ++c)
          out.c_ss[idx.sp(i, j, k, c)] =
              Field::wrap<2>([css, phi, d, idx, i, j, k, c](auto coords) {
                using T = std::remove_cv_t<typename decltype(coords)::element_type>;
                RuleFactors<T> rf = rule_factors<T>(phi, coords, false);
                std::span<const T> tgt(rf.target.data(), rf.target.size());
                T acc(0.0);
                for (int r = 0; r < d.n; ++r)
                  for (int l = 0; l < d.n; ++l)
                    for (int f = 0; f < d.m; ++f)
                      for (int s = 0; s < d.n; ++s)
                        acc += (*css)[idx.sp(r, l, s, f)](tgt) * rf.jx_inv(i, r) * rf.jx(l, j) *
                               rf.jt(f, c) * rf.jx_inv(k, s);
                return acc;
              });
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int b = 0; b < d.m; ++b)
          for (int k = 0; k < d.n; ++k)
            for (int c = 0; c < d.m; ++c)
              out.c_pp[idx.pp(a, i, j, b, k, c)] =
                  Field::wrap<2>([cpp, phi, d, idx, a, i, j, b, k, c](auto coords) {
                    using T = std::remove_cv_t<typename decltype(coords)::element_type>;
                    RuleFactors<T> rf = rule_factors<T>(phi, coords, false);
                    std::span<const T> tgt(rf.target.data(), rf.target.size());
                    T acc(0.0);
                    for (int dd = 0; dd < d.m; ++dd)
                      for (int l = 0; l < d.n; ++l)
                        for (int r = 0; r < d.n; ++r)
                          for (int f = 0; f < d.m; ++f)
                            for (int s = 0; s < d.n; ++s)
                              for (int g = 0; g < d.m; ++g)
                                acc += (*cpp)[idx.pp(dd, l, r, f, s, g)](tgt) *
                                       rf.jt_inv(a, dd) * rf.jx(l, i) * rf.jx_inv(j, r) *
                                       rf.jt(f, b) * rf.jx_inv(k, s) * rf.jt(g, c);
                    return acc;
                  });
  return out;
}

}  // namespace jetham
