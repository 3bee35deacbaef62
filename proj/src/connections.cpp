#include "jetham/connections.hpp"

#include <cmath>

namespace jetham {

namespace {

std::vector<Field> zero_fields(size_t count) {
  std::vector<Field> out;
  out.reserve(count);
  Field z = Field::zero();
  for (size_t k = 0; k < count; ++k) out.push_back(z);
  return out;
}

Field negated(const Field& f) {
  return Field::wrap([f](auto coords) { return -f(coords); });
}

std::vector<double> eval_all(std::span<const Field> fs, const Point& pt) {
  std::vector<double> out(fs.size());
  for (size_t k = 0; k < fs.size(); ++k) out[k] = fs[k](pt.coords());
  return out;
}

}  // namespace

NonlinearConnection zero_nlc(Dims dims) {
  NonlinearConnection N;
  N.dims = dims;
  N.n1 = zero_fields(static_cast<size_t>(dims.m) * dims.n * dims.m);
  N.n2 = zero_fields(static_cast<size_t>(dims.m) * dims.n * dims.n);
  return N;
}

NonlinearConnection canonical_nlc(const TemporalMetric& h, const SpatialMetric& phi) {
  LinearConnectionCoeffs lc = christoffel(h, phi);
  return nlc_from_linear(lc);
}

NonlinearConnection nlc_from_linear(const LinearConnectionCoeffs& coeffs) {
  const Dims d = coeffs.dims;
  NonlinearConnection N;
  N.dims = d;
  N.n1.reserve(static_cast<size_t>(d.m) * d.n * d.m);
  N.n2.reserve(static_cast<size_t>(d.m) * d.n * d.n);
  auto chi = std::make_shared<std::vector<Field>>(coeffs.chi);
  auto gam = std::make_shared<std::vector<Field>>(coeffs.gamma);
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int b = 0; b < d.m; ++b) {
        N.n1.push_back(Field::wrap([chi, d, a, i, b](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          T acc(0.0);
          for (int c = 0; c < d.m; ++c)
            acc += (*chi)[(static_cast<size_t>(a) * d.m + c) * d.m + b](coords) *
                   coords[d.coord_p(i, c)];
          return acc;
        }));
      }
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j) {
        N.n2.push_back(Field::wrap([gam, d, a, i, j](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          T acc(0.0);
          for (int s = 0; s < d.n; ++s)
            acc += (*gam)[(static_cast<size_t>(s) * d.n + i) * d.n + j](coords) *
                   coords[d.coord_p(s, a)];
          return -acc;
        }));
      }
  return N;
}

Field frame_derivation(const NonlinearConnection& N, int slot, const Field& f) {
  return Field::wrap<1>([N, slot, f](auto coords) {
    using T = std::remove_cv_t<typename decltype(coords)::element_type>;
    return adapted_deriv<T>(N, f, coords, slot);
  });
}

AdaptedFrame adapted_frame(const NonlinearConnection& N, const Point& pt) {
  const Dims& d = N.dims;
  const int total = d.total();
  AdaptedFrame out{d, Mat<double>(total), Mat<double>(total)};
  std::vector<double> n1 = eval_all(N.n1, pt);
  std::vector<double> n2 = eval_all(N.n2, pt);

  for (int a = 0; a < d.m; ++a) {
    out.frame(a, d.coord_t(a)) = 1.0;
    for (int b = 0; b < d.m; ++b)
      for (int j = 0; j < d.n; ++j)
        out.frame(a, d.coord_p(j, b)) = -n1[N.n1_index(b, j, a)];
  }
  for (int i = 0; i < d.n; ++i) {
    out.frame(d.m + i, d.coord_x(i)) = 1.0;
    for (int b = 0; b < d.m; ++b)
      for (int j = 0; j < d.n; ++j)
        out.frame(d.m + i, d.coord_p(j, b)) = -n2[N.n2_index(b, j, i)];
  }
  for (int q = 0; q < d.pairs(); ++q) out.frame(d.m + d.n + q, d.m + d.n + q) = 1.0;

  for (int a = 0; a < d.m; ++a) out.coframe(a, d.coord_t(a)) = 1.0;
  for (int i = 0; i < d.n; ++i) out.coframe(d.m + i, d.coord_x(i)) = 1.0;
  for (int i = 0; i < d.n; ++i)
    for (int a = 0; a < d.m; ++a) {
      int row = d.m + d.n + d.pair_index(i, a);
      out.coframe(row, d.coord_p(i, a)) = 1.0;
      for (int b = 0; b < d.m; ++b) out.coframe(row, d.coord_t(b)) = n1[N.n1_index(a, i, b)];
      for (int j = 0; j < d.n; ++j) out.coframe(row, d.coord_x(j)) = n2[N.n2_index(a, i, j)];
    }
  return out;
}

BracketCoefficients bracket_coefficients(const NonlinearConnection& N, const Point& pt) {
  const Dims& d = N.dims;
  BracketCoefficients out{
      DTensor(d, {IndexKind::PVec, IndexKind::TDown, IndexKind::TDown}),
      DTensor(d, {IndexKind::PVec, IndexKind::TDown, IndexKind::SDown}),
      DTensor(d, {IndexKind::PVec, IndexKind::SDown, IndexKind::SDown}),
      DTensor(d, {IndexKind::PVec, IndexKind::TDown, IndexKind::PForm}),
      DTensor(d, {IndexKind::PVec, IndexKind::SDown, IndexKind::PForm}),
  };
  std::span<const double> coords = pt.coords();
  // delta-derivatives of every N component along every horizontal slot
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i) {
      int q = d.pair_index(i, a);
      for (int b = 0; b < d.m; ++b)
        for (int c = 0; c < d.m; ++c) {
          if (c < b) continue;
          double v = adapted_deriv<double>(N, N.n1[N.n1_index(a, i, b)], coords, c) -
                     adapted_deriv<double>(N, N.n1[N.n1_index(a, i, c)], coords, b);
          out.r_tt.at({q, b, c}) = v;
          out.r_tt.at({q, c, b}) = -v;
        }
      for (int b = 0; b < d.m; ++b)
        for (int k = 0; k < d.n; ++k)
          out.r_tx.at({q, b, k}) =
              adapted_deriv<double>(N, N.n1[N.n1_index(a, i, b)], coords, d.m + k) -
              adapted_deriv<double>(N, N.n2[N.n2_index(a, i, k)], coords, b);
      for (int j = 0; j < d.n; ++j)
        for (int k = 0; k < d.n; ++k) {
          if (k < j) continue;
          double v = adapted_deriv<double>(N, N.n2[N.n2_index(a, i, j)], coords, d.m + k) -
                     adapted_deriv<double>(N, N.n2[N.n2_index(a, i, k)], coords, d.m + j);
          out.r_xx.at({q, j, k}) = v;
          out.r_xx.at({q, k, j}) = -v;
        }
      for (int b = 0; b < d.m; ++b)
        for (int k = 0; k < d.n; ++k)
          for (int c = 0; c < d.m; ++c)
            out.b_t.at({q, b, d.pair_index(k, c)}) =
                coord_partial<double>(N.n1[N.n1_index(a, i, b)], coords, d.coord_p(k, c));
      for (int j = 0; j < d.n; ++j)
        for (int k = 0; k < d.n; ++k)
          for (int c = 0; c < d.m; ++c)
            out.b_x.at({q, j, d.pair_index(k, c)}) =
                coord_partial<double>(N.n2[N.n2_index(a, i, j)], coords, d.coord_p(k, c));
    }
  return out;
}

std::vector<double> frame_bracket_vertical(const NonlinearConnection& N, int beta, int gamma,
                                           const Point& pt) {
  const Dims& d = N.dims;
  std::vector<double> out(d.pairs(), 0.0);
  for (int q = 0; q < d.pairs(); ++q) {
    int i = d.pair_i(q), a = d.pair_a(q);
    Field u = Field::from_expression(Expression::coordinate(d, d.coord_p(i, a)));
    Field gu = frame_derivation(N, gamma, u);
    Field bu = frame_derivation(N, beta, u);
    out[q] = frame_derivation(N, beta, gu)(pt.coords()) -
             frame_derivation(N, gamma, bu)(pt.coords());
  }
  return out;
}

IntegrabilityReport integrability_check(const NonlinearConnection& N,
                                        std::span<const Point> points) {
  IntegrabilityReport rep;
  for (const Point& pt : points) {
    BracketCoefficients bc = bracket_coefficients(N, pt);
    rep.max_violation = std::max(rep.max_violation, bc.r_tt.max_abs());
    rep.max_violation = std::max(rep.max_violation, bc.r_tx.max_abs());
    rep.max_violation = std::max(rep.max_violation, bc.r_xx.max_abs());
  }
  rep.integrable = rep.max_violation < 1e-9;
  return rep;
}

AlmostProduct almost_product(const NonlinearConnection& N, const Point& pt) {
  const Dims& d = N.dims;
  const int total = d.total();
  AdaptedFrame fr = adapted_frame(N, pt);
  AlmostProduct out;
  out.dims = d;
  out.adapted_diag.assign(static_cast<size_t>(total), 1.0);
  for (int q = 0; q < d.pairs(); ++q) out.adapted_diag[static_cast<size_t>(d.m + d.n + q)] = -1.0;
  out.plus_multiplicity = d.m + d.n;
  out.minus_multiplicity = d.pairs();
  out.natural = Mat<double>(total);
  for (int c = 0; c < total; ++c)
    for (int e = 0; e < total; ++e) {
      double acc = 0.0;
      for (int r = 0; r < total; ++r)
        acc += fr.frame(r, c) * out.adapted_diag[static_cast<size_t>(r)] * fr.coframe(r, e);
      out.natural(c, e) = acc;
    }
  return out;
}

NLinearConnection zero_connection(Dims d) {
  NLinearConnection D;
  D.dims = d;
  D.nlc = zero_nlc(d);
  const size_t m = d.m, n = d.n;
  D.a_tt = zero_fields(m * m * m);
  D.a_ss = zero_fields(n * n * m);
  D.a_pp = zero_fields(m * n * n * m * m);
  D.h_tt = zero_fields(m * m * n);
  D.h_ss = zero_fields(n * n * n);
  D.h_pp = zero_fields(m * n * n * m * n);
  D.c_tt = zero_fields(m * m * n * m);
  D.c_ss = zero_fields(n * n * n * m);
  D.c_pp = zero_fields(m * n * n * m * n * m);
  return D;
}

NLinearConnection berwald_connection(const LinearConnectionCoeffs& coeffs) {
  const Dims d = coeffs.dims;
  NLinearConnection D = zero_connection(d);
  D.nlc = nlc_from_linear(coeffs);
  for (int a = 0; a < d.m; ++a)
    for (int b = 0; b < d.m; ++b)
      for (int c = 0; c < d.m; ++c)
        D.a_tt[D.tt(a, b, c)] = coeffs.chi[(static_cast<size_t>(a) * d.m + b) * d.m + c];
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      for (int k = 0; k < d.n; ++k)
        D.h_ss[D.sx(i, j, k)] = coeffs.gamma[(static_cast<size_t>(i) * d.n + j) * d.n + k];
  // A^(a)(j)_(i)(b)c = -delta^j_i chi^a_bc, H^(a)(j)_(i)(b)k = delta^a_b Gamma^j_ik
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int b = 0; b < d.m; ++b) {
          for (int c = 0; c < d.m; ++c)
            if (i == j)
              D.a_pp[D.pt_(a, i, j, b, c)] =
                  negated(coeffs.chi[(static_cast<size_t>(a) * d.m + b) * d.m + c]);
          for (int k = 0; k < d.n; ++k)
            if (a == b)
              D.h_pp[D.px(a, i, j, b, k)] =
                  coeffs.gamma[(static_cast<size_t>(j) * d.n + i) * d.n + k];
        }
  return D;
}

NLinearConnection berwald_connection(const TemporalMetric& h, const SpatialMetric& phi) {
  return berwald_connection(christoffel(h, phi));
}

DTensorField liouville_hamilton_field(Dims d) {
  DTensorField out;
  out.dims = d;
  out.kinds = {IndexKind::PVec};
  out.comp.reserve(d.pairs());
  for (int q = 0; q < d.pairs(); ++q)
    out.comp.push_back(
        Field::from_expression(Expression::coordinate(d, d.m + d.n + q)));
  return out;
}

namespace {

/// Values of the three coefficient families relevant to one derivative
/// direction, all evaluated at the point.
struct DirCoeffs {
  const Dims d;
  std::vector<double> t, s, p;
  int dir_k = 0, dir_c = 0;  // vertical pair, when applicable
  CovDir kind;

  double ct(int a, int b, int g) const {
    if (kind == CovDir::Temporal) return t[(static_cast<size_t>(a) * d.m + b) * d.m + g];
    if (kind == CovDir::Spatial) return t[(static_cast<size_t>(a) * d.m + b) * d.n + g];
    return t[((static_cast<size_t>(a) * d.m + b) * d.n + dir_k) * d.m + dir_c];
  }
  double cs(int i, int j, int g) const {
    if (kind == CovDir::Temporal) return s[(static_cast<size_t>(i) * d.n + j) * d.m + g];
    if (kind == CovDir::Spatial) return s[(static_cast<size_t>(i) * d.n + j) * d.n + g];
    return s[((static_cast<size_t>(i) * d.n + j) * d.n + dir_k) * d.m + dir_c];
  }
  double cp(int a, int i, int j, int b, int g) const {
    if (kind == CovDir::Temporal)
      return p[(((static_cast<size_t>(a) * d.n + i) * d.n + j) * d.m + b) * d.m + g];
    if (kind == CovDir::Spatial)
      return p[(((static_cast<size_t>(a) * d.n + i) * d.n + j) * d.m + b) * d.n + g];
    return p[((((static_cast<size_t>(a) * d.n + i) * d.n + j) * d.m + b) * d.n + dir_k) * d.m +
             dir_c];
  }
};

DirCoeffs dir_coeffs(const NLinearConnection& D, CovDir dir, const Point& pt, int g) {
  const Dims& d = D.dims;
  DirCoeffs out{d, {}, {}, {}, 0, 0, dir};
  switch (dir) {
    case CovDir::Temporal:
      out.t = eval_all(D.a_tt, pt);
      out.s = eval_all(D.a_ss, pt);
      out.p = eval_all(D.a_pp, pt);
      break;
    case CovDir::Spatial:
      out.t = eval_all(D.h_tt, pt);
      out.s = eval_all(D.h_ss, pt);
      out.p = eval_all(D.h_pp, pt);
      break;
    case CovDir::Vertical:
      out.t = eval_all(D.c_tt, pt);
      out.s = eval_all(D.c_ss, pt);
      out.p = eval_all(D.c_pp, pt);
      out.dir_k = d.pair_i(g);
      out.dir_c = d.pair_a(g);
      break;
  }
  return out;
}

int leading_slot(const Dims& d, CovDir dir, int g) {
  switch (dir) {
    case CovDir::Temporal:
      return g;
    case CovDir::Spatial:
      return d.m + g;
    default:
      return d.m + d.n + g;
  }
}

double base_value(const std::vector<double>& tv, const DTensor& base, std::span<const int> idx) {
  size_t flat = 0;
  for (size_t k = 0; k < idx.size(); ++k)
    flat = flat * static_cast<size_t>(base.shape()[k]) + static_cast<size_t>(idx[k]);
  return tv[flat];
}

}  // namespace

DTensor covariant_derivative(const NLinearConnection& D, const DTensorField& tf, CovDir dir,
                             const Point& pt) {
  const Dims& d = D.dims;
  if (!(tf.dims == d) || !(pt.dims == d))
    throw ShapeMismatchError("covariant derivative: dims mismatch");
  IndexKind extra = dir == CovDir::Temporal  ? IndexKind::TDown
                    : dir == CovDir::Spatial ? IndexKind::SDown
                                             : IndexKind::PForm;
  std::vector<IndexKind> okinds = tf.kinds;
  okinds.push_back(extra);
  DTensor out(d, okinds);
  const int dir_len = axis_length(extra, d);
  const int rank = static_cast<int>(tf.kinds.size());

  std::vector<double> tv(tf.comp.size());
  for (size_t k = 0; k < tf.comp.size(); ++k) tv[k] = tf.comp[k](pt.coords());

  DTensor base(d, tf.kinds);  // for unflatten/shape bookkeeping on the input valence
  std::vector<int> idx(rank), tmp(rank);

  for (int g = 0; g < dir_len; ++g) {
    DirCoeffs co = dir_coeffs(D, dir, pt, g);
    int slot = leading_slot(d, dir, g);
    for (size_t flat = 0; flat < tv.size(); ++flat) {
      base.unflatten(flat, idx);
      double acc = adapted_deriv<double>(D.nlc, tf.comp[flat], pt.coords(), slot);
      for (int ax = 0; ax < rank; ++ax) {
        tmp = idx;
        switch (tf.kinds[ax]) {
          case IndexKind::TUp:
            for (int f = 0; f < d.m; ++f) {
              tmp[ax] = f;
              acc += base_value(tv, base, tmp) * co.ct(idx[ax], f, g);
            }
            break;
          case IndexKind::TDown:
            for (int f = 0; f < d.m; ++f) {
              tmp[ax] = f;
              acc -= base_value(tv, base, tmp) * co.ct(f, idx[ax], g);
            }
            break;
          case IndexKind::SUp:
            for (int r = 0; r < d.n; ++r) {
              tmp[ax] = r;
              acc += base_value(tv, base, tmp) * co.cs(idx[ax], r, g);
            }
            break;
          case IndexKind::SDown:
            for (int r = 0; r < d.n; ++r) {
              tmp[ax] = r;
              acc -= base_value(tv, base, tmp) * co.cs(r, idx[ax], g);
            }
            break;
          case IndexKind::PVec: {
            int a = d.pair_a(idx[ax]), i = d.pair_i(idx[ax]);
            for (int f = 0; f < d.m; ++f)
              for (int r = 0; r < d.n; ++r) {
                tmp[ax] = d.pair_index(r, f);
                acc -= base_value(tv, base, tmp) * co.cp(a, i, r, f, g);
              }
            break;
          }
          case IndexKind::PForm: {
            int b = d.pair_a(idx[ax]), k = d.pair_i(idx[ax]);
            for (int f = 0; f < d.m; ++f)
              for (int r = 0; r < d.n; ++r) {
                tmp[ax] = d.pair_index(r, f);
                acc += base_value(tv, base, tmp) * co.cp(f, r, k, b, g);
              }
            break;
          }
        }
      }
      out[flat * static_cast<size_t>(dir_len) + static_cast<size_t>(g)] = acc;
    }
  }
  return out;
}

DeflectionTensors deflection_tensors(const NLinearConnection& D, const Point& pt) {
  const Dims& d = D.dims;
  DeflectionTensors out{
      DTensor(d, {IndexKind::PVec, IndexKind::TDown}),
      DTensor(d, {IndexKind::PVec, IndexKind::SDown}),
      DTensor(d, {IndexKind::PVec, IndexKind::PForm}),
  };
  std::vector<double> n1 = eval_all(D.nlc.n1, pt);
  std::vector<double> n2 = eval_all(D.nlc.n2, pt);
  std::vector<double> app = eval_all(D.a_pp, pt);
  std::vector<double> hpp = eval_all(D.h_pp, pt);
  std::vector<double> cpp = eval_all(D.c_pp, pt);
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i) {
      int q = d.pair_index(i, a);
      for (int b = 0; b < d.m; ++b) {
        double acc = -n1[D.nlc.n1_index(a, i, b)];
        for (int c = 0; c < d.m; ++c)
          for (int k = 0; k < d.n; ++k) acc -= app[D.pt_(a, i, k, c, b)] * pt.p(k, c);
        out.delta_t.at({q, b}) = acc;
      }
      for (int j = 0; j < d.n; ++j) {
        double acc = -n2[D.nlc.n2_index(a, i, j)];
        for (int c = 0; c < d.m; ++c)
          for (int k = 0; k < d.n; ++k) acc -= hpp[D.px(a, i, k, c, j)] * pt.p(k, c);
        out.delta_x.at({q, j}) = acc;
      }
      for (int j = 0; j < d.n; ++j)
        for (int b = 0; b < d.m; ++b) {
          double acc = (a == b && i == j) ? 1.0 : 0.0;
          for (int c = 0; c < d.m; ++c)
            for (int k = 0; k < d.n; ++k) acc -= cpp[D.pp(a, i, k, c, j, b)] * pt.p(k, c);
          out.theta.at({q, d.pair_index(j, b)}) = acc;
        }
    }
  return out;
}

DeflectionTensors deflection_via_covariant_derivative(const NLinearConnection& D,
                                                      const Point& pt) {
  DTensorField c = liouville_hamilton_field(D.dims);
  return DeflectionTensors{
      covariant_derivative(D, c, CovDir::Temporal, pt),
      covariant_derivative(D, c, CovDir::Spatial, pt),
      covariant_derivative(D, c, CovDir::Vertical, pt),
  };
}

std::vector<Field> frame_covd_comps(const NLinearConnection& D, int y_slot, int z_slot) {
  const Dims& d = D.dims;
  std::vector<Field> comps(static_cast<size_t>(d.total()), Field::zero());
  if (y_slot < d.m) {
    int c = y_slot;
    if (z_slot < d.m) {
      for (int a = 0; a < d.m; ++a) comps[a] = D.a_tt[D.tt(a, z_slot, c)];
    } else if (z_slot < d.m + d.n) {
      int j = z_slot - d.m;
      for (int i = 0; i < d.n; ++i) comps[d.m + i] = D.a_ss[D.ss(i, j, c)];
    } else {
      int q = z_slot - d.m - d.n;
      int j = d.pair_i(q), b = d.pair_a(q);
      for (int a = 0; a < d.m; ++a)
        for (int i = 0; i < d.n; ++i)
          comps[d.m + d.n + d.pair_index(i, a)] = negated(D.a_pp[D.pt_(a, i, j, b, c)]);
    }
  } else if (y_slot < d.m + d.n) {
    int k = y_slot - d.m;
    if (z_slot < d.m) {
      for (int a = 0; a < d.m; ++a) comps[a] = D.h_tt[D.ts(a, z_slot, k)];
    } else if (z_slot < d.m + d.n) {
      int j = z_slot - d.m;
      for (int i = 0; i < d.n; ++i) comps[d.m + i] = D.h_ss[D.sx(i, j, k)];
    } else {
      int q = z_slot - d.m - d.n;
      int j = d.pair_i(q), b = d.pair_a(q);
      for (int a = 0; a < d.m; ++a)
        for (int i = 0; i < d.n; ++i)
          comps[d.m + d.n + d.pair_index(i, a)] = negated(D.h_pp[D.px(a, i, j, b, k)]);
    }
  } else {
    int qy = y_slot - d.m - d.n;
    int k = d.pair_i(qy), c = d.pair_a(qy);
    if (z_slot < d.m) {
      for (int a = 0; a < d.m; ++a) comps[a] = D.c_tt[D.tp(a, z_slot, k, c)];
    } else if (z_slot < d.m + d.n) {
      int j = z_slot - d.m;
      for (int i = 0; i < d.n; ++i) comps[d.m + i] = D.c_ss[D.sp(i, j, k, c)];
    } else {
      int qz = z_slot - d.m - d.n;
      int j = d.pair_i(qz), b = d.pair_a(qz);
      for (int a = 0; a < d.m; ++a)
        for (int i = 0; i < d.n; ++i)
          comps[d.m + d.n + d.pair_index(i, a)] = negated(D.c_pp[D.pp(a, i, j, b, k, c)]);
    }
  }
  return comps;
}

std::vector<double> covd_vector(const NLinearConnection& D, int beta,
                                std::span<const Field> comps, const Point& pt) {
  const Dims& d = D.dims;
  std::vector<double> w(comps.size());
  for (size_t k = 0; k < comps.size(); ++k) w[k] = comps[k](pt.coords());

  CovDir dir = beta < d.m               ? CovDir::Temporal
               : beta < d.m + d.n       ? CovDir::Spatial
                                        : CovDir::Vertical;
  int g = beta < d.m ? beta : beta < d.m + d.n ? beta - d.m : beta - d.m - d.n;
  DirCoeffs co = dir_coeffs(D, dir, pt, g);

  std::vector<double> out(comps.size(), 0.0);
  for (int a = 0; a < d.m; ++a) {
    double acc = adapted_deriv<double>(D.nlc, comps[a], pt.coords(), beta);
    for (int b = 0; b < d.m; ++b) acc += w[b] * co.ct(a, b, g);
    out[a] = acc;
  }
  for (int i = 0; i < d.n; ++i) {
    double acc = adapted_deriv<double>(D.nlc, comps[d.m + i], pt.coords(), beta);
    for (int j = 0; j < d.n; ++j) acc += w[d.m + j] * co.cs(i, j, g);
    out[d.m + i] = acc;
  }
  for (int q = 0; q < d.pairs(); ++q) {
    int i = d.pair_i(q), a = d.pair_a(q);
    double acc = adapted_deriv<double>(D.nlc, comps[d.m + d.n + q], pt.coords(), beta);
    for (int f = 0; f < d.m; ++f)
      for (int r = 0; r < d.n; ++r)
        acc -= w[d.m + d.n + d.pair_index(r, f)] * co.cp(a, i, r, f, g);
    out[d.m + d.n + q] = acc;
  }
  return out;
}

}  // namespace jetham
