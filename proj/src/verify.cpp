#include "jetham/verify.hpp"

#include <cmath>
#include <sstream>

#include "jetham/rule_factors.hpp"

namespace jetham {

namespace {

Field plus_constant(const Field& f, double c) {
  return Field::wrap([f, c](auto coords) {
    using T = std::remove_cv_t<typename decltype(coords)::element_type>;
    return f(coords) + T(c);
  });
}

std::vector<double> eval_all(std::span<const Field> fs, std::span<const double> coords) {
  std::vector<double> out(fs.size());
  for (size_t k = 0; k < fs.size(); ++k) out[k] = fs[k](coords);
  return out;
}

}  // namespace

CovarianceReport check_dtensor_covariance(const std::string& object_id, const TensorFn& in_old,
                                          const TensorFn& in_new, const CoordinateChange& chg,
                                          std::span<const Point> pts, double tol,
                                          double mutation) {
  CovarianceReport rep;
  rep.object_id = object_id;
  rep.change_id = chg.id;
  rep.tolerance = tol;
  for (const Point& pt : pts) {
    DTensor t_old = in_old(pt);
    if (mutation != 0.0 && t_old.size() > 0) t_old[0] += mutation;
    DTensor transported = dtensor_transform(t_old, chg, pt);
    DTensor native = in_new(push_point(chg, pt));
    double res = max_abs_difference(transported, native);
    rep.per_point.push_back(res);
    rep.max_abs_residual = std::max(rep.max_abs_residual, res);
  }
  rep.pass = rep.max_abs_residual < tol;
  return rep;
}

CovarianceReport check_nlc_covariance(const std::string& id, const NonlinearConnection& n_old,
                                      const NonlinearConnection& n_new,
                                      const CoordinateChange& chg, std::span<const Point> pts,
                                      double tol, double mutation) {
  const Dims& d = n_old.dims;
  CovarianceReport rep;
  rep.object_id = id;
  rep.change_id = chg.id;
  rep.tolerance = tol;

  NonlinearConnection old = n_old;
  if (mutation != 0.0) old.n1[0] = plus_constant(old.n1[0], mutation);

  for (const Point& pt : pts) {
    ChangeJacobians jac = change_jacobians(chg, pt);
    Mat<double> nf = natural_frame_jacobians(chg, pt);
    Point pushed = push_point(chg, pt);
    std::vector<double> n1o = eval_all(old.n1, pt.coords());
    std::vector<double> n2o = eval_all(old.n2, pt.coords());
    std::vector<double> n1n = eval_all(n_new.n1, pushed.coords());
    std::vector<double> n2n = eval_all(n_new.n2, pushed.coords());

    double res = 0.0;
    for (int b = 0; b < d.m; ++b)
      for (int j = 0; j < d.n; ++j) {
        for (int a = 0; a < d.m; ++a) {
          double lhs = 0.0;
          for (int c = 0; c < d.m; ++c) lhs += n1n[old.n1_index(b, j, c)] * jac.jt(c, a);
          double rhs = -nf(d.coord_t(a), d.coord_p(j, b));
          for (int c = 0; c < d.m; ++c)
            for (int k = 0; k < d.n; ++k)
              rhs += n1o[old.n1_index(c, k, a)] * jac.jt(b, c) * jac.jx_inv(k, j);
          res = std::max(res, std::abs(lhs - rhs));
        }
        for (int i = 0; i < d.n; ++i) {
          double lhs = 0.0;
          for (int k = 0; k < d.n; ++k) lhs += n2n[old.n2_index(b, j, k)] * jac.jx(k, i);
          double rhs = -nf(d.coord_x(i), d.coord_p(j, b));
          for (int c = 0; c < d.m; ++c)
            for (int k = 0; k < d.n; ++k)
              rhs += n2o[old.n2_index(c, k, i)] * jac.jt(b, c) * jac.jx_inv(k, j);
          res = std::max(res, std::abs(lhs - rhs));
        }
      }
    rep.per_point.push_back(res);
    rep.max_abs_residual = std::max(rep.max_abs_residual, res);
  }
  rep.pass = rep.max_abs_residual < tol;
  return rep;
}

CovarianceReport check_connection_coeff_rules(const std::string& id,
                                              const NLinearConnection& d_old,
                                              const NLinearConnection& d_new,
                                              const CoordinateChange& chg,
                                              std::span<const Point> pts, double tol,
                                              double mutation) {
  const Dims& d = d_old.dims;
  CovarianceReport rep;
  rep.object_id = id;
  rep.change_id = chg.id;
  rep.tolerance = tol;

  NLinearConnection old = d_old;
  if (mutation != 0.0) old.a_tt[0] = plus_constant(old.a_tt[0], mutation);

  for (const Point& pt : pts) {
    detail::RuleFactors<double> rf = detail::rule_factors<double>(chg, pt.coords(), true);
    std::span<const double> tgt(rf.target.data(), rf.target.size());

    std::vector<double> att_o = eval_all(old.a_tt, pt.coords());
    std::vector<double> ass_o = eval_all(old.a_ss, pt.coords());
    std::vector<double> app_o = eval_all(old.a_pp, pt.coords());
    std::vector<double> htt_o = eval_all(old.h_tt, pt.coords());
    std::vector<double> hss_o = eval_all(old.h_ss, pt.coords());
    std::vector<double> hpp_o = eval_all(old.h_pp, pt.coords());
    std::vector<double> ctt_o = eval_all(old.c_tt, pt.coords());
    std::vector<double> css_o = eval_all(old.c_ss, pt.coords());
    std::vector<double> cpp_o = eval_all(old.c_pp, pt.coords());
    std::vector<double> att_n = eval_all(d_new.a_tt, tgt);
    std::vector<double> ass_n = eval_all(d_new.a_ss, tgt);
    std::vector<double> app_n = eval_all(d_new.a_pp, tgt);
    std::vector<double> htt_n = eval_all(d_new.h_tt, tgt);
    std::vector<double> hss_n = eval_all(d_new.h_ss, tgt);
    std::vector<double> hpp_n = eval_all(d_new.h_pp, tgt);
    std::vector<double> ctt_n = eval_all(d_new.c_tt, tgt);
    std::vector<double> css_n = eval_all(d_new.c_ss, tgt);
    std::vector<double> cpp_n = eval_all(d_new.c_pp, tgt);

    double res = 0.0;
    auto track = [&](double lhs, double rhs) { res = std::max(res, std::abs(lhs - rhs)); };

    // (hT) block
    for (int dd = 0; dd < d.m; ++dd)
      for (int b = 0; b < d.m; ++b)
        for (int c = 0; c < d.m; ++c) {
          double rhs = 0.0;
          for (int a = 0; a < d.m; ++a) {
            double inner = rf.htt[(static_cast<size_t>(a) * d.m + b) * d.m + c];
            for (int f = 0; f < d.m; ++f)
              for (int g = 0; g < d.m; ++g)
                inner += att_n[old.tt(a, f, g)] * rf.jt(f, b) * rf.jt(g, c);
            rhs += rf.jt_inv(dd, a) * inner;
          }
          track(att_o[old.tt(dd, b, c)], rhs);
        }
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int c = 0; c < d.m; ++c) {
          double rhs = 0.0;
          for (int k = 0; k < d.n; ++k)
            for (int l = 0; l < d.n; ++l)
              for (int e = 0; e < d.m; ++e)
                rhs += ass_n[old.ss(k, l, e)] * rf.jx_inv(i, k) * rf.jx(l, j) * rf.jt(e, c);
          track(ass_o[old.ss(i, j, c)], rhs);
        }
    for (int a = 0; a < d.m; ++a)
      for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j)
          for (int b = 0; b < d.m; ++b)
            for (int c = 0; c < d.m; ++c) {
              double rhs = 0.0;
              for (int dd = 0; dd < d.m; ++dd)
                for (int k = 0; k < d.n; ++k)
                  for (int l = 0; l < d.n; ++l)
                    for (int f = 0; f < d.m; ++f)
                      for (int g = 0; g < d.m; ++g)
                        rhs += app_n[old.pt_(dd, k, l, f, g)] * rf.jt_inv(a, dd) * rf.jx(k, i) *
                               rf.jx_inv(j, l) * rf.jt(f, b) * rf.jt(g, c);
              if (i == j)
                for (int dd = 0; dd < d.m; ++dd)
                  rhs -= rf.jt_inv(a, dd) * rf.htt[(static_cast<size_t>(dd) * d.m + b) * d.m + c];
              track(app_o[old.pt_(a, i, j, b, c)], rhs);
            }

    // (hM) block
    for (int a = 0; a < d.m; ++a)
      for (int b = 0; b < d.m; ++b)
        for (int k = 0; k < d.n; ++k) {
          double rhs = 0.0;
          for (int c = 0; c < d.m; ++c)
            for (int e = 0; e < d.m; ++e)
              for (int l = 0; l < d.n; ++l)
                rhs += htt_n[old.ts(c, e, l)] * rf.jt_inv(a, c) * rf.jt(e, b) * rf.jx(l, k);
          track(htt_o[old.ts(a, b, k)], rhs);
        }
    for (int l = 0; l < d.n; ++l)
      for (int j = 0; j < d.n; ++j)
        for (int k = 0; k < d.n; ++k) {
          double rhs = 0.0;
          for (int i = 0; i < d.n; ++i) {
            double inner = rf.hxx[(static_cast<size_t>(i) * d.n + j) * d.n + k];
            for (int r = 0; r < d.n; ++r)
              for (int s = 0; s < d.n; ++s)
                inner += hss_n[old.sx(i, r, s)] * rf.jx(r, j) * rf.jx(s, k);
            rhs += rf.jx_inv(l, i) * inner;
          }
          track(hss_o[old.sx(l, j, k)], rhs);
        }
    for (int a = 0; a < d.m; ++a)
      for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j)
          for (int b = 0; b < d.m; ++b)
            for (int k = 0; k < d.n; ++k) {
              double rhs = 0.0;
              for (int f = 0; f < d.m; ++f)
                for (int r = 0; r < d.n; ++r)
                  for (int l = 0; l < d.n; ++l)
                    for (int g = 0; g < d.m; ++g)
                      for (int s = 0; s < d.n; ++s)
                        rhs += hpp_n[old.px(f, r, l, g, s)] * rf.jt_inv(a, f) * rf.jx(r, i) *
                               rf.jx_inv(j, l) * rf.jt(g, b) * rf.jx(s, k);
              if (a == b)
                for (int r = 0; r < d.n; ++r)
                  for (int s = 0; s < d.n; ++s)
                    rhs -= rf.jx(r, i) * rf.jx(s, k) *
                           rf.hx_inv[(static_cast<size_t>(j) * d.n + r) * d.n + s];
              track(hpp_o[old.px(a, i, j, b, k)], rhs);
            }

    // (w) block
    for (int a = 0; a < d.m; ++a)
      for (int b = 0; b < d.m; ++b)
        for (int k = 0; k < d.n; ++k)
          for (int c = 0; c < d.m; ++c) {
            double rhs = 0.0;
            for (int dd = 0; dd < d.m; ++dd)
              for (int f = 0; f < d.m; ++f)
                for (int r = 0; r < d.n; ++r)
                  for (int g = 0; g < d.m; ++g)
                    rhs += ctt_n[old.tp(dd, f, r, g)] * rf.jt_inv(a, dd) * rf.jt(f, b) *
                           rf.jx_inv(k, r) * rf.jt(g, c);
            track(ctt_o[old.tp(a, b, k, c)], rhs);
          }
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int k = 0; k < d.n; ++k)
          for (int c = 0; c < d.m; ++c) {
            double rhs = 0.0;
            for (int r = 0; r < d.n; ++r)
              for (int l = 0; l < d.n; ++l)
                for (int f = 0; f < d.m; ++f)
                  for (int s = 0; s < d.n; ++s)
                    rhs += css_n[old.sp(r, l, s, f)] * rf.jx_inv(i, r) * rf.jx(l, j) *
                           rf.jt(f, c) * rf.jx_inv(k, s);
            track(css_o[old.sp(i, j, k, c)], rhs);
          }
    for (int a = 0; a < d.m; ++a)
      for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j)
          for (int b = 0; b < d.m; ++b)
            for (int k = 0; k < d.n; ++k)
              for (int c = 0; c < d.m; ++c) {
                double rhs = 0.0;
                for (int dd = 0; dd < d.m; ++dd)
                  for (int l = 0; l < d.n; ++l)
                    for (int r = 0; r < d.n; ++r)
                      for (int f = 0; f < d.m; ++f)
                        for (int s = 0; s < d.n; ++s)
                          for (int g = 0; g < d.m; ++g)
                            rhs += cpp_n[old.pp(dd, l, r, f, s, g)] * rf.jt_inv(a, dd) *
                                   rf.jx(l, i) * rf.jx_inv(j, r) * rf.jt(f, b) *
                                   rf.jx_inv(k, s) * rf.jt(g, c);
                track(cpp_o[old.pp(a, i, j, b, k, c)], rhs);
              }

    rep.per_point.push_back(res);
    rep.max_abs_residual = std::max(rep.max_abs_residual, res);
  }
  rep.pass = rep.max_abs_residual < tol;
  return rep;
}

AdFdReport ad_fd_crosscheck(std::span<const ScalarField> fields, std::span<const Point> pts) {
  AdFdReport rep;
  const double h = 1e-5;
  for (const ScalarField& f : fields) {
    const Dims& d = f.dims();
    auto coord_ref = [&](int flat) {
      if (flat < d.m) return CoordRef::t(flat + 1);
      if (flat < d.m + d.n) return CoordRef::x(flat - d.m + 1);
      int q = flat - d.m - d.n;
      return CoordRef::p(d.pair_i(q) + 1, d.pair_a(q) + 1);
    };
    for (const Point& pt : pts) {
      if (!(pt.dims == d)) continue;
      for (int c1 = 0; c1 < d.total(); ++c1) {
        CoordRef r1 = coord_ref(c1);
        double ad1 = f.partial({r1}, pt);
        Point up = pt, dn = pt;
        up.c[c1] += h;
        dn.c[c1] -= h;
        double fd1 = (f.eval(up) - f.eval(dn)) / (2 * h);
        rep.max_rel_order1 =
            std::max(rep.max_rel_order1, std::abs(ad1 - fd1) / (1.0 + std::abs(ad1)));

        for (int c2 = c1; c2 < d.total(); ++c2) {
          CoordRef r2 = coord_ref(c2);
          double ad2 = f.partial({r1, r2}, pt);
          double ad2_swapped = f.partial({r2, r1}, pt);
          rep.max_symmetry = std::max(
              rep.max_symmetry, std::abs(ad2 - ad2_swapped) / (1.0 + std::abs(ad2)));
          double fd2;
          if (c1 == c2) {
            fd2 = (f.eval(up) - 2 * f.eval(pt) + f.eval(dn)) / (h * h);
          } else {
            Point pp = pt, pm = pt, mp = pt, mm = pt;
            pp.c[c1] += h;
            pp.c[c2] += h;
            pm.c[c1] += h;
            pm.c[c2] -= h;
            mp.c[c1] -= h;
            mp.c[c2] += h;
            mm.c[c1] -= h;
            mm.c[c2] -= h;
            fd2 = (f.eval(pp) - f.eval(pm) - f.eval(mp) + f.eval(mm)) / (4 * h * h);
          }
          rep.max_rel_order2 =
              std::max(rep.max_rel_order2, std::abs(ad2 - fd2) / (1.0 + std::abs(ad2)));
        }
      }
    }
  }
  rep.pass = rep.max_rel_order1 < rep.tolerance && rep.max_rel_order2 < rep.tolerance;
  return rep;
}

std::vector<ScalarField> random_field_corpus(Dims dims, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.2, 1.2);
  std::uniform_int_distribution<int> coord(0, dims.total() - 1);

  std::function<Expression(int)> build = [&](int depth) -> Expression {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    switch (pick(rng)) {
      case 0:
        return Expression::constant(dims, coef(rng));
      case 1:
        return Expression::coordinate(dims, coord(rng));
      case 2:
        return Expression::binary(NodeKind::Add, build(depth - 1), build(depth - 1));
      case 3:
        return Expression::binary(NodeKind::Sub, build(depth - 1), build(depth - 1));
      case 4:
        return Expression::binary(NodeKind::Mul, build(depth - 1), build(depth - 1));
      case 5:
        return Expression::unary(NodeKind::Sin, build(depth - 1));
      case 6:
        return Expression::unary(NodeKind::Cos, build(depth - 1));
      case 7:
        // exp of a damped argument stays bounded on the probe box
        return Expression::unary(
            NodeKind::Exp,
            Expression::binary(NodeKind::Mul, Expression::constant(dims, 0.4), build(depth - 1)));
      case 8:
        // log(2.5 + sin(u)) is smooth and safely positive
        return Expression::unary(
            NodeKind::Log,
            Expression::binary(NodeKind::Add, Expression::constant(dims, 2.5),
                               Expression::unary(NodeKind::Sin, build(depth - 1))));
      default:
        return Expression::binary(NodeKind::Pow, Expression::coordinate(dims, coord(rng)),
                                  Expression::constant(dims, 2.0 + (rng() % 2)));
    }
  };

  std::vector<ScalarField> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Expression inner = build(3);
    // damp the overall scale so the finite-difference oracle's rounding floor
    // stays well below the 1e-5 comparison tolerance
    Expression e = Expression::binary(
        NodeKind::Add,
        Expression::binary(NodeKind::Mul, Expression::constant(dims, 0.2), inner),
        Expression::binary(NodeKind::Mul, Expression::constant(dims, coef(rng)),
                           Expression::coordinate(dims, coord(rng))));
    out.emplace_back(e);
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Random well-conditioned affine block map with expression-string inverse.
void affine_block(std::mt19937_64& rng, int len, const char* var,
                  std::vector<std::string>& fwd, std::vector<std::string>& inv) {
  std::uniform_real_distribution<double> off(-0.4, 0.4);
  std::uniform_real_distribution<double> mix(-0.25, 0.25);
  Mat<double> a(len);
  for (int r = 0; r < len; ++r)
    for (int c = 0; c < len; ++c) a(r, c) = (r == c ? 1.0 : 0.0) + mix(rng);
  auto ainv = inverse(a);
  if (!ainv) throw Error("affine test change degenerate");
  std::vector<double> shift(len);
  for (int r = 0; r < len; ++r) shift[r] = off(rng);
  for (int r = 0; r < len; ++r) {
    std::ostringstream f;
    for (int c = 0; c < len; ++c)
      f << (c ? " + " : "") << "(" << fmt(a(r, c)) << ")*" << var << "[" << c + 1 << "]";
    f << " + (" << fmt(shift[r]) << ")";
    fwd.push_back(f.str());
    std::ostringstream g;
    for (int c = 0; c < len; ++c)
      g << (c ? " + " : "") << "(" << fmt((*ainv)(r, c)) << ")*(" << var << "[" << c + 1 << "] - ("
        << fmt(shift[c]) << "))";
    inv.push_back(g.str());
  }
}

void exp_block(std::mt19937_64& rng, int len, const char* var, std::vector<std::string>& fwd,
               std::vector<std::string>& inv) {
  std::uniform_real_distribution<double> scale(0.85, 1.2);
  std::uniform_real_distribution<double> rate(0.12, 0.22);
  for (int r = 0; r < len; ++r) {
    double s = scale(rng), c = rate(rng) * (rng() % 2 ? 1.0 : -1.0);
    std::ostringstream f, g;
    f << "(" << fmt(s) << ")*exp((" << fmt(c) << ")*" << var << "[" << r + 1 << "])";
    g << "log(" << var << "[" << r + 1 << "]/(" << fmt(s) << "))/(" << fmt(c) << ")";
    fwd.push_back(f.str());
    inv.push_back(g.str());
  }
}

void quad_shear_block(std::mt19937_64& rng, int len, const char* var,
                      std::vector<std::string>& fwd, std::vector<std::string>& inv) {
  std::uniform_real_distribution<double> qd(0.06, 0.12);
  if (len == 1) {
    double q = qd(rng);
    fwd.push_back(var + std::string("[1] + (") + fmt(q) + ")*" + var + "[1]^2");
    inv.push_back("(sqrt(1 + 4*(" + fmt(q) + ")*" + var + "[1]) - 1)/(2*(" + fmt(q) + "))");
    return;
  }
  std::uniform_real_distribution<double> amp(0.1, 0.25);
  std::uniform_real_distribution<double> diag(0.85, 1.2);
  std::vector<std::string> inv_sub(len);
  for (int r = 0; r < len; ++r) {
    double a = diag(rng);
    std::ostringstream f;
    f << "(" << fmt(a) << ")*" << var << "[" << r + 1 << "]";
    std::ostringstream g;
    if (r == 0) {
      g << var << "[1]/(" << fmt(a) << ")";
    } else {
      double e = amp(rng);
      f << " + (" << fmt(e) << ")*sin(" << var << "[" << r << "])";
      g << "(" << var << "[" << r + 1 << "] - (" << fmt(e) << ")*sin(" << inv_sub[r - 1]
        << "))/(" << fmt(a) << ")";
    }
    fwd.push_back(f.str());
    inv_sub[r] = g.str();
    inv.push_back(g.str());
  }
}

}  // namespace

std::vector<CoordinateChange> standard_changes(Dims dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<CoordinateChange> out;
  out.push_back(identity_change(dims));
  for (int k = 0; k < 2; ++k) {
    std::vector<std::string> tf, ti, xf, xi;
    affine_block(rng, dims.m, "t", tf, ti);
    affine_block(rng, dims.n, "x", xf, xi);
    out.push_back(make_change(dims, "affine-" + std::to_string(k + 1), tf, xf, ti, xi));
  }
  {
    std::vector<std::string> tf, ti, xf, xi;
    exp_block(rng, dims.m, "t", tf, ti);
    affine_block(rng, dims.n, "x", xf, xi);
    out.push_back(make_change(dims, "nonlinear-1", tf, xf, ti, xi));
  }
  {
    std::vector<std::string> tf, ti, xf, xi;
    quad_shear_block(rng, dims.m, "t", tf, ti);
    quad_shear_block(rng, dims.n, "x", xf, xi);
    out.push_back(make_change(dims, "nonlinear-2", tf, xf, ti, xi));
  }
  return out;
}

std::vector<Point> probe_points(const Point& center, double radius, int count,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
  std::uniform_real_distribution<double> off(-radius, radius);
  std::vector<Point> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Point pt = center;
    for (double& v : pt.c) v += off(rng);
    out.push_back(pt);
  }
  return out;
}

namespace {

void push_line(std::vector<CheckLine>& lines, const CovarianceReport& rep) {
  lines.push_back({rep.object_id + " [" + rep.change_id + "]", rep.max_abs_residual,
                   rep.tolerance, rep.pass, ""});
}

}  // namespace

std::vector<CheckLine> covariance_suite(const CompiledScenario& cs, const SuiteOptions& opt) {
  std::vector<CheckLine> lines;
  const Dims d = cs.dims;
  std::vector<CoordinateChange> changes = standard_changes(d, cs.seed);

  for (const CoordinateChange& chg : changes) {
    CompiledScenario tilde = transform_scenario(cs, chg);
    std::vector<Point> pts =
        probe_points(cs.points.front(), 0.35, opt.points_per_change, cs.seed + 17);

    push_line(lines, check_nlc_covariance("nonlinear-connection rule", cs.conn.nlc,
                                          tilde.conn.nlc, chg, pts, opt.rule_tol, cs.mutation));
    push_line(lines, check_connection_coeff_rules("nine coefficient rules", cs.conn, tilde.conn,
                                                  chg, pts, opt.rule_tol, cs.mutation));

    // d-tensor families: compute both sides natively, compare against the
    // per-kind factor transport. Tables are computed once per point.
    for (const Point& pt : pts) {
      Point pushed = push_point(chg, pt);
      ChangeJacobians jac = change_jacobians(chg, pt);
      auto compare = [&](const std::string& id, const DTensor& t_old_in, const DTensor& t_new) {
        DTensor t_old = t_old_in;
        if (cs.mutation != 0.0 && t_old.size() > 0) t_old[0] += cs.mutation;
        double res = max_abs_difference(dtensor_transform(t_old, jac), t_new);
        bool found = false;
        for (CheckLine& ln : lines) {
          if (ln.id == id + " [" + chg.id + "]") {
            ln.residual = std::max(ln.residual, res);
            ln.pass = ln.residual < ln.tolerance;
            found = true;
            break;
          }
        }
        if (!found)
          lines.push_back({id + " [" + chg.id + "]", res, opt.tensor_tol,
                           res < opt.tensor_tol, ""});
      };

      compare("C* Liouville-Hamilton", liouville_hamilton(pt), liouville_hamilton(pushed));
      if (cs.hamiltonian)
        compare("G fundamental metric", fundamental_metric(*cs.hamiltonian, pt),
                fundamental_metric(*tilde.hamiltonian, pushed));
      compare("H polymomentum tensor", polymomentum_hamilton_tensor(cs.phi.phi, pt),
              polymomentum_hamilton_tensor(tilde.phi.phi, pushed));
      compare("J h-normalization", h_normalization_tensor(cs.h.h, pt),
              h_normalization_tensor(tilde.h.h, pushed));

      // Only the three R families are d-tensors; the B families carry the
      // connection's inhomogeneous term (their tensorial combinations are the
      // torsion P families checked below).
      BracketCoefficients bo = bracket_coefficients(cs.conn.nlc, pt);
      BracketCoefficients bn = bracket_coefficients(tilde.conn.nlc, pushed);
      compare("bracket R_tt", bo.r_tt, bn.r_tt);
      compare("bracket R_tx", bo.r_tx, bn.r_tx);
      compare("bracket R_xx", bo.r_xx, bn.r_xx);

      TorsionTable to = torsion_table(cs.conn, pt);
      TorsionTable tn = torsion_table(tilde.conn, pushed);
      for (size_t k = 0; k < to.families.size(); ++k)
        compare("torsion " + to.families[k].name, to.families[k].value, tn.families[k].value);

      CurvatureTable co = curvature_table(cs.conn, pt);
      CurvatureTable cn = curvature_table(tilde.conn, pushed);
      for (size_t k = 0; k < co.families.size(); ++k)
        compare("curvature " + co.families[k].name, co.families[k].value, cn.families[k].value);

      DeflectionTensors eo = deflection_tensors(cs.conn, pt);
      DeflectionTensors en = deflection_tensors(tilde.conn, pushed);
      compare("deflection Delta_t", eo.delta_t, en.delta_t);
      compare("deflection Delta_x", eo.delta_x, en.delta_x);
      compare("deflection theta", eo.theta, en.theta);
    }
  }

  if (opt.mutation_guards) {
    const CoordinateChange& chg = changes[1];
    CompiledScenario tilde = transform_scenario(cs, chg);
    std::vector<Point> pts = probe_points(cs.points.front(), 0.35, 3, cs.seed + 17);

    CovarianceReport g1 = check_nlc_covariance("guard", cs.conn.nlc, tilde.conn.nlc, chg, pts,
                                               1e-8, 0.1);
    lines.push_back({"mutation guard: nlc rule [" + chg.id + "]", g1.max_abs_residual, 1e-8,
                     !g1.pass, "check must fail when perturbed"});
    CovarianceReport g2 = check_connection_coeff_rules("guard", cs.conn, tilde.conn, chg, pts,
                                                       1e-8, 0.1);
    lines.push_back({"mutation guard: nine rules [" + chg.id + "]", g2.max_abs_residual, 1e-8,
                     !g2.pass, "check must fail when perturbed"});
    TensorFn f_old = [&](const Point& pt) { return liouville_hamilton(pt); };
    CovarianceReport g3 =
        check_dtensor_covariance("guard", f_old, f_old, chg, pts, 1e-6, 0.1);
    lines.push_back({"mutation guard: d-tensor [" + chg.id + "]", g3.max_abs_residual, 1e-6,
                     !g3.pass, "check must fail when perturbed"});
  }
  return lines;
}

std::vector<CheckLine> oracle_suite(const CompiledScenario& cs) {
  std::vector<CheckLine> lines;
  const Dims d = cs.dims;

  double tor_res = 0.0, cur_res = 0.0, br_res = 0.0, defl_res = 0.0, dual_res = 0.0;
  double proj_res = 0.0;
  bool structure_exact = true;

  for (const Point& pt : cs.points) {
    TorsionTable tt = torsion_table(cs.conn, pt);
    TorsionTable to = torsion_table_via_oracle(cs.conn, pt);
    tor_res = std::max(tor_res, max_table_difference(tt, to));

    CurvatureTable ct = curvature_table(cs.conn, pt);
    CurvatureTable co = curvature_table_via_oracle(cs.conn, pt);
    cur_res = std::max(cur_res, max_table_difference(ct, co));

    BracketCoefficients bc = bracket_coefficients(cs.conn.nlc, pt);
    for (int b = 0; b < d.m; ++b) {
      for (int c = 0; c < d.m; ++c) {
        std::vector<double> v = frame_bracket_vertical(cs.conn.nlc, b, c, pt);
        for (int q = 0; q < d.pairs(); ++q)
          br_res = std::max(br_res, std::abs(v[q] - bc.r_tt.at({q, b, c})));
      }
      for (int k = 0; k < d.n; ++k) {
        std::vector<double> v = frame_bracket_vertical(cs.conn.nlc, b, d.m + k, pt);
        for (int q = 0; q < d.pairs(); ++q)
          br_res = std::max(br_res, std::abs(v[q] - bc.r_tx.at({q, b, k})));
      }
      for (int qp = 0; qp < d.pairs(); ++qp) {
        std::vector<double> v = frame_bracket_vertical(cs.conn.nlc, b, d.m + d.n + qp, pt);
        for (int q = 0; q < d.pairs(); ++q)
          br_res = std::max(br_res, std::abs(v[q] - bc.b_t.at({q, b, qp})));
      }
    }
    for (int j = 0; j < d.n; ++j) {
      for (int k = 0; k < d.n; ++k) {
        std::vector<double> v = frame_bracket_vertical(cs.conn.nlc, d.m + j, d.m + k, pt);
        for (int q = 0; q < d.pairs(); ++q)
          br_res = std::max(br_res, std::abs(v[q] - bc.r_xx.at({q, j, k})));
      }
      for (int qp = 0; qp < d.pairs(); ++qp) {
        std::vector<double> v = frame_bracket_vertical(cs.conn.nlc, d.m + j, d.m + d.n + qp, pt);
        for (int q = 0; q < d.pairs(); ++q)
          br_res = std::max(br_res, std::abs(v[q] - bc.b_x.at({q, j, qp})));
      }
    }

    DeflectionTensors closed = deflection_tensors(cs.conn, pt);
    DeflectionTensors via = deflection_via_covariant_derivative(cs.conn, pt);
    defl_res = std::max(defl_res, max_abs_difference(closed.delta_t, via.delta_t));
    defl_res = std::max(defl_res, max_abs_difference(closed.delta_x, via.delta_x));
    defl_res = std::max(defl_res, max_abs_difference(closed.theta, via.theta));

    AdaptedFrame fr = adapted_frame(cs.conn.nlc, pt);
    for (int r = 0; r < d.total(); ++r)
      for (int s = 0; s < d.total(); ++s) {
        double acc = 0.0;
        for (int c = 0; c < d.total(); ++c) acc += fr.frame(r, c) * fr.coframe(s, c);
        dual_res = std::max(dual_res, std::abs(acc - (r == s ? 1.0 : 0.0)));
      }

    AlmostProduct ap = almost_product(cs.conn.nlc, pt);
    if (ap.plus_multiplicity != d.m + d.n || ap.minus_multiplicity != d.pairs())
      structure_exact = false;
    for (int q = 0; q < d.total(); ++q) {
      double want = q < d.m + d.n ? 1.0 : -1.0;
      if (ap.adapted_diag[static_cast<size_t>(q)] != want) structure_exact = false;
    }
    Mat<double> p2 = ap.natural * ap.natural;
    for (int r = 0; r < d.total(); ++r)
      for (int c = 0; c < d.total(); ++c)
        proj_res = std::max(proj_res, std::abs(p2(r, c) - (r == c ? 1.0 : 0.0)));
  }

  lines.push_back({"torsion table vs definition oracle", tor_res, 1e-6, tor_res < 1e-6, ""});
  lines.push_back({"curvature table vs definition oracle", cur_res, 1e-6, cur_res < 1e-6, ""});
  lines.push_back({"bracket coefficients vs commutator", br_res, 1e-6, br_res < 1e-6, ""});
  lines.push_back(
      {"deflection closed form vs covariant derivative", defl_res, 1e-10, defl_res < 1e-10, ""});
  lines.push_back({"frame/coframe duality", dual_res, 1e-12, dual_res < 1e-12, ""});
  lines.push_back({"almost product structure (adapted diag, multiplicities)", 0.0, 0.0,
                   structure_exact, structure_exact ? "exact" : "mismatch"});
  lines.push_back({"almost product P^2 = I (natural frame)", proj_res, 1e-10, proj_res < 1e-10,
                   ""});

  std::vector<ScalarField> corpus = random_field_corpus(d, 40, cs.seed + 5);
  std::vector<Point> pts = probe_points(cs.points.front(), 0.3, 3, cs.seed + 29);
  AdFdReport ad = ad_fd_crosscheck(corpus, pts);
  lines.push_back({"AD vs central FD (orders 1-2)",
                   std::max(ad.max_rel_order1, ad.max_rel_order2), ad.tolerance, ad.pass, ""});
  lines.push_back({"mixed partial symmetry", ad.max_symmetry, 1e-12, ad.max_symmetry < 1e-12,
                   ""});
  return lines;
}

CheckLine integrability_suite(const CompiledScenario& cs) {
  IntegrabilityReport rep = integrability_check(cs.conn.nlc, cs.points);
  return {"integrability of the horizontal distribution", rep.max_violation, 1e-9, true,
          rep.integrable ? "integrable" : "not integrable"};
}

}  // namespace jetham
