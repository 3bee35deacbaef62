#include "jetham/tensors.hpp"

#include <cmath>

namespace jetham {

namespace {

using K = IndexKind;

const DTensor& find_in(const std::vector<TensorFamily>& fams, const std::string& name) {
  for (const TensorFamily& f : fams)
    if (f.name == name) return f.value;
  throw Error("no such tensor family: " + name);
}

/// Point values plus frame derivatives of every component of one coefficient
/// family. dt/dx/dp are laid out [comp][direction].
struct FamilyValues {
  std::vector<double> v, dt, dx, dp;
};

FamilyValues family_values(const NonlinearConnection& nlc, std::span<const Field> fam,
                           const Point& pt, bool need_dt, bool need_dx, bool need_dp) {
  const Dims& d = nlc.dims;
  FamilyValues out;
  out.v.resize(fam.size());
  if (need_dt) out.dt.resize(fam.size() * static_cast<size_t>(d.m));
  if (need_dx) out.dx.resize(fam.size() * static_cast<size_t>(d.n));
  if (need_dp) out.dp.resize(fam.size() * static_cast<size_t>(d.pairs()));
  std::span<const double> coords = pt.coords();
  for (size_t k = 0; k < fam.size(); ++k) {
    out.v[k] = fam[k](coords);
    if (need_dt)
      for (int c = 0; c < d.m; ++c)
        out.dt[k * d.m + c] = adapted_deriv<double>(nlc, fam[k], coords, c);
    if (need_dx)
      for (int s = 0; s < d.n; ++s)
        out.dx[k * d.n + s] = adapted_deriv<double>(nlc, fam[k], coords, d.m + s);
    if (need_dp)
      for (int q = 0; q < d.pairs(); ++q)
        out.dp[k * d.pairs() + q] = coord_partial<double>(fam[k], coords, d.m + d.n + q);
  }
  return out;
}

/// The C coefficient families repackaged as d-tensor fields so the generic
/// covariant derivative applies to them. The flat layout of c_tt/c_ss already
/// matches the DTensor axis order; the paired family needs its leading axis
/// reordered from storage (a,i) to the PVec flattening (i,a).
DTensorField c_tt_field(const NLinearConnection& D) {
  return {D.dims, {K::TUp, K::TDown, K::PForm}, D.c_tt};
}

DTensorField c_ss_field(const NLinearConnection& D) {
  return {D.dims, {K::SUp, K::SDown, K::PForm}, D.c_ss};
}

DTensorField c_pp_field(const NLinearConnection& D) {
  const Dims& d = D.dims;
  DTensorField out;
  out.dims = d;
  out.kinds = {K::PVec, K::PForm, K::PForm};
  out.comp.resize(D.c_pp.size());
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int b = 0; b < d.m; ++b)
          for (int k = 0; k < d.n; ++k)
            for (int c = 0; c < d.m; ++c) {
              size_t dst = (static_cast<size_t>(d.pair_index(i, a)) * d.pairs() +
                            d.pair_index(j, b)) *
                               d.pairs() +
                           d.pair_index(k, c);
              out.comp[dst] = D.c_pp[D.pp(a, i, j, b, k, c)];
            }
  return out;
}

TorsionTable make_torsion_shell(Dims d) {
  TorsionTable t;
  t.dims = d;
  auto add = [&](const char* name, const char* block, std::vector<K> kinds,
                 std::vector<std::string> idx) {
    t.families.push_back({name, block, DTensor(d, std::move(kinds)), std::move(idx)});
  };
  add("T^c_ab", "hT(hT,hT)", {K::TUp, K::TDown, K::TDown}, {"c", "a", "b"});
  add("T^k_ab", "hM(hT,hT)", {K::SUp, K::TDown, K::TDown}, {"k", "a", "b"});
  add("R^(f)_(r)ab", "w(hT,hT)", {K::PVec, K::TDown, K::TDown}, {"f", "r", "a", "b"});
  add("T^c_aj", "hT(hT,hM)", {K::TUp, K::TDown, K::SDown}, {"c", "a", "j"});
  add("T^k_aj", "hM(hT,hM)", {K::SUp, K::TDown, K::SDown}, {"k", "a", "j"});
  add("R^(f)_(r)aj", "w(hT,hM)", {K::PVec, K::TDown, K::SDown}, {"f", "r", "a", "j"});
  add("P^c(j)_a(b)", "hT(hT,w)", {K::TUp, K::TDown, K::PForm}, {"c", "a", "j", "b"});
  add("P^k(j)_a(b)", "hM(hT,w)", {K::SUp, K::TDown, K::PForm}, {"k", "a", "j", "b"});
  add("P^(f)(j)_(r)a(b)", "w(hT,w)", {K::PVec, K::TDown, K::PForm}, {"f", "r", "a", "j", "b"});
  add("T^c_ij", "hT(hM,hM)", {K::TUp, K::SDown, K::SDown}, {"c", "i", "j"});
  add("T^k_ij", "hM(hM,hM)", {K::SUp, K::SDown, K::SDown}, {"k", "i", "j"});
  add("R^(f)_(r)ij", "w(hM,hM)", {K::PVec, K::SDown, K::SDown}, {"f", "r", "i", "j"});
  add("P^c(j)_i(b)", "hT(hM,w)", {K::TUp, K::SDown, K::PForm}, {"c", "i", "j", "b"});
  add("P^k(j)_i(b)", "hM(hM,w)", {K::SUp, K::SDown, K::PForm}, {"k", "i", "j", "b"});
  add("P^(f)(j)_(r)i(b)", "w(hM,w)", {K::PVec, K::SDown, K::PForm}, {"f", "r", "i", "j", "b"});
  add("S^c(i)(j)_(a)(b)", "hT(w,w)", {K::TUp, K::PForm, K::PForm}, {"c", "i", "a", "j", "b"});
  add("S^k(i)(j)_(a)(b)", "hM(w,w)", {K::SUp, K::PForm, K::PForm}, {"k", "i", "a", "j", "b"});
  add("S^(f)(i)(j)_(r)(a)(b)", "w(w,w)", {K::PVec, K::PForm, K::PForm},
      {"f", "r", "i", "a", "j", "b"});
  return t;
}

CurvatureTable make_curvature_shell(Dims d) {
  CurvatureTable t;
  t.dims = d;
  auto add = [&](const char* name, const char* block, std::vector<K> kinds,
                 std::vector<std::string> idx) {
    t.families.push_back({name, block, DTensor(d, std::move(kinds)), std::move(idx)});
  };
  add("R^d_abc", "hT(hT,hT)", {K::TUp, K::TDown, K::TDown, K::TDown}, {"d", "a", "b", "c"});
  add("R^l_ibc", "hM(hT,hT)", {K::SUp, K::SDown, K::TDown, K::TDown}, {"l", "i", "b", "c"});
  add("R^(d)(i)_(l)(a)bc", "w(hT,hT)", {K::PVec, K::PForm, K::TDown, K::TDown},
      {"d", "l", "i", "a", "b", "c"});
  add("R^d_abk", "hT(hM,hT)", {K::TUp, K::TDown, K::TDown, K::SDown}, {"d", "a", "b", "k"});
  add("R^l_ibk", "hM(hM,hT)", {K::SUp, K::SDown, K::TDown, K::SDown}, {"l", "i", "b", "k"});
  add("R^(d)(i)_(l)(a)bk", "w(hM,hT)", {K::PVec, K::PForm, K::TDown, K::SDown},
      {"d", "l", "i", "a", "b", "k"});
  add("P^d(k)_ab(c)", "hT(w,hT)", {K::TUp, K::TDown, K::TDown, K::PForm},
      {"d", "a", "b", "k", "c"});
  add("P^l(k)_ib(c)", "hM(w,hT)", {K::SUp, K::SDown, K::TDown, K::PForm},
      {"l", "i", "b", "k", "c"});
  add("P^(d)(i)(k)_(l)(a)b(c)", "w(w,hT)", {K::PVec, K::PForm, K::TDown, K::PForm},
      {"d", "l", "i", "a", "b", "k", "c"});
  add("R^d_ajk", "hT(hM,hM)", {K::TUp, K::TDown, K::SDown, K::SDown}, {"d", "a", "j", "k"});
  add("R^l_ijk", "hM(hM,hM)", {K::SUp, K::SDown, K::SDown, K::SDown}, {"l", "i", "j", "k"});
  add("R^(d)(i)_(l)(a)jk", "w(hM,hM)", {K::PVec, K::PForm, K::SDown, K::SDown},
      {"d", "l", "i", "a", "j", "k"});
  add("P^d(k)_aj(c)", "hT(w,hM)", {K::TUp, K::TDown, K::SDown, K::PForm},
      {"d", "a", "j", "k", "c"});
  add("P^l(k)_ij(c)", "hM(w,hM)", {K::SUp, K::SDown, K::SDown, K::PForm},
      {"l", "i", "j", "k", "c"});
  add("P^(d)(i)(k)_(l)(a)j(c)", "w(w,hM)", {K::PVec, K::PForm, K::SDown, K::PForm},
      {"d", "l", "i", "a", "j", "k", "c"});
  add("S^d(j)(k)_a(b)(c)", "hT(w,w)", {K::TUp, K::TDown, K::PForm, K::PForm},
      {"d", "a", "j", "b", "k", "c"});
  add("S^l(j)(k)_i(b)(c)", "hM(w,w)", {K::SUp, K::SDown, K::PForm, K::PForm},
      {"l", "i", "j", "b", "k", "c"});
  add("S^(d)(i)(j)(k)_(l)(a)(b)(c)", "w(w,w)", {K::PVec, K::PForm, K::PForm, K::PForm},
      {"d", "l", "i", "a", "j", "b", "k", "c"});
  return t;
}

}  // namespace

const DTensor& TorsionTable::find(const std::string& name) const {
  return find_in(families, name);
}
const DTensor& CurvatureTable::find(const std::string& name) const {
  return find_in(families, name);
}

TorsionTable torsion_table(const NLinearConnection& D, const Point& pt) {
  const Dims& d = D.dims;
  TorsionTable t = make_torsion_shell(d);
  BracketCoefficients bc = bracket_coefficients(D.nlc, pt);

  auto eval_fam = [&](std::span<const Field> fam) {
    std::vector<double> v(fam.size());
    for (size_t k = 0; k < fam.size(); ++k) v[k] = fam[k](pt.coords());
    return v;
  };
  std::vector<double> at = eval_fam(D.a_tt), as = eval_fam(D.a_ss), ap = eval_fam(D.a_pp);
  std::vector<double> ht = eval_fam(D.h_tt), hs = eval_fam(D.h_ss), hp = eval_fam(D.h_pp);
  std::vector<double> ct = eval_fam(D.c_tt), cs = eval_fam(D.c_ss), cp = eval_fam(D.c_pp);

  DTensor& t_ab = t.families[0].value;
  for (int c = 0; c < d.m; ++c)
    for (int a = 0; a < d.m; ++a)
      for (int b = 0; b < d.m; ++b) t_ab.at({c, a, b}) = at[D.tt(c, a, b)] - at[D.tt(c, b, a)];
  t.families[2].value = bc.r_tt;
  DTensor& t_aj = t.families[3].value;
  DTensor& tk_aj = t.families[4].value;
  for (int a = 0; a < d.m; ++a)
    for (int j = 0; j < d.n; ++j) {
      for (int c = 0; c < d.m; ++c) t_aj.at({c, a, j}) = ht[D.ts(c, a, j)];
      for (int k = 0; k < d.n; ++k) tk_aj.at({k, a, j}) = -as[D.ss(k, j, a)];
    }
  t.families[5].value = bc.r_tx;
  DTensor& p_ab = t.families[6].value;
  DTensor& pp_ab = t.families[8].value;
  for (int a = 0; a < d.m; ++a)
    for (int j = 0; j < d.n; ++j)
      for (int b = 0; b < d.m; ++b) {
        for (int c = 0; c < d.m; ++c)
          p_ab.at({c, a, d.pair_index(j, b)}) = ct[D.tp(c, a, j, b)];
        for (int f = 0; f < d.m; ++f)
          for (int r = 0; r < d.n; ++r)
            pp_ab.at({d.pair_index(r, f), a, d.pair_index(j, b)}) =
                bc.b_t.at({d.pair_index(r, f), a, d.pair_index(j, b)}) +
                ap[D.pt_(f, r, j, b, a)];
      }
  DTensor& tk_ij = t.families[10].value;
  for (int k = 0; k < d.n; ++k)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j) tk_ij.at({k, i, j}) = hs[D.sx(k, i, j)] - hs[D.sx(k, j, i)];
  t.families[11].value = bc.r_xx;
  DTensor& pk_ib = t.families[13].value;
  DTensor& pp_ib = t.families[14].value;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      for (int b = 0; b < d.m; ++b) {
        for (int k = 0; k < d.n; ++k)
          pk_ib.at({k, i, d.pair_index(j, b)}) = cs[D.sp(k, i, j, b)];
        for (int f = 0; f < d.m; ++f)
          for (int r = 0; r < d.n; ++r)
            pp_ib.at({d.pair_index(r, f), i, d.pair_index(j, b)}) =
                bc.b_x.at({d.pair_index(r, f), i, d.pair_index(j, b)}) +
                hp[D.px(f, r, j, b, i)];
      }
  DTensor& s_ww = t.families[17].value;
  for (int f = 0; f < d.m; ++f)
    for (int r = 0; r < d.n; ++r)
      for (int i = 0; i < d.n; ++i)
        for (int a = 0; a < d.m; ++a)
          for (int j = 0; j < d.n; ++j)
            for (int b = 0; b < d.m; ++b)
              s_ww.at({d.pair_index(r, f), d.pair_index(i, a), d.pair_index(j, b)}) =
                  -(cp[D.pp(f, r, i, a, j, b)] - cp[D.pp(f, r, j, b, i, a)]);
  return t;
}

CurvatureTable curvature_table(const NLinearConnection& D, const Point& pt) {
  const Dims& d = D.dims;
  const int m = d.m, n = d.n, mn = d.pairs();
  CurvatureTable t = make_curvature_shell(d);
  BracketCoefficients bc = bracket_coefficients(D.nlc, pt);
  TorsionTable tor = torsion_table(D, pt);
  const DTensor& pt_pair = tor.find("P^(f)(j)_(r)a(b)");
  const DTensor& px_pair = tor.find("P^(f)(j)_(r)i(b)");

  FamilyValues AT = family_values(D.nlc, D.a_tt, pt, true, true, true);
  FamilyValues HT = family_values(D.nlc, D.h_tt, pt, true, true, true);
  FamilyValues CT = family_values(D.nlc, D.c_tt, pt, false, false, true);
  FamilyValues AS = family_values(D.nlc, D.a_ss, pt, true, true, true);
  FamilyValues HS = family_values(D.nlc, D.h_ss, pt, true, true, true);
  FamilyValues CS = family_values(D.nlc, D.c_ss, pt, false, false, true);
  FamilyValues AP = family_values(D.nlc, D.a_pp, pt, true, true, true);
  FamilyValues HP = family_values(D.nlc, D.h_pp, pt, true, true, true);
  FamilyValues CP = family_values(D.nlc, D.c_pp, pt, false, false, true);

  DTensor cov_ct_t = covariant_derivative(D, c_tt_field(D), CovDir::Temporal, pt);
  DTensor cov_ct_x = covariant_derivative(D, c_tt_field(D), CovDir::Spatial, pt);
  DTensor cov_cs_t = covariant_derivative(D, c_ss_field(D), CovDir::Temporal, pt);
  DTensor cov_cs_x = covariant_derivative(D, c_ss_field(D), CovDir::Spatial, pt);
  DTensorField cppf = c_pp_field(D);
  DTensor cov_cp_t = covariant_derivative(D, cppf, CovDir::Temporal, pt);
  DTensor cov_cp_x = covariant_derivative(D, cppf, CovDir::Spatial, pt);

  // temporal-output row: items 1-6
  {
    DTensor& r1 = t.families[0].value;
    DTensor& r2 = t.families[3].value;
    DTensor& p3 = t.families[6].value;
    DTensor& r4 = t.families[9].value;
    DTensor& p5 = t.families[12].value;
    DTensor& s6 = t.families[15].value;
    for (int dd = 0; dd < m; ++dd)
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          for (int c = 0; c < m; ++c) {
            double acc = AT.dt[D.tt(dd, a, b) * m + c] - AT.dt[D.tt(dd, a, c) * m + b];
            for (int f = 0; f < m; ++f)
              acc += AT.v[D.tt(f, a, b)] * AT.v[D.tt(dd, f, c)] -
                     AT.v[D.tt(f, a, c)] * AT.v[D.tt(dd, f, b)];
            for (int f = 0; f < m; ++f)
              for (int r = 0; r < n; ++r)
                acc += CT.v[D.tp(dd, a, r, f)] * bc.r_tt.at({d.pair_index(r, f), b, c});
            r1.at({dd, a, b, c}) = acc;
          }
          for (int k = 0; k < n; ++k) {
            double acc = AT.dx[D.tt(dd, a, b) * n + k] - HT.dt[D.ts(dd, a, k) * m + b];
            for (int f = 0; f < m; ++f)
              acc += AT.v[D.tt(f, a, b)] * HT.v[D.ts(dd, f, k)] -
                     HT.v[D.ts(f, a, k)] * AT.v[D.tt(dd, f, b)];
            for (int f = 0; f < m; ++f)
              for (int r = 0; r < n; ++r)
                acc += CT.v[D.tp(dd, a, r, f)] * bc.r_tx.at({d.pair_index(r, f), b, k});
            r2.at({dd, a, b, k}) = acc;
          }
          for (int k = 0; k < n; ++k)
            for (int c = 0; c < m; ++c) {
              int q = d.pair_index(k, c);
              double acc = AT.dp[D.tt(dd, a, b) * mn + q] - cov_ct_t.at({dd, a, q, b});
              for (int f = 0; f < m; ++f)
                for (int r = 0; r < n; ++r)
                  acc += CT.v[D.tp(dd, a, r, f)] * pt_pair.at({d.pair_index(r, f), b, q});
              p3.at({dd, a, b, q}) = acc;
            }
        }
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double acc = HT.dx[D.ts(dd, a, j) * n + k] - HT.dx[D.ts(dd, a, k) * n + j];
            for (int f = 0; f < m; ++f)
              acc += HT.v[D.ts(f, a, j)] * HT.v[D.ts(dd, f, k)] -
                     HT.v[D.ts(f, a, k)] * HT.v[D.ts(dd, f, j)];
            for (int f = 0; f < m; ++f)
              for (int r = 0; r < n; ++r)
                acc += CT.v[D.tp(dd, a, r, f)] * bc.r_xx.at({d.pair_index(r, f), j, k});
            r4.at({dd, a, j, k}) = acc;
          }
          for (int k = 0; k < n; ++k)
            for (int c = 0; c < m; ++c) {
              int q = d.pair_index(k, c);
              double acc = HT.dp[D.ts(dd, a, j) * mn + q] - cov_ct_x.at({dd, a, q, j});
              for (int f = 0; f < m; ++f)
                for (int r = 0; r < n; ++r)
                  acc += CT.v[D.tp(dd, a, r, f)] * px_pair.at({d.pair_index(r, f), j, q});
              p5.at({dd, a, j, q}) = acc;
            }
        }
        for (int j = 0; j < n; ++j)
          for (int b = 0; b < m; ++b)
            for (int k = 0; k < n; ++k)
              for (int c = 0; c < m; ++c) {
                double acc = CT.dp[D.tp(dd, a, j, b) * mn + d.pair_index(k, c)] -
                             CT.dp[D.tp(dd, a, k, c) * mn + d.pair_index(j, b)];
                for (int f = 0; f < m; ++f)
                  acc += CT.v[D.tp(f, a, j, b)] * CT.v[D.tp(dd, f, k, c)] -
                         CT.v[D.tp(f, a, k, c)] * CT.v[D.tp(dd, f, j, b)];
                s6.at({dd, a, d.pair_index(j, b), d.pair_index(k, c)}) = acc;
              }
      }
  }

  // spatial-output row: items 7-12
  {
    DTensor& r7 = t.families[1].value;
    DTensor& r8 = t.families[4].value;
    DTensor& p9 = t.families[7].value;
    DTensor& r10 = t.families[10].value;
    DTensor& p11 = t.families[13].value;
    DTensor& s12 = t.families[16].value;
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i) {
        for (int b = 0; b < m; ++b) {
          for (int c = 0; c < m; ++c) {
            double acc = AS.dt[D.ss(l, i, b) * m + c] - AS.dt[D.ss(l, i, c) * m + b];
            for (int r = 0; r < n; ++r)
              acc += AS.v[D.ss(r, i, b)] * AS.v[D.ss(l, r, c)] -
                     AS.v[D.ss(r, i, c)] * AS.v[D.ss(l, r, b)];
            for (int f = 0; f < m; ++f)
              for (int r = 0; r < n; ++r)
                acc += CS.v[D.sp(l, i, r, f)] * bc.r_tt.at({d.pair_index(r, f), b, c});
            r7.at({l, i, b, c}) = acc;
          }
          for (int k = 0; k < n; ++k) {
            double acc = AS.dx[D.ss(l, i, b) * n + k] - HS.dt[D.sx(l, i, k) * m + b];
            for (int r = 0; r < n; ++r)
              acc += AS.v[D.ss(r, i, b)] * HS.v[D.sx(l, r, k)] -
                     HS.v[D.sx(r, i, k)] * AS.v[D.ss(l, r, b)];
            for (int f = 0; f < m; ++f)
              for (int r = 0; r < n; ++r)
                acc += CS.v[D.sp(l, i, r, f)] * bc.r_tx.at({d.pair_index(r, f), b, k});
            r8.at({l, i, b, k}) = acc;
          }
          for (int k = 0; k < n; ++k)
            for (int c = 0; c < m; ++c) {
              int q = d.pair_index(k, c);
              double acc = AS.dp[D.ss(l, i, b) * mn + q] - cov_cs_t.at({l, i, q, b});
              for (int f = 0; f < m; ++f)
                for (int r = 0; r < n; ++r)
                  acc += CS.v[D.sp(l, i, r, f)] * pt_pair.at({d.pair_index(r, f), b, q});
              p9.at({l, i, b, q}) = acc;
            }
        }
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double acc = HS.dx[D.sx(l, i, j) * n + k] - HS.dx[D.sx(l, i, k) * n + j];
            for (int r = 0; r < n; ++r)
              acc += HS.v[D.sx(r, i, j)] * HS.v[D.sx(l, r, k)] -
                     HS.v[D.sx(r, i, k)] * HS.v[D.sx(l, r, j)];
            for (int f = 0; f < m; ++f)
              for (int r = 0; r < n; ++r)
                acc += CS.v[D.sp(l, i, r, f)] * bc.r_xx.at({d.pair_index(r, f), j, k});
            r10.at({l, i, j, k}) = acc;
          }
          for (int k = 0; k < n; ++k)
            for (int c = 0; c < m; ++c) {
              int q = d.pair_index(k, c);
              double acc = HS.dp[D.sx(l, i, j) * mn + q] - cov_cs_x.at({l, i, q, j});
              for (int f = 0; f < m; ++f)
                for (int r = 0; r < n; ++r)
                  acc += CS.v[D.sp(l, i, r, f)] * px_pair.at({d.pair_index(r, f), j, q});
              p11.at({l, i, j, q}) = acc;
            }
        }
        for (int j = 0; j < n; ++j)
          for (int b = 0; b < m; ++b)
            for (int k = 0; k < n; ++k)
              for (int c = 0; c < m; ++c) {
                double acc = CS.dp[D.sp(l, i, j, b) * mn + d.pair_index(k, c)] -
                             CS.dp[D.sp(l, i, k, c) * mn + d.pair_index(j, b)];
                for (int r = 0; r < n; ++r)
                  acc += CS.v[D.sp(r, i, j, b)] * CS.v[D.sp(l, r, k, c)] -
                         CS.v[D.sp(r, i, k, c)] * CS.v[D.sp(l, r, j, b)];
                s12.at({l, i, d.pair_index(j, b), d.pair_index(k, c)}) = acc;
              }
      }
  }

  // vertical-output row: items 13-18
  {
    DTensor& r13 = t.families[2].value;
    DTensor& r14 = t.families[5].value;
    DTensor& p15 = t.families[8].value;
    DTensor& r16 = t.families[11].value;
    DTensor& p17 = t.families[14].value;
    DTensor& s18 = t.families[17].value;
    for (int dd = 0; dd < m; ++dd)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int a = 0; a < m; ++a) {
            int qv = d.pair_index(l, dd);   // PVec axis (d up, l down)
            int qf = d.pair_index(i, a);    // PForm axis (i up, a down)
            for (int b = 0; b < m; ++b) {
              for (int c = 0; c < m; ++c) {
                double acc = AP.dt[D.pt_(dd, l, i, a, b) * m + c] -
                             AP.dt[D.pt_(dd, l, i, a, c) * m + b];
                for (int f = 0; f < m; ++f)
                  for (int r = 0; r < n; ++r)
                    acc += AP.v[D.pt_(dd, l, r, f, b)] * AP.v[D.pt_(f, r, i, a, c)] -
                           AP.v[D.pt_(dd, l, r, f, c)] * AP.v[D.pt_(f, r, i, a, b)];
                for (int f = 0; f < m; ++f)
                  for (int r = 0; r < n; ++r)
                    acc += CP.v[D.pp(dd, l, i, a, r, f)] * bc.r_tt.at({d.pair_index(r, f), b, c});
                r13.at({qv, qf, b, c}) = acc;
              }
              for (int k = 0; k < n; ++k) {
                double acc = AP.dx[D.pt_(dd, l, i, a, b) * n + k] -
                             HP.dt[D.px(dd, l, i, a, k) * m + b];
                for (int f = 0; f < m; ++f)
                  for (int r = 0; r < n; ++r)
                    acc += AP.v[D.pt_(dd, l, r, f, b)] * HP.v[D.px(f, r, i, a, k)] -
                           HP.v[D.px(dd, l, r, f, k)] * AP.v[D.pt_(f, r, i, a, b)];
                for (int f = 0; f < m; ++f)
                  for (int r = 0; r < n; ++r)
                    acc += CP.v[D.pp(dd, l, i, a, r, f)] * bc.r_tx.at({d.pair_index(r, f), b, k});
                r14.at({qv, qf, b, k}) = acc;
              }
              for (int k = 0; k < n; ++k)
                for (int c = 0; c < m; ++c) {
                  int q = d.pair_index(k, c);
                  double acc = AP.dp[D.pt_(dd, l, i, a, b) * mn + q] -
                               cov_cp_t.at({qv, qf, q, b});
                  for (int f = 0; f < m; ++f)
                    for (int r = 0; r < n; ++r)
                      acc += CP.v[D.pp(dd, l, i, a, r, f)] *
                             pt_pair.at({d.pair_index(r, f), b, q});
                  p15.at({qv, qf, b, q}) = acc;
                }
            }
            for (int j = 0; j < n; ++j) {
              for (int k = 0; k < n; ++k) {
                double acc = HP.dx[D.px(dd, l, i, a, j) * n + k] -
                             HP.dx[D.px(dd, l, i, a, k) * n + j];
                for (int f = 0; f < m; ++f)
                  for (int r = 0; r < n; ++r)
                    acc += HP.v[D.px(dd, l, r, f, j)] * HP.v[D.px(f, r, i, a, k)] -
                           HP.v[D.px(dd, l, r, f, k)] * HP.v[D.px(f, r, i, a, j)];
                for (int f = 0; f < m; ++f)
                  for (int r = 0; r < n; ++r)
                    acc += CP.v[D.pp(dd, l, i, a, r, f)] * bc.r_xx.at({d.pair_index(r, f), j, k});
                r16.at({qv, qf, j, k}) = acc;
              }
              for (int k = 0; k < n; ++k)
                for (int c = 0; c < m; ++c) {
                  int q = d.pair_index(k, c);
                  double acc = HP.dp[D.px(dd, l, i, a, j) * mn + q] -
                               cov_cp_x.at({qv, qf, q, j});
                  for (int f = 0; f < m; ++f)
                    for (int r = 0; r < n; ++r)
                      acc += CP.v[D.pp(dd, l, i, a, r, f)] *
                             px_pair.at({d.pair_index(r, f), j, q});
                  p17.at({qv, qf, j, q}) = acc;
                }
            }
            for (int j = 0; j < n; ++j)
              for (int b = 0; b < m; ++b)
                for (int k = 0; k < n; ++k)
                  for (int c = 0; c < m; ++c) {
                    double acc = CP.dp[D.pp(dd, l, i, a, j, b) * mn + d.pair_index(k, c)] -
                                 CP.dp[D.pp(dd, l, i, a, k, c) * mn + d.pair_index(j, b)];
                    for (int f = 0; f < m; ++f)
                      for (int r = 0; r < n; ++r)
                        acc += CP.v[D.pp(dd, l, r, f, j, b)] * CP.v[D.pp(f, r, i, a, k, c)] -
                               CP.v[D.pp(dd, l, r, f, k, c)] * CP.v[D.pp(f, r, i, a, j, b)];
                    s18.at({qv, qf, d.pair_index(j, b), d.pair_index(k, c)}) = acc;
                  }
          }
  }
  return t;
}

namespace {

/// T(e_x, e_y) components for adapted frame fields, brackets by double frame
/// derivation on the coordinate functions.
std::vector<double> torsion_on_frames(const NLinearConnection& D, int x_slot, int y_slot,
                                      const Point& pt) {
  const Dims& d = D.dims;
  std::vector<Field> dxy = frame_covd_comps(D, x_slot, y_slot);
  std::vector<Field> dyx = frame_covd_comps(D, y_slot, x_slot);
  std::vector<double> bracket = frame_bracket_vertical(D.nlc, x_slot, y_slot, pt);
  std::vector<double> out(static_cast<size_t>(d.total()), 0.0);
  for (int s = 0; s < d.total(); ++s)
    out[static_cast<size_t>(s)] = dxy[s](pt.coords()) - dyx[s](pt.coords());
  for (int q = 0; q < d.pairs(); ++q) out[static_cast<size_t>(d.m + d.n + q)] -= bracket[q];
  return out;
}

/// R(e_x, e_y) e_z components via the definition.
std::vector<double> curvature_on_frames(const NLinearConnection& D, int x_slot, int y_slot,
                                        std::span<const double> bracket, int z_slot,
                                        const Point& pt) {
  const Dims& d = D.dims;
  std::vector<Field> dyz = frame_covd_comps(D, y_slot, z_slot);
  std::vector<Field> dxz = frame_covd_comps(D, x_slot, z_slot);
  std::vector<double> first = covd_vector(D, x_slot, dyz, pt);
  std::vector<double> second = covd_vector(D, y_slot, dxz, pt);
  std::vector<double> out(static_cast<size_t>(d.total()));
  for (int s = 0; s < d.total(); ++s) out[s] = first[s] - second[s];
  for (int q = 0; q < d.pairs(); ++q) {
    if (bracket[q] == 0.0) continue;
    std::vector<Field> dvz = frame_covd_comps(D, d.m + d.n + q, z_slot);
    for (int s = 0; s < d.total(); ++s) out[s] -= bracket[q] * dvz[s](pt.coords());
  }
  return out;
}

}  // namespace

TorsionTable torsion_table_via_oracle(const NLinearConnection& D, const Point& pt) {
  const Dims& d = D.dims;
  TorsionTable t = make_torsion_shell(d);
  auto fill = [&](int x_slot, int y_slot, int fam_t, int fam_x, int fam_w,
                  std::vector<int> tail) {
    std::vector<double> comps = torsion_on_frames(D, x_slot, y_slot, pt);
    std::vector<int> idx;
    for (int c = 0; c < d.m; ++c) {
      idx = {c};
      idx.insert(idx.end(), tail.begin(), tail.end());
      t.families[fam_t].value.at(idx) = comps[c];
    }
    for (int k = 0; k < d.n; ++k) {
      idx = {k};
      idx.insert(idx.end(), tail.begin(), tail.end());
      t.families[fam_x].value.at(idx) = comps[d.m + k];
    }
    for (int q = 0; q < d.pairs(); ++q) {
      idx = {q};
      idx.insert(idx.end(), tail.begin(), tail.end());
      t.families[fam_w].value.at(idx) = comps[d.m + d.n + q];
    }
  };

  for (int a = 0; a < d.m; ++a) {
    for (int b = 0; b < d.m; ++b) fill(b, a, 0, 1, 2, {a, b});
    for (int j = 0; j < d.n; ++j) fill(d.m + j, a, 3, 4, 5, {a, j});
    for (int q = 0; q < d.pairs(); ++q) fill(d.m + d.n + q, a, 6, 7, 8, {a, q});
  }
  for (int i = 0; i < d.n; ++i) {
    for (int j = 0; j < d.n; ++j) fill(d.m + j, d.m + i, 9, 10, 11, {i, j});
    for (int q = 0; q < d.pairs(); ++q) fill(d.m + d.n + q, d.m + i, 12, 13, 14, {i, q});
  }
  for (int qa = 0; qa < d.pairs(); ++qa)
    for (int qb = 0; qb < d.pairs(); ++qb)
      fill(d.m + d.n + qb, d.m + d.n + qa, 15, 16, 17, {qa, qb});
  return t;
}

CurvatureTable curvature_table_via_oracle(const NLinearConnection& D, const Point& pt) {
  const Dims& d = D.dims;
  CurvatureTable t = make_curvature_shell(d);

  // (x_slot group, y_slot group) -> the three family columns and the tail
  // index layout; the vertical column enters with a minus sign.
  auto fill_triple = [&](int x_slot, int y_slot, int fam_t, int fam_x, int fam_w,
                         std::vector<int> tail) {
    std::vector<double> bracket = frame_bracket_vertical(D.nlc, x_slot, y_slot, pt);
    // Z runs over all frame slots per family column.
    for (int zt = 0; zt < d.m; ++zt) {
      std::vector<double> comps = curvature_on_frames(D, x_slot, y_slot, bracket, zt, pt);
      for (int dd = 0; dd < d.m; ++dd) {
        std::vector<int> idx = {dd, zt};
        idx.insert(idx.end(), tail.begin(), tail.end());
        t.families[fam_t].value.at(idx) = comps[dd];
      }
    }
    for (int zi = 0; zi < d.n; ++zi) {
      std::vector<double> comps =
          curvature_on_frames(D, x_slot, y_slot, bracket, d.m + zi, pt);
      for (int l = 0; l < d.n; ++l) {
        std::vector<int> idx = {l, zi};
        idx.insert(idx.end(), tail.begin(), tail.end());
        t.families[fam_x].value.at(idx) = comps[d.m + l];
      }
    }
    for (int zq = 0; zq < d.pairs(); ++zq) {
      std::vector<double> comps =
          curvature_on_frames(D, x_slot, y_slot, bracket, d.m + d.n + zq, pt);
      for (int q = 0; q < d.pairs(); ++q) {
        std::vector<int> idx = {q, zq};
        idx.insert(idx.end(), tail.begin(), tail.end());
        t.families[fam_w].value.at(idx) = -comps[d.m + d.n + q];
      }
    }
  };

  for (int b = 0; b < d.m; ++b) {
    for (int c = 0; c < d.m; ++c) fill_triple(c, b, 0, 1, 2, {b, c});
    for (int k = 0; k < d.n; ++k) fill_triple(d.m + k, b, 3, 4, 5, {b, k});
    for (int q = 0; q < d.pairs(); ++q) fill_triple(d.m + d.n + q, b, 6, 7, 8, {b, q});
  }
  for (int j = 0; j < d.n; ++j) {
    for (int k = 0; k < d.n; ++k) fill_triple(d.m + k, d.m + j, 9, 10, 11, {j, k});
    for (int q = 0; q < d.pairs(); ++q)
      fill_triple(d.m + d.n + q, d.m + j, 12, 13, 14, {j, q});
  }
  for (int qb = 0; qb < d.pairs(); ++qb)
    for (int qc = 0; qc < d.pairs(); ++qc)
      fill_triple(d.m + d.n + qc, d.m + d.n + qb, 15, 16, 17, {qb, qc});
  return t;
}

double max_table_difference(const TorsionTable& a, const TorsionTable& b) {
  double r = 0.0;
  for (size_t k = 0; k < a.families.size(); ++k)
    r = std::max(r, max_abs_difference(a.families[k].value, b.families[k].value));
  return r;
}

double max_table_difference(const CurvatureTable& a, const CurvatureTable& b) {
  double r = 0.0;
  for (size_t k = 0; k < a.families.size(); ++k)
    r = std::max(r, max_abs_difference(a.families[k].value, b.families[k].value));
  return r;
}

std::vector<TorsionTable> torsion_tables(const NLinearConnection& D,
                                         std::span<const Point> points, ExecMode mode) {
  std::vector<TorsionTable> out(points.size());
  parallel_for(static_cast<int>(points.size()), mode,
               [&](int k) { out[static_cast<size_t>(k)] = torsion_table(D, points[k]); });
  return out;
}

std::vector<CurvatureTable> curvature_tables(const NLinearConnection& D,
                                             std::span<const Point> points, ExecMode mode) {
  std::vector<CurvatureTable> out(points.size());
  parallel_for(static_cast<int>(points.size()), mode,
               [&](int k) { out[static_cast<size_t>(k)] = curvature_table(D, points[k]); });
  return out;
}

}  // namespace jetham
