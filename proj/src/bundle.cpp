#include "jetham/bundle.hpp"

#include <algorithm>
#include <cmath>

namespace jetham {

int axis_length(IndexKind k, const Dims& d) {
  switch (k) {
    case IndexKind::TUp:
    case IndexKind::TDown:
      return d.m;
    case IndexKind::SUp:
    case IndexKind::SDown:
      return d.n;
    default:
      return d.m * d.n;
  }
}

std::string kind_name(IndexKind k) {
  switch (k) {
    case IndexKind::TUp: return "TUp";
    case IndexKind::TDown: return "TDown";
    case IndexKind::SUp: return "SUp";
    case IndexKind::SDown: return "SDown";
    case IndexKind::PVec: return "PVec";
    default: return "PForm";
  }
}

DTensor::DTensor(Dims dims, std::vector<IndexKind> kinds)
    : dims_(dims), kinds_(std::move(kinds)) {
  size_t total = 1;
  shape_.reserve(kinds_.size());
  for (IndexKind k : kinds_) {
    shape_.push_back(axis_length(k, dims_));
    total *= static_cast<size_t>(shape_.back());
  }
  comp_.assign(total, 0.0);
}

double& DTensor::at(std::span<const int> idx) {
  if (idx.size() != kinds_.size()) throw ShapeMismatchError("index rank mismatch");
  size_t flat = 0;
  for (size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= shape_[k]) throw ShapeMismatchError("index out of range");
    flat = flat * static_cast<size_t>(shape_[k]) + static_cast<size_t>(idx[k]);
  }
  return comp_[flat];
}

double DTensor::at(std::span<const int> idx) const {
  return const_cast<DTensor*>(this)->at(idx);
}

void DTensor::unflatten(size_t flat, std::span<int> idx) const {
  for (int k = static_cast<int>(kinds_.size()) - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % static_cast<size_t>(shape_[k]));
    flat /= static_cast<size_t>(shape_[k]);
  }
}

double DTensor::max_abs() const {
  double r = 0.0;
  for (double v : comp_) r = std::max(r, std::abs(v));
  return r;
}

double max_abs_difference(const DTensor& a, const DTensor& b) {
  if (a.kinds() != b.kinds() || a.size() != b.size())
    throw ShapeMismatchError("tensors are not comparable");
  double r = 0.0;
  for (size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
  return r;
}

CoordinateChange make_change(Dims dims, std::string id, const std::vector<std::string>& tmap,
                             const std::vector<std::string>& xmap,
                             const std::vector<std::string>& tinv,
                             const std::vector<std::string>& xinv) {
  if (static_cast<int>(tmap.size()) != dims.m || static_cast<int>(tinv.size()) != dims.m ||
      static_cast<int>(xmap.size()) != dims.n || static_cast<int>(xinv.size()) != dims.n)
    throw ShapeMismatchError("coordinate change map counts do not match dims");
  CoordinateChange chg;
  chg.dims = dims;
  chg.id = std::move(id);
  auto build = [&](const std::vector<std::string>& texts, int lo, int hi, const char* what) {
    std::vector<Field> out;
    out.reserve(texts.size());
    for (const std::string& s : texts) {
      ScalarField f = parse(s, dims);
      if (!f.expression().references_only(lo, hi))
        throw Error(std::string(what) + " map '" + s + "' must depend only on its own block");
      out.push_back(Field::from_field(f));
    }
    return out;
  };
  chg.tmap = build(tmap, 0, dims.m, "temporal");
  chg.xmap = build(xmap, dims.m, dims.m + dims.n, "spatial");
  chg.tinv = build(tinv, 0, dims.m, "temporal inverse");
  chg.xinv = build(xinv, dims.m, dims.m + dims.n, "spatial inverse");
  return chg;
}

CoordinateChange identity_change(Dims dims) {
  std::vector<std::string> t, x;
  for (int a = 1; a <= dims.m; ++a) t.push_back("t[" + std::to_string(a) + "]");
  for (int i = 1; i <= dims.n; ++i) x.push_back("x[" + std::to_string(i) + "]");
  return make_change(dims, "identity", t, x, t, x);
}

CoordinateChange inverse_change(const CoordinateChange& chg) {
  CoordinateChange inv;
  inv.dims = chg.dims;
  inv.id = chg.id + "^-1";
  inv.tmap = chg.tinv;
  inv.xmap = chg.xinv;
  inv.tinv = chg.tmap;
  inv.xinv = chg.xmap;
  return inv;
}

Point push_point(const CoordinateChange& chg, const Point& pt) {
  if (!(pt.dims == chg.dims)) throw ShapeMismatchError("point dims do not match change dims");
  return Point(pt.dims, push_coords<double>(chg, pt.coords()));
}

ChangeJacobians change_jacobians(const CoordinateChange& chg, const Point& pt) {
  const Dims& d = chg.dims;
  ChangeJacobians out;
  out.jt = Mat<double>(d.m);
  out.jx = Mat<double>(d.n);
  std::vector<D1> c(pt.c.begin(), pt.c.end());
  for (int b = 0; b < d.m; ++b) {
    c[d.coord_t(b)].d = 1.0;
    for (int a = 0; a < d.m; ++a) out.jt(a, b) = chg.tmap[a](std::span<const D1>(c)).d;
    c[d.coord_t(b)].d = 0.0;
  }
  for (int j = 0; j < d.n; ++j) {
    c[d.coord_x(j)].d = 1.0;
    for (int i = 0; i < d.n; ++i) out.jx(i, j) = chg.xmap[i](std::span<const D1>(c)).d;
    c[d.coord_x(j)].d = 0.0;
  }
  double dt = 0.0, dx = 0.0;
  auto it = inverse(out.jt, 1e-10, &dt);
  if (!it) throw SingularJacobianError(std::abs(dt));
  auto ix = inverse(out.jx, 1e-10, &dx);
  if (!ix) throw SingularJacobianError(std::abs(dx));
  out.jt_inv = *it;
  out.jx_inv = *ix;
  return out;
}

Mat<double> natural_frame_jacobians(const CoordinateChange& chg, const Point& pt) {
  const Dims& d = chg.dims;
  const int total = d.total();
  Mat<double> out(total);
  std::vector<D1> c(pt.c.begin(), pt.c.end());
  for (int old = 0; old < total; ++old) {
    c[old].d = 1.0;
    std::vector<D1> pushed = push_coords<D1>(chg, std::span<const D1>(c));
    for (int nw = 0; nw < total; ++nw) out(old, nw) = pushed[nw].d;
    c[old].d = 0.0;
  }
  return out;
}

DTensor dtensor_transform(const DTensor& t, const CoordinateChange& chg, const Point& pt) {
  return dtensor_transform(t, change_jacobians(chg, pt));
}

DTensor dtensor_transform(const DTensor& t, const ChangeJacobians& jac) {
  const Dims& d = t.dims();
  // factor(kind)[new][old]
  auto factor = [&](IndexKind k, int nw, int old) -> double {
    switch (k) {
      case IndexKind::TUp:
        return jac.jt(nw, old);
      case IndexKind::TDown:
        return jac.jt_inv(old, nw);
      case IndexKind::SUp:
        return jac.jx(nw, old);
      case IndexKind::SDown:
        return jac.jx_inv(old, nw);
      case IndexKind::PVec: {
        int an = d.pair_a(nw), in = d.pair_i(nw);
        int ao = d.pair_a(old), io = d.pair_i(old);
        return jac.jt(an, ao) * jac.jx_inv(io, in);
      }
      default: {  // PForm
        int an = d.pair_a(nw), in = d.pair_i(nw);
        int ao = d.pair_a(old), io = d.pair_i(old);
        return jac.jt_inv(ao, an) * jac.jx(in, io);
      }
    }
  };

  DTensor cur = t;
  const int rank = t.rank();
  for (int axis = 0; axis < rank; ++axis) {
    DTensor next(d, t.kinds());
    const int len = t.shape()[axis];
    std::vector<int> idx(rank), src(rank);
    for (size_t flat = 0; flat < next.size(); ++flat) {
      next.unflatten(flat, idx);
      src = idx;
      double acc = 0.0;
      for (int old = 0; old < len; ++old) {
        src[axis] = old;
        acc += factor(t.kinds()[axis], idx[axis], old) * cur.at(src);
      }
      next[flat] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

DTensor liouville_hamilton(const Point& pt) {
  DTensor out(pt.dims, {IndexKind::PVec});
  for (int i = 0; i < pt.dims.n; ++i)
    for (int a = 0; a < pt.dims.m; ++a) out.at({pt.dims.pair_index(i, a)}) = pt.p(i, a);
  return out;
}

DTensor fundamental_metric(const Field& hamiltonian, const Point& pt) {
  const Dims& d = pt.dims;
  DTensor out(d, {IndexKind::PForm, IndexKind::PForm});
  std::vector<D2> c(d.total());
  for (int q1 = 0; q1 < d.pairs(); ++q1)
    for (int q2 = q1; q2 < d.pairs(); ++q2) {
      int c1 = d.m + d.n + q1, c2 = d.m + d.n + q2;
      for (int j = 0; j < d.total(); ++j)
        c[j] = D2(D1(pt.c[j], j == c1 ? 1.0 : 0.0), D1(j == c2 ? 1.0 : 0.0, 0.0));
      double g = 0.5 * hamiltonian(std::span<const D2>(c)).d.d;
      out.at({q1, q2}) = g;
      out.at({q2, q1}) = g;
    }
  return out;
}

DTensor polymomentum_hamilton_tensor(std::span<const Field> phi, const Point& pt) {
  const Dims& d = pt.dims;
  DTensor out(d, {IndexKind::PVec, IndexKind::SDown, IndexKind::SDown});
  std::vector<double> phi_v(phi.size());
  for (size_t k = 0; k < phi.size(); ++k) phi_v[k] = phi[k](pt.coords());
  for (int a = 0; a < d.m; ++a)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j)
        for (int k = 0; k < d.n; ++k)
          out.at({d.pair_index(i, a), j, k}) =
              phi_v[static_cast<size_t>(i) * d.n + j] * pt.p(k, a);
  return out;
}

DTensor h_normalization_tensor(std::span<const Field> h, const Point& pt) {
  const Dims& d = pt.dims;
  DTensor out(d, {IndexKind::PForm, IndexKind::TDown, IndexKind::SDown});
  std::vector<double> h_v(h.size());
  for (size_t k = 0; k < h.size(); ++k) h_v[k] = h[k](pt.coords());
  for (int i = 0; i < d.n; ++i)
    for (int a = 0; a < d.m; ++a)
      for (int b = 0; b < d.m; ++b)
        for (int j = 0; j < d.n; ++j)
          out.at({d.pair_index(i, a), b, j}) =
              (i == j) ? h_v[static_cast<size_t>(a) * d.m + b] : 0.0;
  return out;
}

}  // namespace jetham
