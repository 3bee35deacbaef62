#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jetham/field.hpp"
#include "jetham/linalg.hpp"

namespace jetham {

/// The six index kinds a distinguished tensor can carry. The polymomentum
/// kinds are paired: PVec components X^(a)_(i) (upper temporal, lower spatial)
/// transform with (dt~/dt)(dx/dx~); PForm components w^(i)_(a) (upper spatial,
/// lower temporal) transform with (dt/dt~)(dx~/dx), both read new-from-old.
/// Paired axes are flattened spatial-major: slot q = (i-1)*m + (a-1).
enum class IndexKind { TUp, TDown, SUp, SDown, PVec, PForm };

int axis_length(IndexKind k, const Dims& d);
std::string kind_name(IndexKind k);

/// Dense index-kind-typed component array at a fixed point.
class DTensor {
 public:
  DTensor() = default;
  DTensor(Dims dims, std::vector<IndexKind> kinds);

  const Dims& dims() const { return dims_; }
  const std::vector<IndexKind>& kinds() const { return kinds_; }
  int rank() const { return static_cast<int>(kinds_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  size_t size() const { return comp_.size(); }

  double& operator[](size_t flat) { return comp_[flat]; }
  double operator[](size_t flat) const { return comp_[flat]; }
  double& at(std::span<const int> idx);
  double at(std::span<const int> idx) const;
  double& at(std::initializer_list<int> idx) {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  double at(std::initializer_list<int> idx) const {
    return const_cast<DTensor*>(this)->at(std::span<const int>(idx.begin(), idx.size()));
  }

  std::vector<double>& data() { return comp_; }
  const std::vector<double>& data() const { return comp_; }

  void unflatten(size_t flat, std::span<int> idx) const;
  double max_abs() const;

 private:
  Dims dims_;
  std::vector<IndexKind> kinds_;
  std::vector<int> shape_;
  std::vector<double> comp_;
};

double max_abs_difference(const DTensor& a, const DTensor& b);

/// Product-form coordinate change t~(t), x~(x) with explicit inverse maps.
struct CoordinateChange {
  Dims dims;
  std::string id;
  std::vector<Field> tmap, xmap;  // m, n forward maps
  std::vector<Field> tinv, xinv;  // m, n inverse maps (functions of the new coords)
};

/// Builds a change from expression strings and validates block dependence.
CoordinateChange make_change(Dims dims, std::string id, const std::vector<std::string>& tmap,
                             const std::vector<std::string>& xmap,
                             const std::vector<std::string>& tinv,
                             const std::vector<std::string>& xinv);

CoordinateChange identity_change(Dims dims);
CoordinateChange inverse_change(const CoordinateChange& chg);

/// Full coordinate transport (t,x,p) -> (t~,x~,p~) at any dual depth; the
/// polymomenta follow p~_i^a = (dx^j/dx~^i)(dt~^a/dt^b) p_j^b.
template <class T>
std::vector<T> push_coords(const CoordinateChange& chg, std::span<const T> c);

Point push_point(const CoordinateChange& chg, const Point& pt);

/// Jacobian blocks of the change at a point, all evaluated on the old side.
struct ChangeJacobians {
  Mat<double> jt;      // dt~^a/dt^b
  Mat<double> jx;      // dx~^i/dx^j
  Mat<double> jt_inv;  // dt^a/dt~^b
  Mat<double> jx_inv;  // dx^a/dx~^b
};

ChangeJacobians change_jacobians(const CoordinateChange& chg, const Point& pt);

/// The full (m+n+mn)^2 matrix B with e_old = sum_new B[old][new] e~_new for the
/// natural frame (d/dt, d/dx, d/dp), including the mixed dp~/dt and dp~/dx blocks.
Mat<double> natural_frame_jacobians(const CoordinateChange& chg, const Point& pt);

/// New-from-old transform of adapted components: each axis is contracted with
/// its kind's Jacobian factor evaluated at `pt`.
DTensor dtensor_transform(const DTensor& t, const CoordinateChange& chg, const Point& pt);
DTensor dtensor_transform(const DTensor& t, const ChangeJacobians& jac);

/// Liouville-Hamilton d-tensor of polymomenta, C^(a)_(i) = p_i^a.
DTensor liouville_hamilton(const Point& pt);

/// Fundamental vertical metrical d-tensor G^(i)(j)_(a)(b) = (1/2) d2H/dp_i^a dp_j^b.
DTensor fundamental_metric(const Field& hamiltonian, const Point& pt);

/// Polymomentum Hamilton d-tensor H^(a)_(i)jk = phi_ij p_k^a.
DTensor polymomentum_hamilton_tensor(std::span<const Field> phi, const Point& pt);

/// h-normalization d-tensor J^(i)_(a)bj = h_ab delta^i_j.
DTensor h_normalization_tensor(std::span<const Field> h, const Point& pt);

// --- template body -----------------------------------------------------------

template <class T>
std::vector<T> push_coords(const CoordinateChange& chg, std::span<const T> c) {
  const Dims& d = chg.dims;
  std::vector<T> out(d.total(), T(0.0));
  for (int a = 0; a < d.m; ++a) out[d.coord_t(a)] = chg.tmap[a](c);
  for (int i = 0; i < d.n; ++i) out[d.coord_x(i)] = chg.xmap[i](c);

  // dt~^a/dt^b and dx~^i/dx^j at the point, one dual level above T.
  Mat<T> jt(d.m), jx(d.n);
  {
    std::vector<Dual<T>> dc(c.begin(), c.end());
    for (int b = 0; b < d.m; ++b) {
      dc[d.coord_t(b)].d = T(1.0);
      for (int a = 0; a < d.m; ++a)
        jt(a, b) = chg.tmap[a](std::span<const Dual<T>>(dc.data(), dc.size())).d;
      dc[d.coord_t(b)].d = T(0.0);
    }
    for (int j = 0; j < d.n; ++j) {
      dc[d.coord_x(j)].d = T(1.0);
      for (int i = 0; i < d.n; ++i)
        jx(i, j) = chg.xmap[i](std::span<const Dual<T>>(dc.data(), dc.size())).d;
      dc[d.coord_x(j)].d = T(0.0);
    }
  }
  T detx(0.0);
  auto jx_inv = inverse(jx, 1e-10, &detx);
  if (!jx_inv) throw SingularJacobianError(std::abs(leading(detx)));

  for (int i = 0; i < d.n; ++i)
    for (int a = 0; a < d.m; ++a) {
      T acc(0.0);
      for (int j = 0; j < d.n; ++j)
        for (int b = 0; b < d.m; ++b)
          acc += (*jx_inv)(j, i) * jt(a, b) * c[d.coord_p(j, b)];
      out[d.coord_p(i, a)] = acc;
    }
  return out;
}

}  // namespace jetham
