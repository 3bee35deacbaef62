#pragma once

#include <span>
#include <vector>

#include "jetham/bundle.hpp"
#include "jetham/metrics.hpp"

namespace jetham {

/// Nonlinear connection on the dual 1-jet bundle, given by the coefficient
/// families N1^(a)_(i)b (layout [a][i][b]) and N2^(a)_(i)j (layout [a][i][j]).
struct NonlinearConnection {
  Dims dims;
  std::vector<Field> n1;
  std::vector<Field> n2;

  size_t n1_index(int a, int i, int b) const {
    return (static_cast<size_t>(a) * dims.n + i) * dims.m + b;
  }
  size_t n2_index(int a, int i, int j) const {
    return (static_cast<size_t>(a) * dims.n + i) * dims.n + j;
  }
};

NonlinearConnection zero_nlc(Dims dims);

/// Canonical nonlinear connection attached to a pair of metrics:
/// N1^(a)_(i)b = k^a_gb p_i^g, N2^(a)_(i)j = -g^s_ij p_s^a with k, g the
/// Christoffel symbols of h and phi.
NonlinearConnection canonical_nlc(const TemporalMetric& h, const SpatialMetric& phi);

/// Nonlinear connection attached to arbitrary linear connections:
/// N1^(a)_(i)b = chi^a_cb p_i^c, N2^(a)_(i)j = -Gamma^s_ij p_s^a.
NonlinearConnection nlc_from_linear(const LinearConnectionCoeffs& coeffs);

/// Natural-frame components of the adapted frame vector for `slot`
/// (0..m-1: d/dt^a; m..m+n-1: d/dx^i; then the vertical pairs).
template <class T>
std::vector<T> frame_seed(const NonlinearConnection& N, std::span<const T> coords, int slot) {
  const Dims& d = N.dims;
  std::vector<T> seed(d.total(), T(0.0));
  if (slot < d.m) {
    seed[d.coord_t(slot)] = T(1.0);
    for (int a = 0; a < d.m; ++a)
      for (int i = 0; i < d.n; ++i)
        seed[d.coord_p(i, a)] = -N.n1[N.n1_index(a, i, slot)](coords);
  } else if (slot < d.m + d.n) {
    int x = slot - d.m;
    seed[d.coord_x(x)] = T(1.0);
    for (int a = 0; a < d.m; ++a)
      for (int i = 0; i < d.n; ++i)
        seed[d.coord_p(i, a)] = -N.n2[N.n2_index(a, i, x)](coords);
  } else {
    seed[slot] = T(1.0);
  }
  return seed;
}

/// Directional derivative of `f` along the adapted frame vector for `slot`:
/// the delta-derivatives d/dt^a - N1 d/dp and d/dx^i - N2 d/dp, or a plain
/// polymomentum partial for vertical slots.
template <class T>
T adapted_deriv(const NonlinearConnection& N, const Field& f, std::span<const T> coords,
                int slot) {
  std::vector<T> seed = frame_seed(N, coords, slot);
  return dir_deriv(f, coords, std::span<const T>(seed.data(), seed.size()));
}

/// The adapted derivation along a frame slot packaged as a field (used by the
/// commutator oracle, which applies two of these in a row).
Field frame_derivation(const NonlinearConnection& N, int slot, const Field& f);

/// Frame and coframe matrices at a point; rows are frame (resp. coframe)
/// slots, columns natural coordinates. frame * coframe^T = identity.
struct AdaptedFrame {
  Dims dims;
  Mat<double> frame;
  Mat<double> coframe;
};

AdaptedFrame adapted_frame(const NonlinearConnection& N, const Point& pt);

/// The five Poisson-bracket coefficient families of the adapted frame.
struct BracketCoefficients {
  DTensor r_tt;  // R^(a)_(i)bc   [PVec, TDown, TDown]
  DTensor r_tx;  // R^(a)_(i)bk   [PVec, TDown, SDown]
  DTensor r_xx;  // R^(a)_(i)jk   [PVec, SDown, SDown]
  DTensor b_t;   // B^(a)(k)_(i)b(c) [PVec, TDown, PForm]
  DTensor b_x;   // B^(a)(k)_(i)j(c) [PVec, SDown, PForm]
};

BracketCoefficients bracket_coefficients(const NonlinearConnection& N, const Point& pt);

/// Vertical components of [e_beta, e_gamma] computed by applying the frame
/// derivations twice to the coordinate functions (independent of the closed
/// forms above). Returns the mn components indexed by vertical pair.
std::vector<double> frame_bracket_vertical(const NonlinearConnection& N, int beta, int gamma,
                                           const Point& pt);

struct IntegrabilityReport {
  bool integrable = true;
  double max_violation = 0.0;
};

IntegrabilityReport integrability_check(const NonlinearConnection& N,
                                        std::span<const Point> points);

/// Almost product structure P = I - 2w. In the adapted frame P is exactly
/// diag(+1 x (m+n), -1 x (mn)); `natural` carries the conjugated matrix.
struct AlmostProduct {
  Dims dims;
  Mat<double> natural;
  std::vector<double> adapted_diag;
  int plus_multiplicity = 0;
  int minus_multiplicity = 0;
};

AlmostProduct almost_product(const NonlinearConnection& N, const Point& pt);

/// N-linear connection: the nine adapted coefficient families over a
/// nonlinear connection. Layouts (all row-major):
///   a_tt [a][b][c]           A^a_bc
///   a_ss [i][j][c]           A^i_jc
///   a_pp [a][i][j][b][c]     A^(a)(j)_(i)(b)c
///   h_tt [a][b][k]           H^a_bk
///   h_ss [i][j][k]           H^i_jk
///   h_pp [a][i][j][b][k]     H^(a)(j)_(i)(b)k
///   c_tt [a][b][k][c]        C^a(k)_b(c)
///   c_ss [i][j][k][c]        C^i(k)_j(c)
///   c_pp [a][i][j][b][k][c]  C^(a)(j)(k)_(i)(b)(c)
struct NLinearConnection {
  Dims dims;
  NonlinearConnection nlc;
  std::vector<Field> a_tt, a_ss, a_pp;
  std::vector<Field> h_tt, h_ss, h_pp;
  std::vector<Field> c_tt, c_ss, c_pp;

  size_t tt(int a, int b, int c) const { return (static_cast<size_t>(a) * dims.m + b) * dims.m + c; }
  size_t ts(int a, int b, int k) const { return (static_cast<size_t>(a) * dims.m + b) * dims.n + k; }
  size_t tp(int a, int b, int k, int c) const {
    return ((static_cast<size_t>(a) * dims.m + b) * dims.n + k) * dims.m + c;
  }
  size_t ss(int i, int j, int c) const { return (static_cast<size_t>(i) * dims.n + j) * dims.m + c; }
  size_t sx(int i, int j, int k) const { return (static_cast<size_t>(i) * dims.n + j) * dims.n + k; }
  size_t sp(int i, int j, int k, int c) const {
    return ((static_cast<size_t>(i) * dims.n + j) * dims.n + k) * dims.m + c;
  }
  size_t pt_(int a, int i, int j, int b, int c) const {
    return (((static_cast<size_t>(a) * dims.n + i) * dims.n + j) * dims.m + b) * dims.m + c;
  }
  size_t px(int a, int i, int j, int b, int k) const {
    return (((static_cast<size_t>(a) * dims.n + i) * dims.n + j) * dims.m + b) * dims.n + k;
  }
  size_t pp(int a, int i, int j, int b, int k, int c) const {
    return ((((static_cast<size_t>(a) * dims.n + i) * dims.n + j) * dims.m + b) * dims.n + k) *
               dims.m +
           c;
  }
};

/// All nine families zero over a zero nonlinear connection.
NLinearConnection zero_connection(Dims dims);

/// Canonical Berwald connection attached to linear connections (chi, Gamma):
/// A^a_bc = chi^a_bc, H^i_jk = Gamma^i_jk, A-paired = -delta^j_i chi^a_bc,
/// H-paired = delta^a_b Gamma^j_ik, everything else zero, over the associated
/// nonlinear connection.
NLinearConnection berwald_connection(const LinearConnectionCoeffs& coeffs);

/// Berwald connection of the metric Christoffel symbols.
NLinearConnection berwald_connection(const TemporalMetric& h, const SpatialMetric& phi);

enum class CovDir { Temporal, Spatial, Vertical };

/// Tensor field given by one differentiable component field per slot.
struct DTensorField {
  Dims dims;
  std::vector<IndexKind> kinds;
  std::vector<Field> comp;  // row-major by kinds

  size_t size() const { return comp.size(); }
};

DTensorField liouville_hamilton_field(Dims dims);

/// Generic covariant derivative in the adapted frame. Appends one axis:
/// TDown for the T-horizontal derivative, SDown for the M-horizontal one,
/// PForm for the vertical one. One correction term per index with the
/// coefficient family selected by the index kind.
DTensor covariant_derivative(const NLinearConnection& D, const DTensorField& tf, CovDir dir,
                             const Point& pt);

/// The three polymomentum deflection tensors, closed form:
/// Delta^(a)_(i)b = -N1 - A-paired contraction, Delta^(a)_(i)j = -N2 - H-paired
/// contraction, theta = delta delta - C-paired contraction.
struct DeflectionTensors {
  DTensor delta_t;  // [PVec, TDown]
  DTensor delta_x;  // [PVec, SDown]
  DTensor theta;    // [PVec, PForm]
};

DeflectionTensors deflection_tensors(const NLinearConnection& D, const Point& pt);

/// Same three tensors computed as covariant derivatives of the
/// Liouville-Hamilton tensor; agrees with the closed form to rounding.
DeflectionTensors deflection_via_covariant_derivative(const NLinearConnection& D, const Point& pt);

/// Adapted components of D_{e_y} e_z as fields, for the definition oracles.
std::vector<Field> frame_covd_comps(const NLinearConnection& D, int y_slot, int z_slot);

/// Covariant derivative along frame slot `beta` of a vector field given by
/// adapted component fields, evaluated at `pt`.
std::vector<double> covd_vector(const NLinearConnection& D, int beta,
                                std::span<const Field> comps, const Point& pt);

}  // namespace jetham
