#include <doctest.h>

#include <cmath>
#include <random>

#include "jetham/bundle.hpp"
#include "support.hpp"

using namespace jetham;
using namespace jetham::testsupport;

namespace {

CoordinateChange cubic_square_change() {
  // m = n = 1, t~ = t^2, x~ = x^3, valid near t = x = 1
  return make_change({1, 1}, "square-cube", {"t[1]^2"}, {"x[1]^3"}, {"sqrt(t[1])"},
                     {"x[1]^(1/3)"});
}

}  // namespace

TEST_CASE("push_point: identity, rescale, nonlinear") {
  Dims d{1, 1};
  Point pt(d);
  pt.t(0) = 1.0;
  pt.x(0) = 1.0;
  pt.p(0, 0) = 1.0;

  Point same = push_point(identity_change(d), pt);
  CHECK(same.t(0) == doctest::Approx(1.0));
  CHECK(same.p(0, 0) == doctest::Approx(1.0));

  CoordinateChange scale =
      make_change(d, "t2", {"2*t[1]"}, {"x[1]"}, {"t[1]/2"}, {"x[1]"});
  Point scaled = push_point(scale, pt);
  CHECK(scaled.t(0) == doctest::Approx(2.0));
  CHECK(scaled.p(0, 0) == doctest::Approx(2.0));

  // p~ = (dx/dx~)(dt~/dt) p = (1/3)*2*1 = 2/3 at t = x = p = 1
  Point cube = push_point(cubic_square_change(), pt);
  CHECK(cube.p(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // round trip through the inverse change
  Point back = push_point(inverse_change(cubic_square_change()), cube);
  for (int k = 0; k < d.total(); ++k) CHECK(back.c[k] == doctest::Approx(pt.c[k]).epsilon(1e-8));
}

TEST_CASE("block dependence is enforced") {
  Dims d{1, 1};
  CHECK_THROWS_AS(make_change(d, "bad", {"t[1] + x[1]"}, {"x[1]"}, {"t[1]"}, {"x[1]"}), Error);
}

TEST_CASE("singular jacobian raises") {
  Dims d{1, 1};
  // x~ = x^2 is singular at x = 0
  CoordinateChange chg =
      make_change(d, "sing", {"t[1]"}, {"x[1]^2"}, {"t[1]"}, {"sqrt(x[1])"});
  Point pt(d);
  CHECK_THROWS_AS(push_point(chg, pt), SingularJacobianError);
  pt.x(0) = 0.5;
  CHECK_NOTHROW(push_point(chg, pt));
}

TEST_CASE("natural frame jacobians") {
  Dims d{1, 1};
  Point pt(d);
  pt.t(0) = 1.0;
  pt.x(0) = 1.0;
  pt.p(0, 0) = 1.0;

  Mat<double> id_m = natural_frame_jacobians(identity_change(d), pt);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(id_m(r, c) == doctest::Approx(r == c ? 1.0 : 0.0));

  // affine change in both blocks: the mixed dp~/dt and dp~/dx blocks vanish
  CoordinateChange aff = make_change(d, "affine", {"2*t[1] + 0.5"}, {"3*x[1] - 1"},
                                     {"(t[1] - 0.5)/2"}, {"(x[1] + 1)/3"});
  Mat<double> am = natural_frame_jacobians(aff, pt);
  CHECK(am(d.coord_t(0), d.coord_p(0, 0)) == doctest::Approx(0.0));
  CHECK(am(d.coord_x(0), d.coord_p(0, 0)) == doctest::Approx(0.0));
  CHECK(am(d.coord_t(0), d.coord_t(0)) == doctest::Approx(2.0));
  CHECK(am(d.coord_p(0, 0), d.coord_p(0, 0)) == doctest::Approx(2.0 / 3.0));

  // nonlinear change: mixed blocks against a finite-difference oracle on push_point
  CoordinateChange chg = cubic_square_change();
  Mat<double> nf = natural_frame_jacobians(chg, pt);
  const double h = 1e-6;
  for (int old = 0; old < d.total(); ++old) {
    Point up = pt, dn = pt;
    up.c[old] += h;
    dn.c[old] -= h;
    Point pu = push_point(chg, up), pd = push_point(chg, dn);
    for (int nw = 0; nw < d.total(); ++nw) {
      double fd = (pu.c[nw] - pd.c[nw]) / (2 * h);
      CHECK(nf(old, nw) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  // composing with the inverse change's matrix gives the identity
  Point pushed = push_point(chg, pt);
  Mat<double> ni = natural_frame_jacobians(inverse_change(chg), pushed);
  Mat<double> prod = nf * ni;
  for (int r = 0; r < d.total(); ++r)
    for (int c = 0; c < d.total(); ++c)
      CHECK(prod(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-8));
}

TEST_CASE("dtensor_transform basic factors") {
  Dims d{1, 1};
  Point pt(d);
  pt.t(0) = 0.4;
  pt.x(0) = 0.6;
  pt.p(0, 0) = 0.8;

  DTensor scalar(d, {});
  scalar[0] = 5.0;
  CoordinateChange s23 = make_change(d, "s23", {"2*t[1]"}, {"3*x[1]"}, {"t[1]/2"}, {"x[1]/3"});
  CHECK(dtensor_transform(scalar, s23, pt)[0] == doctest::Approx(5.0));

  DTensor tu(d, {IndexKind::TUp});
  tu[0] = 1.5;
  CHECK(dtensor_transform(tu, s23, pt)[0] == doctest::Approx(3.0));

  DTensor pv(d, {IndexKind::PVec});
  pv[0] = 3.0;
  CHECK(dtensor_transform(pv, s23, pt)[0] == doctest::Approx(3.0 * 2.0 / 3.0));
}

TEST_CASE("dtensor transform round trip over random kinds") {
  std::mt19937_64 rng(4242);
  for (Dims d : {Dims{1, 2}, Dims{2, 2}, Dims{2, 3}}) {
    std::vector<CoordinateChange> changes;
    changes.push_back(identity_change(d));
    {
      std::vector<std::string> tf, ti, xf, xi;
      for (int a = 1; a <= d.m; ++a) {
        tf.push_back("1.4*t[" + std::to_string(a) + "] + 0.2");
        ti.push_back("(t[" + std::to_string(a) + "] - 0.2)/1.4");
      }
      for (int i = 1; i <= d.n; ++i) {
        xf.push_back("0.8*x[" + std::to_string(i) + "] - 0.1");
        xi.push_back("(x[" + std::to_string(i) + "] + 0.1)/0.8");
      }
      changes.push_back(make_change(d, "diag-affine", tf, xf, ti, xi));
    }
    {
      std::vector<std::string> tf, ti, xf, xi;
      for (int a = 1; a <= d.m; ++a) {
        tf.push_back("1.1*exp(0.2*t[" + std::to_string(a) + "])");
        ti.push_back("log(t[" + std::to_string(a) + "]/1.1)/0.2");
      }
      for (int i = 1; i <= d.n; ++i) {
        xf.push_back("x[" + std::to_string(i) + "] + 0.1*x[" + std::to_string(i) + "]^2");
        xi.push_back("(sqrt(1 + 0.4*x[" + std::to_string(i) + "]) - 1)/0.2");
      }
      changes.push_back(make_change(d, "mild-nonlinear", tf, xf, ti, xi));
    }

    std::vector<IndexKind> all = {IndexKind::TUp,  IndexKind::TDown, IndexKind::SUp,
                                  IndexKind::SDown, IndexKind::PVec,  IndexKind::PForm};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<IndexKind>> combos;
    for (IndexKind k1 : all) combos.push_back({k1});
    for (IndexKind k1 : all)
      for (IndexKind k2 : all) combos.push_back({k1, k2});
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<IndexKind> kinds;
      for (int k = 0; k < 3; ++k) kinds.push_back(all[rng() % all.size()]);
      combos.push_back(kinds);
    }
    for (const std::vector<IndexKind>& kinds : combos) {
      DTensor t(d, kinds);
      for (size_t k = 0; k < t.size(); ++k) t[k] = u(rng);
      Point pt = random_point(d, rng, 0.2, 0.9);
      for (const CoordinateChange& chg : changes) {
        DTensor fwd = dtensor_transform(t, chg, pt);
        DTensor back = dtensor_transform(fwd, inverse_change(chg), push_point(chg, pt));
        CHECK(max_abs_difference(t, back) < 1e-8);
      }
    }
  }
}

TEST_CASE("liouville-hamilton tensor copies the polymomenta") {
  Dims d{1, 1};
  Point pt(d);
  CHECK(liouville_hamilton(pt).max_abs() == 0.0);
  pt.p(0, 0) = 7.0;
  CHECK(liouville_hamilton(pt)[0] == 7.0);

  // its transform agrees with push_point because the components are p itself
  CoordinateChange chg = make_change(d, "mix", {"2*t[1]"}, {"x[1]"}, {"t[1]/2"}, {"x[1]"});
  pt.t(0) = 0.3;
  pt.x(0) = 0.5;
  DTensor moved = dtensor_transform(liouville_hamilton(pt), chg, pt);
  Point pushed = push_point(chg, pt);
  CHECK(moved[0] == doctest::Approx(liouville_hamilton(pushed)[0]).epsilon(1e-12));
}

TEST_CASE("fundamental metric of a Hamiltonian") {
  Dims d{2, 2};
  Point pt(d);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : pt.c) v = u(rng);

  Field quad = Field::from_field(
      parse("p[1][1]^2 + p[1][2]^2 + p[2][1]^2 + p[2][2]^2", d));
  DTensor g = fundamental_metric(quad, pt);
  for (int q1 = 0; q1 < d.pairs(); ++q1)
    for (int q2 = 0; q2 < d.pairs(); ++q2)
      CHECK(g.at({q1, q2}) == doctest::Approx(q1 == q2 ? 1.0 : 0.0).epsilon(1e-13));

  Field no_p = Field::from_field(parse("sin(t[1]) + x[2]", d));
  CHECK(fundamental_metric(no_p, pt).max_abs() == doctest::Approx(0.0));

  Dims d1{1, 1};
  Point p1(d1);
  p1.p(0, 0) = 2.0;
  Field cubic = Field::from_field(parse("p[1][1]^3", d1));
  CHECK(fundamental_metric(cubic, p1)[0] == doctest::Approx(6.0).epsilon(1e-13));

  // symmetry under the paired-index swap
  Field mixed = Field::from_field(parse("p[1][1]*p[2][2] + sin(p[1][2])*p[2][1]", d));
  DTensor gm = fundamental_metric(mixed, pt);
  for (int q1 = 0; q1 < d.pairs(); ++q1)
    for (int q2 = 0; q2 < d.pairs(); ++q2)
      CHECK(gm.at({q1, q2}) == doctest::Approx(gm.at({q2, q1})).epsilon(1e-12));
}

TEST_CASE("polymomentum Hamilton and h-normalization tensors") {
  Dims d{1, 1};
  Point pt(d);
  SpatialMetric phi = make_spatial_metric(d, {"1"});
  CHECK(polymomentum_hamilton_tensor(phi.phi, pt).max_abs() == 0.0);
  pt.p(0, 0) = 5.0;
  CHECK(polymomentum_hamilton_tensor(phi.phi, pt).at({0, 0, 0}) == doctest::Approx(5.0));

  Dims d2{2, 2};
  Point p2(d2);
  TemporalMetric h = make_temporal_metric(d2, {"2", "0", "0", "3"});
  DTensor j = h_normalization_tensor(h.h, p2);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int jj = 0; jj < 2; ++jj) {
          double want = (i == jj) ? (a == b ? (a == 0 ? 2.0 : 3.0) : 0.0) : 0.0;
          CHECK(j.at({d2.pair_index(i, a), b, jj}) == doctest::Approx(want));
        }
}
