// Benchmark comparing the serial reference path against the OpenMP one for
// batch torsion/curvature table evaluation. Both paths must agree bitwise.
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <random>

#include "jetham/tensors.hpp"
#include "jetham/verify.hpp"

using namespace jetham;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Table>
double tables_max_diff(const std::vector<Table>& a, const std::vector<Table>& b) {
  double r = 0.0;
  for (size_t k = 0; k < a.size(); ++k) r = std::max(r, max_table_difference(a[k], b[k]));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jetham-bench: serial vs OpenMP batch table evaluation"};
  int m = 2, n = 2, npoints = 64;
  std::uint64_t seed = 7;
  app.add_option("-m", m, "temporal dimension");
  app.add_option("-n", n, "spatial dimension");
  app.add_option("--points", npoints, "number of evaluation points");
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  Dims dims{m, n};
  TemporalMetric h = make_temporal_metric(
      dims, [&] {
        std::vector<std::string> e;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            e.push_back(a == b ? "1.5 + 0.3*sin(t[" + std::to_string(a + 1) + "])" : "0.1");
        return e;
      }());
  SpatialMetric phi = make_spatial_metric(
      dims, [&] {
        std::vector<std::string> e;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            e.push_back(i == j ? "1.5 + 0.3*cos(x[" + std::to_string(i + 1) + "])" : "0.1");
        return e;
      }());
  NLinearConnection conn = berwald_connection(h, phi);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts;
  for (int k = 0; k < npoints; ++k) {
    Point pt(dims);
    for (double& v : pt.c) v = u(rng);
    pts.push_back(pt);
  }

  std::printf("dims m=%d n=%d, %d points, %d threads\n", m, n, npoints, effective_threads());

  auto t0 = std::chrono::steady_clock::now();
  std::vector<TorsionTable> ts = torsion_tables(conn, pts, ExecMode::Serial);
  double tor_serial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  std::vector<TorsionTable> tp = torsion_tables(conn, pts, ExecMode::Parallel);
  double tor_parallel = seconds_since(t0);
  std::printf("torsion   serial %.3fs  parallel %.3fs  speedup %.2fx  max|diff| %.1e\n",
              tor_serial, tor_parallel, tor_serial / tor_parallel, tables_max_diff(ts, tp));

  t0 = std::chrono::steady_clock::now();
  std::vector<CurvatureTable> cs = curvature_tables(conn, pts, ExecMode::Serial);
  double cur_serial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  std::vector<CurvatureTable> cp = curvature_tables(conn, pts, ExecMode::Parallel);
  double cur_parallel = seconds_since(t0);
  std::printf("curvature serial %.3fs  parallel %.3fs  speedup %.2fx  max|diff| %.1e\n",
              cur_serial, cur_parallel, cur_serial / cur_parallel, tables_max_diff(cs, cp));

  return 0;
}
