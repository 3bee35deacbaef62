#include "jetham/metrics.hpp"

namespace jetham {

namespace {

std::vector<Field> parse_block_matrix(Dims dims, const std::vector<std::string>& entries, int side,
                                      int lo, int hi, const char* what) {
  if (static_cast<int>(entries.size()) != side * side)
    throw ShapeMismatchError(std::string(what) + " metric needs " + std::to_string(side * side) +
                             " entries");
  std::vector<Field> out;
  out.reserve(entries.size());
  for (const std::string& s : entries) {
    ScalarField f = parse(s, dims);
    if (!f.expression().references_only(lo, hi))
      throw Error(std::string(what) + " metric entry '" + s + "' must depend only on its block");
    out.push_back(Field::from_field(f));
  }
  return out;
}

}  // namespace

TemporalMetric make_temporal_metric(Dims dims, const std::vector<std::string>& entries) {
  return {dims, parse_block_matrix(dims, entries, dims.m, 0, dims.m, "temporal")};
}

SpatialMetric make_spatial_metric(Dims dims, const std::vector<std::string>& entries) {
  return {dims, parse_block_matrix(dims, entries, dims.n, dims.m, dims.m + dims.n, "spatial")};
}

std::vector<Field> christoffel_fields(std::span<const Field> g, Block blk) {
  const int n = blk.len;
  std::vector<Field> metric(g.begin(), g.end());
  std::vector<Field> out;
  out.reserve(static_cast<size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        size_t pick = (static_cast<size_t>(a) * n + b) * n + c;
        out.push_back(Field::wrap<1>([metric, blk, pick](auto coords) {
          using T = std::remove_cv_t<typename decltype(coords)::element_type>;
          std::vector<T> gamma = christoffel_block<T>(
              std::span<const Field>(metric.data(), metric.size()), blk, coords);
          return gamma[pick];
        }));
      }
  return out;
}

std::vector<double> christoffel_at(std::span<const Field> g, Block blk, const Point& pt) {
  return christoffel_block<double>(g, blk, pt.coords());
}

std::vector<double> riemann_at(std::span<const Field> g, Block blk, const Point& pt) {
  return riemann_block<double>(g, blk, pt.coords());
}

LinearConnectionCoeffs christoffel(const TemporalMetric& h, const SpatialMetric& phi) {
  LinearConnectionCoeffs out;
  out.dims = h.dims;
  out.chi = christoffel_fields(h.h, temporal_block(h.dims));
  out.gamma = christoffel_fields(phi.phi, spatial_block(phi.dims));
  return out;
}

}  // namespace jetham
