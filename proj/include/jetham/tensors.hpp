#pragma once

#include <string>
#include <vector>

#include "jetham/connections.hpp"
#include "jetham/parallel.hpp"

namespace jetham {

/// One named d-tensor family of a torsion/curvature table, in its table's
/// slot order. `index_names` labels each presented index (paired axes expand
/// to two labels) for serialization.
struct TensorFamily {
  std::string name;
  std::string block;  // table cell, e.g. "w(hT,hT)"
  DTensor value;
  std::vector<std::string> index_names;
};

/// The torsion table: 12 effective families plus the 6 structural zeros, kept
/// in row-major table order so the schema is uniform downstream.
struct TorsionTable {
  Dims dims;
  std::vector<TensorFamily> families;

  const DTensor& find(const std::string& name) const;
};

/// The 18 curvature families in table order.
struct CurvatureTable {
  Dims dims;
  std::vector<TensorFamily> families;

  const DTensor& find(const std::string& name) const;
};

TorsionTable torsion_table(const NLinearConnection& D, const Point& pt);
CurvatureTable curvature_table(const NLinearConnection& D, const Point& pt);

/// Definition oracles: evaluate T(X,Y) = D_X Y - D_Y X - [X,Y] (resp.
/// R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z) on adapted frame fields, with
/// the bracket taken by applying the frame derivations twice, project with
/// h_T, h_M, w and repackage slot-for-slot like the closed-form tables.
TorsionTable torsion_table_via_oracle(const NLinearConnection& D, const Point& pt);
CurvatureTable curvature_table_via_oracle(const NLinearConnection& D, const Point& pt);

double max_table_difference(const TorsionTable& a, const TorsionTable& b);
double max_table_difference(const CurvatureTable& a, const CurvatureTable& b);

std::vector<TorsionTable> torsion_tables(const NLinearConnection& D,
                                         std::span<const Point> points, ExecMode mode);
std::vector<CurvatureTable> curvature_tables(const NLinearConnection& D,
                                             std::span<const Point> points, ExecMode mode);

}  // namespace jetham
