#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jetham/dual.hpp"
#include "jetham/error.hpp"

namespace jetham {

/// Dimensions of the base manifolds: m temporal, n spatial coordinates.
/// Flattened coordinate order is (t^1..t^m, x^1..x^n, p_1^1..p_n^m) with the
/// polymomentum block laid out spatial-major: p_i^a sits at m + n + (i-1)*m + (a-1).
struct Dims {
  int m = 1;
  int n = 1;

  bool operator==(const Dims&) const = default;
  int pairs() const { return m * n; }
  int total() const { return m + n + m * n; }
  int coord_t(int a) const { return a; }                       // 0-based a
  int coord_x(int i) const { return m + i; }                   // 0-based i
  int coord_p(int i, int a) const { return m + n + i * m + a; }  // 0-based i, a
  int pair_index(int i, int a) const { return i * m + a; }
  int pair_i(int q) const { return q / m; }
  int pair_a(int q) const { return q % m; }
};

enum class NodeKind : std::uint8_t {
  Constant,
  Coord,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sqrt,
  Sinh,
  Cosh,
};

struct ExprNode {
  NodeKind kind;
  double value = 0.0;   // Constant
  int coord = -1;       // Coord: flat coordinate index
  int a = -1, b = -1;   // child node ids
  int pos = 0;          // 1-based source position
  long long iexp = 0;   // Pow with integer constant exponent
  bool has_iexp = false;
};

/// Parsed expression over the coordinates of the dual 1-jet bundle.
/// Evaluation is templated so the same tree yields values and arbitrarily
/// nested directional derivatives.
class Expression {
 public:
  Expression() = default;
  Expression(Dims dims, std::vector<ExprNode> nodes, int root)
      : dims_(dims), nodes_(std::move(nodes)), root_(root) {}

  static Expression constant(Dims dims, double c);
  static Expression coordinate(Dims dims, int flat_index);

  const Dims& dims() const { return dims_; }
  bool empty() const { return root_ < 0; }

  template <class T>
  T eval(std::span<const T> coords) const {
    return eval_node<T>(root_, coords);
  }

  std::string to_string() const;

  /// True when every coordinate reference lies in [lo, hi) of the flat layout.
  bool references_only(int lo, int hi) const;

  // Structural combinators used by programmatic expression builders.
  static Expression binary(NodeKind op, const Expression& x, const Expression& y);
  static Expression unary(NodeKind op, const Expression& x);

 private:
  template <class T>
  T eval_node(int id, std::span<const T> coords) const;

  Dims dims_;
  std::vector<ExprNode> nodes_;
  int root_ = -1;
};

/// A coordinate reference as seen by users of `partial`.
struct CoordRef {
  enum class Block { Temporal, Spatial, Polymomentum } block;
  int a = 0;  // 1-based temporal index where applicable
  int i = 0;  // 1-based spatial index where applicable

  static CoordRef t(int a) { return {Block::Temporal, a, 0}; }
  static CoordRef x(int i) { return {Block::Spatial, 0, i}; }
  static CoordRef p(int i, int a) { return {Block::Polymomentum, a, i}; }

  int flat(const Dims& d) const {
    switch (block) {
      case Block::Temporal:
        return d.coord_t(a - 1);
      case Block::Spatial:
        return d.coord_x(i - 1);
      default:
        return d.coord_p(i - 1, a - 1);
    }
  }
};

/// A point (t^a, x^i, p_i^a) on the dual 1-jet bundle, stored flattened.
struct Point {
  Dims dims;
  std::vector<double> c;  // length dims.total()

  Point() = default;
  explicit Point(Dims d) : dims(d), c(d.total(), 0.0) {}
  Point(Dims d, std::vector<double> coords) : dims(d), c(std::move(coords)) {}

  double t(int a) const { return c[dims.coord_t(a)]; }
  double x(int i) const { return c[dims.coord_x(i)]; }
  double p(int i, int a) const { return c[dims.coord_p(i, a)]; }
  double& t(int a) { return c[dims.coord_t(a)]; }
  double& x(int i) { return c[dims.coord_x(i)]; }
  double& p(int i, int a) { return c[dims.coord_p(i, a)]; }
  std::span<const double> coords() const { return c; }
};

/// Differentiable scalar field given by a parsed expression.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Expression expr) : expr_(std::move(expr)) {}

  const Expression& expression() const { return expr_; }
  const Dims& dims() const { return expr_.dims(); }

  double eval(const Point& pt) const;

  /// Mixed partial of order |coords| <= 3, exact forward mode.
  double partial(std::span<const CoordRef> coords, const Point& pt) const;
  double partial(std::initializer_list<CoordRef> coords, const Point& pt) const {
    return partial(std::span<const CoordRef>(coords.begin(), coords.size()), pt);
  }

  std::string to_string() const { return expr_.to_string(); }

 private:
  Expression expr_;
};

/// Parses `text` against the declared dimensions. Grammar: ^ binds tightest
/// (right-associative), then unary minus, then * /, then + -. Coordinates are
/// t[a], x[i], p[i][a] with 1-based indices; `pi` is a literal constant.
ScalarField parse(const std::string& text, Dims dims);

// --- template bodies ---------------------------------------------------------

template <class T>
T Expression::eval_node(int id, std::span<const T> coords) const {
  const ExprNode& nd = nodes_[id];
  switch (nd.kind) {
    case NodeKind::Constant:
      return T(nd.value);
    case NodeKind::Coord:
      return coords[nd.coord];
    case NodeKind::Add:
      return eval_node<T>(nd.a, coords) + eval_node<T>(nd.b, coords);
    case NodeKind::Sub:
      return eval_node<T>(nd.a, coords) - eval_node<T>(nd.b, coords);
    case NodeKind::Mul:
      return eval_node<T>(nd.a, coords) * eval_node<T>(nd.b, coords);
    case NodeKind::Div: {
      T den = eval_node<T>(nd.b, coords);
      if (leading(den) == 0.0) throw DomainError("division", 0.0);
      return eval_node<T>(nd.a, coords) / den;
    }
    case NodeKind::Pow: {
      T base = eval_node<T>(nd.a, coords);
      if (nd.has_iexp) {
        if (nd.iexp < 0 && leading(base) == 0.0) throw DomainError("pow", leading(base));
        return powi(base, nd.iexp);
      }
      if (leading(base) <= 0.0) throw DomainError("pow", leading(base));
      return exp(eval_node<T>(nd.b, coords) * log(base));
    }
    case NodeKind::Neg:
      return -eval_node<T>(nd.a, coords);
    case NodeKind::Sin:
      return sin(eval_node<T>(nd.a, coords));
    case NodeKind::Cos:
      return cos(eval_node<T>(nd.a, coords));
    case NodeKind::Tan:
      return tan(eval_node<T>(nd.a, coords));
    case NodeKind::Exp:
      return exp(eval_node<T>(nd.a, coords));
    case NodeKind::Log: {
      T u = eval_node<T>(nd.a, coords);
      if (leading(u) <= 0.0) throw DomainError("log", leading(u));
      return log(u);
    }
    case NodeKind::Sqrt: {
      T u = eval_node<T>(nd.a, coords);
      if (leading(u) < 0.0) throw DomainError("sqrt", leading(u));
      return sqrt(u);
    }
    case NodeKind::Sinh:
      return sinh(eval_node<T>(nd.a, coords));
    case NodeKind::Cosh:
      return cosh(eval_node<T>(nd.a, coords));
  }
  throw Error("corrupt expression node");
}

}  // namespace jetham
