#pragma once

#include <memory>
#include <span>
#include <vector>

#include "jetham/dual.hpp"
#include "jetham/error.hpp"
#include "jetham/expr.hpp"

namespace jetham {

/// Type-erased differentiable scalar field over the flattened coordinates.
/// Supports evaluation at four nesting depths (plain doubles plus three dual
/// levels), enough for third-order mixed derivatives of any input expression
/// and for the derivative chains the curvature machinery builds on top.
///
/// `Extra` (at wrap time) declares how many additional dual levels the wrapped
/// callable stacks onto erased sub-fields it evaluates internally; depths that
/// would exceed the ceiling throw DepthExceededError instead of compiling a
/// call that cannot be satisfied.
class Field {
  struct Concept {
    virtual ~Concept() = default;
    virtual double eval0(std::span<const double>) const = 0;
    virtual D1 eval1(std::span<const D1>) const = 0;
    virtual D2 eval2(std::span<const D2>) const = 0;
    virtual D3 eval3(std::span<const D3>) const = 0;
  };

  template <int Extra, class F>
  struct Model final : Concept {
    explicit Model(F fn) : f(std::move(fn)) {}
    F f;
    double eval0(std::span<const double> c) const override { return f(c); }
    D1 eval1(std::span<const D1> c) const override {
      if constexpr (Extra <= 2) {
        return f(c);
      } else {
        throw DepthExceededError();
      }
    }
    D2 eval2(std::span<const D2> c) const override {
      if constexpr (Extra <= 1) {
        return f(c);
      } else {
        throw DepthExceededError();
      }
    }
    D3 eval3(std::span<const D3> c) const override {
      if constexpr (Extra <= 0) {
        return f(c);
      } else {
        throw DepthExceededError();
      }
    }
  };

 public:
  Field() = default;

  template <int Extra = 0, class F>
  static Field wrap(F f) {
    Field out;
    out.impl_ = std::make_shared<Model<Extra, F>>(std::move(f));
    return out;
  }

  static Field constant(double c) {
    return wrap([c](auto coords) {
      using T = std::remove_cv_t<typename decltype(coords)::element_type>;
      (void)coords;
      return T(c);
    });
  }

  static Field zero() { return constant(0.0); }

  static Field from_expression(Expression e) {
    auto sp = std::make_shared<const Expression>(std::move(e));
    return wrap([sp](auto coords) {
      using T = std::remove_cv_t<typename decltype(coords)::element_type>;
      return sp->template eval<T>(coords);
    });
  }

  static Field from_field(const ScalarField& f) { return from_expression(f.expression()); }

  bool valid() const { return impl_ != nullptr; }

  double operator()(std::span<const double> c) const { return impl_->eval0(c); }
  D1 operator()(std::span<const D1> c) const { return impl_->eval1(c); }
  D2 operator()(std::span<const D2> c) const { return impl_->eval2(c); }
  D3 operator()(std::span<const D3> c) const { return impl_->eval3(c); }

 private:
  std::shared_ptr<const Concept> impl_;
};

/// d/de f(coords + e*seed): one directional derivative at the caller's depth.
template <class T>
T dir_deriv(const Field& f, std::span<const T> coords, std::span<const T> seed) {
  std::vector<Dual<T>> c(coords.size());
  for (size_t j = 0; j < coords.size(); ++j) c[j] = Dual<T>(coords[j], seed[j]);
  return f(std::span<const Dual<T>>(c.data(), c.size())).d;
}

/// Plain coordinate partial of an erased field.
template <class T>
T coord_partial(const Field& f, std::span<const T> coords, int flat_index) {
  std::vector<Dual<T>> c(coords.size());
  for (size_t j = 0; j < coords.size(); ++j)
    c[j] = Dual<T>(coords[j], T(j == static_cast<size_t>(flat_index) ? 1.0 : 0.0));
  return f(std::span<const Dual<T>>(c.data(), c.size())).d;
}

}  // namespace jetham
