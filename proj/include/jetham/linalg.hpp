#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "jetham/dual.hpp"

namespace jetham {

/// Dense square matrix of a (possibly dual) scalar type. Sizes here are tiny:
/// the largest is the (m+n+mn)-dimensional frame matrix.
template <class T>
struct Mat {
  int n = 0;
  std::vector<T> a;  // row-major

  Mat() = default;
  explicit Mat(int size) : n(size), a(static_cast<size_t>(size) * size, T(0.0)) {}

  T& operator()(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
  const T& operator()(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }

  static Mat identity(int size) {
    Mat m(size);
    for (int i = 0; i < size; ++i) m(i, i) = T(1.0);
    return m;
  }
};

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
  Mat<T> r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const T& v = x(i, k);
      for (int j = 0; j < x.n; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

/// Gauss-Jordan inverse with partial pivoting on the leading (value) part.
/// Returns nullopt when the pivot magnitude underflows `tol`; `det_out`, when
/// given, receives the determinant (valid also on failure up to the bad pivot).
template <class T>
std::optional<Mat<T>> inverse(Mat<T> m, double tol = 1e-10, T* det_out = nullptr) {
  const int n = m.n;
  Mat<T> inv = Mat<T>::identity(n);
  T det(1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(leading(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double cand = std::abs(leading(m(r, col)));
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best < tol) {
      if (det_out) *det_out = T(0.0);
      return std::nullopt;
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(m(pivot, c), m(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
      det = -det;
    }
    T diag = m(col, col);
    det = det * diag;
    for (int c = 0; c < n; ++c) {
      m(col, c) = m(col, c) / diag;
      inv(col, c) = inv(col, c) / diag;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      T f = m(r, col);
      if (leading(f) == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        m(r, c) = m(r, c) - f * m(col, c);
        inv(r, c) = inv(r, c) - f * inv(col, c);
      }
    }
  }
  if (det_out) *det_out = det;
  return inv;
}

template <class T>
T det(Mat<T> m) {
  const int n = m.n;
  T d(1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(leading(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double cand = std::abs(leading(m(r, col)));
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == 0.0) return T(0.0);
    if (pivot != col) {
      for (int c = col; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      d = -d;
    }
    d = d * m(col, col);
    for (int r = col + 1; r < n; ++r) {
      T f = m(r, col) / m(col, col);
      for (int c = col; c < n; ++c) m(r, c) = m(r, c) - f * m(col, c);
    }
  }
  return d;
}

}  // namespace jetham
