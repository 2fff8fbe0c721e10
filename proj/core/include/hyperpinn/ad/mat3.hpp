#pragma once

// 3x3 matrix primitives, generic over the entry type (double or Jet).
// Storage is row-major: m[3 * i + j] = M_ij.

#include <array>
#include <sstream>

#include "hyperpinn/ad/jet.hpp"
#include "hyperpinn/error.hpp"

namespace hyperpinn::ad {

template <class T>
using Mat3 = std::array<T, 9>;

// |det| below this floor is treated as singular.
inline constexpr double kDeterminantFloor = 1e-12;

template <class T>
T det(const Mat3<T>& a) {
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

template <class T>
T trace(const Mat3<T>& a) {
  return a[0] + a[4] + a[8];
}

template <class T>
Mat3<T> transpose(const Mat3<T>& a) {
  return {a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]};
}

template <class T>
Mat3<T> matmul(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> c;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
    }
  }
  return c;
}

// Cofactor matrix: cof(A) = det(A) A^{-T}.
template <class T>
Mat3<T> cofactor(const Mat3<T>& a) {
  return {a[4] * a[8] - a[5] * a[7], a[5] * a[6] - a[3] * a[8], a[3] * a[7] - a[4] * a[6],
          a[2] * a[7] - a[1] * a[8], a[0] * a[8] - a[2] * a[6], a[1] * a[6] - a[0] * a[7],
          a[1] * a[5] - a[2] * a[4], a[2] * a[3] - a[0] * a[5], a[0] * a[4] - a[1] * a[3]};
}

// A^{-T} given a precomputed determinant; no floor check.
template <class T>
Mat3<T> inverse_transpose_with(const Mat3<T>& a, const T& determinant) {
  const T r = 1.0 / determinant;
  Mat3<T> c = cofactor(a);
  for (auto& x : c) x = x * r;
  return c;
}

template <class T>
void require_nonsingular(const T& determinant) {
  const double m = min_abs_value(determinant);
  if (!(m >= kDeterminantFloor)) {
    std::ostringstream msg;
    msg << "ad: |det| = " << m << " below floor " << kDeterminantFloor;
    throw SingularMatrix(msg.str());
  }
}

template <class T>
Mat3<T> inverse(const Mat3<T>& a) {
  const T d = det(a);
  require_nonsingular(d);
  return transpose(inverse_transpose_with(a, d));
}

template <class T>
Mat3<T> add(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> c;
  for (int k = 0; k < 9; ++k) c[k] = a[k] + b[k];
  return c;
}

template <class T>
Mat3<T> sub(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> c;
  for (int k = 0; k < 9; ++k) c[k] = a[k] - b[k];
  return c;
}

template <class T>
Mat3<T> scale(const Mat3<T>& a, const T& s) {
  Mat3<T> c;
  for (int k = 0; k < 9; ++k) c[k] = a[k] * s;
  return c;
}

inline Mat3<double> identity3() { return {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}; }

}  // namespace hyperpinn::ad
