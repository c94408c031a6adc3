#pragma once
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace syge {

// Block-diagonal Givens kernels. A parameter vector of length n/2 holds one
// angle per consecutive coordinate pair; trig is evaluated in double and the
// result stored back at T's precision.
//
// Rotation block (det +1):   y0 = c*x0 - s*x1,  y1 = s*x0 + c*x1
// Reflection block (det -1): y0 = c*x0 + s*x1,  y1 = s*x0 - c*x1
// The reflection matrix is symmetric and involutory (Ref * Ref = I).

namespace detail {
inline void check_even(size_t n) {
  if (n % 2 != 0) throw std::invalid_argument("vector length must be even");
}
inline void check_half(size_t half, size_t n) {
  detail::check_even(n);
  if (half * 2 != n) throw std::invalid_argument("angle count must be n/2");
}
}  // namespace detail

template <class T>
void givens_rotate(const T* angles, const T* x, T* y, size_t n) {
  for (size_t b = 0; b * 2 < n; ++b) {
    const double c = std::cos(static_cast<double>(angles[b]));
    const double s = std::sin(static_cast<double>(angles[b]));
    const double x0 = x[2 * b], x1 = x[2 * b + 1];
    y[2 * b] = static_cast<T>(c * x0 - s * x1);
    y[2 * b + 1] = static_cast<T>(s * x0 + c * x1);
  }
}

// transpose (= inverse) rotation, used by backward passes
template <class T>
void givens_rotate_tr(const T* angles, const T* x, T* y, size_t n) {
  for (size_t b = 0; b * 2 < n; ++b) {
    const double c = std::cos(static_cast<double>(angles[b]));
    const double s = std::sin(static_cast<double>(angles[b]));
    const double x0 = x[2 * b], x1 = x[2 * b + 1];
    y[2 * b] = static_cast<T>(c * x0 + s * x1);
    y[2 * b + 1] = static_cast<T>(-s * x0 + c * x1);
  }
}

template <class T>
void givens_reflect(const T* angles, const T* x, T* y, size_t n) {
  for (size_t b = 0; b * 2 < n; ++b) {
    const double c = std::cos(static_cast<double>(angles[b]));
    const double s = std::sin(static_cast<double>(angles[b]));
    const double x0 = x[2 * b], x1 = x[2 * b + 1];
    y[2 * b] = static_cast<T>(c * x0 + s * x1);
    y[2 * b + 1] = static_cast<T>(s * x0 - c * x1);
  }
}

template <class T>
std::vector<T> givens_rotate(const std::vector<T>& angles, const std::vector<T>& x) {
  detail::check_half(angles.size(), x.size());
  std::vector<T> y(x.size());
  givens_rotate(angles.data(), x.data(), y.data(), x.size());
  return y;
}

template <class T>
std::vector<T> givens_reflect(const std::vector<T>& angles, const std::vector<T>& x) {
  detail::check_half(angles.size(), x.size());
  std::vector<T> y(x.size());
  givens_reflect(angles.data(), x.data(), y.data(), x.size());
  return y;
}

template <class T>
double sq_dist(const T* x, const T* y, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    acc += d * d;
  }
  return acc;
}

template <class T>
double sq_dist(const std::vector<T>& x, const std::vector<T>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("sq_dist: dimension mismatch");
  return sq_dist(x.data(), y.data(), x.size());
}

template <class T>
double dot(const T* x, const T* y, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  return acc;
}

// Cosine similarity; a zero vector on either side yields 0 (neutral) rather
// than an error so degenerate benchmark items never abort a run. Callers that
// care count these via the zero_norm flag.
template <class T>
double cosine(const T* x, const T* y, size_t n, bool* zero_norm = nullptr) {
  const double nx = dot(x, x, n), ny = dot(y, y, n);
  if (nx == 0.0 || ny == 0.0) {
    if (zero_norm) *zero_norm = true;
    return 0.0;
  }
  if (zero_norm) *zero_norm = false;
  return dot(x, y, n) / (std::sqrt(nx) * std::sqrt(ny));
}

template <class T>
double cosine(const std::vector<T>& x, const std::vector<T>& y, bool* zero_norm = nullptr) {
  if (x.size() != y.size()) throw std::invalid_argument("cosine: dimension mismatch");
  return cosine(x.data(), y.data(), x.size(), zero_norm);
}

// numerically stable logistic function; never overflows, underflows to ~1e-324
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(sigmoid(z)) without intermediate underflow
inline double log_sigmoid(double z) {
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

// two-way softmax with max subtraction
inline void softmax2(double s0, double s1, double& a0, double& a1) {
  const double m = s0 > s1 ? s0 : s1;
  const double e0 = std::exp(s0 - m), e1 = std::exp(s1 - m);
  const double z = e0 + e1;
  a0 = e0 / z;
  a1 = e1 / z;
}

// out = alpha_x * x + alpha_y * y with (alpha_x, alpha_y) = softmax(a.x, a.y)
template <class T>
void attention_combine(const T* x, const T* y, const T* a, T* out, size_t n,
                       double* alpha_x_out = nullptr, double* alpha_y_out = nullptr) {
  double ax, ay;
  softmax2(dot(a, x, n), dot(a, y, n), ax, ay);
  for (size_t i = 0; i < n; ++i)
    out[i] = static_cast<T>(ax * static_cast<double>(x[i]) + ay * static_cast<double>(y[i]));
  if (alpha_x_out) *alpha_x_out = ax;
  if (alpha_y_out) *alpha_y_out = ay;
}

template <class T>
std::vector<T> attention_combine(const std::vector<T>& x, const std::vector<T>& y,
                                 const std::vector<T>& a) {
  if (x.size() != y.size() || x.size() != a.size())
    throw std::invalid_argument("attention_combine: dimension mismatch");
  std::vector<T> out(x.size());
  attention_combine(x.data(), y.data(), a.data(), out.data(), x.size());
  return out;
}

}  // namespace syge
