#pragma once

// Forward-mode dual numbers, nestable for second derivatives, and a small
// complex-over-anything type so observables like A± can be differentiated.
// std::complex<T> only guarantees behavior for float/double/long double,
// hence the local cplx template.

#include <cmath>

namespace taubnut {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // tangent
};

using dual = Dual<double>;
using dual2 = Dual<Dual<double>>;

// ---- arithmetic: Dual (op) Dual ----

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

// ---- arithmetic: Dual (op) double, double (op) Dual ----
// The scalar falls through to the value slot; recursion handles nesting.

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, double b) {
  return {a.v + b, a.d};
}
template <class T>
constexpr Dual<T> operator+(double a, const Dual<T>& b) {
  return {a + b.v, b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, double b) {
  return {a.v - b, a.d};
}
template <class T>
constexpr Dual<T> operator-(double a, const Dual<T>& b) {
  return {a - b.v, -b.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, double b) {
  return {a.v * b, a.d * b};
}
template <class T>
constexpr Dual<T> operator*(double a, const Dual<T>& b) {
  return {a * b.v, a * b.d};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, double b) {
  return {a.v / b, a.d / b};
}
template <class T>
constexpr Dual<T> operator/(double a, const Dual<T>& b) {
  return {a / b.v, -a * b.d / (b.v * b.v)};
}

template <class T>
constexpr bool operator<(const Dual<T>& a, double b) {
  return a.v < b;
}
template <class T>
constexpr bool operator>(const Dual<T>& a, double b) {
  return a.v > b;
}

// ---- elementary functions (chain rule) ----

using std::cos;
using std::exp;
using std::sin;
using std::sqrt;

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {cos(a.v), -a.d * sin(a.v)};
}

// Fully unwrap to the primal double.
constexpr double primal(double x) { return x; }
template <class T>
constexpr double primal(const Dual<T>& x) {
  return primal(x.v);
}

// d/dx f(x) for f mapping scalar -> scalar.
template <class F>
double derivative(F&& f, double x) {
  return f(dual{x, 1.0}).d;
}

// d²/dx² via nested duals: seed value-tangent and outer tangent.
template <class F>
double second_derivative(F&& f, double x) {
  dual2 xx{{x, 1.0}, {1.0, 0.0}};
  return f(xx).d.d;
}

// ---- complex over an arbitrary real scalar ----

template <class T>
struct cplx {
  T re{};
  T im{};
};

using cd = cplx<double>;

template <class T>
constexpr cplx<T> operator+(const cplx<T>& a, const cplx<T>& b) {
  return {a.re + b.re, a.im + b.im};
}
template <class T>
constexpr cplx<T> operator-(const cplx<T>& a, const cplx<T>& b) {
  return {a.re - b.re, a.im - b.im};
}
template <class T>
constexpr cplx<T> operator-(const cplx<T>& a) {
  return {-a.re, -a.im};
}
template <class T>
constexpr cplx<T> operator*(const cplx<T>& a, const cplx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
constexpr cplx<T> operator*(const T& s, const cplx<T>& a) {
  return {s * a.re, s * a.im};
}
constexpr cd operator*(double s, const cd& a) { return {s * a.re, s * a.im}; }
template <class T>
constexpr cplx<T> conj(const cplx<T>& a) {
  return {a.re, -a.im};
}
template <class T>
constexpr T norm2(const cplx<T>& a) {
  return a.re * a.re + a.im * a.im;
}

inline double abs(const cd& a) { return std::hypot(a.re, a.im); }
inline double arg(const cd& a) { return std::atan2(a.im, a.re); }

// e^{i·phi}
template <class T>
cplx<T> expi(const T& phi) {
  return {cos(phi), sin(phi)};
}
inline cd expi(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace taubnut
