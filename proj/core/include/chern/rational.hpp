#ifndef CHERN_RATIONAL_HPP
#define CHERN_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>

namespace chern {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Complex number with exact rational real and imaginary parts.
/// The exact scalar backend: identity tests in the form algebra and the
/// Newton tables run over this type, the quadrature path runs over
/// std::complex<double>.
struct CRat {
  Rat re, im;

  CRat() = default;
  CRat(long v) : re(v), im(0) {}
  CRat(const Rat& r) : re(r), im(0) {}
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static CRat i() { return CRat(Rat(0), Rat(1)); }
  static CRat ratio(long n, long d) { return CRat(Rat(n) / Rat(d)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  CRat conj() const { return CRat(re, -im); }

  friend CRat operator+(const CRat& a, const CRat& b) { return CRat(a.re + b.re, a.im + b.im); }
  friend CRat operator-(const CRat& a, const CRat& b) { return CRat(a.re - b.re, a.im - b.im); }
  friend CRat operator-(const CRat& a) { return CRat(-a.re, -a.im); }
  friend CRat operator*(const CRat& a, const CRat& b) {
    return CRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend CRat operator/(const CRat& a, const CRat& b) {
    Rat n = b.re * b.re + b.im * b.im;
    return CRat((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
  }
  CRat& operator+=(const CRat& o) { re += o.re; im += o.im; return *this; }
  CRat& operator-=(const CRat& o) { re -= o.re; im -= o.im; return *this; }
  CRat& operator*=(const CRat& o) { *this = *this * o; return *this; }

  friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

// --- uniform scalar interface used by the templated form algebra ---

inline bool ring_is_zero(const CRat& v) { return v.is_zero(); }
inline bool ring_is_zero(const std::complex<double>& v) { return v.real() == 0.0 && v.imag() == 0.0; }

inline CRat ring_conj(const CRat& v) { return v.conj(); }
inline std::complex<double> ring_conj(const std::complex<double>& v) { return std::conj(v); }

template <class S> struct ScalarOf;
template <> struct ScalarOf<CRat> {
  static CRat from_int(long n) { return CRat(n); }
  static CRat from_ratio(long n, long d) { return CRat(Rat(n) / Rat(d)); }
  static CRat imaginary_unit() { return CRat::i(); }
};
template <> struct ScalarOf<std::complex<double>> {
  static std::complex<double> from_int(long n) { return {double(n), 0.0}; }
  static std::complex<double> from_ratio(long n, long d) { return {double(n) / double(d), 0.0}; }
  static std::complex<double> imaginary_unit() { return {0.0, 1.0}; }
};

inline std::string to_string(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline std::string to_string(const CRat& v) {
  if (v.im == 0) return to_string(v.re);
  std::ostringstream os;
  os << "(" << v.re << (v.im < 0 ? "-" : "+") << (v.im < 0 ? to_string(Rat(-v.im)) : to_string(v.im)) << "i)";
  return os.str();
}

}  // namespace chern

#endif
