// Extended-precision scalar types shared by every module.
//
// Real is an MPFR-backed Boost.Multiprecision number with runtime precision.
// Boost keeps the precision of operands in arithmetic, so every object built
// inside a PrecisionScope carries that scope's precision.

#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nikstar {

using Real = boost::multiprecision::mpfr_float;

/// Decimal digits that correspond to a binary precision.
inline unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

/// RAII guard that sets the default precision for newly created Reals.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits)
        : saved_(Real::default_precision()) {
        Real::default_precision(digits10_for_bits(bits));
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

/// 2^{-e} at the current default precision.
inline Real pow2_neg(int e) {
    return boost::multiprecision::ldexp(Real(1), -e);
}

inline std::string to_decimal(const Real& x, int digits = 0) {
    if (digits <= 0) digits = static_cast<int>(x.precision());
    return x.str(digits, std::ios_base::scientific);
}

/// Minimal complex number over Real. libmpc is not assumed to be available.
struct Complex {
    Real re;
    Real im;

    Complex() : re(0), im(0) {}
    Complex(const Real& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    Complex(const Real& r, const Real& i) : re(r), im(i) {}
    Complex(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        // Smith's algorithm keeps the intermediate magnitudes bounded.
        using boost::multiprecision::abs;
        if (o.re == 0 && o.im == 0) throw std::domain_error("complex division by zero");
        if (abs(o.re) >= abs(o.im)) {
            Real t = o.im / o.re;
            Real den = o.re + o.im * t;
            Real r = (re + im * t) / den;
            im = (im - re * t) / den;
            re = r;
        } else {
            Real t = o.re / o.im;
            Real den = o.re * t + o.im;
            Real r = (re * t + im) / den;
            im = (im * t - re) / den;
            re = r;
        }
        return *this;
    }
    Complex operator-() const { return {-re, -im}; }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
inline Complex operator*(const Complex& a, const Real& s) { return {s * a.re, s * a.im}; }
inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

inline Complex conj(const Complex& a) { return {a.re, -a.im}; }
inline Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Complex& a) {
    return boost::multiprecision::hypot(a.re, a.im);
}
inline Complex pow_int(Complex a, int e) {
    Complex r(1);
    bool inv = e < 0;
    unsigned u = static_cast<unsigned>(inv ? -e : e);
    while (u) {
        if (u & 1u) r *= a;
        a *= a;
        u >>= 1u;
    }
    return inv ? Complex(1) / r : r;
}

inline std::ostream& operator<<(std::ostream& os, const Complex& c) {
    return os << '(' << c.re << ',' << c.im << ')';
}

}  // namespace nikstar

namespace nikstar {

/// Binary precision actually carried by x.
inline unsigned bits_of(const Real& x) {
    return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

}  // namespace nikstar
