// Reduced multiple orthogonal polynomials Q_d = P_{n,0}, recurrence
// coefficients a_n, functions of the second kind psi_{n,k} and their zeros.
//
// All routines work at the precision of the MeasureBank they are given; run
// them inside the same PrecisionScope the bank was built in.

#pragma once

#include "nikstar/measures.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace nikstar {

/// Monic polynomial in tau = z^{p+1}. Evaluation goes through the Chebyshev
/// form on Delta_0, which is far better conditioned than the monomial one.
struct MonicPolynomial {
    long n = 0;
    int ell = 0;
    int d = 0;
    std::vector<Real> coeffs;  // ascending powers of tau, coeffs[d] == 1
    std::vector<Real> cheb;    // Q = sum cheb[c] T_c((tau - mid) / half)
    Real mid;
    Real half;
    Real orth_residual = 0;  // max relative orthogonality defect
    int rows = 0;            // orthogonality conditions used

    Real operator()(const Real& tau) const;
    Complex operator()(const Complex& tau) const;
};

/// Star-domain lift Q_n(z) = z^ell Q_d(z^{p+1}).
Complex lift_Q(const MonicPolynomial& q, int p, const Complex& z);

struct RecurrenceValue {
    long n;
    Real a;
    Real residual;  // full coefficient vector, relative to |Q^[n]|
};

struct ZeroSet {
    long n;
    int k;
    std::vector<Real> zeros;  // increasing, inside (a_k, b_k)
};

/// Product of (x - zero).
Real zero_product(const ZeroSet& zs, const Real& x);
Complex zero_product(const ZeroSet& zs, const Complex& x);

/// True if the two sorted sets strictly alternate.
bool interlace(const std::vector<Real>& x, const std::vector<Real>& y);

struct KNormResult {
    long n;
    int k;
    Real a_n;
    Real ratio;     // K^{-2}_{n,k} / K^{-2}_{n-p,k}
    Real residual;  // |a_n - ratio|
};

class MopEngine;

/// psi_{n,k} for one n. Values at the quadrature nodes of every level are
/// cached so each evaluation is a single quadrature sum.
class SecondKind {
public:
    SecondKind(const MopEngine& engine, long n);

    long n() const { return n_; }
    int ell() const { return ell_; }

    /// psi_{n,k}(x); throws DomainError for x on [a_{k-1}, b_{k-1}].
    Real operator()(int k, const Real& x) const;
    Complex operator()(int k, const Complex& x) const;
    /// psi_{n,k} at the nodes of sigma*_k (0 <= k <= p-1).
    const std::vector<Real>& at_nodes(int k) const { return nodes_.at(k); }

private:
    const MeasureBank* bank_;
    const MonicPolynomial* q_;
    long n_;
    int ell_;
    int p_;
    std::vector<DiscretizedMeasure> sigma_;   // sigma_{n,k}
    std::vector<std::vector<Real>> nodes_;   // psi_{n,k}(tau_i^{(k)})
};

class MopEngine {
public:
    explicit MopEngine(const MeasureBank& bank);

    const MeasureBank& bank() const { return *bank_; }
    int p() const { return bank_->p(); }

    /// Q_d for star index n (cached). Throws CheckFailure when the system is
    /// not square, ConvergenceError when the orthogonality residual exceeds
    /// 2^{-bits/4}.
    const MonicPolynomial& Q(long n) const;
    /// a_n for n >= p with its full-vector residual (cached). Throws
    /// ConvergenceError for a residual above 2^{-bits/4} (precision
    /// exhausted) and CheckFailure for a_n <= 0.
    const RecurrenceValue& recurrence(long n) const;
    Real a(long n) const { return recurrence(n).a; }

    const SecondKind& psi(long n) const;

    /// Zeros of psi_{n,k} on (a_k, b_k), k = 0..p-1.
    ZeroSet psi_zeros(long n, int k) const;
    /// max relative defect of int psi_{n,k} t^s dmu_{k,j} over all j >= k and admissible s.
    Real psi_orthogonality_residual(long n, int k) const;
    /// Requires n = k mod p and n >= p.
    KNormResult k_norm_check(long n, int k) const;

    /// Working precision in bits of the bank.
    unsigned bits() const { return bits_; }
    Real tolerance() const { return pow2_neg(static_cast<int>(bits_ / 4)); }

private:
    const std::vector<Real>& cheb_row(int c) const;

    const MeasureBank* bank_;
    unsigned bits_;
    Real mid_, half_;
    std::vector<Real> xnodes_;  // nodes of sigma*_0 mapped to [-1, 1]
    mutable std::vector<std::vector<Real>> tcache_;  // T_c(x_i)
    mutable std::map<long, MonicPolynomial> qcache_;
    mutable std::map<long, RecurrenceValue> acache_;
    mutable std::map<long, std::unique_ptr<SecondKind>> pcache_;
    mutable std::map<std::pair<long, int>, ZeroSet> zcache_;
};

/// Minimum precision for polynomials of degree up to d_max.
unsigned required_bits(int d_max);

std::string polynomial_to_json(const MonicPolynomial& q, unsigned bits);

}  // namespace nikstar
