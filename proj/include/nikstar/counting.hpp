// Exact integer combinatorics for Nikishin systems on star-like sets.
//
// Everything here is integer arithmetic. Indices follow the usual
// conventions: p >= 2 generating measures, period p(p+1) in the star index
// n, and residues ell(n) = n mod (p+1).

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nikstar::counting {

struct SystemShape {
    int p;

    explicit SystemShape(int p_);
    long period() const { return static_cast<long>(p) * (p + 1); }
};

/// The pair (k, l) attached to a residue rho: rho = k-1 mod (p+1), rho = l-1 mod p.
struct IndexPair {
    int rho;
    int k;  // in [0, p]
    int l;  // in [1, p]
};

/// Integer s-range [lo, hi] of orthogonality exponents; empty when hi < lo.
struct ExponentRange {
    long lo;
    long hi;
    long count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

/// Mathematical floor/ceil of num/den for den > 0, valid for negative num.
long floor_div(long num, long den);
long ceil_div(long num, long den);
/// Representative of x mod m in [0, m).
long mod(long x, long m);

int residue_ell(long n, const SystemShape& shape);
IndexPair index_pair(long rho, const SystemShape& shape);

/// Exponents s with ceil((ell-j)/(p+1)) <= s <= floor((n+p*ell-1-j(p+1))/(p(p+1))).
ExponentRange orthogonality_range(long n, int j, const SystemShape& shape);
long count_Mj(long n, int j, const SystemShape& shape);
/// Z(n,k) = sum_{j=k}^{p-1} M_j(n); Z(n,p) = 0.
long Z(long n, int k, const SystemShape& shape);

/// Lambda(n,k) = Z(n+p+1,k) - Z(n,k).
int Lambda(long n, int k, const SystemShape& shape);
/// Closed form: 0 if n mod p < k, else 1.
int Lambda_closed_form(long n, int k, const SystemShape& shape);

int theta(long n, int k, const SystemShape& shape);
/// Sign epsilon_k^{(rho)} for 1 <= k <= p; rho is reduced mod p(p+1).
int epsilon(long rho, int k, const SystemShape& shape);

/// Sign of the leading Laurent coefficient of phi_k^{(l)} at infinity.
int sign_phi_at_infinity(int k, int l, const SystemShape& shape);
/// Sign of prod_{nu=k+1}^{p} phi_nu^{(l)}(infinity), closed form.
int sign_f_product(int k, int l, const SystemShape& shape);

/// A failed identity with the indices that exhibit it.
struct Witness {
    std::string identity;
    int p;
    long n;
    int k;
    std::string detail;
};

using LambdaFormula = std::function<int(long, int, const SystemShape&)>;

/// Exhaustive check of every counting identity for one p over n, rho in
/// [0, periods * p(p+1)]. Returns the failures (empty on success).
/// `closed_form` replaces the Lambda closed form, which lets callers run
/// negative controls.
std::vector<Witness> verify_identities(int p, int periods = 2,
                                       const LambdaFormula& closed_form = Lambda_closed_form);

}  // namespace nikstar::counting
