// Limit objects of the recurrence and the ratio asymptotics, evaluated from
// the uniformized surface: a^{(rho)}, eta^{(rho)}_k, F~_k^{(rho)}, C_k^{(rho)},
// f_k^{(rho)}, and the identities tying them together.

#pragma once

#include "nikstar/counting.hpp"
#include "nikstar/surface.hpp"

#include <string>
#include <vector>

namespace nikstar {

struct LimitTable {
    int p = 2;
    const Uniformization* U = nullptr;
    std::vector<ConformalFamily> families;  // families[l-1]
    std::vector<Real> a_pred;               // rho = 0 .. p(p+1)-1
    std::vector<counting::IndexPair> pairs;
    Real origin_defect;  // max |1 + a omega^{-1} phi_{k(rho)}(0)|
    Real leading_coefficient_defect;  // max |lead F~_k - 1| from contour fits

    long period() const { return static_cast<long>(p) * (p + 1); }
    const ConformalFamily& family(int l) const { return families.at(l - 1); }
    Real a(long rho) const { return a_pred[counting::mod(rho, period())]; }
    int l_of(long rho) const { return pairs[counting::mod(rho, period())].l; }
    int k_of(long rho) const { return pairs[counting::mod(rho, period())].k; }
    /// C_k^{(rho)} for an arbitrary value of a (k in [0, p]).
    Real C(long rho, int k, const Real& a) const;
    Real C(long rho, int k) const { return C(rho, k, a(rho)); }
};

/// Builds every family and the predictions. U must outlive the table.
/// Throws CheckFailure for a nonpositive prediction.
LimitTable build_limit_table(const Uniformization& U);

/// a^{(rho)} = -omega_l / phi_k^{(l)}(0), (k, l) = index_pair(rho).
Real predict_a(const LimitTable& T, long rho);

/// All limit functions at one point z, sharing a single branch evaluation.
class LimitPoint {
public:
    LimitPoint(const LimitTable& T, const Complex& z, int side = +1);

    const Complex& z() const { return z_; }
    Complex phi(int l, int k) const { return T_->family(l).phi_of_w(w_.at(k)); }
    /// eta_k^{(rho)}, optionally with a replaced by a_override.
    Complex eta(long rho, int k) const { return eta(rho, k, T_->a(rho)); }
    Complex eta(long rho, int k, const Real& a) const;
    /// F~_k^{(rho)}; k = -1 and k = p give 1.
    Complex F_tilde(long rho, int k) const { return F_tilde(rho, k, T_->a(rho)); }
    Complex F_tilde(long rho, int k, const Real& a) const;
    /// f_k^{(rho)} = sg * prod_{nu>k} phi_nu^{(l)}; throws CheckFailure when the
    /// sign factor disagrees with the closed form.
    Complex f_product(long rho, int k) const;

private:
    const LimitTable* T_;
    Complex z_;
    std::vector<Complex> w_;
};

/// Boundary factor xi for the case split of the boundary equations.
Real boundary_xi(long rho, int k, int p, const Real& tau);

/// max |log(v / median v)| of |F~_k|^2 xi / (|F~_{k-1}| |F~_{k+1}|) over 64
/// points of Delta_k (1% end buffers) approached from above. a_scale
/// multiplies a^{(rho)} (a negative control uses 1.01).
Real boundary_constancy_check(const LimitTable& T, long rho, int k, const Real& a_scale = Real(1));
/// The 64 boundary points of Delta_k, reusable across rho.
std::vector<LimitPoint> boundary_grid(const LimitTable& T, int k);
Real boundary_constancy_check(const LimitTable& T, const std::vector<LimitPoint>& grid, long rho, int k,
                              const Real& a_scale = Real(1));

struct IdentityRecord {
    std::string name;
    Real residual;
    Real tolerance;
    bool pass;
};

/// Collision identities if 0 is an endpoint of some Delta_k, distinctness
/// otherwise. Tolerance is the surface tolerance 2^{-bits/8}.
std::vector<IdentityRecord> zero_at_origin_collision(const LimitTable& T, const StarSystemConfig& cfg);

/// Sum rule, the a-from-F~_0 relations, quotient identities, f_0 phi_0 = 1,
/// quotient proportionality and the eta divisor values, on fixed sample points.
std::vector<IdentityRecord> limit_identities(const LimitTable& T, int samples = 50);

std::string limit_table_to_json(const LimitTable& T, const std::vector<IdentityRecord>& checks);

}  // namespace nikstar
