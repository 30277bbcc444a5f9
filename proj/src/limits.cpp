#include "nikstar/limits.hpp"

#include "nikstar/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace nikstar {

using boost::multiprecision::abs;
using counting::mod;

namespace {

Real surface_tol(const Uniformization& U) {
    return pow2_neg(static_cast<int>(U.precision_bits) / 8);
}

Real scale_of(const Uniformization& U) {
    Real s = 1;
    for (const auto& e : U.endpoints) s = std::max(s, Real(abs(e)));
    return s;
}

IdentityRecord record(std::string name, const Real& res, const Real& tol) {
    return {std::move(name), res, tol, res <= tol};
}

// Points z on |z| = radius used for trapezoidal Laurent fits.
std::vector<Complex> circle(const Real& radius, int m) {
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    std::vector<Complex> out;
    for (int i = 0; i < m; ++i) {
        const Real th = two_pi * (Real(i) + Real(0.5)) / m;
        out.emplace_back(radius * cos(th), radius * sin(th));
    }
    return out;
}

}  // namespace

Real LimitTable::C(long rho, int k, const Real& a) const {
    const int l = l_of(rho);
    const ConformalFamily& F = family(l);
    Real c = 1;
    for (int j = 1; j <= k && j <= p; ++j) {
        if (j == l)
            c *= a * F.omega_j[l] / F.omega;
        else
            c *= 1 + a * F.omega_j[j] / F.omega;
    }
    return c;
}

Real predict_a(const LimitTable& T, long rho) {
    return T.a(rho);
}

LimitTable build_limit_table(const Uniformization& U) {
    LimitTable T;
    T.p = U.p;
    T.U = &U;
    const counting::SystemShape shape(U.p);
    for (int l = 1; l <= U.p; ++l) T.families.push_back(normalize_family(U, l));

    const std::vector<Complex> w0 = U.branches(Complex(Real(0)));
    T.origin_defect = 0;
    for (long rho = 0; rho < T.period(); ++rho) {
        const counting::IndexPair ip = counting::index_pair(rho, shape);
        T.pairs.push_back(ip);
        const ConformalFamily& F = T.family(ip.l);
        const Complex ph = F.phi_of_w(w0[ip.k]);
        if (abs(ph.im) > surface_tol(U) * abs(ph.re))
            throw CheckFailure("predict_a: phi_k(0) is not real for rho = " + std::to_string(rho));
        if (abs(ph.re) <= surface_tol(U))
            throw InputError("predict_a: phi_k(0) vanishes for rho = " + std::to_string(rho));
        const Real a = -F.omega / ph.re;
        if (!(a > 0))
            throw CheckFailure("predict_a: nonpositive a for rho = " + std::to_string(rho) +
                               " (branch misassignment)");
        T.a_pred.push_back(a);
        T.origin_defect = std::max(T.origin_defect, Real(abs(1 + a / F.omega * ph.re)));
    }

    // leading coefficients of every F~_k^{(rho)} at infinity
    const std::vector<Complex> zs = circle(10 * scale_of(U), contour_points(U.precision_bits));
    std::vector<LimitPoint> pts;
    for (const auto& z : zs) pts.emplace_back(T, z);
    T.leading_coefficient_defect = 0;
    for (long rho = 0; rho < T.period(); ++rho) {
        for (int k = 0; k < T.p; ++k) {
            const int order = (k >= T.k_of(rho) ? 1 : 0) - (k >= T.l_of(rho) ? 1 : 0);
            Complex acc;
            for (const auto& pt : pts) acc += pt.F_tilde(rho, k) * pow_int(pt.z(), -order);
            acc = acc * Real(Real(1) / static_cast<int>(pts.size()));
            T.leading_coefficient_defect = std::max(T.leading_coefficient_defect, Real(abs(acc - Complex(1))));
        }
    }
    if (!(T.leading_coefficient_defect <= surface_tol(U)))
        throw CheckFailure("F_tilde: leading coefficient differs from 1 by " +
                           to_decimal(T.leading_coefficient_defect, 6));
    return T;
}

// ---------------------------------------------------------------------------

LimitPoint::LimitPoint(const LimitTable& T, const Complex& z, int side)
    : T_(&T), z_(z), w_(T.U->branches(z, side)) {}

Complex LimitPoint::eta(long rho, int k, const Real& a) const {
    const int l = T_->l_of(rho);
    const Complex den = Complex(1) + (a / T_->family(l).omega) * phi(l, k);
    if (den.re == 0 && den.im == 0) throw DomainError("eta: pole at 0 on sheet k(rho)");
    return Complex(1) / den;
}

Complex LimitPoint::F_tilde(long rho, int k, const Real& a) const {
    const int p = T_->p;
    if (k < 0 || k >= p) return Complex(1);
    Complex v(T_->C(rho, k, a));
    for (int j = 0; j <= k; ++j) v *= eta(rho, j, a);
    if (k >= T_->k_of(rho)) v *= z_;
    return v;
}

Complex LimitPoint::f_product(long rho, int k) const {
    const int p = T_->p;
    if (k >= p) return Complex(1);
    const int l = T_->l_of(rho);
    const ConformalFamily& F = T_->family(l);
    int sg = 1;
    Complex v(1);
    for (int nu = k + 1; nu <= p; ++nu) {
        if (F.omega_j[nu] < 0) sg = -sg;
        v *= phi(l, nu);
    }
    if (sg != counting::sign_f_product(k, l, counting::SystemShape(p)))
        throw CheckFailure("f_product: sign factor disagrees with the closed form");
    return sg > 0 ? v : -v;
}

Real boundary_xi(long rho, int k, int p, const Real& tau) {
    const int ell = static_cast<int>(mod(rho, p + 1));
    const Real at = abs(tau);
    if (ell < p) {
        if (k == ell) return at;
        if (k == ell + 1) return 1 / at;
        return 1;
    }
    return k == 0 ? 1 / at : Real(1);
}

std::vector<LimitPoint> boundary_grid(const LimitTable& T, int k) {
    if (k < 0 || k >= T.p) throw InputError("boundary_grid: k out of range");
    const Real lo = T.U->endpoints[2 * k], hi = T.U->endpoints[2 * k + 1];
    const int m = 64;
    std::vector<LimitPoint> out;
    for (int i = 0; i < m; ++i) {
        const Real tau = lo + (hi - lo) * (Real("0.01") + Real("0.98") * i / (m - 1));
        if (tau != 0) out.emplace_back(T, Complex(tau), +1);
    }
    return out;
}

Real boundary_constancy_check(const LimitTable& T, const std::vector<LimitPoint>& grid, long rho, int k,
                              const Real& a_scale) {
    const Real a = T.a(rho) * a_scale;
    std::vector<Real> vals;
    for (const auto& pt : grid) {
        const Real& tau = pt.z().re;
        const Real num = norm(pt.F_tilde(rho, k, a)) * boundary_xi(rho, k, T.p, tau);
        const Real den = abs(pt.F_tilde(rho, k - 1, a)) * abs(pt.F_tilde(rho, k + 1, a));
        vals.push_back(num / den);
    }
    std::vector<Real> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    const Real med = sorted[sorted.size() / 2];
    Real dev = 0;
    for (const auto& v : vals) dev = std::max(dev, Real(abs(log(v / med))));
    return dev;
}

Real boundary_constancy_check(const LimitTable& T, long rho, int k, const Real& a_scale) {
    return boundary_constancy_check(T, boundary_grid(T, k), rho, k, a_scale);
}

// ---------------------------------------------------------------------------

std::vector<IdentityRecord> zero_at_origin_collision(const LimitTable& T, const StarSystemConfig& cfg) {
    const int p = T.p;
    const Real tol = surface_tol(*T.U);
    std::vector<IdentityRecord> out;
    int kbar = -1;
    for (int k = 0; k < p; ++k)
        if (cfg.a(k) == 0 || cfg.b(k) == 0) kbar = k;
    if (kbar >= 0) {
        const std::vector<Complex> zs = sample_points(*T.U, 20);
        std::vector<LimitPoint> pts;
        for (const auto& z : zs) pts.emplace_back(T, z);
        for (long rb = 0; rb < T.period(); ++rb) {
            if (mod(rb - (kbar - 1), p + 1) != 0) continue;
            const Real res = abs(T.a(rb - p) - T.a(rb)) / T.a(rb);
            out.push_back(record("a(" + std::to_string(mod(rb - p, T.period())) + ") = a(" +
                                     std::to_string(rb) + ")",
                                 res, tol));
            Real worst = 0;
            for (int k = 0; k < p; ++k)
                for (const auto& pt : pts) {
                    const Complex want = k == kbar ? pt.z() : Complex(1);
                    const Complex got = pt.F_tilde(rb, k) / pt.F_tilde(rb - p, k);
                    worst = std::max(worst, Real(abs(got - want) / abs(want)));
                }
            out.push_back(record("F ratio rho=" + std::to_string(rb), worst, tol));
        }
    } else {
        Real gap = -1;
        for (long rho = 0; rho < T.period(); ++rho)
            for (int m1 = 0; m1 <= p; ++m1)
                for (int m2 = m1 + 1; m2 <= p; ++m2) {
                    const Real g = abs(T.a(rho + m1 * p) - T.a(rho + m2 * p));
                    if (gap < 0 || g < gap) gap = g;
                }
        // recorded as a margin: residual is 10 tol / gap
        out.push_back(record("distinct a(rho + m p)", 10 * tol / gap, Real(1)));
    }
    return out;
}

std::vector<IdentityRecord> limit_identities(const LimitTable& T, int samples) {
    const int p = T.p;
    const long P = T.period();
    const Real tol = surface_tol(*T.U);
    std::vector<IdentityRecord> out;

    Real worst = 0;
    for (long rho = 0; rho < P; ++rho) {
        Real lhs = 0, rhs = 0;
        for (long i = rho; i <= rho + p - 1; ++i) lhs += T.a(i);
        for (long i = rho + p + 1; i <= rho + 2 * p; ++i) rhs += T.a(i);
        worst = std::max(worst, Real(abs(lhs - rhs)));
    }
    out.push_back(record("sum rule", worst, tol));

    const std::vector<Complex> zs = sample_points(*T.U, samples);
    std::vector<LimitPoint> pts;
    for (const auto& z : zs) pts.emplace_back(T, z);

    Real rel = 0, quot = 0, f0 = 0, fper = 0, qprop = 0;
    for (long rho = 0; rho < P; ++rho) {
        const bool top = mod(rho, p + 1) == p;
        const int l = T.l_of(rho);
        std::vector<Complex> first(p + 1);
        for (std::size_t s = 0; s < pts.size(); ++s) {
            const LimitPoint& pt = pts[s];
            Complex prod(1);
            for (long i = rho - p; i <= rho - 1; ++i) prod *= pt.F_tilde(i, 0);
            const Complex lead = top ? pt.z() : Complex(1);
            const Complex a = (lead - pt.F_tilde(rho, 0)) * prod;
            rel = std::max(rel, Real(abs(a - Complex(T.a(rho))) / T.a(rho)));

            if (!top && s < 20) {
                const Complex lhs(T.a(rho + p + 1) / T.a(rho));
                const Complex r = (Complex(1) - pt.F_tilde(rho + p + 1, 0)) / (Complex(1) - pt.F_tilde(rho, 0));
                quot = std::max(quot, Real(abs(r - lhs) / abs(lhs)));
            }

            const Complex one = pt.f_product(rho, 0) * pt.phi(l, 0);
            f0 = std::max(f0, Real(abs(one - Complex(1))));
            for (int k = 0; k < p; ++k) {
                const Complex d = pt.f_product(rho, k) - pt.f_product(rho + p, k);
                fper = std::max(fper, Real(abs(d) / abs(pt.f_product(rho, k))));
            }

            for (int k = 1; k < p; ++k) {
                Complex xi = k == T.k_of(rho) ? pt.z() : Complex(1);
                const Complex v = pt.F_tilde(rho, k) / pt.F_tilde(rho, k - 1) / (xi * pt.eta(rho, k));
                if (s == 0)
                    first[k] = v;
                else
                    qprop = std::max(qprop, Real(abs(v - first[k]) / abs(first[k])));
            }
        }
    }
    out.push_back(record("a from F0 relations", rel, tol));
    out.push_back(record("a quotient relations", quot, tol));
    out.push_back(record("f0 phi0 = 1", f0, tol));
    out.push_back(record("f periodicity", fper, tol));
    out.push_back(record("quotient proportionality", qprop, tol));

    // divisor of eta at the marked points via contour means
    const std::vector<Complex> cz = circle(10 * scale_of(*T.U), contour_points(T.U->precision_bits));
    std::vector<LimitPoint> cp;
    for (const auto& z : cz) cp.emplace_back(T, z);
    Real div = T.origin_defect, top_const = 0;
    for (long rho = 0; rho < P; ++rho) {
        const int l = T.l_of(rho);
        Complex m0, ml, ml1, f0c;
        for (const auto& pt : cp) {
            m0 += pt.eta(rho, 0);
            ml += pt.eta(rho, l);
            ml1 += pt.eta(rho, l) * pt.z();
            f0c += pt.F_tilde(rho, 0) - pt.z();
        }
        const Real n = cp.size();
        div = std::max(div, Real(abs(m0 * Real(1 / n) - Complex(1))));
        div = std::max(div, Real(abs(ml * Real(1 / n)) / abs(ml1 * Real(1 / n))));
        if (mod(rho, p + 1) == p)
            top_const = std::max(top_const, Real(abs(f0c * Real(1 / n) + Complex(T.a(rho))) / T.a(rho)));
    }
    out.push_back(record("eta divisor", div, tol));
    out.push_back(record("F0 Laurent constant", top_const, tol));
    out.push_back(record("F leading coefficients", T.leading_coefficient_defect, tol));
    return out;
}

std::string limit_table_to_json(const LimitTable& T, const std::vector<IdentityRecord>& checks) {
    const int dig = static_cast<int>(digits10_for_bits(T.U->precision_bits));
    nlohmann::json j;
    j["p"] = T.p;
    for (long rho = 0; rho < T.period(); ++rho) {
        j["a"].push_back({{"rho", rho},
                          {"k", T.pairs[rho].k},
                          {"l", T.pairs[rho].l},
                          {"value", to_decimal(T.a_pred[rho], dig)}});
    }
    for (const auto& F : T.families) {
        nlohmann::json f;
        f["l"] = F.l;
        f["omega"] = to_decimal(F.omega, dig);
        for (const auto& v : F.omega_j) f["omega_lj"].push_back(to_decimal(v, dig));
        j["omega"].push_back(f);
    }
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"residual", to_decimal(c.residual, 6)},
                               {"tolerance", to_decimal(c.tolerance, 6)},
                               {"pass", c.pass}});
    return j.dump(2);
}

}  // namespace nikstar
