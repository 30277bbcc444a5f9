#include "nikstar/surface.hpp"

#include "nikstar/counting.hpp"
#include "nikstar/errors.hpp"
#include "nikstar/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace nikstar {

using boost::multiprecision::abs;

namespace {

int bits_now() {
    return static_cast<int>(bits_of(Real(0)));
}

Real max_abs(const std::vector<Real>& v) {
    Real m = 0;
    for (const auto& x : v) m = std::max(m, Real(abs(x)));
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gluing walk

std::vector<WalkEvent> gluing_walk(const std::vector<Real>& e, int p) {
    if (static_cast<int>(e.size()) != 2 * p) throw InputError("gluing_walk: need 2p endpoints");
    std::vector<WalkEvent> out;
    int sheet = 0;
    int dir = -1;          // -1 moving down
    bool at_inf = true;    // x = +inf when moving down, -inf when moving up
    Real x = 0;
    for (int guard = 0; guard < 8 * (p + 1); ++guard) {
        int hit = -1;
        Real best = 0;
        for (int m = sheet - 1; m <= sheet; ++m) {
            if (m < 0 || m >= p) continue;
            const int idx = dir < 0 ? 2 * m + 1 : 2 * m;  // first endpoint met
            const Real& v = e[idx];
            const bool ahead = at_inf || (dir < 0 ? v < x : v > x);
            if (!ahead) continue;
            if (hit < 0 || (dir < 0 ? v > best : v < best)) hit = idx, best = v;
        }
        if (hit >= 0) {
            out.push_back({WalkEvent::Critical, hit});
            const int m = hit / 2;
            sheet = sheet == m ? m + 1 : m;
            dir = -dir;
            x = best;
            at_inf = false;
        } else {
            out.push_back({WalkEvent::Pole, sheet});
            if (sheet == 0 && out.size() > 1) return out;
            at_inf = true;
        }
    }
    throw CheckFailure("gluing_walk: walk does not close");
}

std::string describe(const std::vector<WalkEvent>& ev) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (i) os << ' ';
        if (ev[i].kind == WalkEvent::Pole)
            os << "inf" << ev[i].index;
        else
            os << (ev[i].index % 2 ? 'b' : 'a') << ev[i].index / 2;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Rational map

Real Uniformization::R(const Real& w) const {
    Real v = alpha * w + beta + gamma / w;
    for (std::size_t j = 0; j < q.size(); ++j) v += r[j] / (w - q[j]);
    return v;
}

Complex Uniformization::R(const Complex& w) const {
    Complex v = alpha * w + Complex(beta) + Complex(gamma) / w;
    for (std::size_t j = 0; j < q.size(); ++j) v += Complex(r[j]) / (w - Complex(q[j]));
    return v;
}

Real Uniformization::dR(const Real& w) const {
    Real v = alpha - gamma / (w * w);
    for (std::size_t j = 0; j < q.size(); ++j) {
        Real d = w - q[j];
        v -= r[j] / (d * d);
    }
    return v;
}

Complex Uniformization::dR(const Complex& w) const {
    Complex v = Complex(alpha) - Complex(gamma) / (w * w);
    for (std::size_t j = 0; j < q.size(); ++j) {
        Complex d = w - Complex(q[j]);
        v -= Complex(r[j]) / (d * d);
    }
    return v;
}

Real Uniformization::d2R(const Real& w) const {
    Real v = 2 * gamma / (w * w * w);
    for (std::size_t j = 0; j < q.size(); ++j) {
        Real d = w - q[j];
        v += 2 * r[j] / (d * d * d);
    }
    return v;
}

int Uniformization::pole_of_sheet(int sheet) const {
    for (int j = 0; j <= p; ++j)
        if (sheet_of_pole.at(j) == sheet) return j;
    throw CheckFailure("pole_of_sheet: sheet without pole");
}

std::vector<WalkEvent> Uniformization::w_order() const {
    struct Item {
        Real w;
        WalkEvent ev;
    };
    std::vector<Item> pos, neg;
    auto put = [&](const Real& w, WalkEvent ev) { (w > 0 ? pos : neg).push_back({w, ev}); };
    for (int i = 0; i < 2 * p; ++i) put(crit[i], {WalkEvent::Critical, i});
    for (int j = 1; j < p; ++j) put(q[j - 1], {WalkEvent::Pole, sheet_of_pole[j]});
    auto by_w = [](const Item& a, const Item& b) { return a.w < b.w; };
    std::sort(pos.begin(), pos.end(), by_w);
    std::sort(neg.begin(), neg.end(), by_w);
    std::vector<WalkEvent> out;
    for (const auto& it : pos) out.push_back(it.ev);
    out.push_back({WalkEvent::Pole, sheet_of_pole[p]});
    for (const auto& it : neg) out.push_back(it.ev);
    out.push_back({WalkEvent::Pole, sheet_of_pole[0]});
    return out;
}

// ---------------------------------------------------------------------------
// Newton system for the parameters
//
// u = [alpha, beta, r_1..r_{p-1}, q_1..q_{p-1}, w_0..w_{2p-1}]
// F = [R(w_i) - e_i, w_i R'(w_i)]

namespace {

struct Layout {
    int p;
    int n() const { return 4 * p; }
    int r(int j) const { return 1 + j; }          // j = 1..p-1
    int q(int j) const { return p + j; }          // j = 1..p-1
    int w(int i) const { return 2 * p + i; }      // i = 0..2p-1
};

Uniformization unpack(const std::vector<Real>& u, int p) {
    Layout L{p};
    Uniformization U;
    U.p = p;
    U.alpha = u[0];
    U.beta = u[1];
    U.gamma = 1;
    for (int j = 1; j < p; ++j) {
        U.r.push_back(u[L.r(j)]);
        U.q.push_back(u[L.q(j)]);
    }
    for (int i = 0; i < 2 * p; ++i) U.crit.push_back(u[L.w(i)]);
    U.sheet_of_pole.resize(p + 1);
    for (int j = 0; j <= p; ++j) U.sheet_of_pole[j] = j;
    return U;
}

std::vector<Real> residual(const std::vector<Real>& u, int p, const std::vector<Real>& E) {
    const Uniformization U = unpack(u, p);
    std::vector<Real> F(4 * p);
    for (int i = 0; i < 2 * p; ++i) {
        const Real& w = U.crit[i];
        F[i] = U.R(w) - E[i];
        F[2 * p + i] = w * U.dR(w);
    }
    return F;
}

Matrix jacobian(const std::vector<Real>& u, int p) {
    Layout L{p};
    const Uniformization U = unpack(u, p);
    Matrix J(4 * p, std::vector<Real>(4 * p, Real(0)));
    for (int i = 0; i < 2 * p; ++i) {
        const Real& w = U.crit[i];
        auto& G = J[i];
        auto& H = J[2 * p + i];
        const Real d1 = U.dR(w);
        G[0] = w;
        G[1] = 1;
        H[0] = w;
        for (int j = 1; j < p; ++j) {
            const Real d = w - U.q[j - 1];
            const Real rj = U.r[j - 1];
            G[L.r(j)] = 1 / d;
            G[L.q(j)] = rj / (d * d);
            H[L.r(j)] = -w / (d * d);
            H[L.q(j)] = -2 * w * rj / (d * d * d);
        }
        G[L.w(i)] = d1;
        H[L.w(i)] = d1 + w * U.d2R(w);
    }
    return J;
}

// One Newton step with variables scaled by their magnitude.
std::vector<Real> newton_step(const std::vector<Real>& u, int p, const std::vector<Real>& F) {
    Matrix J = jacobian(u, p);
    const int n = 4 * p;
    std::vector<Real> sc(n);
    for (int c = 0; c < n; ++c) {
        sc[c] = abs(u[c]);
        if (sc[c] == 0) sc[c] = 1;
        for (int rr = 0; rr < n; ++rr) J[rr][c] *= sc[c];
    }
    std::vector<Real> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -F[i];
    std::vector<Real> d = solve_full_pivot(std::move(J), std::move(rhs));
    for (int c = 0; c < n; ++c) d[c] *= sc[c];
    return d;
}

bool same_structure(const std::vector<Real>& u, int p, const std::vector<WalkEvent>& ref) {
    const Uniformization U = unpack(u, p);
    for (int j = 0; j < p - 1; ++j)
        if (U.q[j] == 0) return false;
    for (const auto& w : U.crit)
        if (w == 0) return false;
    return U.w_order() == ref;
}

// Damped Newton to tolerance tol (max-norm of F). Returns iterations used or -1.
int corrector(std::vector<Real>& u, int p, const std::vector<Real>& E, const Real& tol,
              int max_iter, const std::vector<WalkEvent>& ref, Real* res_out) {
    std::vector<Real> F = residual(u, p, E);
    Real nf = max_abs(F);
    for (int it = 0; it < max_iter; ++it) {
        if (nf <= tol) {
            if (res_out) *res_out = nf;
            return it;
        }
        std::vector<Real> d;
        try {
            d = newton_step(u, p, F);
        } catch (const ConvergenceError&) {
            return -1;
        }
        Real lam = 1;
        bool ok = false;
        for (int h = 0; h < 12; ++h, lam /= 2) {
            std::vector<Real> v = u;
            for (std::size_t c = 0; c < v.size(); ++c) v[c] += lam * d[c];
            if (!same_structure(v, p, ref)) continue;
            std::vector<Real> G = residual(v, p, E);
            Real ng = max_abs(G);
            if (ng < (1 - lam / 4) * nf || ng <= tol) {
                u = std::move(v);
                F = std::move(G);
                nf = ng;
                ok = true;
                break;
            }
        }
        if (!ok) {
            if (res_out) *res_out = nf;
            return nf <= tol ? it : -1;
        }
    }
    if (res_out) *res_out = nf;
    return nf <= tol ? max_iter : -1;
}

// 1-D Newton for a root of R'.
bool refine_critical(const Uniformization& U, Real& w) {
    const Real tol = pow2_neg(bits_now() - 12);
    for (int it = 0; it < 200; ++it) {
        const Real d2 = U.d2R(w);
        if (d2 == 0) return false;
        Real step = U.dR(w) / d2;
        // keep the iterate on its side of the poles
        while (abs(step) > abs(w) / 2) step /= 2;
        w -= step;
        if (abs(step) <= tol * abs(w)) return true;
    }
    return false;
}

// Start point: a multiscale map whose slits are tiny copies of the targets.
std::vector<Real> start_point(const std::vector<Real>& target, int p, const Real& s,
                              std::vector<Real>& E0) {
    Layout L{p};
    std::vector<Real> c(p);
    for (int k = 0; k < p; ++k) c[k] = (target[2 * k] + target[2 * k + 1]) / 2;
    std::vector<Real> u(4 * p, Real(0));
    std::vector<Real> q(p, Real(0)), r(p, Real(0));
    Real sk = 1;
    for (int k = 1; k < p; ++k) {
        sk *= s;
        q[k] = sk;
        r[k] = (c[k] - c[k - 1]) * q[k];
        u[L.q(k)] = q[k];
        u[L.r(k)] = r[k];
    }
    u[1] = c[p - 1];
    u[0] = (p % 2 ? Real(1) : Real(-1)) / (sk * s);  // sign (-1)^{p-1}, size s^{-p}
    Uniformization U = unpack(u, p);
    for (int k = 0; k < p; ++k) {
        Real A = 1, B = U.alpha;
        for (int j = 1; j <= k; ++j) A += r[j];
        for (int j = k + 1; j < p; ++j) B -= r[j] / (q[j] * q[j]);
        if (!(A / B > 0)) throw ConvergenceError("uniformization: degenerate start model");
        const Real wp = sqrt(A / B);
        Real w_plus = wp, w_minus = -wp;
        if (!refine_critical(U, w_plus) || !refine_critical(U, w_minus))
            throw ConvergenceError("uniformization: start critical points did not converge");
        if (abs(w_plus - wp) > wp / 2 || abs(w_minus + wp) > wp / 2)
            throw ConvergenceError("uniformization: start critical point drifted");
        const int ia = 2 * k, ib = 2 * k + 1;
        u[L.w(k % 2 == 0 ? ib : ia)] = w_plus;
        u[L.w(k % 2 == 0 ? ia : ib)] = w_minus;
    }
    U = unpack(u, p);
    E0.assign(2 * p, Real(0));
    for (int i = 0; i < 2 * p; ++i) E0[i] = U.R(U.crit[i]);
    for (int k = 0; k < p; ++k)
        if (!(E0[2 * k] < E0[2 * k + 1])) throw ConvergenceError("uniformization: start slits reversed");
    for (int k = 0; k + 1 < p; ++k) {
        const bool disjoint = E0[2 * k + 1] < E0[2 * k + 2] || E0[2 * k + 3] < E0[2 * k];
        if (!disjoint) throw ConvergenceError("uniformization: start slits overlap");
    }
    return u;
}

std::vector<Real> interpolate(const std::vector<Real>& E0, const std::vector<Real>& E1, const Real& t) {
    std::vector<Real> E(E0.size());
    for (std::size_t k = 0; 2 * k < E0.size(); ++k) {
        const Real c0 = (E0[2 * k] + E0[2 * k + 1]) / 2, h0 = (E0[2 * k + 1] - E0[2 * k]) / 2;
        const Real c1 = (E1[2 * k] + E1[2 * k + 1]) / 2, h1 = (E1[2 * k + 1] - E1[2 * k]) / 2;
        const Real c = c0 + t * (c1 - c0);
        const Real h = exp((1 - t) * log(h0) + t * log(h1));
        E[2 * k] = c - h;
        E[2 * k + 1] = c + h;
    }
    return E;
}

Uniformization track(const std::vector<Real>& E1, int p, const Real& s) {
    std::vector<Real> E0;
    std::vector<Real> u = start_point(E1, p, s, E0);
    const std::vector<WalkEvent> ref = unpack(u, p).w_order();
    if (ref != gluing_walk(E0, p)) throw ConvergenceError("uniformization: start model has wrong gluing");

    const int bits = bits_now();
    const Real scale = std::max(Real(1), max_abs(E1));
    const Real path_tol = scale * pow2_neg(bits / 3);
    Real t = 0, dt = Real(1) / 16;
    std::vector<Real> u_prev;
    Real dt_prev = 0;
    int steps = 0;
    while (t < 1) {
        if (++steps > 4000 || dt < Real(1e-10)) throw ConvergenceError("uniformization: homotopy stalled");
        const Real t1 = std::min(Real(1), Real(t + dt));
        const Real h = t1 - t;
        std::vector<Real> v = u;
        if (!u_prev.empty())
            for (std::size_t c = 0; c < v.size(); ++c) v[c] += (u[c] - u_prev[c]) * (h / dt_prev);
        if (!same_structure(v, p, ref)) v = u;
        const std::vector<Real> E = interpolate(E0, E1, t1);
        const int it = corrector(v, p, E, path_tol, 12, ref, nullptr);
        if (it < 0) {
            dt /= 2;
            continue;
        }
        u_prev = u;
        dt_prev = h;
        u = std::move(v);
        t = t1;
        if (it <= 4) dt = std::min(Real(0.5), dt * Real(1.5));
    }
    Real res;
    const Real final_tol = scale * pow2_neg(bits - 16);
    corrector(u, p, E1, final_tol, 40, ref, &res);
    if (!(res <= scale * pow2_neg(bits / 8)))
        throw ConvergenceError("uniformization: final Newton residual " + to_decimal(res, 6));
    Uniformization U = unpack(u, p);
    U.newton_residual = res;
    U.endpoints = E1;
    U.precision_bits = static_cast<unsigned>(bits);
    U.homotopy_steps = steps;
    return U;
}

}  // namespace

Uniformization solve_uniformization(const StarSystemConfig& cfg) {
    cfg.validate();
    const int p = cfg.p;
    std::vector<Real> E1;
    for (int k = 0; k < p; ++k) {
        E1.push_back(cfg.a(k));
        E1.push_back(cfg.b(k));
    }
    std::string last;
    for (const char* s : {"1e4", "1e6", "1e2", "1e8"}) {
        try {
            Uniformization U = track(E1, p, Real(s));
            const Real chk = branch_points_check(U);
            const Real scale = std::max(Real(1), max_abs(E1));
            if (!(chk <= scale * pow2_neg(static_cast<int>(U.precision_bits) / 8)))
                throw ConvergenceError("uniformization: branch point residual " + to_decimal(chk, 6));
            return U;
        } catch (const ConvergenceError& e) {
            last = e.what();
        }
    }
    throw ConvergenceError("solve_uniformization failed: " + last);
}

Real branch_points_check(const Uniformization& U) {
    if (U.w_order() != gluing_walk(U.endpoints, U.p))
        throw CheckFailure("branch_points_check: critical points are glued as " + describe(U.w_order()) +
                           " but the slits require " + describe(gluing_walk(U.endpoints, U.p)));
    Real worst = 0;
    for (int i = 0; i < 2 * U.p; ++i) {
        Real w = U.crit[i];
        if (!refine_critical(U, w)) throw ConvergenceError("branch_points_check: Newton failed");
        worst = std::max(worst, Real(abs(U.R(w) - U.endpoints[i])));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Branch evaluation by continuation from z = x +- iY

namespace {

// Newton for R(w) = z from w. Returns false if it does not settle.
bool newton_root(const Uniformization& U, const Complex& z, Complex& w, const Real& rel_tol, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        const Complex d = U.dR(w);
        if (d.re == 0 && d.im == 0) return false;
        const Complex step = (U.R(w) - z) / d;
        w -= step;
        if (abs(step) <= rel_tol * std::max(Real(1), Real(abs(w)))) return true;
    }
    return false;
}

}  // namespace

std::vector<Complex> Uniformization::branches(const Complex& z, int side) const {
    const int np = p + 1;
    const int bits = bits_now();
    const Real S = std::max(Real(1), max_abs(endpoints));
    const Real x = z.re;
    if (z.im == 0 && side == 0)
        for (int k = 0; k < p; ++k)
            if (x >= endpoints[2 * k] && x <= endpoints[2 * k + 1])
                throw DomainError("branches: z lies on Delta_" + std::to_string(k) + ", pick a side");
    const int sg = z.im != 0 ? (z.im > 0 ? 1 : -1) : (side >= 0 ? 1 : -1);
    const Real y_target = abs(z.im);

    // exact slit endpoint: the two adjacent sheets meet at a critical point
    int merge = -1;
    if (z.im == 0)
        for (int i = 0; i < 2 * p; ++i)
            if (x == endpoints[i]) merge = i;

    const Real Y = 1000 * std::max(S, Real(abs(x)));
    Complex zc(x, sg * Y);
    std::vector<Complex> w(np);
    w[0] = Complex(gamma) / zc;
    for (int j = 1; j < p; ++j) w[j] = Complex(q[j - 1]) + Complex(r[j - 1]) / zc;
    w[p] = (zc - Complex(beta)) * Real(1 / alpha);
    const Real loose = pow2_neg(bits / 2);
    for (auto& v : w)
        if (!newton_root(*this, zc, v, loose, 60)) throw ConvergenceError("branches: start roots failed");

    auto min_sep = [&](const std::vector<Complex>& v, int j) {
        Real m = -1;
        for (int i = 0; i < np; ++i) {
            if (i == j) continue;
            Real d = abs(v[i] - v[j]);
            if (m < 0 || d < m) m = d;
        }
        return m;
    };

    const Real y_floor = merge >= 0 ? S * Real(1e-6) : Real(0);
    const Real y_stop = std::max(y_target, y_floor);
    const Real y_jump = S * pow2_neg(40);  // below this go straight to y_stop
    Real y = Y;
    Real ratio = Real(0.25);
    int guard = 0;
    while (y > y_stop) {
        if (++guard > 20000) throw ConvergenceError("branches: continuation did not finish");
        Real yn = y * ratio;
        if (yn < y_stop || (y_stop == 0 && yn < y_jump)) yn = y_stop;
        const Complex zn(x, sg * yn);
        std::vector<Complex> v = w;
        bool ok = true;
        for (int j = 0; j < np && ok; ++j) {
            ok = newton_root(*this, zn, v[j], loose, 10);
            if (ok) ok = abs(v[j] - w[j]) < Real(0.3) * min_sep(w, j);
        }
        if (ok)
            for (int j = 0; j < np && ok; ++j) ok = min_sep(v, j) > 0;
        if (!ok) {
            ratio = sqrt(ratio);
            if (ratio > 1 - Real(1e-6)) throw ConvergenceError("branches: root-assignment ambiguity near z = " + to_decimal(x, 12));
            continue;
        }
        w = std::move(v);
        y = yn;
        ratio = std::max(Real(0.05), Real(ratio * ratio));
    }

    int ma = -1, mb = -1;
    if (merge >= 0) {
        ma = merge / 2;
        mb = ma + 1;
    }
    const Complex zt = merge >= 0 ? Complex(x) : z;
    const Real tight = pow2_neg(bits - 8);
    std::vector<Complex> out(np);
    for (int j = 0; j < np; ++j) {
        const int sh = sheet_of_pole[j];
        if (sh == ma || sh == mb) {
            out[sh] = Complex(crit[merge]);
            continue;
        }
        Complex v = w[j];
        if (!newton_root(*this, zt, v, tight, 30)) throw ConvergenceError("branches: final polish failed");
        if (abs(v - w[j]) > Real(0.3) * min_sep(w, j)) throw ConvergenceError("branches: final root jumped");
        out[sh] = v;
    }
    if (z.im == 0) {
        // real z: roots that are real up to rounding are made exactly real
        for (auto& v : out)
            if (abs(v.im) <= tight * std::max(Real(1), Real(abs(v.re)))) v.im = 0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conformal family

Complex ConformalFamily::phi_of_w(const Complex& w) const {
    const int P = U->pole_of_sheet(l);
    if (P == U->p) return lambda * w;
    return lambda * w / (w - Complex(U->q[P - 1]));
}

std::vector<Complex> ConformalFamily::phi(const Complex& z, int side) const {
    std::vector<Complex> w = U->branches(z, side);
    for (auto& v : w) v = phi_of_w(v);
    return w;
}

ConformalFamily normalize_family(const Uniformization& U, int l) {
    const int p = U.p;
    if (l < 1 || l > p) throw InputError("normalize_family: l must be in [1, p]");
    for (int j = 0; j <= p; ++j)
        if (U.sheet_of_pole[j] != j) throw CheckFailure("normalize_family: unexpected pole labelling");
    ConformalFamily F;
    F.U = &U;
    F.l = l;

    Real N0 = U.gamma;
    for (const auto& qj : U.q) N0 *= -qj;
    Real K;
    if (l < p) {
        const Real ql = U.q[l - 1];
        Real Nl = U.r[l - 1] * ql;
        for (int j = 1; j < p; ++j)
            if (j != l) Nl *= ql - U.q[j - 1];
        K = N0 / Nl;
    } else {
        K = ((p + 1) % 2 ? -N0 : N0) / U.alpha;
    }
    Real lam = pow(abs(K), Real(-1) / (p + 1));
    if (l < p && U.q[l - 1] > 0) lam = -lam;
    F.lambda = lam;
    const Real prod = pow(lam, p + 1) * K;
    F.product_sign = prod > 0 ? 1 : -1;

    F.omega_j.assign(p + 1, Real(0));
    if (l < p) {
        const Real ql = U.q[l - 1];
        F.omega = -lam * U.gamma / ql;
        for (int j = 1; j < p; ++j)
            F.omega_j[j] = j == l ? Real(lam * ql / U.r[l - 1]) : Real(lam * U.q[j - 1] / (U.q[j - 1] - ql));
        F.omega_j[p] = lam;
    } else {
        F.omega = lam * U.gamma;
        for (int j = 1; j < p; ++j) F.omega_j[j] = lam * U.q[j - 1];
        F.omega_j[p] = lam / U.alpha;
    }
    F.omega_j[0] = F.omega;

    const Real S = std::max(Real(1), max_abs(U.endpoints));
    const std::vector<Real> fit = laurent_fit(F, 10 * S, contour_points(U.precision_bits));
    Real disc = 0;
    for (int j = 0; j <= p; ++j) disc = std::max(disc, Real(abs(fit[j] - F.omega_j[j]) / abs(F.omega_j[j])));
    F.laurent_discrepancy = disc;
    return F;
}

int contour_points(unsigned bits) { return std::max(32, static_cast<int>(bits / 16) + 8); }

std::vector<Real> laurent_fit(const ConformalFamily& F, const Real& radius, int points) {
    const int p = F.U->p;
    std::vector<Complex> acc(p + 1);
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    for (int m = 0; m < points; ++m) {
        const Real th = two_pi * (Real(m) + Real(0.5)) / points;
        const Complex z(radius * cos(th), radius * sin(th));
        const std::vector<Complex> ph = F.phi(z);
        for (int j = 0; j <= p; ++j) {
            if (j == 0)
                acc[j] += ph[j] * z;
            else if (j == F.l)
                acc[j] += ph[j] / z;
            else
                acc[j] += ph[j];
        }
    }
    std::vector<Real> out(p + 1);
    for (int j = 0; j <= p; ++j) out[j] = acc[j].re / points;
    return out;
}

std::vector<Complex> sample_points(const Uniformization& U, int count) {
    const Real S = std::max(Real(1), max_abs(U.endpoints));
    std::mt19937_64 gen(20240917u);
    auto unit = [&] { return Real(static_cast<double>(gen() >> 11) * 0x1.0p-53); };
    std::vector<Complex> out;
    for (int i = 0; i < count; ++i) {
        const Real x = (2 * unit() - 1) * 2 * S;
        Real y = Real("0.5") + unit() * (2 * S - Real("0.5"));
        if (i % 2) y = -y;
        out.emplace_back(x, y);
    }
    return out;
}

bool SurfaceCertificate::pass() const {
    return walk_ok && sign_table_ok && newton_residual <= tolerance && branch_point_residual <= tolerance &&
           preimage_residual <= tolerance && product_residual <= tolerance && continuity_residual <= tolerance &&
           conjugation_residual <= tolerance && laurent_discrepancy <= tolerance;
}

SurfaceCertificate certify_surface(const Uniformization& U, const std::vector<ConformalFamily>& families,
                                   int points) {
    const int p = U.p;
    SurfaceCertificate c;
    c.tolerance = pow2_neg(static_cast<int>(U.precision_bits) / 8);
    c.newton_residual = U.newton_residual;
    c.walk = describe(U.w_order());
    c.walk_ok = U.w_order() == gluing_walk(U.endpoints, p);
    try {
        c.branch_point_residual = branch_points_check(U);
    } catch (const CheckFailure&) {
        c.branch_point_residual = 1;
    }

    const counting::SystemShape shape(p);
    c.sign_table_ok = true;
    c.laurent_discrepancy = 0;
    for (const auto& F : families) {
        c.laurent_discrepancy = std::max(c.laurent_discrepancy, F.laurent_discrepancy);
        if (!(F.omega > 0)) c.sign_table_ok = false;
        for (int k = 1; k <= p; ++k)
            if ((F.omega_j[k] > 0 ? 1 : -1) != counting::sign_phi_at_infinity(k, F.l, shape))
                c.sign_table_ok = false;
    }

    c.preimage_residual = c.product_residual = c.conjugation_residual = 0;
    for (const auto& z : sample_points(U, points)) {
        const std::vector<Complex> w = U.branches(z);
        const std::vector<Complex> wc = U.branches(conj(z));
        const Real zs = std::max(Real(1), Real(abs(z)));
        for (int k = 0; k <= p; ++k)
            c.preimage_residual = std::max(c.preimage_residual, Real(abs(U.R(w[k]) - z) / zs));
        for (const auto& F : families) {
            Complex prod(1);
            for (int k = 0; k <= p; ++k) {
                const Complex ph = F.phi_of_w(w[k]);
                prod *= ph;
                const Complex d = F.phi_of_w(wc[k]) - conj(ph);
                c.conjugation_residual =
                    std::max(c.conjugation_residual, Real(abs(d) / std::max(Real(1), Real(abs(ph)))));
            }
            c.product_residual = std::max(c.product_residual, Real(abs(prod - Complex(F.product_sign))));
        }
    }

    c.continuity_residual = 0;
    for (int k = 0; k < p; ++k) {
        const Real lo = U.endpoints[2 * k], hi = U.endpoints[2 * k + 1];
        for (int i = 0; i < 16; ++i) {
            const Real x = lo + (hi - lo) * (Real(i) + Real(0.5)) / 16;
            const std::vector<Complex> up = U.branches(Complex(x), +1);
            const std::vector<Complex> dn = U.branches(Complex(x), -1);
            for (const auto& F : families) {
                const Complex a = F.phi_of_w(up[k]), b = F.phi_of_w(dn[k + 1]);
                const Complex a2 = F.phi_of_w(up[k + 1]), b2 = F.phi_of_w(dn[k]);
                const Real s = std::max(Real(1), Real(abs(a)));
                c.continuity_residual =
                    std::max({c.continuity_residual, Real(abs(a - b) / s), Real(abs(a2 - b2) / s)});
            }
        }
    }
    return c;
}

std::string surface_to_json(const Uniformization& U, const std::vector<ConformalFamily>& families) {
    const int dig = static_cast<int>(digits10_for_bits(U.precision_bits));
    auto s = [&](const Real& v) { return to_decimal(v, dig); };
    nlohmann::json j;
    j["p"] = U.p;
    j["precision_bits"] = U.precision_bits;
    j["map"] = {{"alpha", s(U.alpha)}, {"beta", s(U.beta)}, {"gamma", s(U.gamma)}};
    for (int k = 1; k < U.p; ++k)
        j["map"]["poles"].push_back({{"q", s(U.q[k - 1])}, {"r", s(U.r[k - 1])}});
    for (int i = 0; i < 2 * U.p; ++i) {
        j["critical_points"].push_back({{"label", std::string(i % 2 ? "b" : "a") + std::to_string(i / 2)},
                                        {"w", s(U.crit[i])},
                                        {"z", s(U.endpoints[i])}});
    }
    j["sheet_of_pole"] = U.sheet_of_pole;
    j["gluing_walk"] = describe(U.w_order());
    j["newton_residual"] = to_decimal(U.newton_residual, 6);
    j["homotopy_steps"] = U.homotopy_steps;
    for (const auto& F : families) {
        nlohmann::json f;
        f["l"] = F.l;
        f["lambda"] = s(F.lambda);
        f["omega"] = s(F.omega);
        for (const auto& v : F.omega_j) f["omega_lj"].push_back(s(v));
        f["product"] = F.product_sign;
        f["laurent_discrepancy"] = to_decimal(F.laurent_discrepancy, 6);
        j["families"].push_back(f);
    }
    return j.dump(2);
}

}  // namespace nikstar
