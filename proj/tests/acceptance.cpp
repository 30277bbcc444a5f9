// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include "configs.hpp"
#include "nikstar/counting.hpp"
#include "nikstar/errors.hpp"
#include "nikstar/harness.hpp"
#include "nikstar/mop.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace nikstar;
using boost::multiprecision::abs;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

std::string e(const Real& v) { return to_decimal(v, 3); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. counting identities for p = 2, 3, 4 over two periods, under 1 s
void counting_suite(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    for (const auto& c : run_counting_suite({2, 3, 4}))
        if (!c.pass) {
            ++failures;
            o.note << " " << c.name << ": " << c.detail;
        }
    // the direct forms, independent of the suite
    for (int p : {2, 3, 4}) {
        const counting::SystemShape s(p);
        const long P = static_cast<long>(p) * (p + 1);
        for (long n = 0; n <= 2 * P + p; ++n) {
            if (counting::Z(n, 0, s) != n / (p + 1)) ++failures;
            for (int k = 0; k <= p; ++k) {
                if (counting::Lambda(n, k, s) != counting::Lambda_closed_form(n, k, s)) ++failures;
                const long dz = counting::Z(n + 1, k, s) - counting::Z(n, k, s);
                if (dz < -1 || dz > 1) ++failures;
                if (n >= P && dz != counting::Z(n + 1 - P, k, s) - counting::Z(n - P, k, s)) ++failures;
            }
        }
    }
    const double dt = seconds_since(t0);
    o.note << "failures=" << failures << " runtime=" << dt << "s";
    o.require(failures == 0, "witnesses");
    o.require(dt < 1.0, "runtime");
}

// 2. MOP structure for CFG-A, n <= 60, at exactly 256 bits
void mop_structure(Outcome& o) {
    const auto cfg = test_configs::a();
    PrecisionScope ps(256);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const Real tol = pow2_neg(64);
    Real orth = 0, rres = 0, amin = -1;
    int square_bad = 0, root_bad = 0, inter_bad = 0;
    std::vector<Real> prev;
    for (long n = 0; n <= 60; ++n) {
        try {
            const auto& q = eng.Q(n);
            orth = std::max(orth, q.orth_residual);
            if (q.rows != q.d) ++square_bad;
            const auto zs = eng.psi_zeros(n, 0).zeros;
            bool ok = static_cast<long>(zs.size()) == q.d;
            for (std::size_t i = 0; i < zs.size(); ++i) {
                if (!(zs[i] > 1 && zs[i] < 2)) ok = false;
                if (i > 0 && !(zs[i] > zs[i - 1])) ok = false;
            }
            if (!ok) ++root_bad;
            if (n > 0 && !interlace(prev, zs)) ++inter_bad;
            prev = zs;
        } catch (const CheckFailure&) {
            ++square_bad;
        }
        if (n >= cfg.p) {
            const auto& r = eng.recurrence(n);
            rres = std::max(rres, r.residual);
            if (amin < 0 || r.a < amin) amin = r.a;
        }
    }
    o.note << "orth=" << e(orth) << " rec=" << e(rres) << " min_a=" << e(amin) << " nonsquare=" << square_bad
           << " bad_roots=" << root_bad << " interlace_fail=" << inter_bad;
    o.require(square_bad == 0, "squareness");
    o.require(root_bad == 0, "roots");
    o.require(inter_bad == 0, "interlacing");
    o.require(orth <= tol, "orthogonality");
    o.require(rres <= tol, "recurrence residual");
    o.require(amin > 0, "positivity");
}

// 3. surface certificates for A, B, C and stability under doubling to 512
void surface(Outcome& o) {
    for (const auto& cfg : {test_configs::a(), test_configs::b(), test_configs::c()}) {
        Real drift = 0;
        std::vector<Real> a256;
        {
            PrecisionScope ps(256);
            const Uniformization U = solve_uniformization(cfg);
            const LimitTable T = build_limit_table(U);
            const SurfaceCertificate c = certify_surface(U, T.families, 100);
            const Real t = pow2_neg(32);
            o.note << cfg.name << ": newton=" << e(c.newton_residual) << " product=" << e(c.product_residual)
                   << " continuity=" << e(c.continuity_residual) << " signs=" << c.sign_table_ok;
            o.require(c.newton_residual <= t, cfg.name + " newton");
            o.require(c.product_residual <= t, cfg.name + " product");
            o.require(c.continuity_residual <= t, cfg.name + " continuity");
            o.require(c.sign_table_ok && c.walk_ok, cfg.name + " sign table");
            a256 = T.a_pred;
            for (const auto& x : {U.alpha, U.beta}) a256.push_back(x);
            for (const auto& x : U.q) a256.push_back(x);
            for (const auto& x : U.r) a256.push_back(x);
        }
        PrecisionScope ps(512);
        const Uniformization U = solve_uniformization(cfg);
        const LimitTable T = build_limit_table(U);
        std::vector<Real> a512 = T.a_pred;
        for (const auto& x : {U.alpha, U.beta}) a512.push_back(x);
        for (const auto& x : U.q) a512.push_back(x);
        for (const auto& x : U.r) a512.push_back(x);
        for (std::size_t i = 0; i < a256.size(); ++i)
            drift = std::max(drift, Real(abs(a512[i] - a256[i]) / abs(a512[i])));
        o.note << " doubling=" << e(drift) << "; ";
        o.require(drift <= Real("1e-10"), cfg.name + " doubling");
    }
}

// 4. recurrence limits against surface predictions, CFG-A, lambda_max = 20
void crossval(Outcome& o) {
    const auto cfg = test_configs::a();
    const CrossvalResult cv = run_crossval(cfg, 20);
    PrecisionScope ps(cv.convergence.bits);
    Real worst = 0;
    for (const auto& en : cv.entries) {
        o.require(en.pass, "rho=" + std::to_string(en.rho));
        o.require(en.surface > 0 && en.recurrence > 0, "positivity");
        worst = std::max(worst, Real(en.discrepancy / en.tolerance));
    }
    const auto& est = cv.convergence.estimates;
    const Real sum_rec = abs(est[0].estimate + est[1].estimate - est[3].estimate - est[4].estimate);
    Real gap = -1;
    for (int rho = 0; rho < 6; ++rho) {
        const Real g = abs(cv.entries[rho].surface - cv.entries[(rho + 3) % 6].surface);
        if (gap < 0 || g < gap) gap = g;
    }
    o.note << "max discrepancy/tolerance=" << e(worst) << " sum_rule_rec=" << e(sum_rec)
           << " (max over rho " << e(cv.sum_rule_recurrence) << ") sum_rule_surface=" << e(cv.sum_rule_surface)
           << " min_gap(rho,rho+3)=" << e(gap) << " bits=" << cv.convergence.bits;
    o.require(sum_rec <= Real("1e-3") && cv.sum_rule_recurrence <= Real("1e-3"), "recurrence sum rule");
    o.require(cv.sum_rule_surface <= Real("1e-12"), "surface sum rule");
    o.require(gap > Real("1e-6"), "distinctness");
}

// 5. both branches of the origin dichotomy
void origin(Outcome& o) {
    {
        const auto cfg = test_configs::b();
        const CrossvalResult cv = run_crossval(cfg, 20);
        PrecisionScope ps(cv.convergence.bits);
        const auto& en = cv.entries;
        const Real c02 = abs(en[0].surface - en[2].surface), c35 = abs(en[3].surface - en[5].surface);
        o.note << "B: |a0-a2|=" << e(c02) << " |a3-a5|=" << e(c35);
        o.require(c02 <= Real("1e-12") && c35 <= Real("1e-12"), "B collision");
        for (const auto& r : cv.collision) o.require(r.pass, "B " + r.name);
        for (const auto& x : en) {
            o.note << " rho" << x.rho << ":" << e(x.discrepancy) << "/" << e(x.tolerance);
            o.require(x.pass, "B recurrence rho=" + std::to_string(x.rho));
        }
    }
    PrecisionScope ps(256);
    const Uniformization U = solve_uniformization(test_configs::a());
    const LimitTable T = build_limit_table(U);
    Real gap = -1;
    for (long rho = 0; rho < 6; ++rho)
        for (int m = 1; m <= 2; ++m)
            for (int m2 = 0; m2 < m; ++m2) {
                const Real g = abs(T.a(rho + 2 * m) - T.a(rho + 2 * m2));
                if (gap < 0 || g < gap) gap = g;
            }
    o.note << "; A: min gap {a(rho+2m)}=" << e(gap);
    o.require(gap > Real("1e-6"), "A distinctness");
}

// 6. ratio asymptotics, CFG-A, rho in {0, 2, 5}, k in {0, 1, 2}
void ratio(Outcome& o) {
    const auto cfg = test_configs::a();
    const auto grid = default_ratio_grid(cfg);
    for (int rho : {0, 2, 5}) {
        const auto dev = run_ratio(cfg, rho, {10, 15, 20}, grid);
        PrecisionScope ps(256);
        for (int k = 0; k <= 2; ++k) {
            std::vector<Real> d;
            for (const auto& x : dev)
                if (x.k == k) d.push_back(x.deviation);
            o.note << " r" << rho << "k" << k << "=" << e(d[2]);
            o.require(d[2] <= Real("1e-2"), "bound rho=" + std::to_string(rho) + " k=" + std::to_string(k));
            o.require(d[1] < d[0] && d[2] < d[1], "decrease rho=" + std::to_string(rho) + " k=" + std::to_string(k));
        }
    }
}

// 7. K-norm identity on six pairs of CFG-A
void k_norm(Outcome& o) {
    const auto cfg = test_configs::a();
    PrecisionScope ps(256);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    Real worst = 0;
    for (const auto& [n, k] : std::vector<std::pair<long, int>>{{12, 0}, {13, 1}, {14, 0}, {15, 1}, {30, 0}, {31, 1}}) {
        const auto r = eng.k_norm_check(n, k);
        worst = std::max(worst, r.residual);
    }
    o.note << "max residual=" << e(worst);
    o.require(worst <= Real("1e-10"), "residual");
}

// 8. boundary constancy with the 1% control, CFG-A
void boundary(Outcome& o) {
    PrecisionScope ps(256);
    const Uniformization U = solve_uniformization(test_configs::a());
    const LimitTable T = build_limit_table(U);
    std::vector<std::vector<LimitPoint>> grids;
    for (int k = 0; k < T.p; ++k) grids.push_back(boundary_grid(T, k));
    for (long rho = 0; rho < 3; ++rho) {
        Real dev = 0, ctl = 0;
        for (int k = 0; k < T.p; ++k) {
            dev = std::max(dev, boundary_constancy_check(T, grids[k], rho, k));
            ctl = std::max(ctl, boundary_constancy_check(T, grids[k], rho, k, Real("1.01")));
        }
        o.note << " rho" << rho << ": dev=" << e(dev) << " control=" << e(ctl);
        o.require(dev <= Real("1e-8"), "constancy rho=" + std::to_string(rho));
        o.require(ctl > Real("1e-3"), "control rho=" + std::to_string(rho));
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"counting suite", counting_suite},
        {"MOP structure", mop_structure},
        {"surface certificates", surface},
        {"cross-validation", crossval},
        {"origin dichotomy", origin},
        {"ratio asymptotics", ratio},
        {"K-norm identity", k_norm},
        {"boundary constancy", boundary},
    };
    int failed = 0, i = 0;
    for (const auto& [name, run] : criteria) {
        ++i;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            run(o);
        } catch (const std::exception& ex) {
            o.pass = false;
            o.note << " [exception: " << ex.what() << "]";
        }
        std::printf("criterion %d (%s): %s  %s  (%.1fs)\n", i, name, o.pass ? "PASS" : "FAIL", o.note.str().c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed;
}
