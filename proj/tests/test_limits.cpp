#include <doctest.h>

#include "configs.hpp"
#include "nikstar/errors.hpp"
#include "nikstar/limits.hpp"

#include <memory>

using namespace nikstar;
using boost::multiprecision::abs;

namespace {

struct Solved {
    StarSystemConfig cfg;
    Uniformization U;
    LimitTable T;
};

// solved once per config, at 256 bits
const Solved& solved(char which) {
    static std::map<char, std::unique_ptr<Solved>> cache;
    auto& slot = cache[which];
    if (!slot) {
        PrecisionScope ps(256);
        slot = std::make_unique<Solved>();
        slot->cfg = which == 'a' ? test_configs::a() : which == 'b' ? test_configs::b() : test_configs::c();
        slot->U = solve_uniformization(slot->cfg);
        slot->T = build_limit_table(slot->U);
    }
    return *slot;
}

}  // namespace

TEST_CASE("predictions are positive and satisfy the sum rule") {
    PrecisionScope ps(256);
    for (char c : {'a', 'b', 'c'}) {
        const LimitTable& T = solved(c).T;
        const int p = T.p;
        CAPTURE(c);
        REQUIRE(T.a_pred.size() == static_cast<std::size_t>(T.period()));
        for (const auto& a : T.a_pred) CHECK(a > 0);
        for (long rho = 0; rho < T.period(); ++rho) {
            Real lhs = 0, rhs = 0;
            for (long i = rho; i <= rho + p - 1; ++i) lhs += T.a(i);
            for (long i = rho + p + 1; i <= rho + 2 * p; ++i) rhs += T.a(i);
            CHECK(abs(lhs - rhs) < Real("1e-12"));
        }
    }
    // the recurrence values at lambda = 20 (568 bits) land within 1e-5
    const LimitTable& A = solved('a').T;
    CHECK(abs(A.a(0) - Real("0.04279222125326681")) < Real("1e-15"));
    CHECK(abs(A.a(2) - Real("1.457042556637259")) < Real("1e-14"));
}

TEST_CASE("collision when 0 is an endpoint") {
    PrecisionScope ps(256);
    const Solved& B = solved('b');
    CHECK(abs(B.T.a(0) - B.T.a(2)) < Real("1e-12"));
    CHECK(abs(B.T.a(3) - B.T.a(5)) < Real("1e-12"));
    const auto recs = zero_at_origin_collision(B.T, B.cfg);
    REQUIRE(!recs.empty());
    for (const auto& r : recs) {
        CAPTURE(r.name);
        CHECK(r.pass);
    }
    // F~_0^{(rho)} / F~_0^{(rho - p)} = z for rho in {2, 5}
    for (const Complex z : {Complex(Real("0.3"), Real("0.8")), Complex(Real(-4), Real("0.1"))}) {
        const LimitPoint pt(B.T, z);
        for (long rho : {2L, 5L}) {
            const Complex q = pt.F_tilde(rho, 0) / pt.F_tilde(rho - 2, 0);
            CHECK(abs(q - z) < pow2_neg(32));
        }
    }
}

TEST_CASE("distinct predictions when 0 is off the intervals") {
    PrecisionScope ps(256);
    const Solved& A = solved('a');
    for (long rho = 0; rho < 6; ++rho)
        for (int m = 1; m <= 2; ++m)
            for (int m2 = 0; m2 < m; ++m2) CHECK(abs(A.T.a(rho + 2 * m) - A.T.a(rho + 2 * m2)) > Real("1e-6"));
    for (const auto& r : zero_at_origin_collision(A.T, A.cfg)) CHECK(r.pass);
}

TEST_CASE("limit identities") {
    PrecisionScope ps(256);
    for (char c : {'a', 'b', 'c'}) {
        CAPTURE(c);
        for (const auto& r : limit_identities(solved(c).T)) {
            CAPTURE(r.name);
            CHECK(r.pass);
            CHECK(r.residual <= r.tolerance);
        }
    }
}

TEST_CASE("eta and F~ at the marked points") {
    PrecisionScope ps(256);
    const LimitTable& T = solved('a').T;
    const int p = T.p;
    const Complex big(Real(100000), Real(30000));
    const LimitPoint far(T, big);
    for (long rho = 0; rho < T.period(); ++rho) {
        CAPTURE(rho);
        const int l = T.l_of(rho);
        CHECK(abs(far.eta(rho, 0) - Complex(1)) < Real("1e-3"));
        // simple zero at the point at infinity of sheet l
        const Complex zeta = far.eta(rho, l) * big;
        const LimitPoint farther(T, big * Real(10));
        CHECK(abs(farther.eta(rho, l) * big * Real(10) - zeta) / abs(zeta) < Real("1e-3"));
        // simple pole at the origin of sheet k(rho)
        const int k = T.k_of(rho);
        const Complex z1(Real("1e-5"), Real("1e-4")), z2(Real("1e-6"), Real("1e-5"));
        const Complex r1 = LimitPoint(T, z1).eta(rho, k) * z1;
        const Complex r2 = LimitPoint(T, z2).eta(rho, k) * z2;
        CHECK(abs(r1 - r2) / abs(r2) < Real("1e-3"));

        CHECK(far.F_tilde(rho, -1) == Complex(1));
        CHECK(far.F_tilde(rho, p) == Complex(1));
        CHECK(far.f_product(rho, p) == Complex(1));
        if (rho % (p + 1) == p) {
            // F~_0 = z - a + O(1/z)
            const Complex c = far.F_tilde(rho, 0) - big;
            CHECK(abs(c + Complex(T.a(rho))) < Real("1e-3"));
        } else {
            CHECK(abs(far.F_tilde(rho, 0) - Complex(1)) < Real("1e-3"));
        }
    }
}

TEST_CASE("f_0 phi_0 = 1 and periodicity of f") {
    PrecisionScope ps(256);
    const LimitTable& T = solved('c').T;
    const int p = T.p;
    const LimitPoint pt(T, Complex(Real("0.4"), Real("1.7")));
    for (long rho = 0; rho < T.period(); ++rho) {
        const int l = T.l_of(rho);
        CHECK(abs(pt.f_product(rho, 0) * pt.phi(l, 0) - Complex(1)) < pow2_neg(64));
        for (int k = 0; k <= p; ++k)
            CHECK(abs(pt.f_product(rho, k) - pt.f_product(rho + p, k)) < pow2_neg(64));
    }
}

TEST_CASE("boundary constancy") {
    PrecisionScope ps(256);
    const LimitTable& T = solved('a').T;
    CHECK(boundary_xi(0, 0, 2, Real(-3)) == 3);  // l(rho) = k gives |tau|
    CHECK(boundary_xi(0, 1, 2, Real(-3)) == Real(1) / 3);
    CHECK(boundary_xi(2, 0, 2, Real(4)) == Real(1) / 4);
    CHECK(boundary_xi(2, 1, 2, Real(4)) == 1);

    CHECK(boundary_constancy_check(T, 0, 0) < Real("1e-8"));
    for (long rho = 0; rho < 3; ++rho) {
        Real probe = 0;
        for (int k = 0; k < T.p; ++k) {
            const auto grid = boundary_grid(T, k);
            CHECK(boundary_constancy_check(T, grid, rho, k) < Real("1e-8"));
            probe = std::max(probe, boundary_constancy_check(T, grid, rho, k, Real("1.01")));
        }
        CAPTURE(rho);
        CHECK(probe > Real("1e-3"));
    }
}

TEST_CASE("JSON export") {
    PrecisionScope ps(256);
    const LimitTable& T = solved('a').T;
    const std::string js = limit_table_to_json(T, {});
    CHECK(js.find("\"a\"") != std::string::npos);
    CHECK(js.find("\"4.27922212532668") != std::string::npos);
}
