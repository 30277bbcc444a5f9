#include <doctest.h>

#include "nikstar/errors.hpp"
#include "nikstar/mop.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

using namespace nikstar;
using boost::multiprecision::abs;

namespace {

const char* kCfgA = R"({"name":"A","p":2,"intervals":[["1","2"],["-3","-2"]],
  "precision_bits":256,"quad_nodes":128})";

// ~330 bits, independent of mpfr and of the Gauss-Jacobi rules
using Big = boost::multiprecision::cpp_bin_float_100;

// Q_3 for n = 9 on CFG-A from raw monomial moments:
//   int_1^2 Q t^s dt = 0 (s = 0, 1), int_1^2 Q t log((t+3)/(t+2)) dt = 0.
std::vector<Big> q9_oracle() {
    boost::math::quadrature::tanh_sinh<Big> ts;
    auto leb = [](int m) { return (pow(Big(2), m + 1) - 1) / (m + 1); };
    auto nested = [&](int m) {
        return ts.integrate([m](Big t) { return pow(t, m + 1) * log((t + 3) / (t + 2)); }, Big(1), Big(2));
    };
    // rows: c0 M[m] + c1 M[m+1] + c2 M[m+2] = -M[m+3]
    Big A[3][4];
    for (int c = 0; c < 4; ++c) {
        A[0][c] = leb(c);
        A[1][c] = leb(c + 1);
        A[2][c] = nested(c);
    }
    for (int i = 0; i < 3; ++i) A[i][3] = -A[i][3];
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int i = col + 1; i < 3; ++i)
            if (abs(A[i][col]) > abs(A[piv][col])) piv = i;
        std::swap(A[col], A[piv]);
        for (int i = 0; i < 3; ++i) {
            if (i == col) continue;
            const Big f = A[i][col] / A[col][col];
            for (int c = col; c < 4; ++c) A[i][c] -= f * A[col][c];
        }
    }
    return {A[0][3] / A[0][0], A[1][3] / A[1][1], A[2][3] / A[2][2], Big(1)};
}

}  // namespace

TEST_CASE("Q_d is 1 for n < p + 1") {
    PrecisionScope ps(256);
    const auto cfg = parse_config(kCfgA);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    for (long n : {0L, 1L, 2L}) {
        const auto& q = eng.Q(n);
        CHECK(q.d == 0);
        CHECK(q.coeffs.size() == 1);
        CHECK(q.coeffs[0] == 1);
        CHECK(q(Real("1.3")) == 1);
    }
}

TEST_CASE("Q_d for n = 9 against a monomial moment solve") {
    PrecisionScope ps(256);
    const auto cfg = parse_config(kCfgA);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const auto& q = eng.Q(9);
    REQUIRE(q.d == 3);
    CHECK(q.ell == 0);
    CHECK(q.coeffs[3] == 1);
    const auto oracle = q9_oracle();
    for (int i = 0; i < 3; ++i) {
        const Real want(oracle[i].str(80));
        CHECK(abs(q.coeffs[i] - want) < Real("1e-60"));
    }
    // three simple roots in (1, 2) counted by sign changes on a fine grid
    int changes = 0;
    Real prev = q(Real(1));
    for (int i = 1; i <= 1000; ++i) {
        const Real v = q(Real(1) + Real(i) / 1000);
        if (v * prev < 0) ++changes;
        prev = v;
    }
    CHECK(changes == 3);
    const auto zs = eng.psi_zeros(9, 0);
    REQUIRE(zs.zeros.size() == 3);
    for (const auto& z : zs.zeros) {
        CHECK(z > 1);
        CHECK(z < 2);
        CHECK(abs(q(z)) < Real("1e-60"));
    }
}

TEST_CASE("zeros interlace between consecutive indices") {
    PrecisionScope ps(256);
    const auto cfg = parse_config(kCfgA);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    CHECK(interlace(eng.psi_zeros(9, 0).zeros, eng.psi_zeros(10, 0).zeros));
    CHECK(interlace(eng.psi_zeros(9, 1).zeros, eng.psi_zeros(10, 1).zeros));
    // a shifted copy does not interlace
    auto z = eng.psi_zeros(10, 0).zeros;
    CHECK_FALSE(interlace(z, z));
}

TEST_CASE("recurrence coefficients") {
    PrecisionScope ps(256);
    const auto cfg = parse_config(kCfgA);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const auto& r = eng.recurrence(12);
    CHECK(r.a > 0);
    CHECK(r.residual < pow2_neg(64));
    CHECK_THROWS(eng.recurrence(1));
}

TEST_CASE("second-kind functions satisfy the recurrence off the intervals") {
    PrecisionScope ps(256);
    const auto cfg = parse_config(kCfgA);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const int p = 2;
    const std::vector<Complex> pts = {Complex(Real("0.5"), Real("0.25")), Complex(Real(5), Real(0)),
                                      Complex(Real(-1), Real(1))};
    Real worst = 0;
    for (long n = 6; n <= 17; ++n) {
        const bool top = n % (p + 1) == p;
        for (int k = 0; k <= p; ++k) {
            for (const auto& t : pts) {
                Complex lhs = eng.psi(n)(k, t);
                if (top) lhs *= t;
                const Complex rhs = eng.psi(n + 1)(k, t) + eng.psi(n - p)(k, t) * eng.a(n);
                worst = std::max(worst, Real(abs(lhs - rhs) / (abs(lhs) + abs(rhs))));
            }
        }
    }
    CHECK(worst < Real("1e-40"));
}

TEST_CASE("psi_{9,1} has one zero in (-3,-2)") {
    PrecisionScope ps(256);
    const auto cfg = parse_config(kCfgA);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const auto zs = eng.psi_zeros(9, 1);
    REQUIRE(zs.zeros.size() == 1);
    CHECK(abs(zs.zeros[0] - Real("-2.44932809")) < Real("1e-8"));
    CHECK(abs(eng.psi(9)(1, zs.zeros[0])) < Real("1e-50"));
    // Z(n,k) = 0 gives no zeros
    CHECK(eng.psi_zeros(2, 1).zeros.empty());
}

TEST_CASE("psi_{n,0} is Q_d") {
    PrecisionScope ps(256);
    const auto cfg = parse_config(kCfgA);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const Complex t(Real("0.3"), Real("-2"));
    const Complex d = eng.psi(11)(0, t) - eng.Q(11)(t);
    CHECK(abs(d) == 0);
    CHECK_THROWS_AS(eng.psi(11)(1, Real("1.5")), DomainError);
}

TEST_CASE("K-norm identity and precision doubling") {
    const auto cfg = parse_config(kCfgA);
    Real r256_12, r256_13, a256;
    {
        PrecisionScope ps(256);
        const MeasureBank bank(cfg);
        const MopEngine eng(bank);
        r256_12 = eng.k_norm_check(12, 0).residual;
        r256_13 = eng.k_norm_check(13, 1).residual;
        a256 = eng.a(12);
        CHECK(r256_12 < Real("1e-10"));
        CHECK(r256_13 < Real("1e-10"));
        CHECK(eng.psi_orthogonality_residual(13, 1) < pow2_neg(64));
        CHECK_THROWS_AS(eng.k_norm_check(13, 0), InputError);
    }
    PrecisionScope ps(512);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    CHECK(abs(eng.a(12) - a256) < pow2_neg(128));
    // shrinks by at least 2^{256/8}
    CHECK(eng.k_norm_check(12, 0).residual <= r256_12 * pow2_neg(32));
    CHECK(eng.k_norm_check(13, 1).residual <= r256_13 * pow2_neg(32));
}
