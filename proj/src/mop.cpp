#include "nikstar/mop.hpp"

#include "nikstar/errors.hpp"
#include "nikstar/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace nikstar {

using boost::multiprecision::abs;
using counting::residue_ell;

namespace {

template <class T>
T clenshaw(const std::vector<Real>& c, const T& x) {
    T b1(0), b2(0);
    for (std::size_t k = c.size(); k-- > 1;) {
        T b0 = Real(2) * x * b1 - b2 + T(c[k]);
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + T(c[0]);
}

// Ascending-coefficient helpers.
using Poly = std::vector<Real>;

Poly poly_axpy(const Poly& a, const Real& s, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Real(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += s * b[i];
    return r;
}

Poly poly_shift(const Poly& a) {  // tau * a
    Poly r(a.size() + 1, Real(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i + 1] = a[i];
    return r;
}

Real max_abs(const Poly& a) {
    Real m = 0;
    for (const auto& v : a) m = std::max(m, Real(abs(v)));
    return m;
}

Real horner(const Poly& c, const Real& x) {
    Real v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

Real MonicPolynomial::operator()(const Real& tau) const {
    return clenshaw(cheb, Real((tau - mid) / half));
}

Complex MonicPolynomial::operator()(const Complex& tau) const {
    const Complex x = (tau - Complex(mid)) * Real(1 / half);
    return clenshaw(cheb, x);
}

Complex lift_Q(const MonicPolynomial& q, int p, const Complex& z) {
    return pow_int(z, q.ell) * q(pow_int(z, p + 1));
}

Real zero_product(const ZeroSet& zs, const Real& x) {
    Real v = 1;
    for (const auto& t : zs.zeros) v *= (x - t);
    return v;
}

Complex zero_product(const ZeroSet& zs, const Complex& x) {
    Complex v(1);
    for (const auto& t : zs.zeros) v *= (x - Complex(t));
    return v;
}

bool interlace(const std::vector<Real>& x, const std::vector<Real>& y) {
    const long dx = static_cast<long>(x.size()), dy = static_cast<long>(y.size());
    if (std::abs(dx - dy) > 1) return false;
    std::vector<std::pair<Real, int>> all;
    for (const auto& v : x) all.emplace_back(v, 0);
    for (const auto& v : y) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (all[i].first == all[i - 1].first) return false;
        if (all[i].second == all[i - 1].second) return false;
    }
    return true;
}

unsigned required_bits(int d_max) { return 96u + 16u * static_cast<unsigned>(std::max(d_max, 0)); }

// ---------------------------------------------------------------------------

MopEngine::MopEngine(const MeasureBank& bank) : bank_(&bank) {
    const auto& s0 = bank.base(0);
    bits_ = bits_of(s0.nodes.front());
    mid_ = (s0.lo + s0.hi) / 2;
    half_ = (s0.hi - s0.lo) / 2;
    xnodes_.reserve(s0.size());
    for (const auto& t : s0.nodes) xnodes_.push_back((t - mid_) / half_);
}

const std::vector<Real>& MopEngine::cheb_row(int c) const {
    while (static_cast<int>(tcache_.size()) <= c) {
        const std::size_t m = tcache_.size();
        std::vector<Real> row(xnodes_.size());
        for (std::size_t i = 0; i < xnodes_.size(); ++i) {
            if (m == 0) row[i] = 1;
            else if (m == 1) row[i] = xnodes_[i];
            else row[i] = 2 * xnodes_[i] * tcache_[m - 1][i] - tcache_[m - 2][i];
        }
        tcache_.push_back(std::move(row));
    }
    return tcache_[c];
}

const MonicPolynomial& MopEngine::Q(long n) const {
    if (n < 0) throw InputError("Q: n must be >= 0");
    auto it = qcache_.find(n);
    if (it != qcache_.end()) return it->second;

    const auto shape = bank_->config().shape();
    const int p = shape.p;
    MonicPolynomial q;
    q.n = n;
    q.ell = residue_ell(n, shape);
    q.d = static_cast<int>(counting::Z(n, 0, shape));
    q.mid = mid_;
    q.half = half_;

    struct Row {
        int j;
        long lo;
        int m;
    };
    std::vector<Row> rows;
    for (int j = 0; j < p; ++j) {
        const auto r = counting::orthogonality_range(n, j, shape);
        for (long s = r.lo; s <= r.hi; ++s) rows.push_back({j, r.lo, static_cast<int>(s - r.lo)});
    }
    q.rows = static_cast<int>(rows.size());
    if (q.rows != q.d)
        throw CheckFailure("Q(" + std::to_string(n) + "): " + std::to_string(q.rows) +
                           " orthogonality conditions for degree " + std::to_string(q.d));

    const int d = q.d;
    const auto& s0 = bank_->base(0);
    const std::size_t N = s0.size();
    if (d == 0) {
        q.coeffs = {Real(1)};
        q.cheb = {Real(1)};
    } else {
        Matrix A(d, std::vector<Real>(d));
        std::vector<Real> rhs(d);
        for (int r = 0; r < d; ++r) {
            const auto& mu = bank_->nested(0, rows[r].j);
            const auto& tm = cheb_row(rows[r].m);
            std::vector<Real> wt(N);
            for (std::size_t i = 0; i < N; ++i) wt[i] = mu.weights[i] * pow(s0.nodes[i], rows[r].lo) * tm[i];
            std::vector<Real> full(d + 1, Real(0));
            for (int c = 0; c <= d; ++c) {
                const auto& tc = cheb_row(c);
                Real s = 0;
                for (std::size_t i = 0; i < N; ++i) s += wt[i] * tc[i];
                full[c] = s;
            }
            const Real sc = max_abs(full);
            for (int c = 0; c < d; ++c) A[r][c] = full[c] / sc;
            rhs[r] = -full[d] / sc;
        }
        std::vector<Real> sol = solve_full_pivot(std::move(A), std::move(rhs));
        q.cheb = sol;
        q.cheb.push_back(Real(1));

        // monomial form: T_c in powers of tau, x = (tau - mid) / half
        const Poly x = {-mid_ / half_, 1 / half_};
        Poly t0 = {Real(1)}, t1 = x;
        Poly acc = poly_axpy(Poly{}, q.cheb[0], t0);
        acc = poly_axpy(acc, q.cheb[1], t1);
        for (int c = 2; c <= d; ++c) {
            Poly t2 = poly_axpy(poly_axpy(Poly{}, Real(2) * x[1], poly_shift(t1)), Real(2) * x[0], t1);
            t2 = poly_axpy(t2, Real(-1), t0);
            acc = poly_axpy(acc, q.cheb[c], t2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        acc.resize(d + 1);
        const Real lead = acc[d];
        for (auto& v : acc) v /= lead;
        for (auto& v : q.cheb) v /= lead;
        acc[d] = 1;
        q.coeffs = std::move(acc);
    }

    // Orthogonality residuals, evaluated from the monomial coefficients.
    std::vector<Real> qv(N);
    for (std::size_t i = 0; i < N; ++i) qv[i] = horner(q.coeffs, s0.nodes[i]);
    Real worst = 0;
    for (int j = 0; j < p; ++j) {
        const auto r = counting::orthogonality_range(n, j, shape);
        const auto& mu = bank_->nested(0, j);
        for (long s = r.lo; s <= r.hi; ++s) {
            Real num = 0, den = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const Real v = mu.weights[i] * qv[i] * pow(s0.nodes[i], s);
                num += v;
                den += abs(v);
            }
            if (den > 0) worst = std::max(worst, Real(abs(num) / den));
        }
    }
    q.orth_residual = worst;
    if (worst > tolerance())
        throw ConvergenceError("Q(" + std::to_string(n) + "): orthogonality residual " + to_decimal(worst, 6) +
                           " exceeds 2^-" + std::to_string(bits_ / 4) + "; raise precision_bits");
    return qcache_.emplace(n, std::move(q)).first->second;
}

const RecurrenceValue& MopEngine::recurrence(long n) const {
    const int p = this->p();
    if (n < p) throw InputError("recurrence coefficient requires n >= p");
    auto it = acache_.find(n);
    if (it != acache_.end()) return it->second;

    const MonicPolynomial& qm = Q(n - p);
    const MonicPolynomial& q0 = Q(n);
    const MonicPolynomial& q1 = Q(n + 1);
    Poly lhs = (q0.ell == p) ? poly_shift(q0.coeffs) : q0.coeffs;
    lhs = poly_axpy(lhs, Real(-1), q1.coeffs);
    const std::size_t deg = qm.coeffs.size() - 1;
    if (lhs.size() <= deg) lhs.resize(deg + 1, Real(0));
    const Real a = lhs[deg];
    Poly res = poly_axpy(lhs, -a, qm.coeffs);
    const Real residual = max_abs(res) / max_abs(q0.coeffs);

    if (residual > tolerance())
        throw ConvergenceError("recurrence residual " + to_decimal(residual, 6) + " at n = " + std::to_string(n) +
                               ": precision exhausted");
    if (!(a > 0)) throw CheckFailure("a_" + std::to_string(n) + " = " + to_decimal(a, 12) + " is not positive");
    return acache_.emplace(n, RecurrenceValue{n, a, residual}).first->second;
}

const SecondKind& MopEngine::psi(long n) const {
    auto it = pcache_.find(n);
    if (it != pcache_.end()) return *it->second;
    auto sk = std::make_unique<SecondKind>(*this, n);
    return *pcache_.emplace(n, std::move(sk)).first->second;
}

ZeroSet MopEngine::psi_zeros(long n, int k) const {
    const int p = this->p();
    if (k < 0 || k >= p) throw InputError("psi_zeros: k must be in [0, p-1]");
    auto key = std::make_pair(n, k);
    auto it = zcache_.find(key);
    if (it != zcache_.end()) return it->second;

    const long expected = counting::Z(n, k, bank_->config().shape());
    ZeroSet zs{n, k, {}};
    if (expected == 0) return zcache_.emplace(key, zs).first->second;

    const SecondKind& f = psi(n);
    const auto& iv = bank_->base(k);
    const Real a = iv.lo, b = iv.hi;
    const Real tol = (b - a) * pow2_neg(static_cast<int>(bits_) - 20);
    const Real pi = boost::math::constants::pi<Real>();

    int M = 8 * static_cast<int>(expected + 1);
    for (int attempt = 0; attempt < 2; ++attempt, M *= 4) {
        std::vector<Real> xs(M), fs(M);
        for (int i = 0; i < M; ++i) {
            xs[i] = a + (b - a) * (1 - cos(pi * (i + Real("0.5")) / M)) / 2;
            fs[i] = f(k, xs[i]);
        }
        std::vector<Real> found;
        for (int i = 0; i < M; ++i) {
            if (fs[i] == 0) {
                found.push_back(xs[i]);
                continue;
            }
            if (i + 1 < M && fs[i + 1] != 0 && (fs[i] > 0) != (fs[i + 1] > 0)) {
                Real lo = xs[i], hi = xs[i + 1];
                const bool lo_pos = fs[i] > 0;
                while (hi - lo > tol) {
                    const Real mid = (lo + hi) / 2;
                    const Real fm = f(k, mid);
                    if (fm == 0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((fm > 0) == lo_pos) lo = mid;
                    else hi = mid;
                }
                found.push_back((lo + hi) / 2);
            }
        }
        if (static_cast<long>(found.size()) == expected) {
            zs.zeros = std::move(found);
            return zcache_.emplace(key, zs).first->second;
        }
    }
    throw CheckFailure("psi_" + std::to_string(n) + "," + std::to_string(k) + ": zero count differs from Z = " +
                       std::to_string(expected));
}

Real MopEngine::psi_orthogonality_residual(long n, int k) const {
    const auto shape = bank_->config().shape();
    const auto& vals = psi(n).at_nodes(k);
    const auto& nodes = bank_->base(k).nodes;
    Real worst = 0;
    for (int j = k; j < shape.p; ++j) {
        const auto& mu = bank_->nested(k, j);
        const auto r = counting::orthogonality_range(n, j, shape);
        for (long s = r.lo; s <= r.hi; ++s) {
            Real num = 0, den = 0;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const Real v = mu.weights[i] * vals[i] * pow(nodes[i], s);
                num += v;
                den += abs(v);
            }
            if (den > 0) worst = std::max(worst, Real(abs(num) / den));
        }
    }
    return worst;
}

KNormResult MopEngine::k_norm_check(long n, int k) const {
    const int p = this->p();
    if (n < p || counting::mod(n, p) != k) throw InputError("k_norm_check needs n >= p and n = k mod p");
    auto kinv2 = [&](long m) {
        const auto sigma = bank_->varying(m, k);
        const auto& vals = psi(m).at_nodes(k);
        const ZeroSet pk = (k == 0) ? ZeroSet{} : psi_zeros(m, k);
        const ZeroSet pk1 = (k + 1 >= p) ? ZeroSet{} : psi_zeros(m, k + 1);
        Real s = 0;
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            const Real& t = sigma.nodes[i];
            const Real pkv = (k == 0) ? Real(vals[i]) : zero_product(pk, t);
            s += abs(sigma.weights[i]) * abs(vals[i] * pkv) / abs(zero_product(pk1, t));
        }
        return s;
    };
    KNormResult r;
    r.n = n;
    r.k = k;
    r.a_n = a(n);
    r.ratio = kinv2(n) / kinv2(n - p);
    r.residual = abs(r.a_n - r.ratio);
    return r;
}

// ---------------------------------------------------------------------------

SecondKind::SecondKind(const MopEngine& engine, long n)
    : bank_(&engine.bank()), q_(&engine.Q(n)), n_(n), ell_(q_->ell), p_(engine.p()) {
    const auto shape = bank_->config().shape();
    for (int k = 0; k < p_; ++k) sigma_.push_back(varying_measure(bank_->base(k), n, k, shape));
    nodes_.resize(p_);
    for (const auto& t : sigma_[0].nodes) nodes_[0].push_back((*q_)(t));
    for (int k = 1; k < p_; ++k)
        for (const auto& t : sigma_[k].nodes) nodes_[k].push_back((*this)(k, t));
}

Real SecondKind::operator()(int k, const Real& x) const {
    if (k < 0 || k > p_) throw InputError("psi: k out of range");
    if (k == 0) return (*q_)(x);
    const auto& m = sigma_[k - 1];
    if (x >= m.lo && x <= m.hi) throw DomainError("psi_{n," + std::to_string(k) + "} evaluated on its cut");
    const auto& v = nodes_[k - 1];
    Real s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m.weights[i] * v[i] / (x - m.nodes[i]);
    return (ell_ < k) ? Real(x * s) : s;
}

Complex SecondKind::operator()(int k, const Complex& x) const {
    if (k < 0 || k > p_) throw InputError("psi: k out of range");
    if (k == 0) return (*q_)(x);
    if (x.im == 0) return Complex((*this)(k, x.re));
    const auto& m = sigma_[k - 1];
    const auto& v = nodes_[k - 1];
    Real sr = 0, si = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Real dr = x.re - m.nodes[i];
        const Real w = m.weights[i] * v[i] / (dr * dr + x.im * x.im);
        sr += w * dr;
        si -= w * x.im;
    }
    Complex s(sr, si);
    return (ell_ < k) ? x * s : s;
}

// ---------------------------------------------------------------------------

std::string polynomial_to_json(const MonicPolynomial& q, unsigned bits) {
    const int digits = static_cast<int>(digits10_for_bits(bits));
    nlohmann::json j;
    j["n"] = q.n;
    j["ell"] = q.ell;
    j["d"] = q.d;
    j["precision_bits"] = bits;
    j["variable"] = "tau = z^(p+1)";
    j["coefficients"] = nlohmann::json::array();
    for (const auto& c : q.coeffs) j["coefficients"].push_back(to_decimal(c, digits));
    j["orthogonality_residual"] = to_decimal(q.orth_residual, 6);
    return j.dump(2);
}

}  // namespace nikstar
