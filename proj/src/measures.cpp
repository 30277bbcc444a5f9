#include "nikstar/measures.hpp"

#include "nikstar/errors.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nikstar {

using boost::multiprecision::abs;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// configuration

namespace {

std::string number_text(const json& v, const std::string& what) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw InputError(what + ": expected a number or decimal string");
}

bool is_decimal(const std::string& s) {
    try {
        Real x(s);
        (void)x;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

void StarSystemConfig::validate() const {
    if (p < 2) throw InputError("p must be >= 2");
    if (static_cast<int>(intervals.size()) != p)
        throw InputError("expected " + std::to_string(p) + " intervals, got " +
                         std::to_string(intervals.size()));
    if (static_cast<int>(weights.size()) != p)
        throw InputError("expected " + std::to_string(p) + " weights");
    if (precision_bits < 128) throw InputError("precision_bits must be >= 128");
    if (quad_nodes < 16) throw InputError("quad_nodes must be >= 16");

    PrecisionScope scope(precision_bits);
    for (int k = 0; k < p; ++k) {
        for (const auto* s : {&intervals[k].a, &intervals[k].b})
            if (!is_decimal(*s)) throw InputError("interval " + std::to_string(k) + ": bad number '" + *s + "'");
        const Real ak = a(k), bk = b(k);
        if (!(ak < bk)) throw InputError("interval " + std::to_string(k) + ": need a < b");
        if (k % 2 == 0 && ak < 0)
            throw InputError("interval " + std::to_string(k) + " (even) must lie in [0, inf)");
        if (k % 2 == 1 && bk > 0)
            throw InputError("interval " + std::to_string(k) + " (odd) must lie in (-inf, 0]");
        const WeightSpec& w = weights[k];
        if (!is_decimal(w.alpha) || !is_decimal(w.beta)) throw InputError("weight exponents must be numbers");
        if (!(Real(w.alpha) > -1) || !(Real(w.beta) > -1))
            throw InputError("weight " + std::to_string(k) + ": exponents must be > -1");
        if (w.poly.empty()) throw InputError("weight " + std::to_string(k) + ": empty polynomial");
        for (const auto& c : w.poly)
            if (!is_decimal(c)) throw InputError("weight " + std::to_string(k) + ": bad coefficient");
    }
    for (int k = 0; k + 1 < p; ++k) {
        // Opposite half-lines, so they can only meet at the origin.
        const bool touch = (k % 2 == 0) ? (a(k) == 0 && b(k + 1) == 0) : (b(k) == 0 && a(k + 1) == 0);
        if (touch)
            throw InputError("intervals " + std::to_string(k) + " and " + std::to_string(k + 1) +
                             " must be disjoint");
    }
}

std::string StarSystemConfig::digest() const {
    std::ostringstream os;
    os << "p=" << p;
    for (int k = 0; k < p; ++k) {
        os << ";D" << k << "=[" << intervals[k].a << "," << intervals[k].b << "]";
        os << ";w" << k << "=(" << weights[k].alpha << "," << weights[k].beta << ",[";
        for (std::size_t i = 0; i < weights[k].poly.size(); ++i)
            os << (i ? "," : "") << weights[k].poly[i];
        os << "])";
    }
    os << ";bits=" << precision_bits << ";N=" << quad_nodes;
    return os.str();
}

StarSystemConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
    StarSystemConfig cfg;
    if (!j.contains("p") || !j.contains("intervals")) throw InputError("config needs 'p' and 'intervals'");
    cfg.name = j.value("name", std::string{});
    cfg.p = j.at("p").get<int>();
    for (const auto& iv : j.at("intervals")) {
        if (!iv.is_array() || iv.size() != 2) throw InputError("each interval must be [a, b]");
        cfg.intervals.push_back({number_text(iv[0], "interval"), number_text(iv[1], "interval")});
    }
    if (j.contains("weights")) {
        for (const auto& w : j.at("weights")) {
            WeightSpec ws;
            if (w.contains("alpha")) ws.alpha = number_text(w.at("alpha"), "alpha");
            if (w.contains("beta")) ws.beta = number_text(w.at("beta"), "beta");
            if (w.contains("poly")) {
                ws.poly.clear();
                for (const auto& c : w.at("poly")) ws.poly.push_back(number_text(c, "poly"));
            }
            cfg.weights.push_back(ws);
        }
    } else {
        cfg.weights.assign(static_cast<std::size_t>(std::max(cfg.p, 0)), WeightSpec{});
    }
    if (j.contains("precision_bits")) cfg.precision_bits = j.at("precision_bits").get<unsigned>();
    if (j.contains("quad_nodes")) cfg.quad_nodes = j.at("quad_nodes").get<int>();
    cfg.validate();
    return cfg;
}

StarSystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const StarSystemConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["p"] = cfg.p;
    j["intervals"] = json::array();
    for (const auto& iv : cfg.intervals) j["intervals"].push_back({iv.a, iv.b});
    j["weights"] = json::array();
    for (const auto& w : cfg.weights) j["weights"].push_back({{"alpha", w.alpha}, {"beta", w.beta}, {"poly", w.poly}});
    j["precision_bits"] = cfg.precision_bits;
    j["quad_nodes"] = cfg.quad_nodes;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Gauss-Jacobi

namespace {

// Monic recurrence coefficients for (1-x)^a (1+x)^b; beta_0 is the mass.
template <class T>
void jacobi_recurrence(int n, const T& a, const T& b, std::vector<T>& alpha, std::vector<T>& beta,
                       const T& mass) {
    alpha.assign(n, T(0));
    beta.assign(n, T(0));
    const T ab = a + b;
    alpha[0] = (b - a) / (ab + 2);
    beta[0] = mass;
    for (int k = 1; k < n; ++k) {
        const T kk = T(k);
        const T s = 2 * kk + ab;
        alpha[k] = (b * b - a * a) / (s * (s + 2));
        if (k == 1) {
            beta[k] = 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
        } else {
            beta[k] = 4 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1) * (s - 1));
        }
    }
}

}  // namespace

GaussRule gauss_jacobi(int n, const Real& a, const Real& b) {
    if (n < 1) throw InputError("gauss_jacobi: need n >= 1");

    // Golub-Welsch in double precision for starting values.
    std::vector<double> ad, bd;
    jacobi_recurrence<double>(n, a.convert_to<double>(), b.convert_to<double>(), ad, bd, 1.0);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = ad[i];
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = std::sqrt(bd[i + 1]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    std::vector<double> guess(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(guess.begin(), guess.end());

    const Real mass = boost::multiprecision::pow(Real(2), a + b + 1) * boost::math::tgamma(a + 1) *
                      boost::math::tgamma(b + 1) / boost::math::tgamma(a + b + 2);
    std::vector<Real> al, be;
    jacobi_recurrence<Real>(n, a, b, al, be, mass);

    // p_n, p_n' and p_{n-1} by the monic recurrence.
    auto eval = [&](const Real& x, Real& pn, Real& dpn, Real& pnm1) {
        Real p0 = 1, p1 = x - al[0], d0 = 0, d1 = 1;
        if (n == 1) {
            pn = p1, dpn = d1, pnm1 = p0;
            return;
        }
        for (int k = 1; k < n; ++k) {
            Real p2 = (x - al[k]) * p1 - be[k] * p0;
            Real d2 = p1 + (x - al[k]) * d1 - be[k] * d0;
            p0 = std::move(p1), p1 = std::move(p2);
            d0 = std::move(d1), d1 = std::move(d2);
        }
        pn = p1, dpn = d1, pnm1 = p0;
    };

    Real prod_beta = 1;
    for (int k = 0; k < n; ++k) prod_beta *= be[k];

    const Real tol = pow2_neg(static_cast<int>(Real::default_precision() * 3.32) - 8);
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        Real x(guess[i]);
        Real pn, dpn, pnm1;
        for (int it = 0; it < 60; ++it) {
            eval(x, pn, dpn, pnm1);
            Real dx = pn / dpn;
            x -= dx;
            if (abs(dx) <= tol) break;
        }
        eval(x, pn, dpn, pnm1);
        rule.nodes[i] = x;
        rule.weights[i] = prod_beta / (dpn * pnm1);
    }
    for (int i = 0; i + 1 < n; ++i)
        if (!(rule.nodes[i] < rule.nodes[i + 1])) throw ConvergenceError("gauss_jacobi: node polishing collapsed");
    return rule;
}

// ---------------------------------------------------------------------------
// measures

Real DiscretizedMeasure::mass() const {
    Real s = 0;
    for (const auto& w : weights) s += w;
    return s;
}

int DiscretizedMeasure::weight_sign() const {
    bool pos = true, neg = true;
    for (const auto& w : weights) {
        if (!(w > 0)) pos = false;
        if (!(w < 0)) neg = false;
    }
    return pos ? 1 : (neg ? -1 : 0);
}

Real cauchy_transform(const DiscretizedMeasure& m, const Real& x) {
    if (x >= m.lo && x <= m.hi)
        throw DomainError("cauchy_transform: point lies on the support [" + to_decimal(m.lo, 8) + ", " +
                          to_decimal(m.hi, 8) + "]");
    Real s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m.weights[i] / (x - m.nodes[i]);
    return s;
}

Complex cauchy_transform(const DiscretizedMeasure& m, const Complex& x) {
    if (x.im == 0) return Complex(cauchy_transform(m, x.re));
    Real sr = 0, si = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Real dr = x.re - m.nodes[i];
        const Real den = dr * dr + x.im * x.im;
        sr += m.weights[i] * dr / den;
        si -= m.weights[i] * x.im / den;
    }
    return {sr, si};
}

std::vector<Real> moments(const DiscretizedMeasure& m, int s_max) {
    std::vector<Real> out(static_cast<std::size_t>(s_max + 1), Real(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
        Real t = m.weights[i];
        for (int s = 0; s <= s_max; ++s) {
            out[s] += t;
            t *= m.nodes[i];
        }
    }
    return out;
}

DiscretizedMeasure build_base_measure(const StarSystemConfig& cfg, int k, int nodes) {
    if (k < 0 || k >= cfg.p) throw InputError("build_base_measure: k out of range");
    if (nodes <= 0) nodes = cfg.quad_nodes;
    const Real a = cfg.a(k), b = cfg.b(k);
    const Real alpha(cfg.weights[k].alpha), beta(cfg.weights[k].beta);
    std::vector<Real> poly;
    for (const auto& c : cfg.weights[k].poly) poly.emplace_back(c);
    auto poly_at = [&](const Real& t) {
        Real v = 0;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * t + *it;
        return v;
    };

    // The analytic factor must be positive on the closed interval.
    const int samples = 257;
    for (int i = 0; i < samples; ++i) {
        const Real x = -cos(boost::math::constants::pi<Real>() * i / (samples - 1));
        const Real t = (a + b) / 2 + (b - a) / 2 * x;
        if (!(poly_at(t) > 0))
            throw InputError("weight " + std::to_string(k) + ": polynomial factor is not positive on the interval");
    }

    const Real h = (b - a) / 2, c = (a + b) / 2;
    // (t-a) = h(1+x), (b-t) = h(1-x): Jacobi exponents are (beta, alpha).
    const GaussRule rule = gauss_jacobi(nodes, beta, alpha);
    const Real scale = boost::multiprecision::pow(h, alpha + beta + 1);
    DiscretizedMeasure m;
    m.interval_id = k;
    m.lo = a;
    m.hi = b;
    m.tag = "sigma*_" + std::to_string(k);
    m.nodes.resize(nodes);
    m.weights.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        m.nodes[i] = c + h * rule.nodes[i];
        m.weights[i] = scale * rule.weights[i] * poly_at(m.nodes[i]);
    }
    return m;
}

DiscretizedMeasure nested_measure(const DiscretizedMeasure& outer_base, const DiscretizedMeasure& inner, int k,
                                  int j) {
    DiscretizedMeasure m = outer_base;
    m.tag = "mu_{" + std::to_string(k) + "," + std::to_string(j) + "}";
    for (std::size_t i = 0; i < m.size(); ++i)
        m.weights[i] *= m.nodes[i] * cauchy_transform(inner, m.nodes[i]);
    if (m.weight_sign() == 0)
        throw CheckFailure("nested measure " + m.tag + " is not one-signed (intervals not disjoint?)");
    return m;
}

DiscretizedMeasure varying_measure(const DiscretizedMeasure& base, long n, int k,
                                   const counting::SystemShape& shape) {
    const int ell = counting::residue_ell(n, shape);
    DiscretizedMeasure m = base;
    if (ell <= k) {
        m.tag = "sigma_{n," + std::to_string(k) + "}=sigma*_" + std::to_string(k);
        return m;
    }
    m.tag = "sigma_{n," + std::to_string(k) + "}=t*sigma*_" + std::to_string(k);
    for (std::size_t i = 0; i < m.size(); ++i) m.weights[i] *= m.nodes[i];
    return m;
}

MeasureBank::MeasureBank(const StarSystemConfig& cfg, int nodes)
    : cfg_(cfg), nodes_(nodes > 0 ? nodes : cfg.quad_nodes) {
    cfg_.validate();
    for (int k = 0; k < cfg_.p; ++k) base_.push_back(build_base_measure(cfg_, k, nodes_));
    for (int j = 0; j < cfg_.p; ++j) {
        nested_.emplace(std::make_pair(j, j), base_[j]);
        nested_.at({j, j}).tag = "mu_{" + std::to_string(j) + "," + std::to_string(j) + "}";
        for (int k = j - 1; k >= 0; --k)
            nested_.emplace(std::make_pair(k, j), nested_measure(base_[k], nested_.at({k + 1, j}), k, j));
    }
}

const DiscretizedMeasure& MeasureBank::nested(int k, int j) const {
    auto it = nested_.find({k, j});
    if (it == nested_.end()) throw InputError("nested measure requires 0 <= k <= j <= p-1");
    return it->second;
}

DiscretizedMeasure MeasureBank::varying(long n, int k) const {
    return varying_measure(base(k), n, k, cfg_.shape());
}

}  // namespace nikstar
