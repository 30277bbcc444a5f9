#include "nikstar/harness.hpp"

#include "nikstar/counting.hpp"
#include "nikstar/errors.hpp"
#include "nikstar/mop.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace nikstar {

using boost::multiprecision::abs;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string sci(const Real& v, int digits = 6) {
    return to_decimal(v, digits);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

bool on_slit(const StarSystemConfig& cfg, const Complex& z) {
    if (z.im != 0) return false;
    for (int k = 0; k < cfg.p; ++k)
        if (z.re >= cfg.a(k) && z.re <= cfg.b(k)) return true;
    return false;
}

}  // namespace

CheckRecord make_check(std::string name, std::string anchor, const Real& measured, const Real& tolerance,
                       bool pass) {
    return {std::move(name), std::move(anchor), sci(measured), sci(tolerance), pass, {}};
}

CheckRecord make_check(std::string name, std::string anchor, const Real& measured, const Real& tolerance) {
    return make_check(std::move(name), std::move(anchor), measured, tolerance, measured <= tolerance);
}

// ---------------------------------------------------------------------------
// Report

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

std::string VerificationReport::to_json() const {
    json j;
    j["config"] = {{"name", config_name}, {"digest", config_digest}};
    j["metadata"] = {{"precision_bits", precision_bits}, {"nodes", nodes}, {"lambda_max", lambda_max}};
    j["warnings"] = warnings;
    j["checks"] = json::array();
    int passed = 0;
    for (const auto& c : checks) {
        json r = {{"name", c.name},
                  {"anchor", c.anchor},
                  {"measured", c.measured},
                  {"tolerance", c.tolerance},
                  {"pass", c.pass}};
        if (!c.detail.empty()) r["detail"] = c.detail;
        j["checks"].push_back(r);
        passed += c.pass;
    }
    j["summary"] = {{"total", checks.size()},
                    {"passed", passed},
                    {"failed", static_cast<int>(checks.size()) - passed}};
    return j.dump(2) + "\n";
}

VerificationReport VerificationReport::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.contains("config") || !j.contains("checks")) throw InputError("not a verification report");
    VerificationReport r;
    r.config_name = j["config"].value("name", "");
    r.config_digest = j["config"].value("digest", "");
    if (j.contains("metadata")) {
        r.precision_bits = j["metadata"].value("precision_bits", 0u);
        r.nodes = j["metadata"].value("nodes", 0);
        r.lambda_max = j["metadata"].value("lambda_max", 0);
    }
    if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
    for (const auto& c : j["checks"])
        r.checks.push_back({c.value("name", ""), c.value("anchor", ""), c.value("measured", ""),
                            c.value("tolerance", ""), c.value("pass", false), c.value("detail", "")});
    return r;
}

// ---------------------------------------------------------------------------
// Convergence and cross-validation

unsigned working_bits(const StarSystemConfig& cfg, long n_max, std::vector<std::string>* warnings) {
    const int d_max = static_cast<int>((n_max + 1) / (cfg.p + 1));
    const unsigned need = required_bits(d_max);
    if (need <= cfg.precision_bits) return cfg.precision_bits;
    if (warnings)
        warnings->push_back("precision raised from " + std::to_string(cfg.precision_bits) + " to " +
                            std::to_string(need) + " bits for degree " + std::to_string(d_max));
    return need;
}

ConvergenceTable run_convergence(const StarSystemConfig& cfg, int lambda_max, std::vector<std::string>* warnings) {
    if (lambda_max < 3) throw InputError("lambda_max must be >= 3");
    const int p = cfg.p;
    const long P = static_cast<long>(p) * (p + 1);
    const long n_max = P * (lambda_max + 1) - 1;
    ConvergenceTable t;
    t.p = p;
    t.lambda_max = lambda_max;
    t.bits = working_bits(cfg, n_max, warnings);

    PrecisionScope scope(t.bits);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    t.max_residual = 0;
    for (long n = p; n <= n_max; ++n) {
        try {
            const RecurrenceValue& r = eng.recurrence(n);
            t.rows.push_back({n, n / P, static_cast<int>(n % P), r.a});
            t.max_residual = std::max(t.max_residual, r.residual);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("run_convergence stopped at n = " + std::to_string(n) + ": " + e.what());
        }
    }

    for (int rho = 0; rho < P; ++rho) {
        LimitEstimate e;
        e.rho = rho;
        e.estimate = t.a(lambda_max * P + rho);
        std::vector<Real> inc;  // |increments| for lambda = lambda_max-4 .. lambda_max
        for (int lam = std::max(1, lambda_max - 4); lam <= lambda_max; ++lam) {
            const long n0 = (lam - 1) * P + rho;
            if (n0 < p) continue;
            inc.push_back(abs(t.a(lam * P + rho) - t.a(n0)));
        }
        e.last_increment = inc.back();
        e.increments_monotone = true;
        for (std::size_t i = 1; i < inc.size(); ++i)
            if (!(inc[i] < inc[i - 1])) e.increments_monotone = false;
        e.rate = 0;
        if (inc.size() >= 2 && inc.back() > 0 && inc[inc.size() - 2] > 0)
            e.rate = log(inc[inc.size() - 2] / inc.back()) / log(Real(lambda_max) / (lambda_max - 1));
        t.estimates.push_back(e);
    }
    return t;
}

CrossvalResult run_crossval(const StarSystemConfig& cfg, int lambda_max, std::vector<std::string>* warnings) {
    CrossvalResult r;
    r.convergence = run_convergence(cfg, lambda_max, warnings);
    const int p = cfg.p;
    const long P = static_cast<long>(p) * (p + 1);

    PrecisionScope scope(r.convergence.bits);
    const Uniformization U = solve_uniformization(cfg);
    const LimitTable T = build_limit_table(U);
    for (const auto& e : r.convergence.estimates) {
        CrossvalEntry c;
        c.rho = e.rho;
        c.recurrence = e.estimate;
        c.surface = T.a(e.rho);
        c.discrepancy = abs(c.recurrence - c.surface);
        c.tolerance = std::max(Real(10 * e.last_increment), Real("1e-3"));
        c.pass = c.discrepancy <= c.tolerance;
        r.entries.push_back(c);
    }
    r.collision = zero_at_origin_collision(T, cfg);
    auto est = [&](long rho) { return r.convergence.estimates[counting::mod(rho, P)].estimate; };
    r.sum_rule_recurrence = 0;
    r.sum_rule_surface = 0;
    for (long rho = 0; rho < P; ++rho) {
        Real lr = 0, rr = 0, ls = 0, rs = 0;
        for (long i = rho; i <= rho + p - 1; ++i) lr += est(i), ls += T.a(i);
        for (long i = rho + p + 1; i <= rho + 2 * p; ++i) rr += est(i), rs += T.a(i);
        r.sum_rule_recurrence = std::max(r.sum_rule_recurrence, Real(abs(lr - rr)));
        r.sum_rule_surface = std::max(r.sum_rule_surface, Real(abs(ls - rs)));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Ratio asymptotics

std::vector<Complex> default_ratio_grid(const StarSystemConfig& cfg) {
    Real S = 1;
    for (int k = 0; k < cfg.p; ++k) S = std::max({S, Real(abs(cfg.a(k))), Real(abs(cfg.b(k)))});
    std::vector<Complex> g;
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    for (int m = 0; m < 10; ++m) {
        const Real th = two_pi * (m + Real("0.5")) / 10;
        g.emplace_back(Real("1.5") * S * cos(th), Real("1.5") * S * sin(th));
    }
    for (int m = 0; m < 10; ++m) g.emplace_back(-(S + 1) + 2 * (S + 1) * (m + Real("0.5")) / 10, Real("0.75"));
    return g;
}

std::vector<Complex> read_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open grid file " + path);
    std::vector<Complex> g;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        const std::string re = line.substr(0, comma);
        const std::string im = comma == std::string::npos ? "0" : line.substr(comma + 1);
        try {
            g.emplace_back(Real(re), Real(im));
        } catch (const std::exception&) {
            if (g.empty()) continue;  // header line
            throw InputError("bad grid line: " + line);
        }
    }
    if (g.empty()) throw InputError("grid file has no points");
    return g;
}

std::vector<RatioDeviation> run_ratio(const StarSystemConfig& cfg, int rho, const std::vector<int>& lambdas,
                                      const std::vector<Complex>& grid, std::vector<std::string>* warnings) {
    const int p = cfg.p;
    const long P = static_cast<long>(p) * (p + 1);
    if (rho < 0 || rho >= P) throw InputError("rho must be in [0, p(p+1))");
    if (lambdas.empty()) throw InputError("run_ratio needs at least one lambda");
    for (const auto& z : grid)
        if ((z.re == 0 && z.im == 0) || on_slit(cfg, z))
            throw DomainError("ratio grid point on a slit or at the origin");
    const int lam_top = *std::max_element(lambdas.begin(), lambdas.end());
    const unsigned bits = working_bits(cfg, lam_top * P + rho + 1, warnings);

    PrecisionScope scope(bits);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const Uniformization U = solve_uniformization(cfg);
    const LimitTable T = build_limit_table(U);
    std::vector<LimitPoint> pts;
    std::vector<Complex> zs;
    for (const auto& z0 : grid) {
        zs.emplace_back(Real(z0.re), Real(z0.im));
        pts.emplace_back(T, zs.back());
    }
    const bool top = rho % (p + 1) == p;

    std::vector<RatioDeviation> out;
    for (int lam : lambdas) {
        const long n = lam * P + rho;
        if (n < p) throw InputError("lambda too small for this rho");
        for (int k = 0; k <= p; ++k) {
            Real dev = 0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const Complex& tau = zs[i];
                Complex got, want;
                if (k == 0) {
                    got = eng.Q(n + 1)(tau) / eng.Q(n)(tau);
                    want = pts[i].F_tilde(rho, 0);
                } else {
                    got = eng.psi(n + 1)(k, tau) / eng.psi(n)(k, tau);
                    want = pts[i].eta(rho, k);
                    if (top) want *= tau;
                }
                dev = std::max(dev, Real(abs(got - want)));
            }
            out.push_back({lam, k, dev});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Counting

std::vector<CheckRecord> run_counting_suite(const std::vector<int>& p_list) {
    std::vector<CheckRecord> out;
    for (int p : p_list) {
        const auto w = counting::verify_identities(p, 2);
        CheckRecord c = make_check("counting identities p=" + std::to_string(p), "counting",
                                   Real(static_cast<long>(w.size())), Real(0));
        if (!w.empty()) {
            std::ostringstream os;
            os << w.front().identity << " at n=" << w.front().n << " k=" << w.front().k;
            if (!w.front().detail.empty()) os << " (" << w.front().detail << ")";
            c.detail = os.str();
        }
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Full verification

namespace {

// Six (n, k) pairs with n = k mod p and n >= 2p.
std::vector<std::pair<long, int>> k_norm_pairs(int p) {
    std::vector<std::pair<long, int>> out;
    for (long m : {6L, 7L, 15L})
        for (int k = 0; k < p && out.size() < 6; ++k) out.emplace_back(m * p + k, k);
    return out;
}

void structural_checks(const StarSystemConfig& cfg, int n_struct, VerificationReport& rep, std::ostream& zeros_csv) {
    const int p = cfg.p;
    PrecisionScope scope(cfg.precision_bits);
    const MeasureBank bank(cfg);
    const MopEngine eng(bank);
    const Real tol = eng.tolerance();

    long bad_square = -1;
    Real orth = 0;
    for (long n = 0; n <= n_struct + 1; ++n) {
        try {
            orth = std::max(orth, eng.Q(n).orth_residual);
        } catch (const CheckFailure&) {
            if (bad_square < 0) bad_square = n;
        }
    }
    CheckRecord sq = make_check("MOP systems square", "orthogonality", Real(bad_square < 0 ? 0 : 1), Real(0));
    if (bad_square >= 0) sq.detail = "first failure at n=" + std::to_string(bad_square);
    rep.checks.push_back(sq);
    rep.checks.push_back(make_check("orthogonality residual n<=" + std::to_string(n_struct), "orthogonality", orth, tol));

    Real rres = 0, amin = -1;
    for (long n = p; n <= n_struct; ++n) {
        const RecurrenceValue& r = eng.recurrence(n);
        rres = std::max(rres, r.residual);
        if (amin < 0 || r.a < amin) amin = r.a;
    }
    rep.checks.push_back(make_check("recurrence residual", "recurrence", rres, tol));
    rep.checks.push_back(make_check("a_n positive (min a_n)", "recurrence", amin, Real(0), amin > 0));

    // zeros of Q_d on Delta_0 and of psi_{n,k} on Delta_k
    long zero_fail = -1, inter_fail = -1;
    std::vector<Real> prev;
    for (long n = 0; n <= n_struct; ++n) {
        try {
            for (int k = 0; k < p; ++k) {
                const ZeroSet zs = eng.psi_zeros(n, k);
                for (std::size_t i = 0; i < zs.zeros.size(); ++i)
                    zeros_csv << n << ',' << k << ',' << i << ',' << to_decimal(zs.zeros[i], 20) << '\n';
                if (k == 0) {
                    if (static_cast<long>(zs.zeros.size()) != eng.Q(n).d && zero_fail < 0) zero_fail = n;
                    if (n > 0 && !interlace(prev, zs.zeros) && inter_fail < 0) inter_fail = n;
                    prev = zs.zeros;
                }
            }
        } catch (const CheckFailure&) {
            if (zero_fail < 0) zero_fail = n;
        }
    }
    CheckRecord zc = make_check("zeros simple and on Delta_k", "zeros", Real(zero_fail < 0 ? 0 : 1), Real(0));
    if (zero_fail >= 0) zc.detail = "first failure at n=" + std::to_string(zero_fail);
    rep.checks.push_back(zc);
    CheckRecord ic = make_check("consecutive zero interlacing", "zeros", Real(inter_fail < 0 ? 0 : 1), Real(0));
    if (inter_fail >= 0) ic.detail = "first failure between n=" + std::to_string(inter_fail - 1) + " and n=" +
                                     std::to_string(inter_fail);
    rep.checks.push_back(ic);

    Real psi_orth = 0;
    for (long n : {long(n_struct / 2), long(n_struct / 2 + 1)})
        for (int k = 1; k < p; ++k) psi_orth = std::max(psi_orth, eng.psi_orthogonality_residual(n, k));
    rep.checks.push_back(make_check("psi orthogonality residual", "second kind", psi_orth, tol));

    Real kn = 0;
    std::string worst;
    for (const auto& [n, k] : k_norm_pairs(p)) {
        const KNormResult r = eng.k_norm_check(n, k);
        if (r.residual >= kn) {
            kn = r.residual;
            worst = "n=" + std::to_string(n) + " k=" + std::to_string(k);
        }
    }
    CheckRecord kc = make_check("K-norm identity (6 pairs)", "second kind", kn, Real("1e-10"));
    kc.detail = "largest at " + worst;
    rep.checks.push_back(kc);
}

}  // namespace

VerificationReport verify(const StarSystemConfig& cfg, const VerifyOptions& opt) {
    cfg.validate();
    const int p = cfg.p;
    const long P = static_cast<long>(p) * (p + 1);
    VerificationReport rep;
    rep.config_name = cfg.name;
    rep.config_digest = cfg.digest();
    rep.precision_bits = cfg.precision_bits;
    rep.nodes = cfg.quad_nodes;
    rep.lambda_max = opt.lambda_max;

    std::ostringstream zeros_csv, an_csv, ratio_csv;
    zeros_csv << "n,k,index,zero\n";
    an_csv << "n,lambda,rho,a_n\n";
    ratio_csv << "rho,lambda,k,deviation\n";

    for (auto& c : run_counting_suite({2, 3, 4})) rep.checks.push_back(c);
    structural_checks(cfg, opt.n_struct, rep, zeros_csv);

    // recurrence limits against the surface
    const CrossvalResult cv = run_crossval(cfg, opt.lambda_max, &rep.warnings);
    for (const auto& r : cv.convergence.rows)
        an_csv << r.n << ',' << r.lambda << ',' << r.rho << ',' << to_decimal(r.a, 30) << '\n';
    bool mono = true;
    std::string nonmono;
    for (const auto& e : cv.convergence.estimates)
        if (!e.increments_monotone) mono = false, nonmono += " rho=" + std::to_string(e.rho);
    CheckRecord mc = make_check("increments decrease over last 5 periods", "recurrence limits",
                                Real(mono ? 0 : 1), Real(0));
    mc.detail = nonmono;
    rep.checks.push_back(mc);
    for (const auto& e : cv.entries) {
        CheckRecord c = make_check("a(" + std::to_string(e.rho) + ") recurrence vs surface", "recurrence limits",
                                   e.discrepancy, e.tolerance, e.pass);
        if (!e.pass) {
            // diagnostic only: first-order extrapolation for 1/lambda tails
            const int L = opt.lambda_max;
            const Real ext = 2 * cv.convergence.a(L * P + e.rho) - cv.convergence.a((L / 2) * P + e.rho);
            c.detail = "2a(L)-a(L/2) is off by " + sci(abs(ext - e.surface), 3);
        }
        rep.checks.push_back(c);
    }
    rep.checks.push_back(make_check("sum rule (recurrence side)", "recurrence limits", cv.sum_rule_recurrence,
                                    Real("1e-3")));

    // surface certificate and limit identities at the configured precision
    std::unique_ptr<PrecisionScope> scope = std::make_unique<PrecisionScope>(cfg.precision_bits);
    const Uniformization U = solve_uniformization(cfg);
    const LimitTable T = build_limit_table(U);
    const SurfaceCertificate sc = certify_surface(U, T.families);
    const Real st = sc.tolerance;
    rep.checks.push_back(make_check("uniformization Newton residual", "uniformization", sc.newton_residual, st));
    rep.checks.push_back(make_check("branch points", "uniformization", sc.branch_point_residual, st));
    CheckRecord wc = make_check("gluing walk", "uniformization", Real(sc.walk_ok ? 0 : 1), Real(0));
    wc.detail = sc.walk;
    rep.checks.push_back(wc);
    rep.checks.push_back(make_check("preimages R(w) = z", "uniformization", sc.preimage_residual, st));
    rep.checks.push_back(make_check("branch product +-1", "conformal maps", sc.product_residual, st));
    rep.checks.push_back(make_check("slit continuity", "conformal maps", sc.continuity_residual, st));
    rep.checks.push_back(make_check("conjugation symmetry", "conformal maps", sc.conjugation_residual, st));
    rep.checks.push_back(make_check("sign table at infinity", "conformal maps", Real(sc.sign_table_ok ? 0 : 1), Real(0)));
    rep.checks.push_back(make_check("Laurent coefficients vs contour fit", "conformal maps", sc.laurent_discrepancy, st));
    const std::vector<IdentityRecord> ids = limit_identities(T);
    for (const auto& r : ids) rep.checks.push_back(make_check(r.name, "limit identities", r.residual, r.tolerance, r.pass));
    for (const auto& r : zero_at_origin_collision(T, cfg))
        rep.checks.push_back(make_check(r.name, "origin collision", r.residual, r.tolerance, r.pass));

    Real bv = 0, neg = -1;
    for (long rho = 0; rho < std::min(3L, P); ++rho) {
        Real probe = 0;
        for (int k = 0; k < p; ++k) {
            const std::vector<LimitPoint> grid = boundary_grid(T, k);
            bv = std::max(bv, boundary_constancy_check(T, grid, rho, k));
            probe = std::max(probe, boundary_constancy_check(T, grid, rho, k, Real("1.01")));
        }
        if (neg < 0 || probe < neg) neg = probe;
    }
    rep.checks.push_back(make_check("boundary constancy rho<=2", "boundary equations", bv, Real("1e-8")));
    rep.checks.push_back(make_check("boundary control: a perturbed by 1%", "boundary equations", neg, Real("1e-3"),
                                    neg > Real("1e-3")));

    Real drift = 0;
    {
        PrecisionScope twice(2 * cfg.precision_bits);
        const Uniformization U2 = solve_uniformization(cfg);
        const LimitTable T2 = build_limit_table(U2);
        for (long rho = 0; rho < P; ++rho) drift = std::max(drift, Real(abs(T2.a(rho) - T.a(rho)) / T.a(rho)));
    }
    rep.checks.push_back(make_check("a predictions stable under precision doubling", "precision", drift,
                                    Real("1e-10")));
    const std::string surface_json = surface_to_json(U, T.families);
    const std::string limits_json = limit_table_to_json(T, ids);
    scope.reset();

    // ratio asymptotics
    std::vector<int> lams;
    for (int lam : {opt.lambda_max / 2, (3 * opt.lambda_max) / 4, opt.lambda_max})
        if (lam >= 1 && (lams.empty() || lam != lams.back())) lams.push_back(lam);
    const std::vector<Complex> grid = default_ratio_grid(cfg);
    for (long rho : {0L, static_cast<long>(p), P - 1}) {
        const auto devs = run_ratio(cfg, static_cast<int>(rho), lams, grid, &rep.warnings);
        for (int k = 0; k <= p; ++k) {
            Real last = 0;
            bool decreasing = true;
            Real prev = -1;
            for (const auto& d : devs) {
                if (d.k != k) continue;
                ratio_csv << rho << ',' << d.lambda << ',' << k << ',' << to_decimal(d.deviation, 12) << '\n';
                if (prev >= 0 && !(d.deviation < prev)) decreasing = false;
                prev = d.deviation;
                last = d.deviation;
            }
            CheckRecord rc = make_check("ratio limit rho=" + std::to_string(rho) + " k=" + std::to_string(k),
                                        "ratio asymptotics", last, Real("1e-2"), last <= Real("1e-2") && decreasing);
            if (!decreasing) rc.detail = "deviation not decreasing in lambda";
            rep.checks.push_back(rc);
        }
    }
    std::sort(rep.warnings.begin(), rep.warnings.end());
    rep.warnings.erase(std::unique(rep.warnings.begin(), rep.warnings.end()), rep.warnings.end());

    if (!opt.out_dir.empty()) {
        const fs::path dir(opt.out_dir);
        fs::create_directories(dir);
        write_file(dir / "report.json", rep.to_json());
        write_file(dir / "a_n.csv", an_csv.str());
        write_file(dir / "ratio.csv", ratio_csv.str());
        write_file(dir / "zeros.csv", zeros_csv.str());
        write_file(dir / "surface.json", surface_json + "\n");
        write_file(dir / "limits.json", limits_json + "\n");
    }
    return rep;
}

std::string emit_report(const std::string& dir) {
    if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    json out;
    out["reports"] = json::array();
    int total = 0, passed = 0;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        VerificationReport r;
        try {
            r = VerificationReport::from_json(ss.str());
        } catch (const InputError&) {
            continue;  // plot data or surface dumps
        }
        json j = json::parse(r.to_json());
        j["source"] = fs::relative(f, dir).generic_string();
        out["reports"].push_back(j);
        total += static_cast<int>(r.checks.size());
        for (const auto& c : r.checks) passed += c.pass;
    }
    if (out["reports"].empty()) throw InputError("no verification reports found in " + dir);
    out["summary"] = {{"reports", out["reports"].size()}, {"total", total}, {"passed", passed},
                      {"failed", total - passed}};
    return out.dump(2) + "\n";
}

}  // namespace nikstar
