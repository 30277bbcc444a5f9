#include "nikstar/errors.hpp"
#include "nikstar/harness.hpp"
#include "nikstar/mop.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace nikstar;

namespace {

struct Common {
    std::string config;
    unsigned bits = 0;  // 0: not given on the command line
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "configuration JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--precision-bits", c.bits, "working precision, overrides the config and environment");
}

StarSystemConfig load(const Common& c) {
    StarSystemConfig cfg = load_config(c.config);
    if (c.bits != 0) {
        cfg.precision_bits = c.bits;
    } else if (const char* env = std::getenv("NIKSTAR_PRECISION_BITS")) {
        try {
            cfg.precision_bits = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw InputError(std::string("NIKSTAR_PRECISION_BITS is not a number: ") + env);
        }
    }
    cfg.validate();
    return cfg;
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

void print_warnings(const std::vector<std::string>& w) {
    for (const auto& s : w) std::cerr << "warning: " << s << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nikishin systems on star-like sets: polynomials, recurrences and surface limits"};
    app.require_subcommand(1);

    Common vc;
    VerifyOptions vopt;
    auto* verify_cmd = app.add_subcommand("verify", "run every check and write the report");
    add_common(verify_cmd, vc);
    verify_cmd->add_option("--lambda-max", vopt.lambda_max, "periods used for the recurrence limits")
        ->check(CLI::Range(3, 1000));
    verify_cmd->add_option("--out", vopt.out_dir, "directory for report.json and plot data");

    Common mc;
    long mop_n = 0;
    std::string mop_out;
    auto* mop_cmd = app.add_subcommand("mop", "Q_d for one star index, with zeros");
    add_common(mop_cmd, mc);
    mop_cmd->add_option("--n", mop_n, "star index")->required()->check(CLI::NonNegativeNumber);
    mop_cmd->add_option("--out", mop_out, "output JSON");

    Common rc;
    long n_max = 0;
    std::string rec_out;
    auto* rec_cmd = app.add_subcommand("recurrence", "a_n for p <= n <= n_max as CSV");
    add_common(rec_cmd, rc);
    rec_cmd->add_option("--n-max", n_max, "largest index")->required();
    rec_cmd->add_option("--out", rec_out, "output CSV");

    Common sc;
    std::string surf_out;
    auto* surf_cmd = app.add_subcommand("surface", "uniformization, conformal maps and limit predictions");
    add_common(surf_cmd, sc);
    surf_cmd->add_option("--out", surf_out, "output JSON");

    Common ac;
    int rho = 0, ratio_lambda = 20;
    std::string grid_path, ratio_out;
    auto* ratio_cmd = app.add_subcommand("ratio", "ratio asymptotics deviation on a grid");
    add_common(ratio_cmd, ac);
    ratio_cmd->add_option("--rho", rho, "residue class of n mod p(p+1)")->required();
    ratio_cmd->add_option("--grid", grid_path, "CSV of re,im points (default grid if omitted)");
    ratio_cmd->add_option("--lambda-max", ratio_lambda, "largest period")->check(CLI::Range(1, 1000));
    ratio_cmd->add_option("--out", ratio_out, "output CSV");

    std::string rep_in, rep_out;
    auto* rep_cmd = app.add_subcommand("report", "merge verification reports in a directory");
    rep_cmd->add_option("--in", rep_in, "results directory")->required();
    rep_cmd->add_option("--out", rep_out, "output JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc_ = app.exit(e);
        return rc_ == 0 ? 0 : 2;
    }

    try {
        if (*verify_cmd) {
            const StarSystemConfig cfg = load(vc);
            const VerificationReport rep = verify(cfg, vopt);
            print_warnings(rep.warnings);
            int failed = 0;
            for (const auto& c : rep.checks) {
                if (!c.pass) {
                    ++failed;
                    std::cerr << "FAIL " << c.name << ": " << c.measured << " (tolerance " << c.tolerance << ")";
                    if (!c.detail.empty()) std::cerr << " " << c.detail;
                    std::cerr << '\n';
                }
            }
            std::cout << rep.checks.size() - failed << "/" << rep.checks.size() << " checks passed\n";
            if (vopt.out_dir.empty()) std::cout << rep.to_json();
            return rep.all_pass() ? 0 : 1;
        }
        if (*mop_cmd) {
            const StarSystemConfig cfg = load(mc);
            const long P = static_cast<long>(cfg.p) * (cfg.p + 1);
            PrecisionScope scope(working_bits(cfg, mop_n + P));
            const MeasureBank bank(cfg);
            const MopEngine eng(bank);
            nlohmann::json j = nlohmann::json::parse(polynomial_to_json(eng.Q(mop_n), eng.bits()));
            j["zeros"] = nlohmann::json::object();
            for (int k = 0; k < cfg.p; ++k) {
                std::vector<std::string> z;
                for (const auto& x : eng.psi_zeros(mop_n, k).zeros) z.push_back(to_decimal(x, 30));
                j["zeros"][std::to_string(k)] = z;
            }
            write_out(mop_out, j.dump(2) + "\n");
            return 0;
        }
        if (*rec_cmd) {
            StarSystemConfig cfg = load(rc);
            if (n_max < cfg.p) throw InputError("--n-max must be at least p");
            std::vector<std::string> warnings;
            PrecisionScope scope(working_bits(cfg, n_max, &warnings));
            print_warnings(warnings);
            const MeasureBank bank(cfg);
            const MopEngine eng(bank);
            const long P = static_cast<long>(cfg.p) * (cfg.p + 1);
            std::string csv = "n,lambda,rho,a_n\n";
            for (long n = cfg.p; n <= n_max; ++n) {
                Real a;
                try {
                    a = eng.a(n);
                } catch (const ConvergenceError& e) {
                    throw ConvergenceError("at n = " + std::to_string(n) + ": " + e.what());
                }
                csv += std::to_string(n) + "," + std::to_string(n / P) + "," + std::to_string(n % P) + "," +
                       to_decimal(a, 30) + "\n";
            }
            write_out(rec_out, csv);
            return 0;
        }
        if (*surf_cmd) {
            const StarSystemConfig cfg = load(sc);
            PrecisionScope scope(cfg.precision_bits);
            const Uniformization U = solve_uniformization(cfg);
            const LimitTable T = build_limit_table(U);
            const SurfaceCertificate cert = certify_surface(U, T.families);
            const auto ids = limit_identities(T);
            nlohmann::json j;
            j["surface"] = nlohmann::json::parse(surface_to_json(U, T.families));
            j["limits"] = nlohmann::json::parse(limit_table_to_json(T, ids));
            j["certificate_pass"] = cert.pass();
            write_out(surf_out, j.dump(2) + "\n");
            bool ok = cert.pass();
            for (const auto& r : ids) ok = ok && r.pass;
            return ok ? 0 : 1;
        }
        if (*ratio_cmd) {
            const StarSystemConfig cfg = load(ac);
            const std::vector<Complex> grid = grid_path.empty() ? default_ratio_grid(cfg) : read_grid(grid_path);
            std::vector<int> lams;
            for (int lam : {ratio_lambda / 2, (3 * ratio_lambda) / 4, ratio_lambda})
                if (lam >= 1 && (lams.empty() || lam != lams.back())) lams.push_back(lam);
            std::vector<std::string> warnings;
            const auto devs = run_ratio(cfg, rho, lams, grid, &warnings);
            print_warnings(warnings);
            std::string csv = "rho,lambda,k,deviation\n";
            for (const auto& d : devs)
                csv += std::to_string(rho) + "," + std::to_string(d.lambda) + "," + std::to_string(d.k) + "," +
                       to_decimal(d.deviation, 12) + "\n";
            write_out(ratio_out, csv);
            return 0;
        }
        if (*rep_cmd) {
            const std::string text = emit_report(rep_in);
            write_out(rep_out, text);
            return nlohmann::json::parse(text)["summary"]["failed"].get<int>() == 0 ? 0 : 1;
        }
    } catch (const CheckFailure& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return 1;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
