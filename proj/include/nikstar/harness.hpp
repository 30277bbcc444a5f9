// Experiment drivers: recurrence convergence, cross-validation against the
// surface, ratio asymptotics, the counting suite, and the verification
// report with its plot-data files.

#pragma once

#include "nikstar/limits.hpp"
#include "nikstar/measures.hpp"

#include <string>
#include <vector>

namespace nikstar {

struct CheckRecord {
    std::string name;
    std::string anchor;  // property family the check belongs to
    std::string measured;
    std::string tolerance;
    bool pass = false;
    std::string detail;  // witness or diagnostic, empty when clean
};

CheckRecord make_check(std::string name, std::string anchor, const Real& measured, const Real& tolerance,
                       bool pass);
/// pass = measured <= tolerance
CheckRecord make_check(std::string name, std::string anchor, const Real& measured, const Real& tolerance);

struct VerificationReport {
    std::string config_name;
    std::string config_digest;
    unsigned precision_bits = 0;
    int nodes = 0;
    int lambda_max = 0;
    std::vector<std::string> warnings;
    std::vector<CheckRecord> checks;

    bool all_pass() const;
    std::string to_json() const;
    static VerificationReport from_json(const std::string& text);
};

/// Precision needed for star indices up to n_max: the larger of the config
/// value and required_bits of the top degree. Appends a warning if raised.
unsigned working_bits(const StarSystemConfig& cfg, long n_max, std::vector<std::string>* warnings = nullptr);

struct ConvergenceRow {
    long n;
    long lambda;
    int rho;
    Real a;
};

struct LimitEstimate {
    int rho;
    Real estimate;        // a_{lambda_max p(p+1) + rho}
    Real last_increment;  // |a at lambda_max - a at lambda_max - 1|
    Real rate;            // algebraic decay order of the increments
    bool increments_monotone;  // |increment| decreasing over the last 5 periods
};

struct ConvergenceTable {
    int p = 2;
    int lambda_max = 0;
    unsigned bits = 0;
    Real max_residual;
    std::vector<ConvergenceRow> rows;  // n = p .. p(p+1)(lambda_max + 1) - 1
    std::vector<LimitEstimate> estimates;

    Real a(long n) const { return rows.at(n - p).a; }
};

/// Runs at working_bits; throws ConvergenceError naming n if precision runs out.
ConvergenceTable run_convergence(const StarSystemConfig& cfg, int lambda_max,
                                 std::vector<std::string>* warnings = nullptr);

struct CrossvalEntry {
    int rho;
    Real recurrence;
    Real surface;
    Real discrepancy;
    Real tolerance;  // max(10 tail increment, 1e-3)
    bool pass;
};

struct CrossvalResult {
    ConvergenceTable convergence;
    std::vector<CrossvalEntry> entries;
    std::vector<IdentityRecord> collision;  // surface side
    Real sum_rule_recurrence;               // max over rho
    Real sum_rule_surface;
};

CrossvalResult run_crossval(const StarSystemConfig& cfg, int lambda_max,
                            std::vector<std::string>* warnings = nullptr);

struct RatioDeviation {
    int lambda;
    int k;
    Real deviation;
};

/// Sup-norm deviation of computed ratios from their limits over the grid, in
/// the reduced variable tau = z^{p+1}; k = 0 compares Q_d, k >= 1 compares psi.
/// Throws DomainError for a grid point on a slit or at 0.
std::vector<RatioDeviation> run_ratio(const StarSystemConfig& cfg, int rho, const std::vector<int>& lambdas,
                                      const std::vector<Complex>& grid,
                                      std::vector<std::string>* warnings = nullptr);

/// Default grid: 10 points on |tau| = 1.5 S and 10 points on Im tau = 3/4.
std::vector<Complex> default_ratio_grid(const StarSystemConfig& cfg);
std::vector<Complex> read_grid(const std::string& path);

std::vector<CheckRecord> run_counting_suite(const std::vector<int>& p_list);

struct VerifyOptions {
    int lambda_max = 20;
    int n_struct = 60;  // structural MOP checks run for n <= n_struct
    std::string out_dir;  // empty: no files written
};

VerificationReport verify(const StarSystemConfig& cfg, const VerifyOptions& opt);

/// Merges every report JSON in dir into one deterministic document.
/// Throws InputError when the directory holds no report.
std::string emit_report(const std::string& dir);

}  // namespace nikstar
