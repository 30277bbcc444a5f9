// Generating measures on the real intervals, the nested measures mu_{k,j}
// built by iterated Cauchy transforms, and the varying measures sigma_{n,k}.
//
// The user supplies each push-forward measure sigma*_k directly as a Jacobi
// type density on Delta_k = [a_k, b_k]:
//
//     w(t) = (t - a_k)^alpha (b_k - t)^beta * poly(t)
//
// and every measure is discretized on the Gauss-Jacobi nodes of that density.

#pragma once

#include "nikstar/counting.hpp"
#include "nikstar/precision.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nikstar {

/// Numbers are kept as decimal strings so they can be re-read at any precision.
struct WeightSpec {
    std::string alpha = "0";
    std::string beta = "0";
    std::vector<std::string> poly{"1"};  // ascending powers of t
};

struct IntervalSpec {
    std::string a;
    std::string b;
};

struct StarSystemConfig {
    std::string name;
    int p = 2;
    std::vector<IntervalSpec> intervals;
    std::vector<WeightSpec> weights;
    unsigned precision_bits = 256;
    int quad_nodes = 128;

    /// Throws InputError on any violated invariant.
    void validate() const;
    counting::SystemShape shape() const { return counting::SystemShape(p); }

    /// Endpoint values at the current default precision.
    Real a(int k) const { return Real(intervals.at(k).a); }
    Real b(int k) const { return Real(intervals.at(k).b); }
    /// Stable textual digest of the configuration (used in reports).
    std::string digest() const;
};

StarSystemConfig parse_config(const std::string& json_text);
StarSystemConfig load_config(const std::string& path);
std::string config_to_json(const StarSystemConfig& cfg);

/// Gauss-Jacobi rule for (1-x)^a (1+x)^b on [-1, 1] at the current precision.
/// Nodes are increasing.
struct GaussRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};
GaussRule gauss_jacobi(int n, const Real& a, const Real& b);

/// Signed quadrature representation of a measure on one interval.
struct DiscretizedMeasure {
    int interval_id = 0;
    Real lo;  // closed support interval [lo, hi]
    Real hi;
    std::vector<Real> nodes;
    std::vector<Real> weights;
    std::string tag;

    std::size_t size() const { return nodes.size(); }
    Real mass() const;
    /// +1 / -1 if every weight has that sign, 0 otherwise.
    int weight_sign() const;
};

/// Quadrature approximation of int dm(t) / (x - t). Throws DomainError when
/// x lies on the closed support interval.
Real cauchy_transform(const DiscretizedMeasure& m, const Real& x);
Complex cauchy_transform(const DiscretizedMeasure& m, const Complex& x);

/// [int t^s dm(t)] for s = 0..s_max.
std::vector<Real> moments(const DiscretizedMeasure& m, int s_max);

/// sigma*_k with `nodes` points (defaults to config.quad_nodes).
DiscretizedMeasure build_base_measure(const StarSystemConfig& cfg, int k, int nodes = 0);

/// Immutable set of all measures of one configuration at one precision.
///
/// Everything is built in the constructor, so a const MeasureBank can be
/// shared freely between threads.
class MeasureBank {
public:
    explicit MeasureBank(const StarSystemConfig& cfg, int nodes = 0);

    const StarSystemConfig& config() const { return cfg_; }
    int p() const { return cfg_.p; }
    int nodes() const { return nodes_; }

    const DiscretizedMeasure& base(int k) const { return base_.at(k); }
    /// mu_{k,j}, 0 <= k <= j <= p-1.
    const DiscretizedMeasure& nested(int k, int j) const;
    /// sigma_{n,k}: sigma*_k if ell(n) <= k, else t dsigma*_k.
    DiscretizedMeasure varying(long n, int k) const;

private:
    StarSystemConfig cfg_;
    int nodes_;
    std::vector<DiscretizedMeasure> base_;
    std::map<std::pair<int, int>, DiscretizedMeasure> nested_;
};

/// Builds mu_{k,j} from sigma*_k and an already-built mu_{k+1,j}.
DiscretizedMeasure nested_measure(const DiscretizedMeasure& outer_base,
                                  const DiscretizedMeasure& inner, int k, int j);

/// sigma_{n,k} from sigma*_k.
DiscretizedMeasure varying_measure(const DiscretizedMeasure& base, long n, int k,
                                   const counting::SystemShape& shape);

}  // namespace nikstar
