// Genus-zero (p+1)-sheeted surface glued along Delta_0, ..., Delta_{p-1}.
//
// The surface is uniformized by the rational map
//
//     z = R(w) = alpha w + beta + gamma / w + sum_j r_j / (w - q_j),  j = 1..p-1
//
// with gamma = 1. Its poles w = 0, q_1, ..., q_{p-1}, infinity are the points
// infinity^{(k)} of the sheets; critical points sit over the slit endpoints.
// Every conformal map with divisor infinity^{(l)} - infinity^{(0)} is then a
// Moebius function of w.

#pragma once

#include "nikstar/measures.hpp"

#include <string>
#include <vector>

namespace nikstar {

/// Event of the gluing walk along the real cycle of the surface.
struct WalkEvent {
    enum Kind { Critical, Pole } kind;
    int index;  // critical-point label (2k: a_k, 2k+1: b_k) or sheet number
    bool operator==(const WalkEvent& o) const { return kind == o.kind && index == o.index; }
};

/// The event sequence forced by the chain gluing of the given slits, starting
/// on sheet 0 at +infinity moving down and ending at the pole of sheet 0.
std::vector<WalkEvent> gluing_walk(const std::vector<Real>& endpoints, int p);
std::string describe(const std::vector<WalkEvent>& ev);

struct Uniformization {
    int p = 2;
    Real alpha, beta, gamma;
    std::vector<Real> q;  // q[j-1] = q_j
    std::vector<Real> r;
    std::vector<Real> crit;       // crit[2k] over a_k, crit[2k+1] over b_k
    std::vector<Real> endpoints;  // prescribed a_0, b_0, a_1, b_1, ...
    /// sheet_of_pole[0] for w = 0, [j] for q_j, [p] for w = infinity.
    std::vector<int> sheet_of_pole;
    Real newton_residual;
    unsigned precision_bits = 0;
    int homotopy_steps = 0;

    Real R(const Real& w) const;
    Complex R(const Complex& w) const;
    Real dR(const Real& w) const;
    Complex dR(const Complex& w) const;
    Real d2R(const Real& w) const;

    /// Pole index whose fibre point lies on `sheet`.
    int pole_of_sheet(int sheet) const;

    /// Preimages w_k(z), k = 0..p, of z on every sheet. For real z on a slit
    /// the boundary value from above (side = +1) or below (side = -1) is
    /// returned; at an exact slit endpoint both adjacent sheets get the
    /// critical point. side = 0 on a slit throws DomainError. Throws
    /// ConvergenceError on root-assignment ambiguity.
    std::vector<Complex> branches(const Complex& z, int side = +1) const;

    /// Real-axis order of critical points and poles in w, read as walk events.
    std::vector<WalkEvent> w_order() const;
};

/// Newton/homotopy solve; the result has passed branch_points_check.
Uniformization solve_uniformization(const StarSystemConfig& cfg);

/// Re-locates the critical points of U and returns max |R(w_i) - e_i|.
/// Throws CheckFailure when the real-axis order contradicts the gluing.
Real branch_points_check(const Uniformization& U);

/// phi^{(l)} normalized so that the branch product is +-1 and omega_l > 0.
struct ConformalFamily {
    const Uniformization* U = nullptr;
    int l = 1;
    Real lambda;
    Real omega;                 // omega_l
    std::vector<Real> omega_j;  // omega_{l,j}, j = 0..p (leading Laurent coefficients)
    int product_sign = 1;       // C in prod_k phi_k = C
    Real laurent_discrepancy;   // closed forms vs contour fit

    Complex phi_of_w(const Complex& w) const;
    /// phi_k^{(l)}(z) for all k at once.
    std::vector<Complex> phi(const Complex& z, int side = +1) const;
    Complex phi(int k, const Complex& z, int side = +1) const { return phi(z, side).at(k); }
};

ConformalFamily normalize_family(const Uniformization& U, int l);

/// Leading Laurent coefficients of phi_j^{(l)} at infinity from an M-point
/// trapezoidal contour fit on |z| = radius.
std::vector<Real> laurent_fit(const ConformalFamily& F, const Real& radius, int points = 32);
/// Points on |z| = 10 S needed so the aliasing error 10^{-N} stays below
/// the surface tolerance at the given precision.
int contour_points(unsigned bits);

/// Deterministic sample points with |Im z| >= 1/2, spread over the slit region.
std::vector<Complex> sample_points(const Uniformization& U, int count);

/// Residuals of every surface-side certificate. Tolerance is 2^{-bits/8}.
struct SurfaceCertificate {
    Real tolerance;
    Real newton_residual;
    Real branch_point_residual;
    Real preimage_residual;     // |R(w_k(z)) - z| / max(1, |z|)
    Real product_residual;      // |prod_k phi_k -+ 1|
    Real continuity_residual;   // phi_k(x + i0) vs phi_{k+1}(x - i0) on Delta_k
    Real conjugation_residual;  // phi_k(conj z) vs conj phi_k(z)
    Real laurent_discrepancy;
    bool walk_ok = false;
    bool sign_table_ok = false;
    std::string walk;

    bool pass() const;
};

SurfaceCertificate certify_surface(const Uniformization& U, const std::vector<ConformalFamily>& families,
                                   int points = 100);

std::string surface_to_json(const Uniformization& U, const std::vector<ConformalFamily>& families);

}  // namespace nikstar
