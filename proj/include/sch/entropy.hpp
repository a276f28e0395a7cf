#pragma once

// Renormalization family: the convex, linearly growing C^2 approximations
// S_ell of v^2/2, their positive/negative-part compositions, the power-growth
// entropy v(|v|+1)^alpha, the H-functions built from them, and the beta map.
// All maps are exact piecewise scalar functions; no tables, no interpolation.

#include <string>

#include "sch/grid.hpp"

namespace sch {
namespace entropy {

enum class Kind {
    Square,      // v^2/2
    SquarePos,   // (v_+)^2/2
    SquareNeg,   // (v_-)^2/2
    Sell,        // S_ell(v)
    SellPos,     // S_ell(v_+)
    SellNeg,     // S_ell(v_-)
    PowerAlpha,  // v(|v|+1)^alpha
};

struct Spec {
    Kind kind = Kind::Square;
    double ell = 1.0;    // used by Sell* kinds
    double alpha = 0.5;  // used by PowerAlpha

    static Spec square() { return {Kind::Square, 0.0, 0.0}; }
    static Spec square_pos() { return {Kind::SquarePos, 0.0, 0.0}; }
    static Spec square_neg() { return {Kind::SquareNeg, 0.0, 0.0}; }
    static Spec sell(double ell) { return {Kind::Sell, ell, 0.0}; }
    static Spec sell_pos(double ell) { return {Kind::SellPos, ell, 0.0}; }
    static Spec sell_neg(double ell) { return {Kind::SellNeg, ell, 0.0}; }
    static Spec power(double alpha) { return {Kind::PowerAlpha, 0.0, alpha}; }
};

/// Throws std::invalid_argument unless ell > 0 (Sell kinds) / alpha in (0,1).
void validate(const Spec& spec);

double s(const Spec& spec, double v);
double s_prime(const Spec& spec, double v);
/// Weak second derivative; at kinks the convention S''(v_pm) * 1_{|v_pm|>0}
/// applies, so e.g. s_second(SellPos, 0) = 0.
double s_second(const Spec& spec, double v);

/// Antiderivative int_0^v s(spec, xi) dxi in closed form.
double s_antiderivative(const Spec& spec, double v);

// H-functions, composed from s and s_prime
double h1(const Spec& spec, double v);  // 3S(v) - 2S'(v)v
double h2(const Spec& spec, double v);  // S(v)v - S'(v)v^2/2
double h3(const Spec& spec, double v);  // S(v) - S'(v)v

/// beta(v) = S_ell(v_pm)' * v;  positive = true selects the v_+ composition.
double beta(double ell, bool positive, double v);

struct PowerAlphaBundle {
    double s, s_prime, s_second;
};
/// S(v) = v(|v|+1)^alpha together with its first two derivatives
/// (sgn(0) = 0 so that S'' v^2 is continuous at the origin).
PowerAlphaBundle power_alpha_bundle(double alpha, double v);

/// Apply an entropy map over a whole field.
Field apply(const Spec& spec, const Field& f, double (*fn)(const Spec&, double));

// ---------------------------------------------------------------------------
// Closed-form reference expressions for the positive/negative-part family.
// These re-state the piecewise formulas independently of the compositional
// route above; the identity suite checks both ways agree to 1e-12.
// ---------------------------------------------------------------------------
namespace closed {

// positive part: indicator structure 1_{ell < v < 2 ell}, 1_{v >= 2 ell}
double sell_pos(double ell, double v);
double sell_pos_prime(double ell, double v);
double sell_pos_second(double ell, double v);
double sell_pos_h3(double ell, double v);        // S - S'v
double sell_pos_h1(double ell, double v);        // 3S - 2S'v
double sell_pos_h2(double ell, double v);        // Sv - S'v^2/2
double sell_pos_half_d2v2(double ell, double v); // S''v^2/2

// negative part: mirrored indicators
double sell_neg(double ell, double v);
double sell_neg_prime(double ell, double v);
double sell_neg_second(double ell, double v);
double sell_neg_h3(double ell, double v);
double sell_neg_h1(double ell, double v);
double sell_neg_h2(double ell, double v);
double sell_neg_half_d2v2(double ell, double v);

// combined-sign piecewise forms in terms of |v_pm|
double sell_pm_h3(double ell, bool positive, double v);
double sell_pm_h1(double ell, bool positive, double v);
double sell_pm_h2(double ell, bool positive, double v);

}  // namespace closed

/// One row of the identity-verification report.
struct IdentityCheck {
    std::string name;
    double max_abs_dev = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Cross-check every closed-form expression against compositional evaluation
/// on v in [-4 ell, 4 ell] (step ell/100), plus convexity, splitting,
/// C^1 continuity at the break points and the quadratic-growth bounds.
std::vector<IdentityCheck> identity_report(const std::vector<double>& ells, double tol = 1e-12);

}  // namespace entropy
}  // namespace sch
