#include "sch/entropy.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace sch {
namespace entropy {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
double pos(double v) { return v > 0.0 ? v : 0.0; }
double neg(double v) { return v < 0.0 ? v : 0.0; }

// base family S_ell and derivatives
double sell(double ell, double v) {
    const double a = std::abs(v);
    if (a <= ell) return 0.5 * v * v;
    if (a < 2.0 * ell) return -a * a * a / (6.0 * ell) + v * v - 0.5 * ell * a + ell * ell / 6.0;
    return 1.5 * ell * a - 7.0 / 6.0 * ell * ell;
}

double sell_prime(double ell, double v) {
    const double a = std::abs(v);
    if (a <= ell) return v;
    if (a < 2.0 * ell) return sgn(v) * (2.0 * a - v * v / (2.0 * ell) - 0.5 * ell);
    return 1.5 * sgn(v) * ell;
}

double sell_second(double ell, double v) {
    const double a = std::abs(v);
    if (a <= ell) return 1.0;
    if (a < 2.0 * ell) return (2.0 * ell - a) / ell;
    return 0.0;
}

// int_0^s S_ell, s >= 0
double sell_anti_abs(double ell, double s) {
    if (s <= ell) return s * s * s / 6.0;
    const double mid = [&](double t) {
        return -t * t * t * t / (24.0 * ell) + t * t * t / 3.0 - ell * t * t / 4.0 + ell * ell * t / 6.0;
    }(std::min(s, 2.0 * ell));
    if (s < 2.0 * ell) return mid - ell * ell * ell / 24.0;
    return 0.75 * ell * s * s - 7.0 / 6.0 * ell * ell * s + 5.0 / 8.0 * ell * ell * ell;
}

double power_anti_abs(double alpha, double s) {
    const double w = s + 1.0;
    const double at1 = 1.0 / (alpha + 2.0) - 1.0 / (alpha + 1.0);
    return std::pow(w, alpha + 2.0) / (alpha + 2.0) - std::pow(w, alpha + 1.0) / (alpha + 1.0) - at1;
}

}  // namespace

void validate(const Spec& spec) {
    switch (spec.kind) {
        case Kind::Sell:
        case Kind::SellPos:
        case Kind::SellNeg:
            if (!(spec.ell > 0.0)) throw std::invalid_argument("entropy: ell must be positive");
            break;
        case Kind::PowerAlpha:
            if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
                throw std::invalid_argument("entropy: alpha must lie in (0,1)");
            break;
        default:
            break;
    }
}

double s(const Spec& spec, double v) {
    switch (spec.kind) {
        case Kind::Square: return 0.5 * v * v;
        case Kind::SquarePos: { const double p = pos(v); return 0.5 * p * p; }
        case Kind::SquareNeg: { const double m = neg(v); return 0.5 * m * m; }
        case Kind::Sell: validate(spec); return sell(spec.ell, v);
        case Kind::SellPos: validate(spec); return sell(spec.ell, pos(v));
        case Kind::SellNeg: validate(spec); return sell(spec.ell, neg(v));
        case Kind::PowerAlpha: validate(spec); return v * std::pow(std::abs(v) + 1.0, spec.alpha);
    }
    throw std::invalid_argument("entropy: unknown kind");
}

double s_prime(const Spec& spec, double v) {
    switch (spec.kind) {
        case Kind::Square: return v;
        case Kind::SquarePos: return pos(v);
        case Kind::SquareNeg: return neg(v);
        case Kind::Sell: validate(spec); return sell_prime(spec.ell, v);
        case Kind::SellPos: validate(spec); return sell_prime(spec.ell, pos(v));
        case Kind::SellNeg: validate(spec); return sell_prime(spec.ell, neg(v));
        case Kind::PowerAlpha: {
            validate(spec);
            const double a = std::abs(v), al = spec.alpha;
            return std::pow(a + 1.0, al) + al * a * std::pow(a + 1.0, al - 1.0);
        }
    }
    throw std::invalid_argument("entropy: unknown kind");
}

double s_second(const Spec& spec, double v) {
    switch (spec.kind) {
        case Kind::Square: return 1.0;
        case Kind::SquarePos: return v > 0.0 ? 1.0 : 0.0;
        case Kind::SquareNeg: return v < 0.0 ? 1.0 : 0.0;
        case Kind::Sell: validate(spec); return sell_second(spec.ell, v);
        case Kind::SellPos: validate(spec); return v > 0.0 ? sell_second(spec.ell, v) : 0.0;
        case Kind::SellNeg: validate(spec); return v < 0.0 ? sell_second(spec.ell, v) : 0.0;
        case Kind::PowerAlpha: {
            validate(spec);
            const double a = std::abs(v), al = spec.alpha;
            return al * sgn(v) * std::pow(a + 1.0, al - 2.0) * (2.0 + (al + 1.0) * a);
        }
    }
    throw std::invalid_argument("entropy: unknown kind");
}

double s_antiderivative(const Spec& spec, double v) {
    switch (spec.kind) {
        case Kind::Square: return v * v * v / 6.0;
        case Kind::SquarePos: return v > 0.0 ? v * v * v / 6.0 : 0.0;
        case Kind::SquareNeg: return v < 0.0 ? v * v * v / 6.0 : 0.0;
        case Kind::Sell: validate(spec); return sgn(v) * sell_anti_abs(spec.ell, std::abs(v));
        case Kind::SellPos: validate(spec); return v > 0.0 ? sell_anti_abs(spec.ell, v) : 0.0;
        case Kind::SellNeg: validate(spec); return v < 0.0 ? -sell_anti_abs(spec.ell, -v) : 0.0;
        case Kind::PowerAlpha: validate(spec); return power_anti_abs(spec.alpha, std::abs(v));
    }
    throw std::invalid_argument("entropy: unknown kind");
}

double h1(const Spec& spec, double v) { return 3.0 * s(spec, v) - 2.0 * s_prime(spec, v) * v; }
double h2(const Spec& spec, double v) { return s(spec, v) * v - 0.5 * s_prime(spec, v) * v * v; }
double h3(const Spec& spec, double v) { return s(spec, v) - s_prime(spec, v) * v; }

double beta(double ell, bool positive, double v) {
    return s_prime(positive ? Spec::sell_pos(ell) : Spec::sell_neg(ell), v) * v;
}

PowerAlphaBundle power_alpha_bundle(double alpha, double v) {
    Spec spec = Spec::power(alpha);
    return {s(spec, v), s_prime(spec, v), s_second(spec, v)};
}

Field apply(const Spec& spec, const Field& f, double (*fn)(const Spec&, double)) {
    Field out(f.grid_ptr());
    for (int j = 0; j < f.size(); ++j) out[j] = fn(spec, f[j]);
    return out;
}

// ---------------------------------------------------------------------------
// closed-form reference expressions
// ---------------------------------------------------------------------------
namespace closed {

namespace {
double ind(bool c) { return c ? 1.0 : 0.0; }
}

double sell_pos(double ell, double v) {
    const double p = v > 0.0 ? v : 0.0;
    return 0.5 * p * p - std::pow(v - ell, 3) / (6.0 * ell) * ind(ell < v && v < 2 * ell) -
           (3 * v * v - 9 * ell * v + 7 * ell * ell) / 6.0 * ind(v >= 2 * ell);
}

double sell_pos_prime(double ell, double v) {
    const double p = v > 0.0 ? v : 0.0;
    return p - (v - ell) * (v - ell) / (2.0 * ell) * ind(ell < v && v < 2 * ell) +
           0.5 * (3 * ell - 2 * v) * ind(v >= 2 * ell);
}

double sell_pos_second(double ell, double v) {
    return ind(0 < v && v < 2 * ell) - (v - ell) / ell * ind(ell < v && v < 2 * ell);
}

double sell_pos_h3(double ell, double v) {
    const double p = v > 0.0 ? v : 0.0;
    return -0.5 * p * p + (2 * v * v * v - 3 * ell * v * v + ell * ell * ell) / (6.0 * ell) * ind(ell < v && v < 2 * ell) +
           (3 * v * v - 7 * ell * ell) / 6.0 * ind(v >= 2 * ell);
}

double sell_pos_h1(double ell, double v) {
    const double p = v > 0.0 ? v : 0.0;
    return -0.5 * p * p +
           (v * v * v - ell * v * v - ell * ell * v + ell * ell * ell) / (2.0 * ell) * ind(ell < v && v < 2 * ell) +
           0.5 * (v * v + 3 * ell * v - 7 * ell * ell) * ind(v >= 2 * ell);
}

double sell_pos_h2(double ell, double v) {
    return (std::pow(v, 4) - 3 * ell * ell * v * v + 2 * std::pow(ell, 3) * v) / (12.0 * ell) *
               ind(ell < v && v < 2 * ell) +
           (9 * ell * v * v - 14 * ell * ell * v) / 12.0 * ind(v >= 2 * ell);
}

double sell_pos_half_d2v2(double ell, double v) {
    const double p = v > 0.0 ? v : 0.0;
    return 0.5 * p * p - v * v * (v - ell) / (2.0 * ell) * ind(ell < v && v < 2 * ell) -
           0.5 * v * v * ind(v >= 2 * ell);
}

double sell_neg(double ell, double v) {
    const double m = v < 0.0 ? v : 0.0;
    return 0.5 * m * m + std::pow(v + ell, 3) / (6.0 * ell) * ind(-2 * ell < v && v < -ell) -
           (3 * v * v + 9 * ell * v + 7 * ell * ell) / 6.0 * ind(v <= -2 * ell);
}

double sell_neg_prime(double ell, double v) {
    const double m = v < 0.0 ? v : 0.0;
    return m + (v + ell) * (v + ell) / (2.0 * ell) * ind(-2 * ell < v && v < -ell) -
           0.5 * (3 * ell + 2 * v) * ind(v <= -2 * ell);
}

double sell_neg_second(double ell, double v) {
    return ind(-2 * ell < v && v < 0) + (v + ell) / ell * ind(-2 * ell < v && v < -ell);
}

double sell_neg_h3(double ell, double v) {
    const double m = v < 0.0 ? v : 0.0;
    return -0.5 * m * m +
           (-2 * v * v * v - 3 * ell * v * v + ell * ell * ell) / (6.0 * ell) * ind(-2 * ell < v && v < -ell) +
           (3 * v * v - 7 * ell * ell) / 6.0 * ind(v <= -2 * ell);
}

double sell_neg_h1(double ell, double v) {
    const double m = v < 0.0 ? v : 0.0;
    return -0.5 * m * m +
           (-v * v * v - ell * v * v + ell * ell * v + ell * ell * ell) / (2.0 * ell) *
               ind(-2 * ell < v && v < -ell) +
           0.5 * (v * v - 3 * ell * v - 7 * ell * ell) * ind(v <= -2 * ell);
}

double sell_neg_h2(double ell, double v) {
    return -(std::pow(v, 4) - 3 * ell * ell * v * v - 2 * std::pow(ell, 3) * v) / (12.0 * ell) *
               ind(-2 * ell < v && v < -ell) -
           (9 * ell * v * v + 14 * ell * ell * v) / 12.0 * ind(v <= -2 * ell);
}

double sell_neg_half_d2v2(double ell, double v) {
    const double m = v < 0.0 ? v : 0.0;
    return 0.5 * m * m + v * v * (v + ell) / (2.0 * ell) * ind(-2 * ell < v && v < -ell) -
           0.5 * v * v * ind(v <= -2 * ell);
}

double sell_pm_h3(double ell, bool positive, double v) {
    const double vp = positive ? (v > 0 ? v : 0.0) : (v < 0 ? v : 0.0);
    const double a = std::abs(vp);
    if (a <= ell) return -0.5 * vp * vp;
    if (a < 2 * ell) return a * a * a / (3.0 * ell) - vp * vp + ell * ell / 6.0;
    return -7.0 / 6.0 * ell * ell;
}

double sell_pm_h1(double ell, bool positive, double v) {
    const double vp = positive ? (v > 0 ? v : 0.0) : (v < 0 ? v : 0.0);
    const double a = std::abs(vp);
    if (a <= ell) return -0.5 * vp * vp;
    if (a < 2 * ell) return a * a * a / (2.0 * ell) - vp * vp - 0.5 * a * ell + 0.5 * ell * ell;
    return 1.5 * ell * a - 3.5 * ell * ell;
}

double sell_pm_h2(double ell, bool positive, double v) {
    const double vp = positive ? (v > 0 ? v : 0.0) : (v < 0 ? v : 0.0);
    const double a = std::abs(vp);
    if (a <= ell) return 0.0;
    if (a < 2 * ell) return a * a * a * vp / (12.0 * ell) - 0.25 * a * vp * ell + vp * ell * ell / 6.0;
    return 0.75 * a * vp * ell - 7.0 / 6.0 * vp * ell * ell;
}

}  // namespace closed

// ---------------------------------------------------------------------------
// identity report
// ---------------------------------------------------------------------------
namespace {

struct GridScan {
    double ell;
    std::vector<double> vs;
};

GridScan scan_for(double ell) {
    GridScan g{ell, {}};
    const double step = ell / 100.0;
    for (double v = -4.0 * ell; v <= 4.0 * ell + 0.5 * step; v += step) g.vs.push_back(v);
    return g;
}

void check_pair(std::vector<IdentityCheck>& out, const std::string& name, const GridScan& g, double tol,
                const std::function<double(double)>& lhs, const std::function<double(double)>& rhs) {
    double dev = 0.0;
    for (double v : g.vs) dev = std::max(dev, std::abs(lhs(v) - rhs(v)));
    out.push_back({name, dev, tol, dev <= tol});
}

}  // namespace

std::vector<IdentityCheck> identity_report(const std::vector<double>& ells, double tol) {
    std::vector<IdentityCheck> out;
    for (double ell : ells) {
        const GridScan g = scan_for(ell);
        const Spec sp = Spec::sell(ell);
        const Spec spp = Spec::sell_pos(ell);
        const Spec spm = Spec::sell_neg(ell);
        const std::string tag = " (ell=" + std::to_string(ell) + ")";

        // explicit closed forms vs compositional evaluation
        check_pair(out, "S(v+)" + tag, g, tol, [&](double v) { return s(spp, v); },
                   [&](double v) { return closed::sell_pos(ell, v); });
        check_pair(out, "S(v+)'" + tag, g, tol, [&](double v) { return s_prime(spp, v); },
                   [&](double v) { return closed::sell_pos_prime(ell, v); });
        check_pair(out, "S(v+)''" + tag, g, tol, [&](double v) { return s_second(spp, v); },
                   [&](double v) { return closed::sell_pos_second(ell, v); });
        check_pair(out, "S(v+)-S(v+)'v" + tag, g, tol, [&](double v) { return h3(spp, v); },
                   [&](double v) { return closed::sell_pos_h3(ell, v); });
        check_pair(out, "3S(v+)-2S(v+)'v" + tag, g, tol, [&](double v) { return h1(spp, v); },
                   [&](double v) { return closed::sell_pos_h1(ell, v); });
        check_pair(out, "S(v+)v-S(v+)'v^2/2" + tag, g, tol, [&](double v) { return h2(spp, v); },
                   [&](double v) { return closed::sell_pos_h2(ell, v); });
        check_pair(out, "S(v+)''v^2/2" + tag, g, tol,
                   [&](double v) { return 0.5 * s_second(spp, v) * v * v; },
                   [&](double v) { return closed::sell_pos_half_d2v2(ell, v); });

        check_pair(out, "S(v-)" + tag, g, tol, [&](double v) { return s(spm, v); },
                   [&](double v) { return closed::sell_neg(ell, v); });
        check_pair(out, "S(v-)'" + tag, g, tol, [&](double v) { return s_prime(spm, v); },
                   [&](double v) { return closed::sell_neg_prime(ell, v); });
        check_pair(out, "S(v-)''" + tag, g, tol, [&](double v) { return s_second(spm, v); },
                   [&](double v) { return closed::sell_neg_second(ell, v); });
        check_pair(out, "S(v-)-S(v-)'v" + tag, g, tol, [&](double v) { return h3(spm, v); },
                   [&](double v) { return closed::sell_neg_h3(ell, v); });
        check_pair(out, "3S(v-)-2S(v-)'v" + tag, g, tol, [&](double v) { return h1(spm, v); },
                   [&](double v) { return closed::sell_neg_h1(ell, v); });
        check_pair(out, "S(v-)v-S(v-)'v^2/2" + tag, g, tol, [&](double v) { return h2(spm, v); },
                   [&](double v) { return closed::sell_neg_h2(ell, v); });
        check_pair(out, "S(v-)''v^2/2" + tag, g, tol,
                   [&](double v) { return 0.5 * s_second(spm, v) * v * v; },
                   [&](double v) { return closed::sell_neg_half_d2v2(ell, v); });

        // combined-sign piecewise forms
        check_pair(out, "pm H3(+) branch form" + tag, g, tol, [&](double v) { return h3(spp, v); },
                   [&](double v) { return closed::sell_pm_h3(ell, true, v); });
        check_pair(out, "pm H3(-) branch form" + tag, g, tol, [&](double v) { return h3(spm, v); },
                   [&](double v) { return closed::sell_pm_h3(ell, false, v); });
        check_pair(out, "pm H1(+) branch form" + tag, g, tol, [&](double v) { return h1(spp, v); },
                   [&](double v) { return closed::sell_pm_h1(ell, true, v); });
        check_pair(out, "pm H1(-) branch form" + tag, g, tol, [&](double v) { return h1(spm, v); },
                   [&](double v) { return closed::sell_pm_h1(ell, false, v); });
        check_pair(out, "pm H2(+) branch form" + tag, g, tol, [&](double v) { return h2(spp, v); },
                   [&](double v) { return closed::sell_pm_h2(ell, true, v); });
        check_pair(out, "pm H2(-) branch form" + tag, g, tol, [&](double v) { return h2(spm, v); },
                   [&](double v) { return closed::sell_pm_h2(ell, false, v); });

        // beta(v) = S_ell(v_pm)' v
        check_pair(out, "beta(+)" + tag, g, tol, [&](double v) { return beta(ell, true, v); },
                   [&](double v) { return closed::sell_pos_prime(ell, v) * v; });
        check_pair(out, "beta(-)" + tag, g, tol, [&](double v) { return beta(ell, false, v); },
                   [&](double v) { return closed::sell_neg_prime(ell, v) * v; });

        // structural identities
        check_pair(out, "splitting S(v+)+S(v-)=S(v)" + tag, g, 0.0,
                   [&](double v) { return s(spp, v) + s(spm, v); }, [&](double v) { return s(sp, v); });
        check_pair(out, "convexity S''>=0" + tag, g, 0.0,
                   [&](double v) { return std::min(0.0, s_second(sp, v)); }, [&](double) { return 0.0; });
        check_pair(out, "S=v^2/2 on |v|<=ell" + tag, g, 0.0,
                   [&](double v) { return std::abs(v) <= ell ? s(sp, v) - 0.5 * v * v : 0.0; },
                   [&](double) { return 0.0; });
        check_pair(out, "linear growth |S|<=3/2 ell|v|" + tag, g, 0.0,
                   [&](double v) { return std::max(0.0, std::abs(s(sp, v)) - 1.5 * ell * std::abs(v)); },
                   [&](double) { return 0.0; });

        // C^1 continuity at break points
        {
            double dev = 0.0;
            const double de = 1e-9 * ell;
            for (double b : {ell, 2.0 * ell, -ell, -2.0 * ell}) {
                dev = std::max(dev, std::abs(s(sp, b - de) - s(sp, b + de)));
                dev = std::max(dev, std::abs(s_prime(sp, b - de) - s_prime(sp, b + de)));
            }
            out.push_back({"C1 continuity at breaks" + tag, dev, 1e-7 * ell * ell, dev <= 1e-7 * ell * ell});
        }
    }
    return out;
}

}  // namespace entropy
}  // namespace sch
