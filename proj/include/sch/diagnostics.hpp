#pragma once

// Numerical verification of the analytic identities, inequalities and
// functionals satisfied by the viscous stochastic CH flow: pathwise energy
// balance, renormalized entropy residuals, higher integrability, temporal
// translation functionals, mollifier commutator errors, wave breaking and
// the coupled-path defect proxy.
//
// All stochastic integrals are left-point Ito sums over the *stored*
// Brownian increments of the trajectory, never re-sampled, so residuals
// measure discretization error only.

#include <map>
#include <optional>

#include "sch/entropy.hpp"
#include "sch/sde.hpp"

namespace sch {
namespace diag {

/// Cumulative residual time series, raw and relative to the running scale
/// of the dominant term.
struct ResidualSeries {
    std::vector<double> times;
    std::vector<double> residual;
    std::vector<double> relative;
    std::map<std::string, std::vector<double>> terms;  // named cumulative pieces

    /// Left-sum L^1-in-time norm of the raw residual.
    double l1_in_time() const;
};

/// Residual of the pathwise total energy balance over [0, t]:
///   [E(t) - E(0)] + 2 eps int(dissipation) - int(drift) - ito_sum(martingale),
/// E = int u^2 + q^2 dx, evaluated at snapshot resolution.
ResidualSeries energy_balance_residual(const Trajectory& traj, const NoiseCoef& noise, double epsilon);

/// Weak-form residual of the renormalized SPDE for S(q) against a static
/// test function.
ResidualSeries entropy_residual(const Trajectory& traj, const entropy::Spec& spec, const NoiseCoef& noise,
                                double epsilon, const Field& testfn);

/// Same for S(u); includes the S'(u)P and antiderivative flux terms.
ResidualSeries entropy_residual_u(const Trajectory& traj, const entropy::Spec& spec, const NoiseCoef& noise,
                                  double epsilon, const Field& testfn);

/// Monte Carlo estimate of E int_0^T int |q|^{2+alpha} dx dt. Failed paths
/// are excluded; their count is reported through `n_excluded`.
double higher_integrability(const EnsembleSummary& summary, double alpha, int* n_excluded = nullptr);

/// int_0^{T-tau} | int phi (Q(t+tau) - Q(t)) dx | dt by quadrature on the
/// snapshot grid; tau is rounded to the nearest multiple of the snapshot
/// spacing. Throws if tau >= T.
double translation_functional(const std::vector<double>& times, const std::vector<Field>& q_fields,
                              const Field& phi, double tau);

/// Ensemble translation study for Q = S_ell(q): for each theta, the ensemble
/// mean of sup over a 16-point geometric tau-grid inside (0, theta), plus the
/// fitted log-log slope against theta.
struct TranslationStudy {
    std::vector<double> thetas;
    std::vector<double> mean_sup;  // E sup_{tau < theta} functional
    double slope = 0.0;
};
TranslationStudy translation_study(const SimConfig& config, double ell, const Field& phi,
                                   const std::vector<double>& thetas);

/// First-order mollifier commutator errors for a snapshot w and coefficient
/// sigma:  e1 = ||dx E1||_L1, e2 = ||E2||_H1, e3 = ||E3||_L2 with
///   E1 = (w w_x)*J - w_d (w_d)_x,
///   E2 = (s w_x)*J - s (w_d)_x,
///   E3 = -(1/2)(s (s w_x)_x)*J + (1/2) s (s (w_d)_x)_x,  w_d = w * J_delta.
struct CommutatorErrors {
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
};
CommutatorErrors commutator_errors(const Field& w, const NoiseCoef& noise, double delta);

/// Second-order probe: the scalar
///   int -phi S'(w_d') dx(E3) + phi S''(w_d') (|dx E2|^2/2 + (s w_d')_x dx(E2)) dx.
/// No convergence rate is claimed; the delta-sweep is reported as-is.
double commutator_second_order_probe(const Field& w, const NoiseCoef& noise, double delta,
                                     const entropy::Spec& spec, const Field& phi);

/// First snapshot time with min_x q < -threshold, plus the running min series.
struct BreakingDetection {
    std::optional<double> time;
    std::vector<double> min_q_series;
};
BreakingDetection wave_breaking_detector(const Trajectory& traj, double threshold);

/// Coupled-path defect proxy D(t,x) = (q_eps^2 - q_ref^2)/2 across a
/// viscosity sweep sharing grid, seed, noise, initial data and time axis.
struct DefectStudy {
    std::vector<double> times;
    std::vector<double> epsilons;                       // non-reference sweep values
    std::map<double, std::vector<double>> mean_integral;  // E int D dx per time
    std::map<double, std::vector<double>> mean_l1;        // E int |D| dx per time
    std::vector<Field> sample_field;                      // path-0 proxy for epsilons[0]
};
DefectStudy defect_estimate(const std::vector<SimConfig>& sweep, double reference_epsilon);

/// Mean energy inequality in ensemble mean over all recorded (s,t) pairs:
/// mean[E(t)-E(s) - drift integral] must be <= 2 standard errors.
struct EnergyInequalityReport {
    int n_pairs = 0;
    int n_violations = 0;
    double worst_margin = 0.0;  // max over pairs of mean - 2*se
    double worst_mean = 0.0, worst_se = 0.0;
    double worst_s = 0.0, worst_t = 0.0;
    bool pass = false;
};
EnergyInequalityReport energy_inequality_check(const EnsembleSummary& summary);

/// Holder-in-time monitor: E||u(t+tau) - u(t)||_{L2}^2 against tau on the
/// snapshot grid; the fitted log-log slope should be positive.
struct MeanSquareContinuity {
    std::vector<double> taus;
    std::vector<double> msd;
    double slope = 0.0;
};
MeanSquareContinuity mean_square_continuity(const SimConfig& config, int max_lags = 12);

/// Least-squares slope of log(y) vs log(x), skipping non-positive entries.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace diag
}  // namespace sch
