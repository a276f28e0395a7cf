#pragma once

// Time integration of the viscous stochastic Camassa-Holm equation in Ito
// form,
//
//   du = [ -u u_x - P_x + (1/2) s (s u_x)_x + eps u_xx ] dt - s u_x dW,
//   (1 - d2/dx2) P = u^2 + (1/2) u_x^2,
//
// single paths and seeded ensembles. The stiff constant-coefficient part
// (eps + mean(s^2)/2) d2/dx2 is integrated exactly in Fourier space; the
// nonlinearity and the variable-coefficient remainder of the second-order
// correction are explicit (two-stage Lawson update); noise enters as a
// left-point Euler-Maruyama increment, optionally with the Milstein
// correction (1/2) s (s u_x)_x (dW^2 - dt).

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sch/grid.hpp"

namespace sch {

/// Position-dependent noise coefficient and its cached derivatives.
/// dsigma/d2sigma are always the spectral derivatives of sigma.
struct NoiseCoef {
    Field sigma;
    Field dsigma;
    Field d2sigma;
    Field sigma_sq;     // dealiased sigma^2
    Field dsigma_sq;    // d/dx sigma^2
    Field d2sigma_sq;   // d2/dx2 sigma^2
    double mean_sigma_sq = 0.0;
    double w2inf = 0.0;  // max of sup|sigma|, sup|sigma'|, sup|sigma''|
    std::optional<double> smoothing;  // mollification radius used, if any

    static NoiseCoef from_sigma(const Field& sigma, std::optional<double> smoothing = {});
    bool is_zero() const { return w2inf == 0.0; }
};

/// Named sigma presets: "zero", "const:c", "sin", "sin:k", "bump:center,width".
Field sigma_preset(const GridPtr& grid, const std::string& spec);

/// (t, u, q) snapshot; q is always the spectral derivative of u.
struct State {
    double t = 0.0;
    Field u;
    Field q;

    static State from_u(double t, Field u);
};

enum class Scheme { EM_IMEX, Milstein_IMEX };

struct FourierMode {
    int k = 1;
    double sin_coef = 0.0;
    double cos_coef = 0.0;
};

struct InitialSpec {
    enum class Type { Fourier, Peakon, PeakonAntipeakon, File };
    Type type = Type::Fourier;
    std::vector<FourierMode> modes;                 // Fourier
    double c = 1.0, x0 = M_PI, x1 = 0.0, x2 = 0.0;  // peakon parameters
    std::string file;                               // File
    std::optional<double> mollify_radius;           // optional smoothing

    static InitialSpec fourier(std::vector<FourierMode> m) {
        InitialSpec s;
        s.type = Type::Fourier;
        s.modes = std::move(m);
        return s;
    }
    static InitialSpec peakon(double c, double x0) {
        InitialSpec s;
        s.type = Type::Peakon;
        s.c = c;
        s.x0 = x0;
        return s;
    }
    static InitialSpec peakon_antipeakon(double c, double x1, double x2) {
        InitialSpec s;
        s.type = Type::PeakonAntipeakon;
        s.c = c;
        s.x1 = x1;
        s.x2 = x2;
        return s;
    }
};

/// Full experiment description.
struct SimConfig {
    int n = 256;
    double epsilon = 0.0;
    double dt = 1e-4;
    double t_end = 1.0;
    std::string sigma = "zero";
    bool smooth_sigma = false;  // replace sigma by mollify(sigma, sqrt(epsilon))
    InitialSpec initial;
    Scheme scheme = Scheme::EM_IMEX;
    uint64_t seed = 0;
    int n_paths = 1;
    int record_every = 100;
    double stat_alpha = 0.5;          // alpha for the |q|^{2+alpha} statistic
    double breaking_threshold = 50.0; // min_x q < -threshold counts as breaking
    bool linear_only = false;         // test hook: drop u u_x and P_x
};

/// peakon(c, x0): c K(x - x0)/K(0); peakon_antipeakon superposes two with
/// opposite signs; fourier sums the requested modes.
Field initial_data(const InitialSpec& spec, const GridPtr& grid);

/// Full drift -u u_x - P_x + (1/2) s (s u_x)_x + eps u_xx.
Field drift(const State& state, const NoiseCoef& noise, double epsilon, bool linear_only = false);

/// Ito diffusion coefficient -s u_x.
Field noise_term(const State& state, const NoiseCoef& noise);

/// dt <= min(C1 h / sup|u|, C2 h^2 / sup|(s^2 - mean s^2)/2|), C1=0.5, C2=0.25.
double stability_bound(const State& state, const NoiseCoef& noise);

/// One time step. Throws SolverFailure on NaN/Inf.
State step(const State& state, double dt, double dW, const NoiseCoef& noise, double epsilon, Scheme scheme,
           bool linear_only = false);

struct SolverFailure : std::runtime_error {
    double time;
    explicit SolverFailure(const std::string& what, double t) : std::runtime_error(what), time(t) {}
};

struct Trajectory {
    uint64_t config_hash = 0;
    uint64_t seed = 0;
    uint64_t path_index = 0;
    double dt = 0.0;
    int64_t n_steps = 0;
    std::vector<double> times;          // snapshot times
    std::vector<Field> snapshots;       // u at snapshot times
    std::vector<int64_t> snapshot_steps;
    std::vector<double> wiener;         // all per-step Brownian increments
    std::optional<double> failure_time; // blow-up / instability time, if any
    std::string failure_reason;

    Field q_at(size_t i) const { return derivative(snapshots[i], 1); }
};

/// Step observer; on_step sees the pre-step state (left point), and
/// on_snapshot_hook fires whenever the integrator records a snapshot.
class StepObserver {
public:
    virtual ~StepObserver() = default;
    virtual void on_step(const State& state, double dt, double dW) = 0;
    virtual void on_snapshot_hook(const State& /*state*/) {}
};

/// Deterministic function of (config.seed, path_index). Snapshots are kept
/// every record_every steps (first and last always). A blow-up terminates the
/// path and is recorded, not thrown.
Trajectory simulate_path(const SimConfig& config, uint64_t path_index, StepObserver* observer = nullptr);

/// Number of time steps implied by the config (t_end / dt, rounded).
int64_t step_count(const SimConfig& config);

/// Validates preconditions shared by single paths and ensembles; throws
/// std::invalid_argument with a field-named message.
void validate_config(const SimConfig& config);

/// Worker-pool map over path indices 0..n_paths-1, results in path order.
/// Thread count is capped by the SCH_THREADS environment variable.
void for_each_path(int64_t n_paths, const std::function<void(int64_t)>& fn);

/// Per-time ensemble statistics; per-path scalar series are retained so that
/// summaries are exactly extendable (doubling n_paths keeps the first half).
struct EnsembleSummary {
    std::vector<double> times;
    // one row per path, one column per recorded time
    std::vector<std::vector<double>> h1_sq;      // int u^2 + q^2 dx
    std::vector<std::vector<double>> q_lp;       // int |q|^{2+alpha} dx
    std::vector<std::vector<double>> sup_u;
    std::vector<std::vector<double>> min_q;
    std::vector<std::vector<double>> drift_int;  // cumulative energy drift integral
    std::vector<std::vector<double>> mart_int;   // cumulative energy Ito sum
    std::vector<std::optional<double>> breaking_time;
    std::vector<std::optional<double>> failure_time;
    double stat_alpha = 0.5;
    int n_failed = 0;

    std::vector<double> mean(const std::vector<std::vector<double>>& series) const;
    std::vector<double> variance(const std::vector<std::vector<double>>& series) const;
};

/// Run config.n_paths independent paths (parallel, deterministic ordering).
EnsembleSummary run_ensemble(const SimConfig& config);

/// Fixed-order pairwise summation (deterministic reduction).
double pairwise_sum(std::span<const double> v);

// Integrands of the pathwise total energy balance; shared between the
// ensemble accumulators and the residual diagnostics.
double energy_drift_integrand(const State& s, const NoiseCoef& noise);
double energy_mart_integrand(const State& s, const NoiseCoef& noise);
double energy_dissipation_integrand(const State& s);

}  // namespace sch
