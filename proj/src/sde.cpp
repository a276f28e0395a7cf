#include "sch/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sch/io.hpp"
#include "sch/kernel.hpp"
#include "sch/rng.hpp"

namespace sch {

NoiseCoef NoiseCoef::from_sigma(const Field& sigma_in, std::optional<double> smoothing) {
    if (!sigma_in.finite()) throw std::invalid_argument("NoiseCoef: sigma must be finite");
    NoiseCoef nc;
    nc.smoothing = smoothing;
    nc.sigma = smoothing ? mollify(sigma_in, *smoothing) : sigma_in;
    nc.dsigma = derivative(nc.sigma, 1);
    nc.d2sigma = derivative(nc.sigma, 2);
    nc.sigma_sq = multiply(nc.sigma, nc.sigma);
    nc.dsigma_sq = derivative(nc.sigma_sq, 1);
    nc.d2sigma_sq = derivative(nc.sigma_sq, 2);
    nc.mean_sigma_sq = mean(nc.sigma_sq);
    nc.w2inf = std::max({sup_norm(nc.sigma), sup_norm(nc.dsigma), sup_norm(nc.d2sigma)});
    return nc;
}

Field sigma_preset(const GridPtr& grid, const std::string& spec) {
    auto split_args = [](const std::string& s) {
        std::vector<double> out;
        size_t pos = 0;
        while (pos < s.size()) {
            size_t comma = s.find(',', pos);
            if (comma == std::string::npos) comma = s.size();
            out.push_back(std::stod(s.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        return out;
    };
    if (spec == "zero") return Field(grid, 0.0);
    if (spec == "sin") return sample(grid, [](double x) { return std::sin(x); });
    if (spec.rfind("const:", 0) == 0) {
        const double c = std::stod(spec.substr(6));
        return Field(grid, c);
    }
    if (spec.rfind("sin:", 0) == 0) {
        const int k = std::stoi(spec.substr(4));
        if (k < 1 || k >= grid->n / 2) throw std::invalid_argument("sigma: sin:k mode out of band");
        return sample(grid, [k](double x) { return std::sin(k * x); });
    }
    if (spec.rfind("bump:", 0) == 0) {
        auto args = split_args(spec.substr(5));
        if (args.size() != 2) throw std::invalid_argument("sigma: bump wants 'bump:center,width'");
        const double center = args[0], width = args[1];
        if (width <= 0) throw std::invalid_argument("sigma: bump width must be positive");
        return sample(grid, [=](double x) {
            double d = std::fabs(x - center);
            d = std::min(d, kTwoPi - d);
            const double s = d / width;
            return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
        });
    }
    throw std::invalid_argument("sigma: unknown preset '" + spec + "'");
}

State State::from_u(double t, Field u) {
    State s;
    s.t = t;
    s.q = derivative(u, 1);
    s.u = std::move(u);
    return s;
}

Field initial_data(const InitialSpec& spec, const GridPtr& grid) {
    Field u(grid, 0.0);
    switch (spec.type) {
        case InitialSpec::Type::Fourier: {
            for (const auto& m : spec.modes) {
                if (m.k < 0 || m.k >= grid->n / 2)
                    throw std::invalid_argument("initial_data: fourier mode out of band");
                for (int j = 0; j < grid->n; ++j) {
                    const double x = grid->nodes[static_cast<size_t>(j)];
                    u[j] += m.sin_coef * std::sin(m.k * x) + m.cos_coef * std::cos(m.k * x);
                }
            }
            break;
        }
        case InitialSpec::Type::Peakon: {
            const double k0 = green_kernel(0.0);
            for (int j = 0; j < grid->n; ++j)
                u[j] = spec.c * green_kernel(grid->nodes[static_cast<size_t>(j)] - spec.x0) / k0;
            break;
        }
        case InitialSpec::Type::PeakonAntipeakon: {
            const double k0 = green_kernel(0.0);
            for (int j = 0; j < grid->n; ++j) {
                const double x = grid->nodes[static_cast<size_t>(j)];
                u[j] = spec.c * (green_kernel(x - spec.x1) - green_kernel(x - spec.x2)) / k0;
            }
            break;
        }
        case InitialSpec::Type::File: {
            u = io::read_field(spec.file, grid);
            break;
        }
    }
    if (spec.mollify_radius) u = mollify(u, *spec.mollify_radius);
    return u;
}

namespace {

/// (1/2) s (s u_x)_x with dealiased products.
Field ito_corrector(const State& state, const NoiseCoef& noise) {
    Field w = multiply(noise.sigma, state.q);
    return 0.5 * multiply(noise.sigma, derivative(w, 1));
}

/// Explicit part of the drift: everything except (eps + mean(s^2)/2) u_xx.
Field drift_remainder(const State& state, const NoiseCoef& noise, bool linear_only) {
    Field rem(state.u.grid_ptr(), 0.0);
    if (!linear_only) {
        rem -= multiply(state.u, state.q);
        rem -= pressure_gradient(state.u, state.q);
    }
    if (!noise.is_zero()) {
        rem += ito_corrector(state, noise);
        rem -= (0.5 * noise.mean_sigma_sq) * derivative(state.u, 2);
    }
    return rem;
}

Spectrum propagator(int n, double nu, double dt) {
    Spectrum e(static_cast<size_t>(n / 2 + 1));
    for (int k = 0; k <= n / 2; ++k) e[static_cast<size_t>(k)] = std::exp(-nu * k * static_cast<double>(k) * dt);
    return e;
}

void apply_spectrum(Spectrum& a, const Spectrum& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

}  // namespace

Field drift(const State& state, const NoiseCoef& noise, double epsilon, bool linear_only) {
    Field d = drift_remainder(state, noise, linear_only);
    const double nu = epsilon + 0.5 * noise.mean_sigma_sq;
    if (nu != 0.0) d += nu * derivative(state.u, 2);
    if (!d.finite()) throw SolverFailure("drift: non-finite result", state.t);
    return d;
}

Field noise_term(const State& state, const NoiseCoef& noise) {
    return -1.0 * multiply(noise.sigma, state.q);
}

double stability_bound(const State& state, const NoiseCoef& noise) {
    const double h = state.u.grid().h;
    const double c1 = 0.5, c2 = 0.25;
    double bound = c1 * h / std::max(sup_norm(state.u), 1e-300);
    double coef = 0.0;
    for (int j = 0; j < state.u.size(); ++j)
        coef = std::max(coef, std::abs(0.5 * (noise.sigma_sq[j] - noise.mean_sigma_sq)));
    if (coef > 0.0) bound = std::min(bound, c2 * h * h / coef);
    return bound;
}

State step(const State& state, double dt, double dW, const NoiseCoef& noise, double epsilon, Scheme scheme,
           bool linear_only) {
    if (!std::isfinite(dW)) throw SolverFailure("step: non-finite Brownian increment", state.t);
    const GridPtr& g = state.u.grid_ptr();
    const int n = g->n;
    const double nu = epsilon + 0.5 * noise.mean_sigma_sq;
    const Spectrum E = propagator(n, nu, dt);

    Field f1 = drift_remainder(state, noise, linear_only);

    // left-point noise increment (+ Milstein correction on demand)
    Field incr = state.u;
    if (!noise.is_zero() && dW != 0.0) {
        Field gmul = multiply(noise.sigma, state.q);
        incr -= dW * gmul;  // - s u_x dW
        if (scheme == Scheme::Milstein_IMEX) {
            Field mil = multiply(noise.sigma, derivative(gmul, 1));
            incr += (0.5 * (dW * dW - dt)) * mil;
        }
    } else if (scheme == Scheme::Milstein_IMEX && !noise.is_zero()) {
        Field gmul = multiply(noise.sigma, state.q);
        Field mil = multiply(noise.sigma, derivative(gmul, 1));
        incr += (0.5 * (dW * dW - dt)) * mil;
    }

    // Lawson-Heun: exact propagation of the stiff linear part, two-stage
    // update of the explicit remainder, left-point stochastic increment.
    Spectrum base = forward_fft(incr);
    apply_spectrum(base, E);
    Spectrum fhat = forward_fft(f1);
    apply_spectrum(fhat, E);

    Spectrum pred = base;
    for (size_t i = 0; i < pred.size(); ++i) pred[i] += dt * fhat[i];
    Field v = inverse_fft(g, pred);
    if (!v.finite()) throw SolverFailure("blow-up or instability at t=" + std::to_string(state.t), state.t);

    Field f2 = drift_remainder(State::from_u(state.t + dt, v), noise, linear_only);
    Field ef1 = inverse_fft(g, fhat);
    Field out = inverse_fft(g, base);
    for (int j = 0; j < n; ++j) out[j] += 0.5 * dt * (ef1[j] + f2[j]);

    if (!out.finite()) throw SolverFailure("blow-up or instability at t=" + std::to_string(state.t), state.t);
    return State::from_u(state.t + dt, std::move(out));
}

int64_t step_count(const SimConfig& config) {
    if (config.t_end == 0.0) return 0;
    const double raw = config.t_end / config.dt;
    const int64_t n = std::llround(raw);
    if (n < 1 || std::abs(n * config.dt - config.t_end) > 1e-9 * std::max(1.0, config.t_end))
        throw std::invalid_argument("dt: t_end must be an integer multiple of dt");
    return n;
}

void validate_config(const SimConfig& config) {
    if (config.n % 2 != 0 || config.n < 8) throw std::invalid_argument("n: must be even and >= 8");
    if (!(config.dt > 0.0)) throw std::invalid_argument("dt: must be positive");
    if (config.t_end < 0.0) throw std::invalid_argument("t_end: must be >= 0");
    if (config.n_paths < 1) throw std::invalid_argument("n_paths: must be >= 1");
    if (config.record_every < 1) throw std::invalid_argument("record_every: must be >= 1");
    if (!(config.stat_alpha > 0.0 && config.stat_alpha < 1.0))
        throw std::invalid_argument("stat_alpha: must lie in (0,1)");
    if (!(config.breaking_threshold > 0.0)) throw std::invalid_argument("breaking_threshold: must be positive");
    step_count(config);

    // build the initial state once to check the stability bound
    auto grid = make_grid(config.n);
    Field sg = sigma_preset(grid, config.sigma);
    std::optional<double> smoothing;
    if (config.smooth_sigma) smoothing = std::sqrt(std::max(config.epsilon, 0.0));
    NoiseCoef noise = NoiseCoef::from_sigma(sg, smoothing);
    State s0 = State::from_u(0.0, initial_data(config.initial, grid));
    const double bound = stability_bound(s0, noise);
    if (config.dt > bound)
        throw std::invalid_argument("dt: violates stability bound (dt = " + std::to_string(config.dt) +
                                    " > bound = " + std::to_string(bound) + ")");
}

Trajectory simulate_path(const SimConfig& config, uint64_t path_index, StepObserver* observer) {
    auto grid = make_grid(config.n);
    Field sg = sigma_preset(grid, config.sigma);
    std::optional<double> smoothing;
    if (config.smooth_sigma) smoothing = std::sqrt(std::max(config.epsilon, 0.0));
    NoiseCoef noise = NoiseCoef::from_sigma(sg, smoothing);

    const int64_t n_steps = step_count(config);
    Trajectory traj;
    traj.seed = config.seed;
    traj.path_index = path_index;
    traj.dt = config.dt;
    traj.n_steps = n_steps;
    traj.wiener = WienerPath(config.seed, path_index, config.t_end, n_steps).increments();

    State state = State::from_u(0.0, initial_data(config.initial, grid));
    auto record = [&](const State& s, int64_t k) {
        traj.times.push_back(s.t);
        traj.snapshots.push_back(s.u);
        traj.snapshot_steps.push_back(k);
        if (observer) observer->on_snapshot_hook(s);
    };

    record(state, 0);
    for (int64_t k = 0; k < n_steps; ++k) {
        const double dW = traj.wiener[static_cast<size_t>(k)];
        if (config.dt > stability_bound(state, noise)) {
            traj.failure_time = state.t;
            traj.failure_reason = "stability bound violated";
            break;
        }
        if (observer) observer->on_step(state, config.dt, dW);
        try {
            state = step(state, config.dt, dW, noise, config.epsilon, config.scheme, config.linear_only);
        } catch (const SolverFailure& f) {
            traj.failure_time = f.time;
            traj.failure_reason = f.what();
            break;
        }
        state.t = (k + 1) * config.dt;  // keep times exact multiples of dt
        if (sup_norm(state.q) > 1e8) {
            traj.failure_time = state.t;
            traj.failure_reason = "gradient magnitude exceeded 1e8";
            record(state, k + 1);
            break;
        }
        if ((k + 1) % config.record_every == 0 || k + 1 == n_steps) record(state, k + 1);
    }
    return traj;
}

void for_each_path(int64_t n_paths, const std::function<void(int64_t)>& fn) {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SCH_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    threads = std::max(1, std::min<int64_t>(threads, n_paths));

    if (threads == 1) {
        for (int64_t p = 0; p < n_paths; ++p) fn(p);
        return;
    }
    std::atomic<int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mtx;
    auto worker = [&]() {
        for (;;) {
            const int64_t p = next.fetch_add(1);
            if (p >= n_paths) return;
            try {
                fn(p);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

// ---------------------------------------------------------------------------
// ensemble
// ---------------------------------------------------------------------------
double energy_drift_integrand(const State& s, const NoiseCoef& noise) {
    const double h = s.u.grid().h;
    double acc = 0.0;
    for (int j = 0; j < s.u.size(); ++j) {
        const double u2 = s.u[j] * s.u[j], q2 = s.q[j] * s.q[j];
        acc += 0.25 * noise.d2sigma_sq[j] * u2 +
               (noise.dsigma[j] * noise.dsigma[j] - 0.25 * noise.d2sigma_sq[j]) * q2;
    }
    return acc * h;
}

double energy_mart_integrand(const State& s, const NoiseCoef& noise) {
    const double h = s.u.grid().h;
    double acc = 0.0;
    for (int j = 0; j < s.u.size(); ++j) acc += noise.dsigma[j] * (s.u[j] * s.u[j] - s.q[j] * s.q[j]);
    return acc * h;
}

double energy_dissipation_integrand(const State& s) {
    Field qx = derivative(s.q, 1);
    return l2_norm_sq(s.q) + l2_norm_sq(qx);
}

namespace {

class EnsembleObserver : public StepObserver {
public:
    EnsembleObserver(const SimConfig& config, const NoiseCoef& noise) : config_(config), noise_(&noise) {}

    void on_step(const State& s, double dt, double dW) override {
        if (!noise_->is_zero()) {
            drift_acc_ += dt * energy_drift_integrand(s, *noise_);
            mart_acc_ += dW * energy_mart_integrand(s, *noise_);
        }
        if (!breaking_ && min_value(s.q) < -config_.breaking_threshold) breaking_ = s.t;
    }

    void on_snapshot_hook(const State& s) override {
        times.push_back(s.t);
        h1_sq.push_back(l2_norm_sq(s.u) + l2_norm_sq(s.q));
        q_lp.push_back(lp_norm_pow(s.q, 2.0 + config_.stat_alpha));
        sup_u.push_back(sup_norm(s.u));
        min_q.push_back(min_value(s.q));
        drift_int.push_back(drift_acc_);
        mart_int.push_back(mart_acc_);
        if (!breaking_ && min_value(s.q) < -config_.breaking_threshold) breaking_ = s.t;
    }

    std::vector<double> times, h1_sq, q_lp, sup_u, min_q, drift_int, mart_int;
    std::optional<double> breaking() const { return breaking_; }

private:
    SimConfig config_;
    const NoiseCoef* noise_;
    double drift_acc_ = 0.0;
    double mart_acc_ = 0.0;
    std::optional<double> breaking_;
};

}  // namespace

EnsembleSummary run_ensemble(const SimConfig& config) {
    validate_config(config);
    const int64_t P = config.n_paths;
    EnsembleSummary out;
    out.stat_alpha = config.stat_alpha;
    out.h1_sq.resize(static_cast<size_t>(P));
    out.q_lp.resize(static_cast<size_t>(P));
    out.sup_u.resize(static_cast<size_t>(P));
    out.min_q.resize(static_cast<size_t>(P));
    out.drift_int.resize(static_cast<size_t>(P));
    out.mart_int.resize(static_cast<size_t>(P));
    out.breaking_time.resize(static_cast<size_t>(P));
    out.failure_time.resize(static_cast<size_t>(P));

    auto grid = make_grid(config.n);
    std::optional<double> smoothing;
    if (config.smooth_sigma) smoothing = std::sqrt(std::max(config.epsilon, 0.0));
    const NoiseCoef noise = NoiseCoef::from_sigma(sigma_preset(grid, config.sigma), smoothing);

    std::vector<std::vector<double>> times_per_path(static_cast<size_t>(P));
    for_each_path(P, [&](int64_t p) {
        EnsembleObserver obs(config, noise);
        Trajectory traj = simulate_path(config, static_cast<uint64_t>(p), &obs);
        const auto sp = static_cast<size_t>(p);
        times_per_path[sp] = obs.times;
        out.h1_sq[sp] = std::move(obs.h1_sq);
        out.q_lp[sp] = std::move(obs.q_lp);
        out.sup_u[sp] = std::move(obs.sup_u);
        out.min_q[sp] = std::move(obs.min_q);
        out.drift_int[sp] = std::move(obs.drift_int);
        out.mart_int[sp] = std::move(obs.mart_int);
        out.breaking_time[sp] = obs.breaking();
        out.failure_time[sp] = traj.failure_time;
    });

    // the longest recorded time axis (failed paths are shorter)
    size_t best = 0;
    for (size_t p = 0; p < times_per_path.size(); ++p)
        if (times_per_path[p].size() > times_per_path[best].size()) best = p;
    out.times = times_per_path[best];
    for (const auto& f : out.failure_time)
        if (f) ++out.n_failed;
    return out;
}

std::vector<double> EnsembleSummary::mean(const std::vector<std::vector<double>>& series) const {
    std::vector<double> out(times.size(), 0.0);
    std::vector<double> vals;
    for (size_t j = 0; j < times.size(); ++j) {
        vals.clear();
        for (const auto& row : series)
            if (j < row.size()) vals.push_back(row[j]);
        out[j] = vals.empty() ? 0.0 : pairwise_sum(vals) / static_cast<double>(vals.size());
    }
    return out;
}

std::vector<double> EnsembleSummary::variance(const std::vector<std::vector<double>>& series) const {
    std::vector<double> mu = mean(series);
    std::vector<double> out(times.size(), 0.0);
    std::vector<double> vals;
    for (size_t j = 0; j < times.size(); ++j) {
        vals.clear();
        for (const auto& row : series)
            if (j < row.size()) vals.push_back((row[j] - mu[j]) * (row[j] - mu[j]));
        out[j] = vals.size() > 1 ? pairwise_sum(vals) / static_cast<double>(vals.size() - 1) : 0.0;
    }
    return out;
}

}  // namespace sch
