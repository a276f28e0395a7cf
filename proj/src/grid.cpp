#include "sch/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace sch {

GridPtr make_grid(int n) {
    if (n % 2 != 0) throw std::invalid_argument("make_grid: n must be even, got " + std::to_string(n));
    if (n < 8) throw std::invalid_argument("make_grid: n must be >= 8, got " + std::to_string(n));
    auto g = std::make_shared<Grid>();
    g->n = n;
    g->h = kTwoPi / n;
    g->nodes.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) g->nodes[static_cast<size_t>(j)] = j * g->h;
    return g;
}

Field::Field(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(static_cast<size_t>(grid_->n), fill) {}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_->n)
        throw std::invalid_argument("Field: values length does not match grid");
}

bool Field::finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

void require_same_grid(const Field& a, const Field& b, const char* op) {
    if (a.grid().n != b.grid().n)
        throw std::invalid_argument(std::string(op) + ": grid mismatch (" + std::to_string(a.grid().n) + " vs " +
                                    std::to_string(b.grid().n) + ")");
}

// ---------------------------------------------------------------------------
// FFT engine. Plans are cached per size; the FFTW planner is not thread-safe,
// so plan creation is serialized. Executions use the new-array interface with
// FFTW_UNALIGNED plans and are safe to run concurrently on distinct buffers.
// ---------------------------------------------------------------------------
namespace {

struct PlanSet {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    ~PlanSet() {
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

const PlanSet& plans_for(int n) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<PlanSet>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;

    auto ps = std::make_unique<PlanSet>();
    std::vector<double> re(static_cast<size_t>(n));
    std::vector<std::complex<double>> cx(static_cast<size_t>(n / 2 + 1));
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    ps->r2c = fftw_plan_dft_r2c_1d(n, re.data(), reinterpret_cast<fftw_complex*>(cx.data()), flags);
    ps->c2r = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cx.data()), re.data(), flags);
    auto [pos, ok] = cache.emplace(n, std::move(ps));
    return *pos->second;
}

Spectrum raw_forward(std::span<const double> v) {
    const int n = static_cast<int>(v.size());
    Spectrum spec(static_cast<size_t>(n / 2 + 1));
    std::vector<double> buf(v.begin(), v.end());
    fftw_execute_dft_r2c(plans_for(n).r2c, buf.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    const double scale = 1.0 / n;
    for (auto& c : spec) c *= scale;
    return spec;
}

std::vector<double> raw_inverse(int n, const Spectrum& spec) {
    if (static_cast<int>(spec.size()) != n / 2 + 1) throw std::invalid_argument("inverse_fft: spectrum size mismatch");
    Spectrum tmp(spec);  // c2r destroys its input
    std::vector<double> out(static_cast<size_t>(n));
    fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
    return out;
}

}  // namespace

Spectrum forward_fft(const Field& f) { return raw_forward(f.values()); }

Field inverse_fft(const GridPtr& grid, const Spectrum& spec) { return Field(grid, raw_inverse(grid->n, spec)); }

Field derivative(const Field& f, int order) {
    if (order != 1 && order != 2) throw std::invalid_argument("derivative: order must be 1 or 2");
    const int n = f.grid().n;
    Spectrum spec = forward_fft(f);
    if (order == 1) {
        for (int k = 0; k <= n / 2; ++k) spec[static_cast<size_t>(k)] *= std::complex<double>(0.0, k);
        spec[static_cast<size_t>(n / 2)] = 0.0;  // Nyquist has no well-defined odd derivative
    } else {
        for (int k = 0; k <= n / 2; ++k) spec[static_cast<size_t>(k)] *= -static_cast<double>(k) * k;
    }
    return inverse_fft(f.grid_ptr(), spec);
}

Field convolve(const Field& f, const Field& g) {
    require_same_grid(f, g, "convolve");
    const int n = f.grid().n;
    Spectrum a = forward_fft(f);
    Spectrum b = forward_fft(g);
    for (int k = 0; k <= n / 2; ++k) a[static_cast<size_t>(k)] *= b[static_cast<size_t>(k)];
    // h * circular sum == 2*pi * (normalized spectral product)
    for (auto& c : a) c *= kTwoPi;
    return inverse_fft(f.grid_ptr(), a);
}

Field multiply(const Field& f, const Field& g) {
    require_same_grid(f, g, "multiply");
    const int n = f.grid().n;
    const int m = 2 * n;
    Spectrum a = forward_fft(f);
    Spectrum b = forward_fft(g);
    Spectrum pa(static_cast<size_t>(m / 2 + 1), 0.0);
    Spectrum pb(static_cast<size_t>(m / 2 + 1), 0.0);
    // drop the Nyquist bin when padding; the dynamics lives in |k| < n/2
    for (int k = 0; k < n / 2; ++k) {
        pa[static_cast<size_t>(k)] = a[static_cast<size_t>(k)];
        pb[static_cast<size_t>(k)] = b[static_cast<size_t>(k)];
    }
    std::vector<double> fa = raw_inverse(m, pa);
    std::vector<double> fb = raw_inverse(m, pb);
    for (int j = 0; j < m; ++j) fa[static_cast<size_t>(j)] *= fb[static_cast<size_t>(j)];
    Spectrum prod = raw_forward(fa);
    Spectrum trunc(static_cast<size_t>(n / 2 + 1), 0.0);
    for (int k = 0; k < n / 2; ++k) trunc[static_cast<size_t>(k)] = prod[static_cast<size_t>(k)];
    return inverse_fft(f.grid_ptr(), trunc);
}

// ---------------------------------------------------------------------------
// Mollifier tables, cached per (n, delta).
// ---------------------------------------------------------------------------
namespace {

std::vector<double> build_mollifier(const Grid& g, double delta) {
    std::vector<double> J(static_cast<size_t>(g.n), 0.0);
    auto bump = [](double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; };
    for (int j = 0; j < g.n; ++j) {
        const double x = g.nodes[static_cast<size_t>(j)];
        double v = 0.0;
        for (int w = -2; w <= 2; ++w) v += bump((x + w * kTwoPi) / delta);  // periodize by wrapping
        J[static_cast<size_t>(j)] = v / delta;
    }
    double mass = 0.0;
    for (double v : J) mass += v * g.h;
    for (double& v : J) v /= mass;  // discrete unit mass: mean preservation to round-off
    return J;
}

const std::vector<double>& mollifier_table(const Grid& g, double delta) {
    static std::mutex mtx;
    static std::map<std::pair<int, double>, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(g.n, delta);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_mollifier(g, delta)).first;
    return it->second;
}

}  // namespace

Field mollify(const Field& f, double delta) {
    const Grid& g = f.grid();
    if (!(delta >= 2.0 * g.h))
        throw std::invalid_argument("mollify: mollifier under-resolved (delta = " + std::to_string(delta) +
                                    " < 2h = " + std::to_string(2.0 * g.h) + ")");
    Field J(f.grid_ptr(), mollifier_table(g, delta));
    return convolve(f, J);
}

double integral(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().h;
}

double mean(const Field& f) { return integral(f) / kTwoPi; }

double l2_norm_sq(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return s * f.grid().h;
}

double sup_norm(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s = std::max(s, std::abs(v));
    return s;
}

double min_value(const Field& f) {
    double s = f[0];
    for (double v : f.values()) s = std::min(s, v);
    return s;
}

double h1_norm_sq(const Field& f) { return l2_norm_sq(f) + l2_norm_sq(derivative(f, 1)); }

double lp_norm_pow(const Field& f, double p) {
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v), p);
    return s * f.grid().h;
}

Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b, "operator+");
    Field out(a.grid_ptr());
    for (int j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b, "operator-");
    Field out(a.grid_ptr());
    for (int j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
    return out;
}

Field operator*(double c, const Field& a) {
    Field out(a.grid_ptr());
    for (int j = 0; j < a.size(); ++j) out[j] = c * a[j];
    return out;
}

Field& operator+=(Field& a, const Field& b) {
    require_same_grid(a, b, "operator+=");
    for (int j = 0; j < a.size(); ++j) a[j] += b[j];
    return a;
}

Field& operator-=(Field& a, const Field& b) {
    require_same_grid(a, b, "operator-=");
    for (int j = 0; j < a.size(); ++j) a[j] -= b[j];
    return a;
}

Field pointwise(const Field& a, const Field& b) {
    require_same_grid(a, b, "pointwise");
    Field out(a.grid_ptr());
    for (int j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    return out;
}

}  // namespace sch
