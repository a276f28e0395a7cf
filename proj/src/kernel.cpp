#include "sch/kernel.hpp"

#include <cmath>

namespace sch {

double green_kernel(double x) {
    double y = x - kTwoPi * std::floor(x / kTwoPi);
    static const double inv_2sinh_pi = 1.0 / (2.0 * std::sinh(M_PI));
    return std::cosh(y - M_PI) * inv_2sinh_pi;
}

KernelTable::KernelTable(const GridPtr& grid) : values_(grid) {
    const Grid& g = *grid;
    for (int j = 0; j < g.n; ++j) values_[j] = green_kernel(g.nodes[static_cast<size_t>(j)]);
    // corner corrections: [K'] = 1 and [K'''] = 1 at x = 0 (K'' = K is continuous)
    values_[0] += -g.h / 12.0 + std::pow(g.h, 3) / 720.0;
}

double KernelTable::mass() const { return integral(values_); }

Field KernelTable::convolve_with(const Field& f) const {
    require_same_grid(values_, f, "KernelTable::convolve_with");
    const Grid& g = f.grid();
    const int n = g.n;
    Field out(f.grid_ptr());
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            int idx = j - k;
            if (idx < 0) idx += n;
            s += values_[k] * f[idx];
        }
        out[j] = s * g.h;
    }
    // remaining Euler-Maclaurin term: + (h^4/720) * 3 f''(x_j), f'' by centered differences
    const double c = 3.0 * std::pow(g.h, 4) / 720.0;
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n, jp = (j + 1) % n;
        out[j] += c * (f[jp] - 2.0 * f[j] + f[jm]) / (g.h * g.h);
    }
    return out;
}

Field helmholtz_solve(const Field& f) {
    const int n = f.grid().n;
    Spectrum spec = forward_fft(f);
    for (int k = 0; k <= n / 2; ++k) spec[static_cast<size_t>(k)] /= 1.0 + static_cast<double>(k) * k;
    return inverse_fft(f.grid_ptr(), spec);
}

Field apply_helmholtz(const Field& f) {
    const int n = f.grid().n;
    Spectrum spec = forward_fft(f);
    for (int k = 0; k <= n / 2; ++k) spec[static_cast<size_t>(k)] *= 1.0 + static_cast<double>(k) * k;
    return inverse_fft(f.grid_ptr(), spec);
}

namespace {

Field pressure_source(const Field& u, const Field& q) {
    require_same_grid(u, q, "nonlocal_pressure");
    Field s = multiply(u, u);
    Field qq = multiply(q, q);
    for (int j = 0; j < s.size(); ++j) s[j] += 0.5 * qq[j];
    return s;
}

}  // namespace

Field nonlocal_pressure(const Field& u, const Field& q) { return helmholtz_solve(pressure_source(u, q)); }

Field pressure_gradient(const Field& u, const Field& q) {
    Field src = pressure_source(u, q);
    const int n = src.grid().n;
    Spectrum spec = forward_fft(src);
    for (int k = 0; k <= n / 2; ++k)
        spec[static_cast<size_t>(k)] *= std::complex<double>(0.0, k) / (1.0 + static_cast<double>(k) * k);
    spec[static_cast<size_t>(n / 2)] = 0.0;
    return inverse_fft(src.grid_ptr(), spec);
}

}  // namespace sch
