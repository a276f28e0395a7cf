#pragma once

// Periodic spatial discretization of the circle S^1 = R/(2*pi*Z):
// uniform grid, Fourier-spectral derivative / convolution operators,
// dealiased products and the Friedrichs mollifier.

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace sch {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform periodic grid on [0, 2*pi) with n nodes, x_j = j*h, h = 2*pi/n.
struct Grid {
    int n = 0;
    double h = 0.0;
    std::vector<double> nodes;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Build a grid. Requires n even and n >= 8.
GridPtr make_grid(int n);

/// Real-valued function sampled at the nodes of a Grid.
class Field {
public:
    Field() = default;
    Field(GridPtr grid, double fill = 0.0);
    Field(GridPtr grid, std::vector<double> values);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    double& operator[](int i) { return values_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values_[static_cast<size_t>(i)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool finite() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Sample a scalar function at the grid nodes.
template <class F>
Field sample(const GridPtr& grid, F&& f) {
    Field out(grid);
    for (int j = 0; j < grid->n; ++j) out[j] = f(grid->nodes[static_cast<size_t>(j)]);
    return out;
}

/// Half-complex spectrum of a real field (bins k = 0 .. n/2).
using Spectrum = std::vector<std::complex<double>>;

/// Forward real-to-complex DFT, normalized so that spectrum[k] is the
/// coefficient of e^{ikx} for 0 < k < n/2 (conjugate symmetry implied).
Spectrum forward_fft(const Field& f);

/// Inverse of forward_fft.
Field inverse_fft(const GridPtr& grid, const Spectrum& spec);

/// Spectral derivative of order 1 or 2. Exact for band-limited fields.
/// Odd orders zero the Nyquist bin.
Field derivative(const Field& f, int order);

/// Periodic convolution (f*g)(x_j) = h * sum_k f(x_k) g(x_j - x_k), via FFT.
/// Commutative and bilinear. Requires both fields on the same grid size.
Field convolve(const Field& f, const Field& g);

/// Dealiased pointwise product: both factors are transformed, zero-padded to
/// a 2n grid, multiplied there and truncated back to the |k| < n/2 band.
/// Exact (no aliasing) for quadratic nonlinearities.
Field multiply(const Field& f, const Field& g);

/// Friedrichs mollification f * J_delta with the classical bump
/// J(s) = c * exp(-1/(1-s^2)) on |s| < 1, unit integral, periodized.
/// Requires delta >= 2h; the sampled kernel is normalized so the discrete
/// mass h*sum(J) is exactly 1, hence the mean of f is preserved.
Field mollify(const Field& f, double delta);

// quadrature and norms (rectangle rule; spectrally accurate for smooth data)
double integral(const Field& f);
double mean(const Field& f);
double l2_norm_sq(const Field& f);
double sup_norm(const Field& f);
double min_value(const Field& f);
/// ||f||_{H^1}^2 = ||f||_{L^2}^2 + ||f'||_{L^2}^2 with spectral f'.
double h1_norm_sq(const Field& f);
/// h * sum |f|^p
double lp_norm_pow(const Field& f, double p);

// pointwise arithmetic (fields on equal-size grids)
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);
Field& operator+=(Field& a, const Field& b);
Field& operator-=(Field& a, const Field& b);
/// aliased pointwise product; use multiply() for anything fed back into dynamics
Field pointwise(const Field& a, const Field& b);

/// Apply a scalar map to every node value.
template <class F>
Field map(const Field& f, F&& fn) {
    Field out(f.grid_ptr());
    for (int j = 0; j < f.size(); ++j) out[j] = fn(f[j]);
    return out;
}

void require_same_grid(const Field& a, const Field& b, const char* op);

}  // namespace sch
