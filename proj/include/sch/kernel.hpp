#pragma once

// Green's kernel K of 1 - d^2/dx^2 on the circle and the nonlocal pressure
// P = K * (u^2 + q^2/2). The canonical evaluation is spectral (the operator
// is diagonal in Fourier space); a sampled-kernel quadrature path is kept as
// an independent oracle for cross-checks.

#include "sch/grid.hpp"

namespace sch {

/// K(x) = cosh(wrap(x) - pi) / (2 sinh pi), where wrap(x) = x - 2*pi*floor(x/(2*pi)).
/// For x >= 0 this coincides with truncation of x/(2*pi) toward zero; wrapping
/// removes the branch ambiguity at negative arguments and exact multiples of 2*pi.
double green_kernel(double x);

/// Sampled kernel with corrected trapezoid weights. Away from the corner the
/// table holds the plain samples K(x_j); the corner node x_0 = 0 absorbs the
/// Euler-Maclaurin quadrature corrections for the unit jump of K' there
/// (T_0 = K(0) - h/12 + h^3/720), so that h*sum(T) = 1 to near round-off and
/// quadrature against the table converges at high order.
struct KernelTable {
    explicit KernelTable(const GridPtr& grid);
    const Field& values() const { return values_; }
    /// discrete kernel mass h*sum(T); equals 1 up to O(h^6)
    double mass() const;

    /// Quadrature path for P = K*f: h*sum_k T_k f(x_j - x_k) plus the
    /// remaining corner correction (h^4/240) f'' with a centered-difference
    /// second derivative. Independent of the spectral solver.
    Field convolve_with(const Field& f) const;

private:
    Field values_;
};

/// Solve (1 - d^2/dx^2) P = f spectrally: P_hat_k = f_hat_k / (1 + k^2).
Field helmholtz_solve(const Field& f);

/// Apply (1 - d^2/dx^2) spectrally.
Field apply_helmholtz(const Field& f);

/// P = K*(u^2 + q^2/2) with dealiased squares, via helmholtz_solve.
Field nonlocal_pressure(const Field& u, const Field& q);

/// dP/dx computed spectrally as ik/(1+k^2) applied to (u^2 + q^2/2)^hat.
Field pressure_gradient(const Field& u, const Field& q);

}  // namespace sch
